#include "kreg/rng.hpp"

#include <cmath>

namespace kreg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return std::mt19937_64(substream_seed(seed, stream, index));
}

Eigen::VectorXd sample_normal(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

Eigen::VectorXd sample_probe_vector(std::mt19937_64& rng, int dim, double min_radius, double max_radius) {
  Eigen::VectorXd direction = sample_normal(rng, dim);
  while (direction.norm() == 0.0) direction = sample_normal(rng, dim);
  std::uniform_real_distribution<double> unit;
  const double log_radius = std::log(min_radius) + unit(rng) * (std::log(max_radius) - std::log(min_radius));
  return std::exp(log_radius) * direction.normalized();
}

}  // namespace kreg
