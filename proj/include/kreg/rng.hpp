#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace kreg {

/// Seed of the substream (seed, stream, index). Every trial of every probe
/// draws from its own substream, so results do not depend on the order in
/// which trials run:
///
///   s = splitmix64(splitmix64(seed ^ splitmix64(stream)) + index)
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Standard normal direction scaled to a log-uniform radius in
/// [min_radius, max_radius].
Eigen::VectorXd sample_probe_vector(std::mt19937_64& rng, int dim, double min_radius = 1e-2,
                                    double max_radius = 1e2);

Eigen::VectorXd sample_normal(std::mt19937_64& rng, int dim);

/// Stream tags, one per consumer.
namespace streams {
inline constexpr std::uint64_t orthogonal_check = 1;
inline constexpr std::uint64_t ray_check = 2;
inline constexpr std::uint64_t equal_norm_check = 3;
inline constexpr std::uint64_t sublevel = 4;
inline constexpr std::uint64_t span_experiment = 5;
inline constexpr std::uint64_t oracle = 6;
inline constexpr std::uint64_t instances = 7;
}  // namespace streams

}  // namespace kreg
