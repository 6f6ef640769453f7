#include "kreg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "kreg/errors.hpp"
#include "kreg/rng.hpp"

namespace kreg {

namespace {

struct Counter {
  const Objective& objective;
  const Projector& projector;
  std::size_t evaluations = 0;

  ExtendedReal operator()(const Eigen::VectorXd& x) {
    ++evaluations;
    return objective(x);
  }
  Eigen::VectorXd project(const Eigen::VectorXd& x) const { return projector ? projector(x) : x; }
};

std::optional<Eigen::VectorXd> fd_gradient(Counter& f, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[i] += h;
    xm[i] -= h;
    const ExtendedReal fp = f(xp);
    const ExtendedReal fm = f(xm);
    if (fp.is_infinite() || fm.is_infinite()) return std::nullopt;
    g[i] = (fp.value() - fm.value()) / (2 * h);
  }
  return g;
}

void gradient_descent(Counter& f, Eigen::VectorXd& x, ExtendedReal& fx, std::size_t max_iterations) {
  double step = 1.0;
  for (std::size_t it = 0; it < max_iterations && fx.is_finite(); ++it) {
    const auto g = fd_gradient(f, x);
    if (!g || g->norm() == 0.0) return;
    bool moved = false;
    step = std::min(1.0, step * 4.0);
    while (step > 1e-16) {
      const Eigen::VectorXd candidate = f.project(x - step * *g);
      const ExtendedReal fc = f(candidate);
      const double decrease = g->dot(x - candidate);
      if (fc.is_finite() && fc.value() <= fx.value() - 1e-4 * std::max(decrease, 0.0) && fc < fx) {
        x = candidate;
        fx = fc;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return;
  }
}

double pattern_search(Counter& f, Eigen::VectorXd& x, ExtendedReal& fx, double initial_step,
                      const std::vector<Eigen::VectorXd>& directions) {
  double step = initial_step;
  while (step > 1e-13) {
    bool improved = false;
    for (const auto& d : directions) {
      const Eigen::VectorXd candidate = f.project(x + step * d);
      const ExtendedReal fc = f(candidate);
      if (fc < fx) {
        x = candidate;
        fx = fc;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return step;
}

std::vector<Eigen::VectorXd> search_directions(int dim, std::uint64_t seed, std::uint64_t index) {
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < dim; ++i) {
    dirs.push_back(Eigen::VectorXd::Unit(dim, i));
    dirs.push_back(-Eigen::VectorXd::Unit(dim, i));
  }
  auto rng = substream(seed, streams::oracle, 1'000'000 + index);
  for (int k = 0; k < 2 * dim; ++k) {
    Eigen::VectorXd d = sample_normal(rng, dim);
    if (d.norm() == 0.0) continue;
    d.normalize();
    dirs.push_back(d);
    dirs.push_back(-d);
  }
  return dirs;
}

OracleResult refine(Counter& f, Eigen::VectorXd start, const OracleOptions& options, std::uint64_t index) {
  Eigen::VectorXd x = f.project(start);
  ExtendedReal fx = f(x);
  const auto dirs = search_directions(static_cast<int>(x.size()), options.seed, index);
  double final_step = 0.0;
  for (int round = 0; round < 3; ++round) {
    gradient_descent(f, x, fx, options.max_gradient_iterations);
    final_step = pattern_search(f, x, fx, std::max(options.grid_step, 1e-2) / (round + 1), dirs);
  }
  OracleResult result;
  result.argmin = std::move(x);
  result.value = fx;
  result.converged = fx.is_finite() && final_step <= 1e-13;
  return result;
}

}  // namespace

OracleResult oracle_refine(const Objective& objective, Eigen::VectorXd start, const OracleOptions& options) {
  Counter f{objective, options.projector};
  OracleResult result = refine(f, std::move(start), options, 0);
  result.evaluations = f.evaluations;
  return result;
}

OracleResult oracle_minimize(const Objective& objective, int dim, const OracleOptions& options) {
  if (dim < 1) throw InvalidArgument("oracle dimension must be positive");
  if (!(options.bound > 0) || !(options.grid_step > 0) || options.starts < 1) {
    throw InvalidArgument("oracle needs a positive bound, grid step and start count");
  }
  Counter f{objective, options.projector};

  const auto per_axis_cap =
      static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(options.max_grid_points), 1.0 / dim) + 1e-9));
  const auto per_axis_fine = static_cast<std::size_t>(std::floor(2 * options.bound / options.grid_step + 1e-9)) + 1;
  const std::size_t m = std::max<std::size_t>(2, std::min(per_axis_cap, per_axis_fine));
  const double spacing = 2 * options.bound / static_cast<double>(m - 1);

  // Best grid points, kept in a max-heap keyed by value.
  const std::size_t keep = std::max<std::size_t>(1, options.starts / 2);
  using Entry = std::pair<double, Eigen::VectorXd>;
  auto cmp = [](const Entry& a, const Entry& b) { return a.first < b.first; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> best(cmp);

  std::vector<std::size_t> index(static_cast<std::size_t>(dim), 0);
  std::size_t grid_points = 0;
  Eigen::VectorXd point(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) point[i] = -options.bound + spacing * static_cast<double>(index[static_cast<std::size_t>(i)]);
    ++grid_points;
    const ExtendedReal v = f(point);
    if (v.is_finite() && (best.size() < keep || v.value() < best.top().first)) {
      best.emplace(v.value(), point);
      if (best.size() > keep) best.pop();
    }
    int axis = dim - 1;
    while (axis >= 0 && ++index[static_cast<std::size_t>(axis)] == m) index[static_cast<std::size_t>(axis--)] = 0;
    if (axis < 0) break;
  }

  std::vector<Eigen::VectorXd> starts;
  while (!best.empty()) {
    starts.push_back(best.top().second);
    best.pop();
  }
  std::reverse(starts.begin(), starts.end());
  for (std::size_t s = starts.size(); s < options.starts; ++s) {
    auto rng = substream(options.seed, streams::oracle, s);
    std::uniform_real_distribution<double> unit(-options.bound, options.bound);
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = unit(rng);
    starts.push_back(std::move(x));
  }

  OracleResult result;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    OracleResult local = refine(f, starts[s], options, s);
    if (result.argmin.size() == 0 || local.value < result.value) result = std::move(local);
  }
  result.evaluations = f.evaluations;
  result.grid_points = grid_points;
  result.grid_spacing = spacing;
  return result;
}

}  // namespace kreg
