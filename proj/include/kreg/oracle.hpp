#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "kreg/extended_real.hpp"

namespace kreg {

using Objective = std::function<ExtendedReal(const Eigen::VectorXd&)>;
using Projector = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Brute-force minimizer used to validate the production solvers at desk
/// scale (dimension ≤ 3 or so).
///
/// 1. Grid: all points of [-bound, bound]^d with spacing
///    max(grid_step, 2·bound / (m − 1)), where m = ⌊max_grid_points^(1/d)⌋.
/// 2. Starts: the best grid points (half of `starts`), the rest uniform in
///    the box from substreams of `seed`; each is projected if a projector
///    is given.
/// 3. Refinement of every start: projected gradient descent with central
///    finite differences and Armijo backtracking, then a pattern search over
///    ± coordinate and ± random directions with halving steps down to 1e-13,
///    repeated for three rounds.
struct OracleOptions {
  double bound = 5.0;
  double grid_step = 1e-3;
  std::size_t max_grid_points = 4'000'000;
  std::size_t starts = 32;
  std::size_t max_gradient_iterations = 5000;
  std::uint64_t seed = 0;
  Projector projector;
};

struct OracleResult {
  Eigen::VectorXd argmin;
  ExtendedReal value = ExtendedReal::infinity();
  std::size_t evaluations = 0;
  std::size_t grid_points = 0;
  double grid_spacing = 0.0;
  bool converged = false;
};

OracleResult oracle_minimize(const Objective& objective, int dim, const OracleOptions& options = {});

/// The refinement stage alone, from a single start.
OracleResult oracle_refine(const Objective& objective, Eigen::VectorXd start, const OracleOptions& options = {});

}  // namespace kreg
