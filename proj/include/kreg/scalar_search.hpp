#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "kreg/extended_real.hpp"

namespace kreg {

struct ScalarMinimum {
  double argmin = 0.0;
  ExtendedReal value;
  std::size_t evaluations = 0;
  bool derivative_refined = false;
};

/// Minimizes f on [lo, hi]: a uniform scan over `grid` nodes, then
/// refinement inside the two cells around the best node. Refinement bisects
/// on the sign of `derivative` when it is supplied and defined there, and
/// falls back to golden-section search otherwise. Ties on the grid go to the
/// smallest nonnegative node, then to the node closest to zero.
ScalarMinimum minimize_scalar(const std::function<ExtendedReal(double)>& f, double lo, double hi,
                              std::size_t grid = 4001,
                              const std::function<std::optional<double>(double)>& derivative = {});

/// Golden-section search on [lo, hi]; ties move the bracket left.
ScalarMinimum golden_section(const std::function<ExtendedReal(double)>& f, double lo, double hi,
                             double tolerance = 1e-15, std::size_t max_iterations = 200);

}  // namespace kreg
