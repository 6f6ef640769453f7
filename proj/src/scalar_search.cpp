#include "kreg/scalar_search.hpp"

#include <cmath>
#include <vector>

#include "kreg/errors.hpp"

namespace kreg {

namespace {

bool tied(ExtendedReal a, ExtendedReal best) {
  if (a.is_infinite() || best.is_infinite()) return a == best;
  return a.value() <= best.value() + 1e-14 * std::max(1.0, std::abs(best.value()));
}

// Root of a derivative bracketed by d(lo) < 0 < d(hi).
std::optional<double> bisect_derivative(const std::function<std::optional<double>(double)>& derivative, double lo,
                                        double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto d = derivative(mid);
    if (!d) return std::nullopt;
    if (*d == 0.0) return mid;
    (*d < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ScalarMinimum golden_section(const std::function<ExtendedReal(double)>& f, double lo, double hi, double tolerance,
                             std::size_t max_iterations) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarMinimum result;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  ExtendedReal fc = f(c);
  ExtendedReal fd = f(d);
  result.evaluations = 2;
  for (std::size_t it = 0; it < max_iterations && (b - a) > tolerance * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++result.evaluations;
  }
  if (fc <= fd) {
    result.argmin = c;
    result.value = fc;
  } else {
    result.argmin = d;
    result.value = fd;
  }
  return result;
}

ScalarMinimum minimize_scalar(const std::function<ExtendedReal(double)>& f, double lo, double hi, std::size_t grid,
                              const std::function<std::optional<double>(double)>& derivative) {
  if (!(hi > lo) || grid < 3) throw InvalidArgument("minimize_scalar needs lo < hi and at least 3 grid nodes");
  std::vector<double> nodes(grid);
  std::vector<ExtendedReal> values(grid);
  ExtendedReal best = ExtendedReal::infinity();
  for (std::size_t k = 0; k < grid; ++k) {
    nodes[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid - 1);
    values[k] = f(nodes[k]);
    if (values[k] < best) best = values[k];
  }
  std::size_t pick = grid;
  for (std::size_t k = 0; k < grid; ++k) {
    if (!tied(values[k], best)) continue;
    if (pick == grid) {
      pick = k;
      continue;
    }
    const bool k_nonneg = nodes[k] >= 0;
    const bool pick_nonneg = nodes[pick] >= 0;
    if (k_nonneg && (!pick_nonneg || nodes[k] < nodes[pick])) pick = k;
    if (!k_nonneg && !pick_nonneg && nodes[k] > nodes[pick]) pick = k;
  }

  ScalarMinimum result{.argmin = nodes[pick], .value = values[pick], .evaluations = grid};
  if (best.is_infinite()) return result;

  const double left = nodes[pick == 0 ? 0 : pick - 1];
  const double right = nodes[pick + 1 == grid ? pick : pick + 1];

  if (derivative) {
    const auto d_mid = derivative(nodes[pick]);
    std::optional<double> root;
    if (d_mid && *d_mid == 0.0) {
      root = nodes[pick];
    } else if (d_mid && *d_mid < 0 && right > nodes[pick]) {
      if (const auto d_right = derivative(right); d_right && *d_right > 0) root = bisect_derivative(derivative, nodes[pick], right);
    } else if (d_mid && *d_mid > 0 && left < nodes[pick]) {
      if (const auto d_left = derivative(left); d_left && *d_left < 0) root = bisect_derivative(derivative, left, nodes[pick]);
    }
    if (root) {
      const ExtendedReal v = f(*root);
      ++result.evaluations;
      if (v <= result.value) {
        result.argmin = *root;
        result.value = v;
        result.derivative_refined = true;
        return result;
      }
    }
  }

  if (left < right) {
    const ScalarMinimum golden = golden_section(f, left, right);
    result.evaluations += golden.evaluations;
    if (golden.value < result.value) {
      result.argmin = golden.argmin;
      result.value = golden.value;
    }
  }
  return result;
}

}  // namespace kreg
