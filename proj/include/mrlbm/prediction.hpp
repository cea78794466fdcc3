#pragma once

#include <array>
#include <span>
#include <utility>

namespace mrlbm {

/// Exact coarsening: the father average is the mean of its two children.
inline double project(double child_even, double child_odd) {
  return 0.5 * (child_even + child_odd);
}

/// Centered polynomial prediction of the two children averages of a cell
/// from 2*gamma + 1 father-level averages. Exact on cell averages of
/// polynomials of degree <= 2*gamma; consistent with `project` by
/// construction (the children are center +/- the same correction).
struct PredictionSpec {
  int gamma = 1;
  std::array<double, 3> coeff{};  // c_1 .. c_gamma

  static PredictionSpec centered(int gamma);

  int order() const { return 2 * gamma + 1; }
  int window_size() const { return 2 * gamma + 1; }

  /// `window[gamma]` is the father, `window[gamma + a]` its a-th neighbor.
  /// Returns (even child, odd child).
  std::pair<double, double> predict(std::span<const double> window) const {
    double q = 0.0;
    for (int a = 1; a <= gamma; ++a)
      q += coeff[static_cast<std::size_t>(a - 1)] *
           (window[static_cast<std::size_t>(gamma + a)] - window[static_cast<std::size_t>(gamma - a)]);
    const double center = window[static_cast<std::size_t>(gamma)];
    return {center + q, center - q};
  }
};

}  // namespace mrlbm
