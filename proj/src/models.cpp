#include "mrlbm/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mrlbm {

namespace {

constexpr double kGauss5Nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                    0.9061798459386640};
constexpr double kGauss5Weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                      0.4786286704993665, 0.2369268850561891};

/// Linear branch slope*x + icept on [lo, hi]; branches tile the line.
struct LinearPiece {
  double lo, hi, slope, icept;
};

double pieces_average(const std::vector<LinearPiece>& pieces, double x1, double x2) {
  double acc = 0.0;
  for (const auto& p : pieces) {
    const double a = std::max(p.lo, x1);
    const double b = std::min(p.hi, x2);
    if (b <= a) continue;
    acc += 0.5 * p.slope * (b * b - a * a) + p.icept * (b - a);
  }
  return acc / (x2 - x1);
}

double check_positive_density(double value, const char* who) {
  if (!(value > 0.0)) throw std::domain_error(std::string(who) + ": non-positive density moment (vacuum)");
  return value;
}

double hat_value(double x) {
  if (x < -1.0 || x > 1.0) return 0.0;
  return x < 0.0 ? 1.0 + x : 1.0 - x;
}

const std::vector<LinearPiece>& hat_pieces() {
  static const std::vector<LinearPiece> pieces = {
      {-1e30, -1.0, 0.0, 0.0}, {-1.0, 0.0, 1.0, 1.0}, {0.0, 1.0, -1.0, 1.0}, {1.0, 1e30, 0.0, 0.0}};
  return pieces;
}

double riemann_average(double left, double right, double x1, double x2) {
  if (x2 <= 0.0) return left;
  if (x1 >= 0.0) return right;
  return (left * (0.0 - x1) + right * (x2 - 0.0)) / (x2 - x1);
}

double tanh_ramp(double x) { return 0.5 * (1.0 + std::tanh(100.0 * x)); }

/// Characteristic foot of the smooth Burgers solution with increasing datum:
/// the unique root of xi + u0(xi) t = x.
double burgers_smooth_value(double t, double x) {
  if (t == 0.0) return tanh_ramp(x);
  double lo = x - t - 1e-9;
  double hi = x + 1e-9;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid + tanh_ramp(mid) * t - x;
    (g <= 0.0 ? lo : hi) = mid;
  }
  return tanh_ramp(0.5 * (lo + hi));
}

}  // namespace

double gauss5_average(const std::function<double(double)>& f, double x1, double x2) {
  const double mid = 0.5 * (x1 + x2);
  const double half = 0.5 * (x2 - x1);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += kGauss5Weights[i] * f(mid + half * kGauss5Nodes[i]);
  return 0.5 * acc;
}

SchemeSpec build_d1q2(const ScalarFlux& flux, double lambda, double s) {
  std::vector<double> m = {1.0, 1.0, lambda, -lambda};
  return SchemeSpec("d1q2", 2, 1, {1, -1}, lambda, std::move(m), {0.0, s},
                    [flux](std::span<const double> cons, std::span<double> eq) { eq[0] = flux(cons[0]); });
}

SchemeSpec build_d1q3_sw(double g, double lambda, double s2) {
  if (!(g > 0.0)) throw std::invalid_argument("build_d1q3_sw: gravity must be positive");
  const double l2 = lambda * lambda;
  std::vector<double> m = {1.0, 1.0, 1.0, 0.0, lambda, -lambda, 0.0, l2, l2};
  return SchemeSpec("d1q3_sw", 3, 2, {0, 1, -1}, lambda, std::move(m), {0.0, 0.0, s2},
                    [g](std::span<const double> cons, std::span<double> eq) {
                      const double h = check_positive_density(cons[0], "d1q3_sw equilibrium");
                      eq[0] = cons[1] * cons[1] / h + 0.5 * g * h * h;
                    });
}

SchemeSpec build_d1q5_sw(double g, double lambda, double alpha, double beta, double s2, double s3, double s4) {
  if (!(g > 0.0)) throw std::invalid_argument("build_d1q5_sw: gravity must be positive");
  const double l2 = lambda * lambda, l3 = l2 * lambda, l4 = l3 * lambda;
  std::vector<double> m = {1.0, 1.0, 1.0,  1.0,      1.0,       //
                           0.0, lambda, -lambda, 2.0 * lambda, -2.0 * lambda,
                           0.0, l2,  l2,  4.0 * l2, 4.0 * l2,   //
                           0.0, l3,  -l3, 8.0 * l3, -8.0 * l3,  //
                           0.0, l4,  l4,  16.0 * l4, 16.0 * l4};
  return SchemeSpec("d1q5_sw", 5, 2, {0, 1, -1, 2, -2}, lambda, std::move(m), {0.0, 0.0, s2, s3, s4},
                    [g, alpha, beta, l2](std::span<const double> cons, std::span<double> eq) {
                      const double h = check_positive_density(cons[0], "d1q5_sw equilibrium");
                      eq[0] = cons[1] * cons[1] / h + 0.5 * g * h * h;
                      eq[1] = alpha * l2 * cons[1];
                      eq[2] = beta * l2 * eq[0];
                    });
}

SchemeSpec build_euler_vectorial(double gas_gamma, double lambda, double s) {
  if (!(gas_gamma > 1.0)) throw std::invalid_argument("build_euler_vectorial: requires gas gamma > 1");
  // Conserved-first moment ordering (rho, rho u, E, then their fluxes); each
  // conserved quantity rides its own two-velocity block.
  const double l = lambda;
  std::vector<double> m = {1.0, 1.0, 0.0, 0.0,  0.0, 0.0,  //
                           0.0, 0.0, 1.0, 1.0,  0.0, 0.0,  //
                           0.0, 0.0, 0.0, 0.0,  1.0, 1.0,  //
                           l,   -l,  0.0, 0.0,  0.0, 0.0,  //
                           0.0, 0.0, l,   -l,   0.0, 0.0,  //
                           0.0, 0.0, 0.0, 0.0,  l,   -l};
  return SchemeSpec("euler_vec", 6, 3, {1, -1, 1, -1, 1, -1}, lambda, std::move(m), {0.0, 0.0, 0.0, s, s, s},
                    [gas_gamma](std::span<const double> cons, std::span<double> eq) {
                      const double rho = check_positive_density(cons[0], "euler equilibrium");
                      const double mom = cons[1];
                      const double energy = cons[2];
                      eq[0] = mom;
                      eq[1] = (1.5 - 0.5 * gas_gamma) * mom * mom / rho + (gas_gamma - 1.0) * energy;
                      eq[2] = gas_gamma * energy * mom / rho + 0.5 * (1.0 - gas_gamma) * mom * mom * mom / (rho * rho);
                    });
}

InitialData datum_gaussian() {
  auto value = [](int, double x) { return std::exp(-20.0 * x * x); };
  return {1, [value](int, double x1, double x2) { return gauss5_average([&](double x) { return value(0, x); }, x1, x2); },
          value};
}

InitialData datum_box() {
  return {1,
          [](int, double x1, double x2) {
            const double lo = std::max(x1, -0.5);
            const double hi = std::min(x2, 0.5);
            return hi > lo ? (hi - lo) / (x2 - x1) : 0.0;
          },
          [](int, double x) { return std::abs(x) <= 0.5 ? 1.0 : 0.0; }};
}

InitialData datum_tanh_ramp() {
  return {1, [](int, double x1, double x2) { return gauss5_average(tanh_ramp, x1, x2); },
          [](int, double x) { return tanh_ramp(x); }};
}

InitialData datum_hat() {
  return {1, [](int, double x1, double x2) { return pieces_average(hat_pieces(), x1, x2); },
          [](int, double x) { return hat_value(x); }};
}

InitialData datum_sw_dam() {
  return {2,
          [](int comp, double x1, double x2) { return comp == 0 ? riemann_average(2.0, 1.0, x1, x2) : 0.0; },
          [](int comp, double x) { return comp == 0 ? (x < 0.0 ? 2.0 : 1.0) : 0.0; }};
}

InitialData datum_sod() {
  static const double left[3] = {1.0, 0.0, 2.5};
  static const double right[3] = {0.125, 0.0, 0.25};
  return {3,
          [](int comp, double x1, double x2) { return riemann_average(left[comp], right[comp], x1, x2); },
          [](int comp, double x) { return x < 0.0 ? left[comp] : right[comp]; }};
}

ScalarFlux test_flux(ScalarTest test) {
  switch (test) {
    case ScalarTest::I:
    case ScalarTest::II:
      return ScalarFlux::advection(0.75);
    default:
      return ScalarFlux::burgers();
  }
}

InitialData test_datum(ScalarTest test) {
  switch (test) {
    case ScalarTest::I:
      return datum_gaussian();
    case ScalarTest::II:
      return datum_box();
    case ScalarTest::III:
      return datum_tanh_ramp();
    case ScalarTest::IV:
      return datum_box();
    case ScalarTest::V:
      return datum_hat();
  }
  throw std::invalid_argument("test_datum: unknown test");
}

double ExactScalarSolution::value(double t, double x) const {
  if (t < 0.0) throw std::invalid_argument("ExactScalarSolution: negative time");
  switch (test_) {
    case ScalarTest::I: {
      const double y = x - 0.75 * t;
      return std::exp(-20.0 * y * y);
    }
    case ScalarTest::II:
      return std::abs(x - 0.75 * t) <= 0.5 ? 1.0 : 0.0;
    case ScalarTest::III:
      return burgers_smooth_value(t, x);
    case ScalarTest::IV: {
      if (t >= 2.0) throw std::invalid_argument("ExactScalarSolution: test IV valid for t < 2");
      if (t == 0.0) return std::abs(x) <= 0.5 ? 1.0 : 0.0;
      if (x < -0.5) return 0.0;
      if (x < -0.5 + t) return (x + 0.5) / t;           // rarefaction fan
      return x < 0.5 + 0.5 * t ? 1.0 : 0.0;             // plateau up to the shock
    }
    case ScalarTest::V: {
      if (t < 1.0) {
        if (x < -1.0 || x > 1.0) return 0.0;
        return x <= t ? (1.0 + x) / (1.0 + t) : (1.0 - x) / (1.0 - t);
      }
      const double shock = std::sqrt(2.0 * (1.0 + t)) - 1.0;
      if (x < -1.0 || x >= shock) return 0.0;
      return (1.0 + x) / (1.0 + t);
    }
  }
  throw std::invalid_argument("ExactScalarSolution: unknown test");
}

double ExactScalarSolution::average(double t, double x1, double x2) const {
  if (t < 0.0) throw std::invalid_argument("ExactScalarSolution: negative time");
  switch (test_) {
    case ScalarTest::I:
    case ScalarTest::III:
      return gauss5_average([&](double x) { return value(t, x); }, x1, x2);
    case ScalarTest::II: {
      const double lo = std::max(x1, -0.5 + 0.75 * t);
      const double hi = std::min(x2, 0.5 + 0.75 * t);
      return hi > lo ? (hi - lo) / (x2 - x1) : 0.0;
    }
    case ScalarTest::IV: {
      if (t >= 2.0) throw std::invalid_argument("ExactScalarSolution: test IV valid for t < 2");
      if (t == 0.0) return datum_box().average(0, x1, x2);
      const std::vector<LinearPiece> pieces = {{-1e30, -0.5, 0.0, 0.0},
                                               {-0.5, -0.5 + t, 1.0 / t, 0.5 / t},
                                               {-0.5 + t, 0.5 + 0.5 * t, 0.0, 1.0},
                                               {0.5 + 0.5 * t, 1e30, 0.0, 0.0}};
      return pieces_average(pieces, x1, x2);
    }
    case ScalarTest::V: {
      if (t < 1.0) {
        const std::vector<LinearPiece> pieces = {{-1e30, -1.0, 0.0, 0.0},
                                                 {-1.0, t, 1.0 / (1.0 + t), 1.0 / (1.0 + t)},
                                                 {t, 1.0, -1.0 / (1.0 - t), 1.0 / (1.0 - t)},
                                                 {1.0, 1e30, 0.0, 0.0}};
        return pieces_average(pieces, x1, x2);
      }
      const double shock = std::sqrt(2.0 * (1.0 + t)) - 1.0;
      const std::vector<LinearPiece> pieces = {{-1e30, -1.0, 0.0, 0.0},
                                               {-1.0, shock, 1.0 / (1.0 + t), 1.0 / (1.0 + t)},
                                               {shock, 1e30, 0.0, 0.0}};
      return pieces_average(pieces, x1, x2);
    }
  }
  throw std::invalid_argument("ExactScalarSolution: unknown test");
}

}  // namespace mrlbm
