#pragma once

#include <functional>

#include "mrlbm/scheme.hpp"
#include "mrlbm/uniform.hpp"

namespace mrlbm {

/// Flux of a scalar conservation law.
struct ScalarFlux {
  enum class Kind { advection, burgers };
  Kind kind = Kind::advection;
  double speed = 1.0;  // advection velocity

  static ScalarFlux advection(double c) { return {Kind::advection, c}; }
  static ScalarFlux burgers() { return {Kind::burgers, 0.0}; }

  double operator()(double u) const { return kind == Kind::advection ? speed * u : 0.5 * u * u; }
  double derivative(double u) const { return kind == Kind::advection ? speed : u; }
};

/// Two-velocity scheme for a scalar conservation law.
SchemeSpec build_d1q2(const ScalarFlux& flux, double lambda, double s);

/// Three-velocity scheme for the shallow water system.
SchemeSpec build_d1q3_sw(double g, double lambda, double s2);

/// Five-velocity scheme for the shallow water system; alpha and beta weight
/// the equilibria of the two extra moments.
SchemeSpec build_d1q5_sw(double g, double lambda, double alpha, double beta, double s2, double s3, double s4);

/// Vectorial scheme for the Euler system: three two-velocity blocks for
/// (rho, rho u, E) coupled through their equilibria. Internally the moments
/// are ordered conserved-first: (rho, rho u, E, and then the three fluxes).
SchemeSpec build_euler_vectorial(double gas_gamma, double lambda, double s);

/// Initial datum: exact (or quadrature-grade) cell averages plus point
/// evaluation of each conserved component.
struct InitialData {
  int components = 1;
  std::function<double(int comp, double x1, double x2)> average;
  std::function<double(int comp, double x)> value;

  ConservedAverage averager() const { return average; }
};

InitialData datum_gaussian();    // exp(-20 x^2)
InitialData datum_box();         // indicator of |x| <= 1/2
InitialData datum_tanh_ramp();   // (1 + tanh(100 x)) / 2
InitialData datum_hat();         // (1+x) on [-1,0], (1-x) on [0,1], 0 outside
InitialData datum_sw_dam();      // (h, hu) = (2, 0) | (1, 0) across x = 0
InitialData datum_sod();         // (rho, rho u, E) = (1, 0, 2.5) | (0.125, 0, 0.25)

/// The five scalar benchmark problems.
enum class ScalarTest { I, II, III, IV, V };

ScalarFlux test_flux(ScalarTest test);
InitialData test_datum(ScalarTest test);

/// Entropic weak solution of a scalar benchmark problem.
class ExactScalarSolution {
 public:
  explicit ExactScalarSolution(ScalarTest test) : test_(test) {}

  double value(double t, double x) const;
  double average(double t, double x1, double x2) const;

 private:
  ScalarTest test_;
};

/// Mean of f over [x1, x2] by 5-point Gauss-Legendre quadrature.
double gauss5_average(const std::function<double(double)>& f, double x1, double x2);

}  // namespace mrlbm
