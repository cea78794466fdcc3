#pragma once

#include <functional>
#include <vector>

#include "mrlbm/geometry.hpp"
#include "mrlbm/scheme.hpp"

namespace mrlbm {

/// Mean of conserved component `comp` of the initial datum over [x1, x2].
using ConservedAverage = std::function<double(int comp, double x1, double x2)>;

/// Populations on the uniform finest lattice, one contiguous array per
/// population.
struct UniformState {
  MeshGeometry geometry;
  std::vector<std::vector<double>> f;

  std::int32_t cells() const { return geometry.cells_at(geometry.max_level); }
};

/// Conserved moments from cell averages of the datum, non-conserved moments
/// at equilibrium.
UniformState init_uniform(const MeshGeometry& geometry, const SchemeSpec& scheme, const ConservedAverage& datum);

void collide_uniform(UniformState& state, const SchemeSpec& scheme);
void stream_uniform(UniformState& state, const SchemeSpec& scheme, BoundaryMode boundary);
/// The reference operator: collide then stream.
void step_uniform(UniformState& state, const SchemeSpec& scheme, BoundaryMode boundary);

/// Conserved moments of every cell, pos-major with q_cons stride.
std::vector<double> conserved_field(const UniformState& state, const SchemeSpec& scheme);

/// Optimal l1 continuity constant of the two-velocity advection scheme:
/// 1 below the s threshold 2 / (1 + c/lambda), s*(1 + c/lambda) - 1 above.
double continuity_constant_advection(double c, double lambda, double s);

}  // namespace mrlbm
