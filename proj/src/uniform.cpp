#include "mrlbm/uniform.hpp"

#include <stdexcept>
#include <vector>

namespace mrlbm {

UniformState init_uniform(const MeshGeometry& geometry, const SchemeSpec& scheme, const ConservedAverage& datum) {
  UniformState state;
  state.geometry = geometry;
  const std::int32_t n = geometry.cells_at(geometry.max_level);
  const int q = scheme.populations();
  const int qc = scheme.conserved();
  state.f.assign(static_cast<std::size_t>(q), std::vector<double>(static_cast<std::size_t>(n), 0.0));

  std::vector<double> m(static_cast<std::size_t>(q));
  std::vector<double> pops(static_cast<std::size_t>(q));
  for (std::int32_t k = 0; k < n; ++k) {
    const double x1 = geometry.left_edge({geometry.max_level, k});
    const double x2 = geometry.right_edge({geometry.max_level, k});
    for (int c = 0; c < qc; ++c) m[static_cast<std::size_t>(c)] = datum(c, x1, x2);
    scheme.equilibrium({m.data(), static_cast<std::size_t>(qc)},
                       {m.data() + qc, static_cast<std::size_t>(q - qc)});
    scheme.to_populations(m, pops);
    for (int h = 0; h < q; ++h) state.f[static_cast<std::size_t>(h)][static_cast<std::size_t>(k)] = pops[static_cast<std::size_t>(h)];
  }
  return state;
}

void collide_uniform(UniformState& state, const SchemeSpec& scheme) {
  const std::int32_t n = state.cells();
  const int q = scheme.populations();
  std::vector<double> pops(static_cast<std::size_t>(q));
  std::vector<double> m(static_cast<std::size_t>(q));
  std::vector<double> eq(static_cast<std::size_t>(q - scheme.conserved()));
  for (std::int32_t k = 0; k < n; ++k) {
    for (int h = 0; h < q; ++h) pops[static_cast<std::size_t>(h)] = state.f[static_cast<std::size_t>(h)][static_cast<std::size_t>(k)];
    scheme.collide_cell(pops, m, eq);
    for (int h = 0; h < q; ++h) state.f[static_cast<std::size_t>(h)][static_cast<std::size_t>(k)] = pops[static_cast<std::size_t>(h)];
  }
}

void stream_uniform(UniformState& state, const SchemeSpec& scheme, BoundaryMode boundary) {
  const std::int32_t n = state.cells();
  std::vector<double> shifted(static_cast<std::size_t>(n));
  for (int h = 0; h < scheme.populations(); ++h) {
    const int w = scheme.velocities()[static_cast<std::size_t>(h)];
    if (w == 0) continue;
    auto& pop = state.f[static_cast<std::size_t>(h)];
    for (std::int32_t k = 0; k < n; ++k)
      shifted[static_cast<std::size_t>(k)] = pop[static_cast<std::size_t>(map_position(std::int64_t{k} - w, n, boundary))];
    pop.swap(shifted);
  }
}

void step_uniform(UniformState& state, const SchemeSpec& scheme, BoundaryMode boundary) {
  collide_uniform(state, scheme);
  stream_uniform(state, scheme, boundary);
}

std::vector<double> conserved_field(const UniformState& state, const SchemeSpec& scheme) {
  const std::int32_t n = state.cells();
  const int q = scheme.populations();
  const int qc = scheme.conserved();
  std::vector<double> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(qc));
  std::vector<double> pops(static_cast<std::size_t>(q));
  std::vector<double> m(static_cast<std::size_t>(qc));
  for (std::int32_t k = 0; k < n; ++k) {
    for (int h = 0; h < q; ++h) pops[static_cast<std::size_t>(h)] = state.f[static_cast<std::size_t>(h)][static_cast<std::size_t>(k)];
    scheme.conserved_moments(pops, m);
    for (int c = 0; c < qc; ++c) out[static_cast<std::size_t>(k) * static_cast<std::size_t>(qc) + static_cast<std::size_t>(c)] = m[static_cast<std::size_t>(c)];
  }
  return out;
}

double continuity_constant_advection(double c, double lambda, double s) {
  if (!(c > 0.0) || c > lambda) throw std::invalid_argument("continuity_constant_advection: requires 0 < c <= lambda");
  const double ratio = 1.0 + c / lambda;
  if (s <= 2.0 / ratio) return 1.0;
  return s * ratio - 1.0;
}

}  // namespace mrlbm
