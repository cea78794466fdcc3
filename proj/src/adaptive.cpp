#include "mrlbm/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mrlbm {

AdaptiveState init_adaptive(const MeshGeometry& geometry, const SchemeSpec& scheme, const ConservedAverage& datum,
                            const ThresholdPolicy& policy, const PredictionSpec& prediction, CollisionMode collision,
                            BoundaryMode boundary) {
  AdaptiveState state;
  state.tree = std::make_shared<const MeshTree>(full_tree(geometry));
  state.field = make_leaf_field(state.tree, scheme.populations());
  state.policy = policy;
  state.prediction = prediction;
  state.collision = collision;
  state.boundary = boundary;

  const int q = scheme.populations();
  const int qc = scheme.conserved();
  std::vector<double> m(static_cast<std::size_t>(q));
  for (std::size_t i = 0; i < state.field.cells.size(); ++i) {
    const CellIndex c = state.field.cells[i];
    const double x1 = geometry.left_edge(c);
    const double x2 = geometry.right_edge(c);
    for (int comp = 0; comp < qc; ++comp) m[static_cast<std::size_t>(comp)] = datum(comp, x1, x2);
    scheme.equilibrium({m.data(), static_cast<std::size_t>(qc)}, {m.data() + qc, static_cast<std::size_t>(q - qc)});
    scheme.to_populations(m, state.field.at(i));
  }
  return state;
}

void collide_leaves(LeafField& field, const SchemeSpec& scheme) {
  std::vector<double> m(static_cast<std::size_t>(scheme.populations()));
  std::vector<double> eq(static_cast<std::size_t>(scheme.populations() - scheme.conserved()));
  for (std::size_t i = 0; i < field.cells.size(); ++i) scheme.collide_cell(field.at(i), m, eq);
}

void collide_reconstructed(LeafField& field, const SchemeSpec& scheme, const PredictionSpec& prediction,
                           BoundaryMode boundary) {
  const MeshTree& tree = *field.tree;
  const auto& geom = tree.geometry();
  const int q = scheme.populations();
  const int qc = scheme.conserved();
  MultilevelEvaluator eval(tree, field, prediction, boundary);

  std::vector<double> m(static_cast<std::size_t>(q));
  std::vector<double> cons(static_cast<std::size_t>(qc));
  std::vector<double> eq(static_cast<std::size_t>(q - qc));
  std::vector<double> eq_mean(static_cast<std::size_t>(q - qc));
  for (std::size_t i = 0; i < field.cells.size(); ++i) {
    const CellIndex c = field.cells[i];
    const std::int64_t width = std::int64_t{1} << (geom.max_level - c.level);
    const std::int64_t base = std::int64_t{c.pos} * width;
    std::fill(eq_mean.begin(), eq_mean.end(), 0.0);
    for (std::int64_t d = 0; d < width; ++d) {
      auto fine = eval.values({geom.max_level, static_cast<std::int32_t>(base + d)});
      scheme.conserved_moments(fine, cons);
      scheme.equilibrium(cons, eq);
      for (std::size_t h = 0; h < eq.size(); ++h) eq_mean[h] += eq[h];
    }
    for (std::size_t h = 0; h < eq_mean.size(); ++h) eq_mean[h] /= static_cast<double>(width);

    auto pops = field.at(i);
    scheme.to_moments(pops, m);
    scheme.relax_moments(m, eq_mean);
    scheme.to_populations(m, pops);
  }
}

void adaptive_stream(LeafField& field, const SchemeSpec& scheme, const PredictionSpec& prediction,
                     BoundaryMode boundary) {
  if (scheme.stencil_radius() == 0) return;
  const MeshTree& tree = *field.tree;
  const auto& geom = tree.geometry();
  const int q = scheme.populations();
  MultilevelEvaluator eval(tree, field, prediction, boundary);

  // Streaming the reconstructed finest field and projecting back telescopes
  // into boundary fluxes: for velocity w only the |w| reconstructed values
  // hugging each leaf edge contribute, at offsets eta = (1/2 - d) sgn - 1/2.
  std::vector<double> updated(field.values.size());
  for (std::size_t i = 0; i < field.cells.size(); ++i) {
    const CellIndex c = field.cells[i];
    const std::int64_t width = std::int64_t{1} << (geom.max_level - c.level);
    const std::int64_t left = std::int64_t{c.pos} * width;
    const std::int64_t right = left + width;
    auto own = field.at(i);
    auto dst = std::span<double>{updated.data() + i * static_cast<std::size_t>(q), static_cast<std::size_t>(q)};
    for (int h = 0; h < q; ++h) {
      const int w = scheme.velocities()[static_cast<std::size_t>(h)];
      if (w == 0) {
        dst[static_cast<std::size_t>(h)] = own[static_cast<std::size_t>(h)];
        continue;
      }
      const double sign = w > 0 ? 1.0 : -1.0;
      double flux = 0.0;
      for (int d = 1; d <= std::abs(w); ++d) {
        const std::int64_t eta = w > 0 ? -d : d - 1;
        flux += eval.finest(left + eta)[static_cast<std::size_t>(h)] -
                eval.finest(right + eta)[static_cast<std::size_t>(h)];
      }
      dst[static_cast<std::size_t>(h)] = own[static_cast<std::size_t>(h)] + sign * flux / static_cast<double>(width);
    }
  }
  field.values = std::move(updated);
}

void adaptive_step(AdaptiveState& state, const SchemeSpec& scheme) {
  AdaptResult adapted = adapt_mesh(state.field, state.policy, state.prediction, state.boundary);
  state.tree = adapted.tree;
  state.field = std::move(adapted.field);

  if (state.collision == CollisionMode::leaves)
    collide_leaves(state.field, scheme);
  else
    collide_reconstructed(state.field, scheme, state.prediction, state.boundary);

  adaptive_stream(state.field, scheme, state.prediction, state.boundary);
  ++state.step;
}

std::vector<double> leaf_conserved_moments(const LeafField& field, const SchemeSpec& scheme) {
  const int qc = scheme.conserved();
  std::vector<double> out(field.cells.size() * static_cast<std::size_t>(qc));
  std::vector<double> m(static_cast<std::size_t>(qc));
  for (std::size_t i = 0; i < field.cells.size(); ++i) {
    scheme.conserved_moments(field.at(i), m);
    for (int c = 0; c < qc; ++c) out[i * static_cast<std::size_t>(qc) + static_cast<std::size_t>(c)] = m[static_cast<std::size_t>(c)];
  }
  return out;
}

std::vector<double> reconstructed_conserved(const LeafField& field, const SchemeSpec& scheme,
                                            const PredictionSpec& prediction, BoundaryMode boundary) {
  const MeshTree& tree = *field.tree;
  const auto& geom = tree.geometry();
  const std::int32_t n = geom.cells_at(geom.max_level);
  const int qc = scheme.conserved();
  MultilevelEvaluator eval(tree, field, prediction, boundary);
  std::vector<double> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(qc));
  std::vector<double> m(static_cast<std::size_t>(qc));
  for (std::int32_t k = 0; k < n; ++k) {
    scheme.conserved_moments(eval.values({geom.max_level, k}), m);
    for (int c = 0; c < qc; ++c)
      out[static_cast<std::size_t>(k) * static_cast<std::size_t>(qc) + static_cast<std::size_t>(c)] = m[static_cast<std::size_t>(c)];
  }
  return out;
}

}  // namespace mrlbm
