#pragma once

#include <memory>

#include "mrlbm/multiresolution.hpp"
#include "mrlbm/scheme.hpp"
#include "mrlbm/uniform.hpp"

namespace mrlbm {

/// Where the equilibrium of the collision is evaluated: directly at the leaf
/// moments (cheap) or averaged over the reconstructed finest subcells of
/// each leaf (theory-faithful).
enum class CollisionMode { leaves, reconstructed };

/// Adaptive solution at one discrete time: a graded tree and populations on
/// its complete leaves, plus the knobs that drive each step.
struct AdaptiveState {
  std::shared_ptr<const MeshTree> tree;
  LeafField field;
  int step = 0;
  ThresholdPolicy policy;
  PredictionSpec prediction;
  CollisionMode collision = CollisionMode::leaves;
  BoundaryMode boundary = BoundaryMode::copy;
};

/// Starts from the full tree with the same finest-grid datum as the uniform
/// reference scheme.
AdaptiveState init_adaptive(const MeshGeometry& geometry, const SchemeSpec& scheme, const ConservedAverage& datum,
                            const ThresholdPolicy& policy, const PredictionSpec& prediction, CollisionMode collision,
                            BoundaryMode boundary);

/// Relaxation with the equilibrium evaluated at each leaf's own moments.
void collide_leaves(LeafField& field, const SchemeSpec& scheme);

/// Relaxation with the equilibrium averaged over the reconstructed
/// finest-level subcells of each leaf; the linear part acts on the leaf
/// directly. Identical to collide_leaves for finest-level leaves and for
/// linear equilibria.
void collide_reconstructed(LeafField& field, const SchemeSpec& scheme, const PredictionSpec& prediction,
                           BoundaryMode boundary);

/// Exact finest-level stream of the reconstructed field projected back onto
/// the complete leaves, in telescoped per-leaf form. Reduces to the uniform
/// stream on the full tree.
void adaptive_stream(LeafField& field, const SchemeSpec& scheme, const PredictionSpec& prediction,
                     BoundaryMode boundary);

/// One full step: mesh adaptation (with the time-n details), collision per
/// the configured mode, adaptive stream.
void adaptive_step(AdaptiveState& state, const SchemeSpec& scheme);

/// Conserved moments of every complete leaf, leaf-major with q_cons stride.
std::vector<double> leaf_conserved_moments(const LeafField& field, const SchemeSpec& scheme);

/// Conserved moments of the reconstructed finest-level populations,
/// pos-major with q_cons stride.
std::vector<double> reconstructed_conserved(const LeafField& field, const SchemeSpec& scheme,
                                            const PredictionSpec& prediction, BoundaryMode boundary);

}  // namespace mrlbm
