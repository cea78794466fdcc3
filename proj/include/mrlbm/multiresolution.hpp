#pragma once

#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "mrlbm/field.hpp"
#include "mrlbm/prediction.hpp"
#include "mrlbm/tree.hpp"

namespace mrlbm {

/// Multilevel view of a leaf field: exact averages on every cell of the
/// complete tree (filled bottom-up by projection), detail-free predictions
/// below the leaves computed and memoized on demand. Queries over disjoint
/// cells of one evaluator return exactly the values the naive recursive
/// prediction would.
class MultilevelEvaluator {
 public:
  MultilevelEvaluator(const MeshTree& tree, const LeafField& field, const PredictionSpec& prediction,
                      BoundaryMode boundary);

  /// The q averages of any admissible cell, exact on the complete tree and
  /// recursively predicted below the leaves.
  std::span<const double> values(CellIndex c);
  double value(CellIndex c, int population) { return values(c)[static_cast<std::size_t>(population)]; }

  /// Finest-level query; `raw_pos` may fall outside the lattice and is
  /// mapped per the boundary mode.
  std::span<const double> finest(std::int64_t raw_pos);

  /// True when the cell average is exact (cell of the complete tree).
  bool is_exact(CellIndex c) const;

 private:
  void ensure(int level, std::int32_t pos);
  std::span<double> slot(int level, std::int32_t pos);

  const MeshTree& tree_;
  PredictionSpec prediction_;
  BoundaryMode boundary_;
  int populations_;
  std::vector<std::vector<double>> vals_;   // per level, pos-major with q stride
  std::vector<std::vector<char>> state_;    // 0 unknown, 1 exact, 2 predicted
};

/// Detail of every slot above the coarsest level: stored average minus the
/// value predicted from the father level. Requires a graded tree.
DetailField compute_details(const MeshTree& tree, const LeafField& field, const PredictionSpec& prediction,
                            BoundaryMode boundary);

/// Multiresolution transform of a leaf field: coarsest-level averages plus
/// one detail per slot. `decode` inverts it exactly.
struct EncodedField {
  std::vector<double> coarse;  // cells_at(min_level) * populations, pos-major
  DetailField details;
};

EncodedField encode(const MeshTree& tree, const LeafField& field, const PredictionSpec& prediction,
                    BoundaryMode boundary);
LeafField decode(std::shared_ptr<const MeshTree> tree, const EncodedField& encoded,
                 const PredictionSpec& prediction, BoundaryMode boundary);

/// Error-control policy: one threshold epsilon at the finest level, halved
/// per coarser level, plus the scheme radius and regularity guess that drive
/// the mesh enlargement.
struct ThresholdPolicy {
  double epsilon = 0.0;
  double regularity_guess = std::numeric_limits<double>::infinity();  // mu bar
  int scheme_radius = 0;                                              // sigma
  int prediction_order = 3;                                           // mu = 2*gamma + 1
  int max_level = 0;

  double effective_regularity() const {
    return std::min(regularity_guess, static_cast<double>(prediction_order));
  }
  /// epsilon_j = 2^(j - max_level) * epsilon.
  double level_threshold(int level) const { return std::ldexp(epsilon, level - max_level); }
  /// Refinement trigger 2^(mu_eff + 1) * epsilon_j.
  double refine_threshold(int level) const {
    return std::exp2(effective_regularity() + 1.0) * level_threshold(level);
  }
};

/// Coarsening: keeps the coarsest level and every slot whose detail reaches
/// its level threshold (max over populations, ties kept), then restores the
/// tree property by keeping the ancestors of kept slots. Result is a subtree
/// of the input.
MeshTree threshold(const MeshTree& tree, const DetailField& details, const ThresholdPolicy& policy);

/// Enlargement: widens the thresholded tree by the scheme radius at every
/// level and refines below slots whose detail signals an incoming loss of
/// regularity. `details` are those of the pre-threshold tree.
MeshTree enlarge(const MeshTree& thresholded, const DetailField& details, const ThresholdPolicy& policy,
                 BoundaryMode boundary);

/// One mesh-adaptation pass: grade(enlarge(threshold(tree))) using the
/// details of `field`, then remap the field onto the new complete leaves
/// (exact projection where coarsened, detail-free prediction where refined).
struct AdaptResult {
  std::shared_ptr<const MeshTree> tree;
  LeafField field;
};

AdaptResult adapt_mesh(const LeafField& field, const ThresholdPolicy& policy, const PredictionSpec& prediction,
                       BoundaryMode boundary);

/// Averages of one finest-level cell recursively predicted from the leaves.
std::vector<double> reconstruct(const MeshTree& tree, const LeafField& field, const PredictionSpec& prediction,
                                BoundaryMode boundary, std::int32_t finest_pos);

/// Full finest-level reconstruction, pos-major with q stride.
std::vector<double> reconstruct_finest(const MeshTree& tree, const LeafField& field,
                                       const PredictionSpec& prediction, BoundaryMode boundary);

}  // namespace mrlbm
