#pragma once

#include <memory>
#include <vector>

#include "mrlbm/geometry.hpp"

namespace mrlbm {

/// Tree of dyadic cell indices with the detail redundancy removed: the
/// coarsest level holds every position, finer levels hold even positions
/// only. A slot (j, k) with even k stands for the brother pair of cells
/// (j, k) and (j, k+1); both belong to the complete tree whenever the slot
/// is present.
///
/// Invariants (checked at construction):
///  - the whole coarsest level is present,
///  - positions are sorted, unique, in range, and even for j > min_level,
///  - no orphan: the father cell of every slot belongs to the complete tree.
class MeshTree {
 public:
  MeshTree(MeshGeometry geometry, std::vector<std::vector<std::int32_t>> slots);

  const MeshGeometry& geometry() const { return geom_; }

  /// Sorted slot positions at `level` (all positions at the coarsest level,
  /// even positions above it).
  const std::vector<std::int32_t>& level_slots(int level) const {
    return slots_[static_cast<std::size_t>(level - geom_.min_level)];
  }

  bool has_slot(int level, std::int32_t pos) const;

  /// True when the cell (level, pos) — either parity — belongs to the
  /// complete tree.
  bool has_cell(int level, std::int32_t pos) const;

  std::size_t slot_count() const;

  friend bool operator==(const MeshTree&, const MeshTree&);

 private:
  MeshGeometry geom_;
  std::vector<std::vector<std::int32_t>> slots_;  // indexed by level - min_level
};

/// The maximal tree: every admissible index.
MeshTree full_tree(const MeshGeometry& geometry);

/// The minimal tree: the coarsest level only.
MeshTree coarsest_tree(const MeshGeometry& geometry);

/// All cells of the complete tree (slot pairs plus the coarsest level),
/// sorted by (level, pos).
std::vector<CellIndex> complete_tree(const MeshTree& tree);

/// Slots whose even cell has no son in the tree, sorted.
std::vector<CellIndex> leaves(const MeshTree& tree);

/// Childless cells of the complete tree, sorted by (level, pos). They form a
/// disjoint multi-level partition of [a, b].
std::vector<CellIndex> complete_leaves(const MeshTree& tree);

/// Smallest graded superset: every cell of the complete tree above the
/// coarsest level has its full prediction stencil of father cells (stencil
/// radius `gamma`, out-of-range indices mapped per `boundary`) in the
/// complete tree. Extensive, monotone, idempotent.
MeshTree grade(const MeshTree& tree, int gamma, BoundaryMode boundary);

bool is_graded(const MeshTree& tree, int gamma, BoundaryMode boundary);

/// True when every slot of `inner` is a slot of `outer`.
bool is_subtree(const MeshTree& inner, const MeshTree& outer);

/// Mutable per-level bitmask used to assemble trees. Slots added above the
/// coarsest level must be even; `close_orphans` adds the missing ancestors.
class TreeBuilder {
 public:
  explicit TreeBuilder(const MeshGeometry& geometry);
  explicit TreeBuilder(const MeshTree& tree);

  void add_slot(int level, std::int32_t pos);
  /// Adds the slot covering the cell (level, pos) of either parity.
  void add_cell(int level, std::int32_t pos);
  bool has_slot(int level, std::int32_t pos) const;

  void close_orphans();
  MeshTree build() const;

 private:
  MeshGeometry geom_;
  std::vector<std::vector<char>> mask_;  // indexed by level - min_level, then pos
};

}  // namespace mrlbm
