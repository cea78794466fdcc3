#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mrlbm/tree.hpp"

namespace mrlbm {

/// Per-population cell averages stored on the complete leaves of a tree.
/// `values` is leaf-major: the q averages of leaf i live at
/// values[i*q .. (i+1)*q).
struct LeafField {
  std::shared_ptr<const MeshTree> tree;
  std::vector<CellIndex> cells;  // complete leaves, sorted by (level, pos)
  int populations = 1;
  std::vector<double> values;

  std::span<double> at(std::size_t i) {
    return {values.data() + i * static_cast<std::size_t>(populations), static_cast<std::size_t>(populations)};
  }
  std::span<const double> at(std::size_t i) const {
    return {values.data() + i * static_cast<std::size_t>(populations), static_cast<std::size_t>(populations)};
  }

  std::size_t leaf_count() const { return cells.size(); }

  /// Index of a complete leaf, or npos when absent.
  std::size_t find(CellIndex c) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Zero-initialized field on the complete leaves of `tree`.
LeafField make_leaf_field(std::shared_ptr<const MeshTree> tree, int populations);

/// Details (stored average minus predicted average) on the slots of
/// tree \ coarsest level, one value per population, slot-major like
/// LeafField.
struct DetailField {
  std::vector<CellIndex> cells;  // sorted by (level, pos), even positions
  int populations = 1;
  std::vector<double> values;

  std::span<const double> at(std::size_t i) const {
    return {values.data() + i * static_cast<std::size_t>(populations), static_cast<std::size_t>(populations)};
  }

  double max_abs(std::size_t i) const;
};

}  // namespace mrlbm
