#include "mrlbm/tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mrlbm {

namespace {

std::int32_t slot_of_cell(std::int32_t pos) { return pos & ~std::int32_t{1}; }

}  // namespace

MeshTree::MeshTree(MeshGeometry geometry, std::vector<std::vector<std::int32_t>> slots)
    : geom_(geometry), slots_(std::move(slots)) {
  if (slots_.size() != static_cast<std::size_t>(geom_.level_count()))
    throw std::invalid_argument("MeshTree: one slot list per level expected");

  for (int j = geom_.min_level; j <= geom_.max_level; ++j) {
    const auto& lv = level_slots(j);
    const std::int32_t n = geom_.cells_at(j);
    for (std::size_t i = 0; i < lv.size(); ++i) {
      if (lv[i] < 0 || lv[i] >= n) throw std::invalid_argument("MeshTree: position out of range");
      if (i > 0 && lv[i - 1] >= lv[i]) throw std::invalid_argument("MeshTree: positions must be sorted and unique");
      if (j > geom_.min_level && (lv[i] & 1)) throw std::invalid_argument("MeshTree: only even positions above the coarsest level");
    }
  }
  if (level_slots(geom_.min_level).size() != static_cast<std::size_t>(geom_.cells_at(geom_.min_level)))
    throw std::invalid_argument("MeshTree: the whole coarsest level must be present");

  for (int j = geom_.min_level + 1; j <= geom_.max_level; ++j)
    for (std::int32_t k : level_slots(j))
      if (!has_cell(j - 1, k / 2)) throw std::invalid_argument("MeshTree: orphan slot (father cell missing)");
}

bool MeshTree::has_slot(int level, std::int32_t pos) const {
  if (level < geom_.min_level || level > geom_.max_level) return false;
  const auto& lv = level_slots(level);
  return std::binary_search(lv.begin(), lv.end(), pos);
}

bool MeshTree::has_cell(int level, std::int32_t pos) const {
  if (level == geom_.min_level) return pos >= 0 && pos < geom_.cells_at(level);
  return has_slot(level, slot_of_cell(pos));
}

std::size_t MeshTree::slot_count() const {
  return std::accumulate(slots_.begin(), slots_.end(), std::size_t{0},
                         [](std::size_t acc, const auto& lv) { return acc + lv.size(); });
}

bool operator==(const MeshTree& x, const MeshTree& y) {
  return x.geom_ == y.geom_ && x.slots_ == y.slots_;
}

MeshTree full_tree(const MeshGeometry& geometry) {
  std::vector<std::vector<std::int32_t>> slots(static_cast<std::size_t>(geometry.level_count()));
  for (int j = geometry.min_level; j <= geometry.max_level; ++j) {
    auto& lv = slots[static_cast<std::size_t>(j - geometry.min_level)];
    const std::int32_t step = j == geometry.min_level ? 1 : 2;
    for (std::int32_t k = 0; k < geometry.cells_at(j); k += step) lv.push_back(k);
  }
  return MeshTree(geometry, std::move(slots));
}

MeshTree coarsest_tree(const MeshGeometry& geometry) {
  std::vector<std::vector<std::int32_t>> slots(static_cast<std::size_t>(geometry.level_count()));
  for (std::int32_t k = 0; k < geometry.cells_at(geometry.min_level); ++k) slots[0].push_back(k);
  return MeshTree(geometry, std::move(slots));
}

std::vector<CellIndex> complete_tree(const MeshTree& tree) {
  const auto& geom = tree.geometry();
  std::vector<CellIndex> cells;
  for (std::int32_t k = 0; k < geom.cells_at(geom.min_level); ++k) cells.push_back({geom.min_level, k});
  for (int j = geom.min_level + 1; j <= geom.max_level; ++j)
    for (std::int32_t k : tree.level_slots(j)) {
      cells.push_back({j, k});
      cells.push_back({j, k + 1});
    }
  return cells;
}

std::vector<CellIndex> leaves(const MeshTree& tree) {
  const auto& geom = tree.geometry();
  std::vector<CellIndex> out;
  for (int j = geom.min_level; j <= geom.max_level; ++j)
    for (std::int32_t k : tree.level_slots(j))
      if (j == geom.max_level || !tree.has_slot(j + 1, 2 * k)) out.push_back({j, k});
  return out;
}

std::vector<CellIndex> complete_leaves(const MeshTree& tree) {
  const auto& geom = tree.geometry();
  std::vector<CellIndex> out;
  for (const CellIndex& c : complete_tree(tree))
    if (c.level == geom.max_level || !tree.has_slot(c.level + 1, 2 * c.pos)) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

TreeBuilder::TreeBuilder(const MeshGeometry& geometry) : geom_(geometry) {
  mask_.resize(static_cast<std::size_t>(geom_.level_count()));
  for (int j = geom_.min_level; j <= geom_.max_level; ++j)
    mask_[static_cast<std::size_t>(j - geom_.min_level)].assign(static_cast<std::size_t>(geom_.cells_at(j)), 0);
  for (std::int32_t k = 0; k < geom_.cells_at(geom_.min_level); ++k) mask_[0][static_cast<std::size_t>(k)] = 1;
}

TreeBuilder::TreeBuilder(const MeshTree& tree) : TreeBuilder(tree.geometry()) {
  for (int j = geom_.min_level + 1; j <= geom_.max_level; ++j)
    for (std::int32_t k : tree.level_slots(j)) add_slot(j, k);
}

void TreeBuilder::add_slot(int level, std::int32_t pos) {
  if (level > geom_.min_level && (pos & 1)) throw std::invalid_argument("TreeBuilder: slot positions are even");
  mask_[static_cast<std::size_t>(level - geom_.min_level)][static_cast<std::size_t>(pos)] = 1;
}

void TreeBuilder::add_cell(int level, std::int32_t pos) {
  add_slot(level, level == geom_.min_level ? pos : slot_of_cell(pos));
}

bool TreeBuilder::has_slot(int level, std::int32_t pos) const {
  return mask_[static_cast<std::size_t>(level - geom_.min_level)][static_cast<std::size_t>(pos)] != 0;
}

void TreeBuilder::close_orphans() {
  for (int j = geom_.max_level; j > geom_.min_level + 1; --j) {
    const auto& lv = mask_[static_cast<std::size_t>(j - geom_.min_level)];
    for (std::int32_t k = 0; k < static_cast<std::int32_t>(lv.size()); k += 2)
      if (lv[static_cast<std::size_t>(k)]) add_cell(j - 1, k / 2);
  }
}

MeshTree TreeBuilder::build() const {
  std::vector<std::vector<std::int32_t>> slots(mask_.size());
  for (std::size_t lvl = 0; lvl < mask_.size(); ++lvl)
    for (std::int32_t k = 0; k < static_cast<std::int32_t>(mask_[lvl].size()); ++k)
      if (mask_[lvl][static_cast<std::size_t>(k)]) slots[lvl].push_back(k);
  return MeshTree(geom_, std::move(slots));
}

MeshTree grade(const MeshTree& tree, int gamma, BoundaryMode boundary) {
  if (gamma < 0) throw std::invalid_argument("grade: gamma must be nonnegative");
  const auto& geom = tree.geometry();
  TreeBuilder builder(tree);

  // Fine-to-coarse sweep: forcing a stencil father can only add coarser
  // slots, which the same sweep then visits. Loop until stable anyway.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int j = geom.max_level; j > geom.min_level; --j) {
      if (j - 1 == geom.min_level) continue;  // coarsest level is always complete
      const std::int32_t n_father = geom.cells_at(j - 1);
      for (std::int32_t k = 0; k < geom.cells_at(j); k += 2) {
        if (!builder.has_slot(j, k)) continue;
        for (int delta = -gamma; delta <= gamma; ++delta) {
          const std::int32_t p = map_position(std::int64_t{k} / 2 + delta, n_father, boundary);
          const std::int32_t s = slot_of_cell(p);
          if (!builder.has_slot(j - 1, s)) {
            builder.add_slot(j - 1, s);
            changed = true;
          }
        }
      }
    }
  }
  return builder.build();
}

bool is_graded(const MeshTree& tree, int gamma, BoundaryMode boundary) {
  const auto& geom = tree.geometry();
  for (int j = geom.min_level + 1; j <= geom.max_level; ++j) {
    const std::int32_t n_father = geom.cells_at(j - 1);
    for (std::int32_t k : tree.level_slots(j))
      for (int delta = -gamma; delta <= gamma; ++delta)
        if (!tree.has_cell(j - 1, map_position(std::int64_t{k} / 2 + delta, n_father, boundary))) return false;
  }
  return true;
}

bool is_subtree(const MeshTree& inner, const MeshTree& outer) {
  if (!(inner.geometry() == outer.geometry())) return false;
  const auto& geom = inner.geometry();
  for (int j = geom.min_level + 1; j <= geom.max_level; ++j)
    for (std::int32_t k : inner.level_slots(j))
      if (!outer.has_slot(j, k)) return false;
  return true;
}

}  // namespace mrlbm
