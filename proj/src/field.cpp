#include "mrlbm/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrlbm {

std::size_t LeafField::find(CellIndex c) const {
  auto it = std::lower_bound(cells.begin(), cells.end(), c);
  if (it == cells.end() || *it != c) return npos;
  return static_cast<std::size_t>(it - cells.begin());
}

LeafField make_leaf_field(std::shared_ptr<const MeshTree> tree, int populations) {
  if (populations <= 0) throw std::invalid_argument("make_leaf_field: populations must be positive");
  LeafField field;
  field.cells = complete_leaves(*tree);
  field.tree = std::move(tree);
  field.populations = populations;
  field.values.assign(field.cells.size() * static_cast<std::size_t>(populations), 0.0);
  return field;
}

double DetailField::max_abs(std::size_t i) const {
  double m = 0.0;
  for (double v : at(i)) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace mrlbm
