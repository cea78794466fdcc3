#include "mrlbm/geometry.hpp"

#include <stdexcept>

namespace mrlbm {

MeshGeometry::MeshGeometry(double a_, double b_, int min_level_, int max_level_, std::int32_t root_cells_)
    : a(a_), b(b_), min_level(min_level_), max_level(max_level_), root_cells(root_cells_) {
  if (!(a < b)) throw std::invalid_argument("MeshGeometry: requires a < b");
  if (min_level < 0 || max_level < min_level || max_level > 30)
    throw std::invalid_argument("MeshGeometry: requires 0 <= min_level <= max_level <= 30");
  if (root_cells < 1 || (static_cast<std::int64_t>(root_cells) << max_level) > (std::int64_t{1} << 27))
    throw std::invalid_argument("MeshGeometry: root_cells * 2^max_level out of range");
}

}  // namespace mrlbm
