#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace mrlbm {

/// How indices that fall outside a lattice are mapped back in. `copy` clamps
/// (ghost cells replicate the boundary value), `periodic` wraps.
enum class BoundaryMode { copy, periodic };

/// One dyadic cell: level `level` splits the domain into 2^level cells and
/// `pos` selects one of them.
struct CellIndex {
  int level = 0;
  std::int32_t pos = 0;

  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Hierarchy of nested lattices on [a, b]. Level j has root_cells * 2^j
/// cells of width (b - a) / root_cells * 2^-j; levels range over
/// [min_level, max_level]. One root cell is the plain dyadic hierarchy; the
/// benchmark setups split [a, b] into unit root cells so that level-j cells
/// have width exactly 2^-j.
struct MeshGeometry {
  double a = 0.0;
  double b = 1.0;
  int min_level = 0;
  int max_level = 0;
  std::int32_t root_cells = 1;

  MeshGeometry() = default;
  MeshGeometry(double a_, double b_, int min_level_, int max_level_, std::int32_t root_cells_ = 1);

  std::int32_t cells_at(int level) const { return root_cells << level; }
  double cell_width(int level) const { return std::ldexp((b - a) / root_cells, -level); }
  double finest_width() const { return cell_width(max_level); }
  int level_count() const { return max_level - min_level + 1; }

  double left_edge(CellIndex c) const { return a + cell_width(c.level) * c.pos; }
  double right_edge(CellIndex c) const { return a + cell_width(c.level) * (c.pos + 1); }
  double center(CellIndex c) const { return a + cell_width(c.level) * (c.pos + 0.5); }

  friend bool operator==(const MeshGeometry&, const MeshGeometry&) = default;
};

/// Maps a raw position into [0, n) according to the boundary mode.
inline std::int32_t map_position(std::int64_t k, std::int32_t n, BoundaryMode mode) {
  if (k >= 0 && k < n) return static_cast<std::int32_t>(k);
  if (mode == BoundaryMode::periodic) {
    std::int64_t m = k % n;
    return static_cast<std::int32_t>(m < 0 ? m + n : m);
  }
  return k < 0 ? 0 : n - 1;
}

}  // namespace mrlbm
