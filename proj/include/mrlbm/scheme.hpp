#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mrlbm {

/// Equilibrium of the non-conserved moments as a function of the conserved
/// ones: writes q - q_cons values.
using EquilibriumFn = std::function<void(std::span<const double> conserved, std::span<double> equilibrium)>;

/// An LBM scheme in relaxation form: an invertible moment matrix M, integer
/// velocities (in lattice-speed units), per-moment relaxation rates and the
/// equilibrium of the non-conserved moments. The first `conserved` moments
/// are unchanged by collision.
class SchemeSpec {
 public:
  SchemeSpec(std::string name, int populations, int conserved, std::vector<int> velocities, double lattice_speed,
             std::vector<double> moment_matrix, std::vector<double> relaxation, EquilibriumFn equilibrium);

  const std::string& name() const { return name_; }
  int populations() const { return q_; }
  int conserved() const { return q_cons_; }
  double lattice_speed() const { return lattice_speed_; }
  const std::vector<int>& velocities() const { return velocities_; }
  int stencil_radius() const { return sigma_; }
  double relaxation(int moment) const { return relaxation_[static_cast<std::size_t>(moment)]; }

  void to_moments(std::span<const double> populations, std::span<double> moments) const;
  void to_populations(std::span<const double> moments, std::span<double> populations) const;
  /// Conserved moments only (first `conserved` rows of M).
  void conserved_moments(std::span<const double> populations, std::span<double> moments) const;

  void equilibrium(std::span<const double> conserved, std::span<double> eq) const { equilibrium_(conserved, eq); }

  /// Relaxes the non-conserved moments towards `eq` in place; the conserved
  /// entries are untouched.
  void relax_moments(std::span<double> moments, std::span<const double> eq) const;

  /// In-place collision of one cell's populations. Scratch spans must hold
  /// q and q - conserved doubles.
  void collide_cell(std::span<double> populations, std::span<double> moment_scratch,
                    std::span<double> eq_scratch) const;

 private:
  std::string name_;
  int q_;
  int q_cons_;
  std::vector<int> velocities_;
  double lattice_speed_;
  std::vector<double> moment_matrix_;   // row-major q x q
  std::vector<double> inverse_matrix_;  // row-major q x q
  std::vector<double> relaxation_;      // size q, first q_cons unused
  EquilibriumFn equilibrium_;
  int sigma_;
};

}  // namespace mrlbm
