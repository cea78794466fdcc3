#include "mrlbm/scheme.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mrlbm {

SchemeSpec::SchemeSpec(std::string name, int populations, int conserved, std::vector<int> velocities,
                       double lattice_speed, std::vector<double> moment_matrix, std::vector<double> relaxation,
                       EquilibriumFn equilibrium)
    : name_(std::move(name)),
      q_(populations),
      q_cons_(conserved),
      velocities_(std::move(velocities)),
      lattice_speed_(lattice_speed),
      moment_matrix_(std::move(moment_matrix)),
      relaxation_(std::move(relaxation)),
      equilibrium_(std::move(equilibrium)) {
  if (q_ <= 0 || q_cons_ <= 0 || q_cons_ >= q_) throw std::invalid_argument("SchemeSpec: requires 0 < conserved < populations");
  if (!(lattice_speed_ > 0.0)) throw std::invalid_argument("SchemeSpec: lattice speed must be positive");
  if (velocities_.size() != static_cast<std::size_t>(q_)) throw std::invalid_argument("SchemeSpec: one velocity per population");
  if (moment_matrix_.size() != static_cast<std::size_t>(q_) * static_cast<std::size_t>(q_))
    throw std::invalid_argument("SchemeSpec: moment matrix must be q x q");
  if (relaxation_.size() != static_cast<std::size_t>(q_)) throw std::invalid_argument("SchemeSpec: one relaxation rate per moment");
  for (int h = q_cons_; h < q_; ++h) {
    const double s = relaxation_[static_cast<std::size_t>(h)];
    if (!(s > 0.0) || s > 2.0) throw std::invalid_argument("SchemeSpec: relaxation rates must lie in (0, 2]");
  }
  if (!equilibrium_) throw std::invalid_argument("SchemeSpec: equilibrium function required");

  sigma_ = 0;
  for (int w : velocities_) sigma_ = std::max(sigma_, std::abs(w));

  Eigen::MatrixXd m(q_, q_);
  for (int r = 0; r < q_; ++r)
    for (int c = 0; c < q_; ++c) m(r, c) = moment_matrix_[static_cast<std::size_t>(r * q_ + c)];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw std::invalid_argument("SchemeSpec: moment matrix is singular");
  Eigen::MatrixXd inv = lu.inverse();
  inverse_matrix_.resize(moment_matrix_.size());
  for (int r = 0; r < q_; ++r)
    for (int c = 0; c < q_; ++c) inverse_matrix_[static_cast<std::size_t>(r * q_ + c)] = inv(r, c);
}

void SchemeSpec::to_moments(std::span<const double> populations, std::span<double> moments) const {
  for (int r = 0; r < q_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < q_; ++c) acc += moment_matrix_[static_cast<std::size_t>(r * q_ + c)] * populations[static_cast<std::size_t>(c)];
    moments[static_cast<std::size_t>(r)] = acc;
  }
}

void SchemeSpec::to_populations(std::span<const double> moments, std::span<double> populations) const {
  for (int r = 0; r < q_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < q_; ++c) acc += inverse_matrix_[static_cast<std::size_t>(r * q_ + c)] * moments[static_cast<std::size_t>(c)];
    populations[static_cast<std::size_t>(r)] = acc;
  }
}

void SchemeSpec::conserved_moments(std::span<const double> populations, std::span<double> moments) const {
  for (int r = 0; r < q_cons_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < q_; ++c) acc += moment_matrix_[static_cast<std::size_t>(r * q_ + c)] * populations[static_cast<std::size_t>(c)];
    moments[static_cast<std::size_t>(r)] = acc;
  }
}

void SchemeSpec::relax_moments(std::span<double> moments, std::span<const double> eq) const {
  for (int h = q_cons_; h < q_; ++h) {
    const double s = relaxation_[static_cast<std::size_t>(h)];
    moments[static_cast<std::size_t>(h)] =
        (1.0 - s) * moments[static_cast<std::size_t>(h)] + s * eq[static_cast<std::size_t>(h - q_cons_)];
  }
}

void SchemeSpec::collide_cell(std::span<double> populations, std::span<double> moment_scratch,
                              std::span<double> eq_scratch) const {
  to_moments(populations, moment_scratch);
  equilibrium_(moment_scratch.first(static_cast<std::size_t>(q_cons_)), eq_scratch);
  relax_moments(moment_scratch, eq_scratch);
  to_populations(moment_scratch, populations);
}

}  // namespace mrlbm
