#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrlbm/adaptive.hpp"
#include "mrlbm/models.hpp"

namespace mrlbm {

/// Full description of one simulation: scheme, problem, mesh levels and the
/// adaptation knobs. Presets fill it from the benchmark table.
struct RunConfig {
  std::string scheme = "d1q2";     // d1q2 | d1q3 | d1q5 | euler
  std::string flux = "advection";  // d1q2 only: advection | burgers
  std::string datum = "gaussian";  // gaussian | box | tanh | hat | sw_dam | sod
  double advection_speed = 0.75;
  double gravity = 9.81;
  double gas_gamma = 1.4;
  double alpha = 1.0;  // d1q5 extra equilibria weights
  double beta = 1.0;

  double a = -3.0;
  double b = 3.0;
  int min_level = 2;
  int max_level = 9;
  int root_cells = 1;  // unit root cells in the benchmark presets

  int gamma = 1;  // prediction stencil radius
  double epsilon = 1e-4;
  double mu_bar = std::numeric_limits<double>::infinity();
  double lambda = 1.0;
  double s = 1.0;   // relaxation rate (s2 for shallow water schemes)
  double s3 = 1.0;  // d1q5 only
  double s4 = 1.0;  // d1q5 only
  double final_time = 0.4;
  CollisionMode collision = CollisionMode::leaves;
  BoundaryMode boundary = BoundaryMode::copy;
  int norm_p = 1;
  bool with_reference = true;
  std::string preset;  // the preset this config was expanded from, if any
};

/// Named bundles: scalar tests I..V, sw3, sw5, sod.
RunConfig preset_config(const std::string& id);
void validate_config(const RunConfig& config);

SchemeSpec build_scheme(const RunConfig& config);
InitialData config_datum(const RunConfig& config);
/// The scalar benchmark this config reproduces, when its exact solution
/// applies.
std::optional<ScalarTest> config_test(const RunConfig& config);

/// Number of acoustic-scaled steps covering the horizon; warns on stderr
/// when the rounded horizon drifts by more than half a step.
int step_count(const RunConfig& config);

/// Conserved moments of the uniform reference scheme at every step,
/// step-major then pos-major with q_cons stride.
struct ReferenceTrajectory {
  int steps = 0;
  int q_cons = 0;
  std::int32_t cells = 0;
  std::vector<double> conserved;

  std::span<const double> at(int n) const {
    const std::size_t stride = static_cast<std::size_t>(cells) * static_cast<std::size_t>(q_cons);
    return {conserved.data() + static_cast<std::size_t>(n) * stride, stride};
  }
};

/// Shared reference trajectory for this config, reused via an in-process
/// cache and, when the MRLBM_CACHE environment variable names a directory,
/// a content-hash-keyed disk cache.
std::shared_ptr<const ReferenceTrajectory> reference_trajectory(const RunConfig& config, int steps);

struct StepStats {
  int n = 0;
  double t = 0.0;
  std::vector<double> e;            // adaptive vs reference, per conserved moment
  std::vector<double> exact_error;  // reference vs exact solution, when known
  double compression = 0.0;
  std::int64_t leaf_count = 0;
};

struct RunResult {
  RunConfig config;
  double dt = 0.0;
  int steps = 0;
  std::vector<StepStats> series;
  AdaptiveState state;  // final
  std::vector<double> final_reconstructed;  // conserved, pos-major
  std::shared_ptr<const ReferenceTrajectory> reference;
  double max_conserved_deviation = 0.0;  // relative, over the whole run
};

RunResult run(const RunConfig& config);

struct SweepRow {
  double epsilon = 0.0;
  std::vector<double> e_final;
  double compression_final = 0.0;
  std::int64_t leaf_count = 0;
};

/// One adaptive run per epsilon against a single shared reference
/// trajectory; runs fan out over worker threads, rows come back in input
/// order.
std::vector<SweepRow> epsilon_sweep(const RunConfig& base, std::span<const double> epsilons);

}  // namespace mrlbm
