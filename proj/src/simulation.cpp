#include "mrlbm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "mrlbm/diagnostics.hpp"
#include "mrlbm/uniform.hpp"

namespace mrlbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RunConfig scalar_preset(ScalarTest test) {
  RunConfig cfg;
  cfg.scheme = "d1q2";
  cfg.a = -3.0;
  cfg.b = 3.0;
  cfg.min_level = 2;
  cfg.max_level = 9;
  cfg.root_cells = 6;  // unit root cells: level-j width is exactly 2^-j
  cfg.gamma = 1;
  cfg.epsilon = 1e-4;
  cfg.lambda = 1.0;
  switch (test) {
    case ScalarTest::I:
      cfg.flux = "advection";
      cfg.datum = "gaussian";
      cfg.mu_bar = kInf;
      cfg.final_time = 0.4;
      break;
    case ScalarTest::II:
      cfg.flux = "advection";
      cfg.datum = "box";
      cfg.mu_bar = 0.0;
      cfg.final_time = 0.4;
      break;
    case ScalarTest::III:
      cfg.flux = "burgers";
      cfg.datum = "tanh";
      cfg.mu_bar = kInf;
      cfg.final_time = 0.4;
      break;
    case ScalarTest::IV:
      cfg.flux = "burgers";
      cfg.datum = "box";
      cfg.mu_bar = 0.0;
      cfg.final_time = 0.7;
      break;
    case ScalarTest::V:
      cfg.flux = "burgers";
      cfg.datum = "hat";
      cfg.mu_bar = 0.0;
      cfg.final_time = 1.3;
      break;
  }
  return cfg;
}

std::string canonical(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Everything the uniform reference trajectory depends on.
std::string reference_key(const RunConfig& cfg, int steps) {
  std::string key = "scheme=" + cfg.scheme + ";datum=" + cfg.datum + ";a=" + canonical(cfg.a) +
                    ";b=" + canonical(cfg.b) + ";roots=" + std::to_string(cfg.root_cells) +
                    ";J=" + std::to_string(cfg.max_level) +
                    ";lambda=" + canonical(cfg.lambda) + ";s=" + canonical(cfg.s) +
                    ";boundary=" + (cfg.boundary == BoundaryMode::copy ? "copy" : "periodic") +
                    ";N=" + std::to_string(steps);
  if (cfg.scheme == "d1q2") key += ";flux=" + cfg.flux + ";c=" + canonical(cfg.advection_speed);
  if (cfg.scheme == "d1q3" || cfg.scheme == "d1q5") key += ";g=" + canonical(cfg.gravity);
  if (cfg.scheme == "d1q5")
    key += ";alpha=" + canonical(cfg.alpha) + ";beta=" + canonical(cfg.beta) + ";s3=" + canonical(cfg.s3) +
           ";s4=" + canonical(cfg.s4);
  if (cfg.scheme == "euler") key += ";gas_gamma=" + canonical(cfg.gas_gamma);
  return key;
}

std::shared_ptr<const ReferenceTrajectory> load_cached(const std::filesystem::path& file, const std::string& key) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return nullptr;
  std::uint32_t key_size = 0;
  std::int32_t steps = 0, q_cons = 0, cells = 0;
  in.read(reinterpret_cast<char*>(&key_size), sizeof key_size);
  if (!in || key_size != key.size()) return nullptr;
  std::string stored(key_size, '\0');
  in.read(stored.data(), key_size);
  in.read(reinterpret_cast<char*>(&steps), sizeof steps);
  in.read(reinterpret_cast<char*>(&q_cons), sizeof q_cons);
  in.read(reinterpret_cast<char*>(&cells), sizeof cells);
  if (!in || stored != key || steps < 0 || q_cons <= 0 || cells <= 0) return nullptr;
  auto traj = std::make_shared<ReferenceTrajectory>();
  traj->steps = steps;
  traj->q_cons = q_cons;
  traj->cells = cells;
  traj->conserved.resize(static_cast<std::size_t>(steps + 1) * static_cast<std::size_t>(cells) *
                         static_cast<std::size_t>(q_cons));
  in.read(reinterpret_cast<char*>(traj->conserved.data()),
          static_cast<std::streamsize>(traj->conserved.size() * sizeof(double)));
  if (!in) return nullptr;
  return traj;
}

void store_cached(const std::filesystem::path& file, const std::string& key, const ReferenceTrajectory& traj) {
  std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) return;
  const std::uint32_t key_size = static_cast<std::uint32_t>(key.size());
  const std::int32_t steps = traj.steps, q_cons = traj.q_cons, cells = traj.cells;
  out.write(reinterpret_cast<const char*>(&key_size), sizeof key_size);
  out.write(key.data(), static_cast<std::streamsize>(key.size()));
  out.write(reinterpret_cast<const char*>(&steps), sizeof steps);
  out.write(reinterpret_cast<const char*>(&q_cons), sizeof q_cons);
  out.write(reinterpret_cast<const char*>(&cells), sizeof cells);
  out.write(reinterpret_cast<const char*>(traj.conserved.data()),
            static_cast<std::streamsize>(traj.conserved.size() * sizeof(double)));
}

double strided_lp(std::span<const double> u, std::span<const double> v, int stride, int comp, double weight, int p) {
  double acc = 0.0;
  for (std::size_t i = static_cast<std::size_t>(comp); i < u.size(); i += static_cast<std::size_t>(stride)) {
    const double d = std::abs(u[i] - v[i]);
    acc += p == 1 ? d : std::pow(d, p);
  }
  return p == 1 ? weight * acc : std::pow(weight * acc, 1.0 / p);
}

}  // namespace

RunConfig preset_config(const std::string& id) {
  RunConfig cfg;
  if (id == "I" || id == "i")
    cfg = scalar_preset(ScalarTest::I);
  else if (id == "II" || id == "ii")
    cfg = scalar_preset(ScalarTest::II);
  else if (id == "III" || id == "iii")
    cfg = scalar_preset(ScalarTest::III);
  else if (id == "IV" || id == "iv")
    cfg = scalar_preset(ScalarTest::IV);
  else if (id == "V" || id == "v")
    cfg = scalar_preset(ScalarTest::V);
  else if (id == "sw3" || id == "sw5") {
    cfg.scheme = id == "sw3" ? "d1q3" : "d1q5";
    cfg.datum = "sw_dam";
    cfg.a = -1.0;
    cfg.b = 1.0;
    cfg.root_cells = 2;
    cfg.lambda = 2.0;
    cfg.final_time = 0.2;
    cfg.mu_bar = 0.0;
    // The benchmark runs at lattice speed 2, which bounds the gravity wave
    // speed sqrt(g h); unit gravity keeps the reference scheme stable.
    cfg.gravity = 1.0;
  } else if (id == "sod") {
    cfg.scheme = "euler";
    cfg.datum = "sod";
    cfg.a = -1.0;
    cfg.b = 1.0;
    cfg.root_cells = 2;
    cfg.lambda = 3.0;
    cfg.final_time = 0.4;
    cfg.mu_bar = 0.0;
    cfg.gas_gamma = 1.4;
  } else {
    throw std::invalid_argument("preset_config: unknown preset '" + id + "'");
  }
  cfg.preset = id;
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.scheme != "d1q2" && cfg.scheme != "d1q3" && cfg.scheme != "d1q5" && cfg.scheme != "euler")
    throw std::invalid_argument("config: unknown scheme '" + cfg.scheme + "'");
  if (cfg.scheme == "d1q2" && cfg.flux != "advection" && cfg.flux != "burgers")
    throw std::invalid_argument("config: unknown flux '" + cfg.flux + "'");
  if (!(cfg.a < cfg.b)) throw std::invalid_argument("config: requires a < b");
  if (cfg.min_level < 0 || cfg.min_level >= cfg.max_level || cfg.max_level > 20)
    throw std::invalid_argument("config: requires 0 <= min_level < max_level <= 20");
  if (cfg.root_cells < 1) throw std::invalid_argument("config: root_cells must be positive");
  if (cfg.gamma < 1 || cfg.gamma > 3) throw std::invalid_argument("config: gamma must be 1, 2 or 3");
  if (!(cfg.epsilon >= 0.0)) throw std::invalid_argument("config: epsilon must be nonnegative");
  if (!(cfg.mu_bar >= 0.0)) throw std::invalid_argument("config: mu_bar must be nonnegative");
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("config: lambda must be positive");
  if (!(cfg.final_time >= 0.0)) throw std::invalid_argument("config: final time must be nonnegative");
  if (cfg.norm_p < 1) throw std::invalid_argument("config: norm p must be >= 1");
}

SchemeSpec build_scheme(const RunConfig& cfg) {
  if (cfg.scheme == "d1q2") {
    const ScalarFlux flux =
        cfg.flux == "advection" ? ScalarFlux::advection(cfg.advection_speed) : ScalarFlux::burgers();
    return build_d1q2(flux, cfg.lambda, cfg.s);
  }
  if (cfg.scheme == "d1q3") return build_d1q3_sw(cfg.gravity, cfg.lambda, cfg.s);
  if (cfg.scheme == "d1q5") return build_d1q5_sw(cfg.gravity, cfg.lambda, cfg.alpha, cfg.beta, cfg.s, cfg.s3, cfg.s4);
  if (cfg.scheme == "euler") return build_euler_vectorial(cfg.gas_gamma, cfg.lambda, cfg.s);
  throw std::invalid_argument("build_scheme: unknown scheme '" + cfg.scheme + "'");
}

InitialData config_datum(const RunConfig& cfg) {
  if (cfg.datum == "gaussian") return datum_gaussian();
  if (cfg.datum == "box") return datum_box();
  if (cfg.datum == "tanh") return datum_tanh_ramp();
  if (cfg.datum == "hat") return datum_hat();
  if (cfg.datum == "sw_dam") return datum_sw_dam();
  if (cfg.datum == "sod") return datum_sod();
  throw std::invalid_argument("config_datum: unknown datum '" + cfg.datum + "'");
}

std::optional<ScalarTest> config_test(const RunConfig& cfg) {
  if (cfg.scheme != "d1q2") return std::nullopt;
  if (cfg.flux == "advection") {
    if (cfg.advection_speed != 0.75) return std::nullopt;
    if (cfg.datum == "gaussian") return ScalarTest::I;
    if (cfg.datum == "box") return ScalarTest::II;
    return std::nullopt;
  }
  if (cfg.datum == "tanh") return ScalarTest::III;
  if (cfg.datum == "box") return ScalarTest::IV;
  if (cfg.datum == "hat") return ScalarTest::V;
  return std::nullopt;
}

int step_count(const RunConfig& cfg) {
  const MeshGeometry geom(cfg.a, cfg.b, cfg.min_level, cfg.max_level, cfg.root_cells);
  const double dt = geom.finest_width() / cfg.lambda;
  const int n = static_cast<int>(std::llround(cfg.final_time / dt));
  if (std::abs(n * dt - cfg.final_time) > 0.5 * dt)
    std::fprintf(stderr, "warning: horizon %.6g is not a multiple of dt %.6g, running %d steps\n", cfg.final_time,
                 dt, n);
  return n;
}

std::shared_ptr<const ReferenceTrajectory> reference_trajectory(const RunConfig& cfg, int steps) {
  static std::mutex mutex;
  static std::unordered_map<std::string, std::shared_ptr<const ReferenceTrajectory>> memory;

  const std::string key = reference_key(cfg, steps);
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = memory.find(key); it != memory.end()) return it->second;

  std::filesystem::path cache_file;
  if (const char* dir = std::getenv("MRLBM_CACHE"); dir != nullptr && *dir != '\0') {
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.ref", static_cast<unsigned long long>(fnv1a(key)));
    cache_file = std::filesystem::path(dir) / name;
    if (auto loaded = load_cached(cache_file, key)) {
      memory.emplace(key, loaded);
      return loaded;
    }
  }

  const SchemeSpec scheme = build_scheme(cfg);
  const InitialData datum = config_datum(cfg);
  const MeshGeometry geom(cfg.a, cfg.b, cfg.min_level, cfg.max_level, cfg.root_cells);

  auto traj = std::make_shared<ReferenceTrajectory>();
  traj->steps = steps;
  traj->q_cons = scheme.conserved();
  traj->cells = geom.cells_at(geom.max_level);
  traj->conserved.reserve(static_cast<std::size_t>(steps + 1) * static_cast<std::size_t>(traj->cells) *
                          static_cast<std::size_t>(traj->q_cons));

  UniformState state = init_uniform(geom, scheme, datum.averager());
  auto record = [&] {
    const auto cons = conserved_field(state, scheme);
    traj->conserved.insert(traj->conserved.end(), cons.begin(), cons.end());
  };
  record();
  for (int n = 0; n < steps; ++n) {
    step_uniform(state, scheme, cfg.boundary);
    record();
  }

  if (!cache_file.empty()) store_cached(cache_file, key, *traj);
  memory.emplace(key, traj);
  return traj;
}

RunResult run(const RunConfig& cfg) {
  validate_config(cfg);
  const SchemeSpec scheme = build_scheme(cfg);
  const InitialData datum = config_datum(cfg);
  const MeshGeometry geom(cfg.a, cfg.b, cfg.min_level, cfg.max_level, cfg.root_cells);
  const double dt = geom.finest_width() / cfg.lambda;
  const int steps = step_count(cfg);
  const int qc = scheme.conserved();
  const double weight = geom.finest_width();

  ThresholdPolicy policy;
  policy.epsilon = cfg.epsilon;
  policy.regularity_guess = cfg.mu_bar;
  policy.scheme_radius = scheme.stencil_radius();
  policy.prediction_order = 2 * cfg.gamma + 1;
  policy.max_level = cfg.max_level;

  RunResult result;
  result.config = cfg;
  result.dt = dt;
  result.steps = steps;
  result.state = init_adaptive(geom, scheme, datum.averager(), policy, PredictionSpec::centered(cfg.gamma),
                               cfg.collision, cfg.boundary);
  if (cfg.with_reference) result.reference = reference_trajectory(cfg, steps);

  std::optional<ExactScalarSolution> exact;
  if (result.reference)
    if (auto test = config_test(cfg)) exact.emplace(*test);

  double ref_scale = 0.0;
  if (result.reference)
    for (double v : result.reference->conserved) ref_scale = std::max(ref_scale, std::abs(v));

  std::vector<double> exact_avg(static_cast<std::size_t>(geom.cells_at(geom.max_level)));
  auto record = [&](int n) {
    StepStats stats;
    stats.n = n;
    stats.t = n * dt;
    stats.compression = compression_factor(*result.state.tree);
    stats.leaf_count = static_cast<std::int64_t>(result.state.field.leaf_count());

    std::vector<double> recon =
        reconstructed_conserved(result.state.field, scheme, result.state.prediction, cfg.boundary);
    if (result.reference) {
      const auto ref = result.reference->at(n);
      stats.e.resize(static_cast<std::size_t>(qc));
      for (int c = 0; c < qc; ++c)
        stats.e[static_cast<std::size_t>(c)] = strided_lp(recon, ref, qc, c, weight, cfg.norm_p);
      for (std::size_t i = 0; i < recon.size(); ++i)
        result.max_conserved_deviation =
            std::max(result.max_conserved_deviation, std::abs(recon[i] - ref[i]) / std::max(ref_scale, 1e-300));

      if (exact) {
        for (std::int32_t k = 0; k < geom.cells_at(geom.max_level); ++k)
          exact_avg[static_cast<std::size_t>(k)] = exact->average(stats.t, geom.left_edge({geom.max_level, k}),
                                                                  geom.right_edge({geom.max_level, k}));
        stats.exact_error.resize(static_cast<std::size_t>(qc));
        for (int c = 0; c < qc; ++c)
          stats.exact_error[static_cast<std::size_t>(c)] = strided_lp(exact_avg, ref, qc, c, weight, cfg.norm_p);
      }
    }
    if (n == steps) result.final_reconstructed = std::move(recon);
    result.series.push_back(std::move(stats));
  };

  record(0);
  for (int n = 1; n <= steps; ++n) {
    adaptive_step(result.state, scheme);
    record(n);
  }
  return result;
}

std::vector<SweepRow> epsilon_sweep(const RunConfig& base, std::span<const double> epsilons) {
  validate_config(base);
  if (base.with_reference) reference_trajectory(base, step_count(base));  // create once, then share

  std::vector<std::future<SweepRow>> futures;
  for (double eps : epsilons) {
    RunConfig cfg = base;
    cfg.epsilon = eps;
    futures.push_back(std::async(std::launch::async, [cfg] {
      const RunResult r = run(cfg);
      SweepRow row;
      row.epsilon = cfg.epsilon;
      row.e_final = r.series.back().e;
      row.compression_final = r.series.back().compression;
      row.leaf_count = r.series.back().leaf_count;
      return row;
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(futures.size());
  for (auto& f : futures) rows.push_back(f.get());
  return rows;
}

}  // namespace mrlbm
