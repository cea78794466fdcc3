#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mrlbm/csv.hpp"
#include "mrlbm/diagnostics.hpp"
#include "mrlbm/simulation.hpp"

namespace {

using mrlbm::RunConfig;

struct CommonOptions {
  std::string preset;
  std::string config_file;
  std::string out_dir = "out";
  std::map<std::string, std::string> overrides;
};

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto as_double = [&] { return std::stod(value); };
  auto as_int = [&] { return std::stoi(value); };
  if (key == "scheme") cfg.scheme = value;
  else if (key == "flux") cfg.flux = value;
  else if (key == "datum") cfg.datum = value;
  else if (key == "c" || key == "advection_speed") cfg.advection_speed = as_double();
  else if (key == "g" || key == "gravity") cfg.gravity = as_double();
  else if (key == "gas_gamma") cfg.gas_gamma = as_double();
  else if (key == "alpha") cfg.alpha = as_double();
  else if (key == "beta") cfg.beta = as_double();
  else if (key == "a") cfg.a = as_double();
  else if (key == "b") cfg.b = as_double();
  else if (key == "min_level") cfg.min_level = as_int();
  else if (key == "max_level") cfg.max_level = as_int();
  else if (key == "root_cells") cfg.root_cells = as_int();
  else if (key == "gamma") cfg.gamma = as_int();
  else if (key == "epsilon") cfg.epsilon = as_double();
  else if (key == "mu_bar") cfg.mu_bar = value == "inf" ? std::numeric_limits<double>::infinity() : as_double();
  else if (key == "lambda") cfg.lambda = as_double();
  else if (key == "s") cfg.s = as_double();
  else if (key == "s3") cfg.s3 = as_double();
  else if (key == "s4") cfg.s4 = as_double();
  else if (key == "T" || key == "final_time") cfg.final_time = as_double();
  else if (key == "norm_p") cfg.norm_p = as_int();
  else if (key == "collision") {
    if (value == "leaves") cfg.collision = mrlbm::CollisionMode::leaves;
    else if (value == "reconstructed") cfg.collision = mrlbm::CollisionMode::reconstructed;
    else throw std::invalid_argument("unknown collision mode '" + value + "'");
  } else if (key == "boundary") {
    if (value == "copy") cfg.boundary = mrlbm::BoundaryMode::copy;
    else if (value == "periodic") cfg.boundary = mrlbm::BoundaryMode::periodic;
    else throw std::invalid_argument("unknown boundary mode '" + value + "'");
  } else if (key == "reference") {
    cfg.with_reference = value == "true" || value == "1" || value == "on";
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

RunConfig assemble_config(const CommonOptions& opts) {
  RunConfig cfg;
  if (!opts.preset.empty()) cfg = mrlbm::preset_config(opts.preset);
  if (!opts.config_file.empty()) {
    std::ifstream in(opts.config_file);
    if (!in) throw std::invalid_argument("cannot open config file '" + opts.config_file + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("malformed config line: " + line);
      apply_key(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
  }
  for (const auto& [key, value] : opts.overrides) apply_key(cfg, key, value);
  mrlbm::validate_config(cfg);
  return cfg;
}

/// Flags shared by the simulation subcommands; values are recorded as
/// overrides so they always win over preset and config file.
void add_config_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--preset", opts.preset, "preset: I II III IV V sw3 sw5 sod");
  cmd->add_option("--config", opts.config_file, "key=value config file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  auto track = [&opts](const std::string& key) {
    return [&opts, key](const std::string& value) { opts.overrides[key] = value; };
  };
  cmd->add_option_function<std::string>("--scheme", track("scheme"), "d1q2 d1q3 d1q5 euler");
  cmd->add_option_function<std::string>("--flux", track("flux"), "advection | burgers");
  cmd->add_option_function<std::string>("--datum", track("datum"), "initial datum id");
  cmd->add_option_function<std::string>("--epsilon", track("epsilon"), "threshold");
  cmd->add_option_function<std::string>("--s", track("s"), "relaxation rate");
  cmd->add_option_function<std::string>("--s3", track("s3"), "extra relaxation rate (d1q5)");
  cmd->add_option_function<std::string>("--s4", track("s4"), "extra relaxation rate (d1q5)");
  cmd->add_option_function<std::string>("--mu-bar", track("mu_bar"), "regularity guess, or inf");
  cmd->add_option_function<std::string>("--gamma", track("gamma"), "prediction stencil radius");
  cmd->add_option_function<std::string>("--min-level", track("min_level"), "coarsest level");
  cmd->add_option_function<std::string>("--max-level", track("max_level"), "finest level");
  cmd->add_option_function<std::string>("--root-cells", track("root_cells"), "root cells at level 0");
  cmd->add_option_function<std::string>("--collision", track("collision"), "leaves | reconstructed");
  cmd->add_option_function<std::string>("--boundary", track("boundary"), "copy | periodic");
  cmd->add_option_function<std::string>("--T", track("T"), "final time");
  cmd->add_option_function<std::string>("--lambda", track("lambda"), "lattice velocity");
  cmd->add_option_function<std::string>("--gravity", track("g"), "shallow water gravity");
  cmd->add_option_function<std::string>("--reference", track("reference"), "pair with the uniform reference (default on)");
}

std::filesystem::path prepare_out(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

int cmd_run(const CommonOptions& opts) {
  const RunConfig cfg = assemble_config(opts);
  const auto out = prepare_out(opts.out_dir);
  const mrlbm::RunResult result = mrlbm::run(cfg);
  mrlbm::write_errors_csv((out / "errors.csv").string(), result);
  mrlbm::write_solution_csv((out / "solution.csv").string(), result);

  const auto& last = result.series.back();
  std::ostringstream summary;
  summary << "steps=" << result.steps << " t_final=" << mrlbm::format_sci(last.t)
          << " compression=" << mrlbm::format_sci(last.compression) << " leaves=" << last.leaf_count;
  if (!last.e.empty()) {
    for (std::size_t c = 0; c < last.e.size(); ++c)
      summary << " e_h" << c << "=" << mrlbm::format_sci(last.e[c]);
    summary << " adaptive_matches_reference=" << (result.max_conserved_deviation <= 1e-12 ? "true" : "false");
  }
  if (!last.exact_error.empty())
    for (std::size_t c = 0; c < last.exact_error.size(); ++c)
      summary << " E_h" << c << "=" << mrlbm::format_sci(last.exact_error[c]);
  std::cout << summary.str() << '\n';
  return 0;
}

int cmd_sweep(const CommonOptions& opts, const std::vector<double>& epsilons, const std::vector<double>& s_values) {
  RunConfig base = assemble_config(opts);
  const auto out = prepare_out(opts.out_dir);
  const std::vector<double> ss = s_values.empty() ? std::vector<double>{base.s} : s_values;
  for (double s : ss) {
    RunConfig cfg = base;
    cfg.s = s;
    const auto rows = mrlbm::epsilon_sweep(cfg, epsilons);
    char name[48];
    std::snprintf(name, sizeof name, "sweep_s%.4g.csv", s);
    mrlbm::write_sweep_csv((out / name).string(), rows);
    std::cout << "wrote " << (out / name).string() << '\n';
  }
  return 0;
}

int cmd_decay_study(const std::string& field, int max_level, const std::string& out_dir) {
  const auto out = prepare_out(out_dir);
  std::vector<int> fields;
  if (field == "all")
    fields = {0, 1, 2, 3};
  else
    fields = {std::stoi(field)};
  for (int f : fields) {
    const auto rows = mrlbm::detail_decay_study(f, 1, 2, max_level);
    mrlbm::write_decay_csv((out / ("decay_field" + std::to_string(f) + ".csv")).string(), rows);
    std::cout << "wrote decay_field" << f << ".csv\n";
  }
  return 0;
}

int cmd_compare_collision(const CommonOptions& opts, const std::vector<double>& epsilons) {
  RunConfig base = assemble_config(opts);
  const auto out = prepare_out(opts.out_dir);
  std::vector<mrlbm::CollisionCompareRow> rows;
  for (double eps : epsilons) {
    RunConfig cfg = base;
    cfg.epsilon = eps;
    cfg.collision = mrlbm::CollisionMode::leaves;
    const auto leaves_run = mrlbm::run(cfg);
    cfg.collision = mrlbm::CollisionMode::reconstructed;
    const auto recon_run = mrlbm::run(cfg);
    rows.push_back({eps, leaves_run.series.back().e.at(0), recon_run.series.back().e.at(0)});
  }
  mrlbm::write_compare_csv((out / "compare_collision.csv").string(), rows);
  std::cout << "wrote " << (out / "compare_collision.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive multiresolution lattice Boltzmann solver (1D)"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "one adaptive run, writes errors.csv and solution.csv");
  add_config_flags(run_cmd, run_opts);

  CommonOptions sweep_opts;
  std::vector<double> sweep_eps = {1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> sweep_s;
  auto* sweep_cmd = app.add_subcommand("sweep", "epsilon sweep against a shared reference");
  add_config_flags(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--epsilons", sweep_eps, "epsilon values");
  sweep_cmd->add_option("--s-values", sweep_s, "relaxation rates (one sweep file each)");

  std::string decay_field = "all";
  int decay_max_level = 17;
  std::string decay_out = "out";
  auto* decay_cmd = app.add_subcommand("decay-study", "empirical detail decay of the reference fields");
  decay_cmd->add_option("--field", decay_field, "field id 0..3 or 'all'");
  decay_cmd->add_option("--max-level", decay_max_level, "finest level of the study");
  decay_cmd->add_option("--out", decay_out, "output directory");

  CommonOptions compare_opts;
  std::vector<double> compare_eps = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  auto* compare_cmd = app.add_subcommand("compare-collision", "leaves vs reconstructed collision");
  add_config_flags(compare_cmd, compare_opts);
  compare_cmd->add_option("--epsilons", compare_eps, "epsilon values");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, sweep_eps, sweep_s);
    if (decay_cmd->parsed()) return cmd_decay_study(decay_field, decay_max_level, decay_out);
    if (compare_cmd->parsed()) return cmd_compare_collision(compare_opts, compare_eps);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
