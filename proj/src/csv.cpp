#include "mrlbm/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mrlbm/adaptive.hpp"

namespace mrlbm {

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

}  // namespace

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

void write_errors_csv(const std::string& path, const RunResult& result) {
  auto out = open_csv(path);
  const int qc = build_scheme(result.config).conserved();
  out << "n,t";
  for (int c = 0; c < qc; ++c) out << ",e_h" << c;
  for (int c = 0; c < qc; ++c) out << ",E_h" << c;
  out << ",compression,leaves\n";
  for (const auto& row : result.series) {
    out << row.n << ',' << format_sci(row.t);
    for (int c = 0; c < qc; ++c)
      out << ',' << (row.e.empty() ? "" : format_sci(row.e[static_cast<std::size_t>(c)]));
    for (int c = 0; c < qc; ++c)
      out << ',' << (row.exact_error.empty() ? "" : format_sci(row.exact_error[static_cast<std::size_t>(c)]));
    out << ',' << format_sci(row.compression) << ',' << row.leaf_count << '\n';
  }
}

void write_solution_csv(const std::string& path, const RunResult& result) {
  auto out = open_csv(path);
  const SchemeSpec scheme = build_scheme(result.config);
  const auto& field = result.state.field;
  const auto& geom = field.tree->geometry();
  out << "j,k,x_center,width";
  for (int c = 0; c < scheme.conserved(); ++c) out << ",m" << c;
  out << '\n';
  const std::vector<double> moments = leaf_conserved_moments(field, scheme);
  const std::size_t qc = static_cast<std::size_t>(scheme.conserved());
  for (std::size_t i = 0; i < field.cells.size(); ++i) {
    const CellIndex c = field.cells[i];
    out << c.level << ',' << c.pos << ',' << format_sci(geom.center(c)) << ',' << format_sci(geom.cell_width(c.level));
    for (std::size_t m = 0; m < qc; ++m) out << ',' << format_sci(moments[i * qc + m]);
    out << '\n';
  }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  auto out = open_csv(path);
  const std::size_t qc = rows.empty() ? 0 : rows.front().e_final.size();
  out << "epsilon";
  for (std::size_t c = 0; c < qc; ++c) out << ",e_final_h" << c;
  out << ",compression_final,leaves\n";
  for (const auto& row : rows) {
    out << format_sci(row.epsilon);
    for (double e : row.e_final) out << ',' << format_sci(e);
    out << ',' << format_sci(row.compression_final) << ',' << row.leaf_count << '\n';
  }
  if (rows.size() >= 2) {
    std::vector<double> eps;
    for (const auto& row : rows) eps.push_back(row.epsilon);
    for (std::size_t c = 0; c < qc; ++c) {
      std::vector<double> e;
      for (const auto& row : rows) e.push_back(row.e_final[c]);
      const LineFit fit = fit_loglog(eps, e);
      out << "# slope_h" << c << " = " << format_sci(fit.slope) << '\n';
    }
  }
}

void write_decay_csv(const std::string& path, const std::vector<DecayRow>& rows) {
  auto out = open_csv(path);
  out << "j,d,ratio\n";
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    out << it->level << ',' << format_sci(it->max_detail) << ',';
    if (it->ratio > 0.0) out << format_sci(it->ratio);
    out << '\n';
  }
}

void write_compare_csv(const std::string& path, const std::vector<CollisionCompareRow>& rows) {
  auto out = open_csv(path);
  out << "epsilon,e_leaves,e_reconstructed,ratio\n";
  for (const auto& row : rows) {
    out << format_sci(row.epsilon) << ',' << format_sci(row.e_leaves) << ',' << format_sci(row.e_reconstructed)
        << ',' << format_sci(row.e_leaves / row.e_reconstructed) << '\n';
  }
}

}  // namespace mrlbm
