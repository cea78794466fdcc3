#pragma once

#include <string>
#include <vector>

#include "mrlbm/diagnostics.hpp"
#include "mrlbm/simulation.hpp"

namespace mrlbm {

/// Scientific notation with 12 significant digits; all CSV numerics go
/// through this so identical configs give byte-identical files.
std::string format_sci(double v);

void write_errors_csv(const std::string& path, const RunResult& result);
void write_solution_csv(const std::string& path, const RunResult& result);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
void write_decay_csv(const std::string& path, const std::vector<DecayRow>& rows);

struct CollisionCompareRow {
  double epsilon = 0.0;
  double e_leaves = 0.0;
  double e_reconstructed = 0.0;
};

void write_compare_csv(const std::string& path, const std::vector<CollisionCompareRow>& rows);

}  // namespace mrlbm
