#pragma once

#include <span>
#include <vector>

#include "mrlbm/models.hpp"
#include "mrlbm/tree.hpp"

namespace mrlbm {

/// Weighted lp distance of two finest-grid sequences:
/// (weight * sum |u - v|^p)^(1/p).
double weighted_lp(std::span<const double> u, std::span<const double> v, double weight, int p = 1);

/// Percentage of finest cells avoided: 100 * (1 - complete leaves / 2^max).
double compression_factor(const MeshTree& tree);

/// One level of the detail-decay study: the largest detail magnitude and its
/// ratio to the level below (zero when unavailable).
struct DecayRow {
  int level = 0;
  double max_detail = 0.0;
  double ratio = 0.0;
};

/// Largest detail per level of one of the four reference fields encoded on
/// the full tree over [-3, 3]. The ratios approach 2^min(regularity, order).
std::vector<DecayRow> detail_decay_study(int field_id, int gamma, int min_level, int max_level);

/// Least-squares fit of y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);
/// Fit on (log x, log y); entries with y <= 0 are skipped.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace mrlbm
