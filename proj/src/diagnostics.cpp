#include "mrlbm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "mrlbm/multiresolution.hpp"

namespace mrlbm {

double weighted_lp(std::span<const double> u, std::span<const double> v, double weight, int p) {
  if (u.size() != v.size()) throw std::invalid_argument("weighted_lp: length mismatch");
  if (p < 1) throw std::invalid_argument("weighted_lp: requires p >= 1");
  double acc = 0.0;
  if (p == 1) {
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::abs(u[i] - v[i]);
    return weight * acc;
  }
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::pow(std::abs(u[i] - v[i]), p);
  return std::pow(weight * acc, 1.0 / p);
}

double compression_factor(const MeshTree& tree) {
  const auto& geom = tree.geometry();
  const double finest = static_cast<double>(geom.cells_at(geom.max_level));
  return 100.0 * (1.0 - static_cast<double>(complete_leaves(tree).size()) / finest);
}

namespace {

double decay_field_average(int field_id, double x1, double x2) {
  switch (field_id) {
    case 0:
      return datum_gaussian().average(0, x1, x2);
    case 1:
      return datum_hat().average(0, x1, x2);
    case 2: {
      // sqrt(x) on [0, 1], then the line (3 - x)/2 down to 0 at x = 3.
      double acc = 0.0;
      {
        const double a = std::max(x1, 0.0), b = std::min(x2, 1.0);
        if (b > a) acc += (2.0 / 3.0) * (std::pow(b, 1.5) - std::pow(a, 1.5));
      }
      {
        const double a = std::max(x1, 1.0), b = std::min(x2, 3.0);
        if (b > a) acc += 1.5 * (b - a) - 0.25 * (b * b - a * a);
      }
      return acc / (x2 - x1);
    }
    case 3: {
      const double a = std::max(x1, -1.0), b = std::min(x2, 1.0);
      if (b <= a) return 0.0;
      return (0.5 * (b - a) + 0.25 * (b * b - a * a)) / (x2 - x1);
    }
    default:
      throw std::invalid_argument("detail_decay_study: field id must be 0..3");
  }
}

}  // namespace

std::vector<DecayRow> detail_decay_study(int field_id, int gamma, int min_level, int max_level) {
  if (min_level < 0 || max_level <= min_level || max_level > 20)
    throw std::invalid_argument("detail_decay_study: requires 0 <= min_level < max_level <= 20");
  if (field_id < 0 || field_id > 3) throw std::invalid_argument("detail_decay_study: field id must be 0..3");
  const PredictionSpec prediction = PredictionSpec::centered(gamma);

  // Unit root cells on [-3, 3]: level-j cells have width exactly 2^-j, so
  // the fields' kinks at -1, 0, 1 sit on cell boundaries at every level.
  const MeshGeometry geom(-3.0, 3.0, min_level, max_level, 6);
  auto tree = std::make_shared<const MeshTree>(full_tree(geom));
  LeafField field = make_leaf_field(tree, 1);
  for (std::size_t i = 0; i < field.cells.size(); ++i)
    field.at(i)[0] = decay_field_average(field_id, geom.left_edge(field.cells[i]), geom.right_edge(field.cells[i]));

  const DetailField details = compute_details(*tree, field, prediction, BoundaryMode::copy);
  std::vector<double> max_by_level(static_cast<std::size_t>(max_level + 1), 0.0);
  for (std::size_t i = 0; i < details.cells.size(); ++i) {
    auto& m = max_by_level[static_cast<std::size_t>(details.cells[i].level)];
    m = std::max(m, details.max_abs(i));
  }

  std::vector<DecayRow> rows;
  for (int j = min_level + 1; j <= max_level; ++j) {
    DecayRow row;
    row.level = j;
    row.max_detail = max_by_level[static_cast<std::size_t>(j)];
    if (j + 1 <= max_level && max_by_level[static_cast<std::size_t>(j + 1)] > 0.0)
      row.ratio = row.max_detail / max_by_level[static_cast<std::size_t>(j + 1)];
    rows.push_back(row);
  }
  return rows;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  const double mean = sy / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.slope * x[i] + fit.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > 0.0 && x[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly);
}

}  // namespace mrlbm
