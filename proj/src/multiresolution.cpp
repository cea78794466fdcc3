#include "mrlbm/multiresolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrlbm {

namespace {

constexpr char kUnknown = 0;
constexpr char kExact = 1;
constexpr char kPredicted = 2;

void require_graded(const MeshTree& tree, const PredictionSpec& prediction, BoundaryMode boundary,
                    const char* who) {
  if (!is_graded(tree, prediction.gamma, boundary))
    throw std::invalid_argument(std::string(who) + ": tree is not graded, prediction stencil unavailable");
}

}  // namespace

MultilevelEvaluator::MultilevelEvaluator(const MeshTree& tree, const LeafField& field,
                                         const PredictionSpec& prediction, BoundaryMode boundary)
    : tree_(tree), prediction_(prediction), boundary_(boundary), populations_(field.populations) {
  const auto& geom = tree_.geometry();
  const std::size_t q = static_cast<std::size_t>(populations_);
  vals_.resize(static_cast<std::size_t>(geom.level_count()));
  state_.resize(vals_.size());
  for (int j = geom.min_level; j <= geom.max_level; ++j) {
    const std::size_t n = static_cast<std::size_t>(geom.cells_at(j));
    vals_[static_cast<std::size_t>(j - geom.min_level)].assign(n * q, 0.0);
    state_[static_cast<std::size_t>(j - geom.min_level)].assign(n, kUnknown);
  }

  // Leaves carry the data; everything above them is an exact mean.
  for (std::size_t i = 0; i < field.cells.size(); ++i) {
    const CellIndex c = field.cells[i];
    auto dst = slot(c.level, c.pos);
    auto src = field.at(i);
    std::copy(src.begin(), src.end(), dst.begin());
    state_[static_cast<std::size_t>(c.level - geom.min_level)][static_cast<std::size_t>(c.pos)] = kExact;
  }
  for (int j = geom.max_level; j > geom.min_level; --j) {
    auto& father_state = state_[static_cast<std::size_t>(j - 1 - geom.min_level)];
    for (std::int32_t k : tree_.level_slots(j)) {
      const std::int32_t father = k / 2;
      auto even = slot(j, k);
      auto odd = slot(j, k + 1);
      auto dst = slot(j - 1, father);
      for (std::size_t h = 0; h < q; ++h) dst[h] = project(even[h], odd[h]);
      father_state[static_cast<std::size_t>(father)] = kExact;
    }
  }
}

std::span<double> MultilevelEvaluator::slot(int level, std::int32_t pos) {
  const std::size_t q = static_cast<std::size_t>(populations_);
  auto& lv = vals_[static_cast<std::size_t>(level - tree_.geometry().min_level)];
  return {lv.data() + static_cast<std::size_t>(pos) * q, q};
}

bool MultilevelEvaluator::is_exact(CellIndex c) const {
  return state_[static_cast<std::size_t>(c.level - tree_.geometry().min_level)][static_cast<std::size_t>(c.pos)] ==
         kExact;
}

void MultilevelEvaluator::ensure(int level, std::int32_t pos) {
  const auto& geom = tree_.geometry();
  auto& st = state_[static_cast<std::size_t>(level - geom.min_level)];
  if (st[static_cast<std::size_t>(pos)] != kUnknown) return;
  if (level == geom.min_level)
    throw std::logic_error("MultilevelEvaluator: coarsest level must be covered by the complete tree");

  const std::int32_t father = pos / 2;
  const std::int32_t n_father = geom.cells_at(level - 1);
  const int gamma = prediction_.gamma;
  std::array<std::int32_t, 7> window_pos{};
  for (int d = -gamma; d <= gamma; ++d) {
    const std::int32_t p = map_position(std::int64_t{father} + d, n_father, boundary_);
    window_pos[static_cast<std::size_t>(d + gamma)] = p;
    ensure(level - 1, p);
  }

  const std::size_t q = static_cast<std::size_t>(populations_);
  auto even = slot(level, 2 * father);
  auto odd = slot(level, 2 * father + 1);
  std::array<double, 7> window{};
  for (std::size_t h = 0; h < q; ++h) {
    for (int i = 0; i < prediction_.window_size(); ++i)
      window[static_cast<std::size_t>(i)] = slot(level - 1, window_pos[static_cast<std::size_t>(i)])[h];
    auto [ve, vo] = prediction_.predict({window.data(), static_cast<std::size_t>(prediction_.window_size())});
    even[h] = ve;
    odd[h] = vo;
  }
  st[static_cast<std::size_t>(2 * father)] = kPredicted;
  st[static_cast<std::size_t>(2 * father + 1)] = kPredicted;
}

std::span<const double> MultilevelEvaluator::values(CellIndex c) {
  ensure(c.level, c.pos);
  return slot(c.level, c.pos);
}

std::span<const double> MultilevelEvaluator::finest(std::int64_t raw_pos) {
  const auto& geom = tree_.geometry();
  const std::int32_t pos = map_position(raw_pos, geom.cells_at(geom.max_level), boundary_);
  return values({geom.max_level, pos});
}

DetailField compute_details(const MeshTree& tree, const LeafField& field, const PredictionSpec& prediction,
                            BoundaryMode boundary) {
  require_graded(tree, prediction, boundary, "compute_details");
  MultilevelEvaluator eval(tree, field, prediction, boundary);
  const auto& geom = tree.geometry();
  const std::size_t q = static_cast<std::size_t>(field.populations);

  DetailField details;
  details.populations = field.populations;
  for (int j = geom.min_level + 1; j <= geom.max_level; ++j) {
    const std::int32_t n_father = geom.cells_at(j - 1);
    std::array<double, 7> window{};
    for (std::int32_t k : tree.level_slots(j)) {
      details.cells.push_back({j, k});
      auto stored = eval.values({j, k});
      for (std::size_t h = 0; h < q; ++h) {
        for (int d = -prediction.gamma; d <= prediction.gamma; ++d) {
          const std::int32_t p = map_position(std::int64_t{k} / 2 + d, n_father, boundary);
          window[static_cast<std::size_t>(d + prediction.gamma)] = eval.value({j - 1, p}, static_cast<int>(h));
        }
        auto [even, odd] = prediction.predict({window.data(), static_cast<std::size_t>(prediction.window_size())});
        (void)odd;
        details.values.push_back(stored[h] - even);
      }
    }
  }
  return details;
}

EncodedField encode(const MeshTree& tree, const LeafField& field, const PredictionSpec& prediction,
                    BoundaryMode boundary) {
  require_graded(tree, prediction, boundary, "encode");
  EncodedField out;
  out.details = compute_details(tree, field, prediction, boundary);

  MultilevelEvaluator eval(tree, field, prediction, boundary);
  const auto& geom = tree.geometry();
  const std::size_t q = static_cast<std::size_t>(field.populations);
  out.coarse.resize(static_cast<std::size_t>(geom.cells_at(geom.min_level)) * q);
  for (std::int32_t k = 0; k < geom.cells_at(geom.min_level); ++k) {
    auto v = eval.values({geom.min_level, k});
    std::copy(v.begin(), v.end(), out.coarse.begin() + static_cast<std::size_t>(k) * q);
  }
  return out;
}

LeafField decode(std::shared_ptr<const MeshTree> tree, const EncodedField& encoded,
                 const PredictionSpec& prediction, BoundaryMode boundary) {
  require_graded(*tree, prediction, boundary, "decode");
  const auto& geom = tree->geometry();
  const int q_int = encoded.details.populations;
  const std::size_t q = static_cast<std::size_t>(q_int);

  if (encoded.coarse.size() != static_cast<std::size_t>(geom.cells_at(geom.min_level)) * q)
    throw std::invalid_argument("decode: coarse averages do not match the tree");

  // Top-down: every complete-tree cell gets its average from the father pair
  // (prediction plus the stored detail, with the odd detail negated).
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(geom.level_count()));
  for (int j = geom.min_level; j <= geom.max_level; ++j)
    vals[static_cast<std::size_t>(j - geom.min_level)].assign(static_cast<std::size_t>(geom.cells_at(j)) * q, 0.0);
  vals[0] = encoded.coarse;

  std::size_t next_detail = 0;
  std::array<double, 7> window{};
  for (int j = geom.min_level + 1; j <= geom.max_level; ++j) {
    const std::int32_t n_father = geom.cells_at(j - 1);
    auto& father_vals = vals[static_cast<std::size_t>(j - 1 - geom.min_level)];
    auto& level_vals = vals[static_cast<std::size_t>(j - geom.min_level)];
    for (std::int32_t k : tree->level_slots(j)) {
      const CellIndex c{j, k};
      if (next_detail >= encoded.details.cells.size() || encoded.details.cells[next_detail] != c)
        throw std::invalid_argument("decode: details do not match the tree");
      auto d = encoded.details.at(next_detail++);
      for (std::size_t h = 0; h < q; ++h) {
        for (int delta = -prediction.gamma; delta <= prediction.gamma; ++delta) {
          const std::int32_t p = map_position(std::int64_t{k} / 2 + delta, n_father, boundary);
          window[static_cast<std::size_t>(delta + prediction.gamma)] = father_vals[static_cast<std::size_t>(p) * q + h];
        }
        auto [even, odd] = prediction.predict({window.data(), static_cast<std::size_t>(prediction.window_size())});
        level_vals[static_cast<std::size_t>(k) * q + h] = even + d[h];
        level_vals[static_cast<std::size_t>(k + 1) * q + h] = odd - d[h];
      }
    }
  }
  if (next_detail != encoded.details.cells.size())
    throw std::invalid_argument("decode: details do not match the tree");

  LeafField field = make_leaf_field(std::move(tree), q_int);
  for (std::size_t i = 0; i < field.cells.size(); ++i) {
    const CellIndex c = field.cells[i];
    const auto& lv = vals[static_cast<std::size_t>(c.level - geom.min_level)];
    auto dst = field.at(i);
    for (std::size_t h = 0; h < q; ++h) dst[h] = lv[static_cast<std::size_t>(c.pos) * q + h];
  }
  return field;
}

MeshTree threshold(const MeshTree& tree, const DetailField& details, const ThresholdPolicy& policy) {
  const auto& geom = tree.geometry();
  TreeBuilder builder(geom);
  for (std::size_t i = 0; i < details.cells.size(); ++i) {
    const CellIndex c = details.cells[i];
    if (details.max_abs(i) >= policy.level_threshold(c.level)) builder.add_slot(c.level, c.pos);
  }
  // Keeping a slot keeps its ancestors (they belong to the input tree, so
  // the result stays a subtree).
  builder.close_orphans();
  return builder.build();
}

MeshTree enlarge(const MeshTree& thresholded, const DetailField& details, const ThresholdPolicy& policy,
                 BoundaryMode boundary) {
  const auto& geom = thresholded.geometry();
  TreeBuilder builder(thresholded);

  // Transport rule: every complete-tree cell drags its sigma neighbors at
  // the same level into the enlarged complete tree.
  if (policy.scheme_radius > 0) {
    for (int j = geom.min_level + 1; j <= geom.max_level; ++j) {
      const std::int32_t n = geom.cells_at(j);
      for (std::int32_t k : thresholded.level_slots(j))
        for (std::int64_t p = k - policy.scheme_radius; p <= std::int64_t{k} + 1 + policy.scheme_radius; ++p)
          builder.add_cell(j, map_position(p, n, boundary));
    }
  }

  // Loss-of-regularity rule: a detail well above its level threshold at time
  // n announces children details above theirs at time n+1; refine both
  // brothers ahead of time.
  for (std::size_t i = 0; i < details.cells.size(); ++i) {
    const CellIndex c = details.cells[i];
    if (c.level <= geom.min_level || c.level >= geom.max_level) continue;
    if (details.max_abs(i) >= policy.refine_threshold(c.level)) {
      builder.add_slot(c.level + 1, 2 * c.pos);
      builder.add_slot(c.level + 1, 2 * c.pos + 2);
    }
  }

  builder.close_orphans();
  return builder.build();
}

AdaptResult adapt_mesh(const LeafField& field, const ThresholdPolicy& policy, const PredictionSpec& prediction,
                       BoundaryMode boundary) {
  const MeshTree& tree = *field.tree;
  const DetailField details = compute_details(tree, field, prediction, boundary);
  const MeshTree kept = threshold(tree, details, policy);
  const MeshTree enlarged = enlarge(kept, details, policy, boundary);
  auto next = std::make_shared<const MeshTree>(grade(enlarged, prediction.gamma, boundary));

  MultilevelEvaluator eval(tree, field, prediction, boundary);
  LeafField remapped = make_leaf_field(next, field.populations);
  for (std::size_t i = 0; i < remapped.cells.size(); ++i) {
    auto src = eval.values(remapped.cells[i]);
    auto dst = remapped.at(i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return {std::move(next), std::move(remapped)};
}

std::vector<double> reconstruct(const MeshTree& tree, const LeafField& field, const PredictionSpec& prediction,
                                BoundaryMode boundary, std::int32_t finest_pos) {
  MultilevelEvaluator eval(tree, field, prediction, boundary);
  auto v = eval.values({tree.geometry().max_level, finest_pos});
  return {v.begin(), v.end()};
}

std::vector<double> reconstruct_finest(const MeshTree& tree, const LeafField& field,
                                       const PredictionSpec& prediction, BoundaryMode boundary) {
  MultilevelEvaluator eval(tree, field, prediction, boundary);
  const auto& geom = tree.geometry();
  const std::size_t q = static_cast<std::size_t>(field.populations);
  const std::int32_t n = geom.cells_at(geom.max_level);
  std::vector<double> out(static_cast<std::size_t>(n) * q);
  for (std::int32_t k = 0; k < n; ++k) {
    auto v = eval.values({geom.max_level, k});
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::size_t>(k) * q);
  }
  return out;
}

}  // namespace mrlbm
