#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <random>

#include "mrlbm/multiresolution.hpp"

using namespace mrlbm;

namespace {

MeshTree tree_from_slots(const MeshGeometry& geom, const std::vector<CellIndex>& extra) {
  TreeBuilder builder(geom);
  for (const CellIndex& c : extra) builder.add_slot(c.level, c.pos);
  builder.close_orphans();
  return builder.build();
}

std::shared_ptr<const MeshTree> random_graded_tree(const MeshGeometry& geom, std::mt19937& rng, int gamma,
                                                   BoundaryMode boundary) {
  TreeBuilder builder(geom);
  std::bernoulli_distribution split(0.5);
  for (int j = geom.min_level + 1; j <= geom.max_level; ++j)
    for (std::int32_t k = 0; k < geom.cells_at(j); k += 2) {
      const bool father_present = j - 1 == geom.min_level || builder.has_slot(j - 1, (k / 2) & ~1);
      if (father_present && split(rng)) builder.add_slot(j, k);
    }
  return std::make_shared<const MeshTree>(grade(builder.build(), gamma, boundary));
}

/// Exact average of x^degree over [x1, x2].
double monomial_average(int degree, double x1, double x2) {
  return (std::pow(x2, degree + 1) - std::pow(x1, degree + 1)) / ((degree + 1) * (x2 - x1));
}

LeafField field_of(std::shared_ptr<const MeshTree> tree, const std::function<double(double, double)>& average) {
  LeafField field = make_leaf_field(tree, 1);
  const auto& geom = field.tree->geometry();
  for (std::size_t i = 0; i < field.cells.size(); ++i)
    field.at(i)[0] = average(geom.left_edge(field.cells[i]), geom.right_edge(field.cells[i]));
  return field;
}

/// Reference reconstruction, written independently of MultilevelEvaluator:
/// exact mean above the leaves, recursive prediction below.
double naive_value(const MeshTree& tree, const LeafField& field, const PredictionSpec& prediction,
                   BoundaryMode boundary, CellIndex c, int h) {
  if (const std::size_t i = field.find(c); i != LeafField::npos) return field.at(i)[static_cast<std::size_t>(h)];
  if (tree.has_cell(c.level, c.pos) && c.level < tree.geometry().max_level && tree.has_slot(c.level + 1, 2 * c.pos)) {
    const double even = naive_value(tree, field, prediction, boundary, {c.level + 1, 2 * c.pos}, h);
    const double odd = naive_value(tree, field, prediction, boundary, {c.level + 1, 2 * c.pos + 1}, h);
    return project(even, odd);
  }
  std::array<double, 7> window{};
  const std::int32_t father = c.pos / 2;
  for (int d = -prediction.gamma; d <= prediction.gamma; ++d) {
    const std::int32_t p = map_position(std::int64_t{father} + d, tree.geometry().cells_at(c.level - 1), boundary);
    window[static_cast<std::size_t>(d + prediction.gamma)] =
        naive_value(tree, field, prediction, boundary, {c.level - 1, p}, h);
  }
  auto [even, odd] = prediction.predict({window.data(), static_cast<std::size_t>(prediction.window_size())});
  return c.pos % 2 == 0 ? even : odd;
}

}  // namespace

TEST_CASE("projection is the mean of the children") {
  CHECK(project(1.0, 3.0) == 2.0);
  CHECK(project(0.4, 0.4) == 0.4);
  CHECK(project(0.75, 1.25) == 1.0);
}

TEST_CASE("prediction on simple windows") {
  const PredictionSpec pred = PredictionSpec::centered(1);

  SUBCASE("linear data") {
    const double window[3] = {0.0, 1.0, 2.0};
    auto [even, odd] = pred.predict(window);
    CHECK(even == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(odd == doctest::Approx(1.25).epsilon(1e-15));
  }

  SUBCASE("constant data") {
    const double window[3] = {0.7, 0.7, 0.7};
    auto [even, odd] = pred.predict(window);
    CHECK(even == 0.7);
    CHECK(odd == 0.7);
  }

  SUBCASE("averages of x^2 over unit cells") {
    const double window[3] = {13.0 / 12.0, 1.0 / 12.0, 13.0 / 12.0};
    auto [even, odd] = pred.predict(window);
    CHECK(even == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(odd == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  }
}

TEST_CASE("prediction consistency and polynomial exactness") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int gamma = 1; gamma <= 3; ++gamma) {
    const PredictionSpec pred = PredictionSpec::centered(gamma);

    SUBCASE("project(predict) recovers the center") {
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> window(static_cast<std::size_t>(pred.window_size()));
        for (double& w : window) w = unit(rng);
        auto [even, odd] = pred.predict(window);
        const double center = window[static_cast<std::size_t>(gamma)];
        CHECK(project(even, odd) == doctest::Approx(center).epsilon(1e-14));
      }
    }

    SUBCASE("exact on cell averages of polynomials of degree <= 2 gamma") {
      for (int degree = 0; degree <= 2 * gamma; ++degree) {
        const double h = 0.25;  // father cells of width h centered on cell k0
        const double x0 = -0.3;
        std::vector<double> window(static_cast<std::size_t>(pred.window_size()));
        for (int d = -gamma; d <= gamma; ++d)
          window[static_cast<std::size_t>(d + gamma)] = monomial_average(degree, x0 + (d - 0.5) * h, x0 + (d + 0.5) * h);
        auto [even, odd] = pred.predict(window);
        const double exact_even = monomial_average(degree, x0 - 0.5 * h, x0);
        const double exact_odd = monomial_average(degree, x0, x0 + 0.5 * h);
        CHECK(even == doctest::Approx(exact_even).epsilon(1e-13));
        CHECK(odd == doctest::Approx(exact_odd).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("prediction coefficients are the published ones") {
  CHECK(PredictionSpec::centered(1).coeff[0] == -0.125);
  CHECK(PredictionSpec::centered(2).coeff[0] == -22.0 / 128.0);
  CHECK(PredictionSpec::centered(2).coeff[1] == 3.0 / 128.0);
  CHECK(PredictionSpec::centered(3).coeff[0] == -201.0 / 1024.0);
  CHECK(PredictionSpec::centered(3).coeff[1] == 11.0 / 256.0);
  CHECK(PredictionSpec::centered(3).coeff[2] == -5.0 / 1024.0);
  CHECK_THROWS_AS(PredictionSpec::centered(4), std::invalid_argument);
}

TEST_CASE("details vanish on polynomial data and obey the redundancy identity") {
  const MeshGeometry geom(-1.0, 1.0, 2, 6);
  auto tree = std::make_shared<const MeshTree>(full_tree(geom));
  const PredictionSpec pred = PredictionSpec::centered(1);

  SUBCASE("constant field") {
    const LeafField field = field_of(tree, [](double, double) { return 3.25; });
    const DetailField details = compute_details(*tree, field, pred, BoundaryMode::copy);
    for (std::size_t i = 0; i < details.cells.size(); ++i) CHECK(details.max_abs(i) == 0.0);
  }

  SUBCASE("linear field has zero interior details") {
    const LeafField field = field_of(tree, [](double x1, double x2) { return monomial_average(1, x1, x2); });
    const DetailField details = compute_details(*tree, field, pred, BoundaryMode::copy);
    for (std::size_t i = 0; i < details.cells.size(); ++i) {
      const CellIndex c = details.cells[i];
      // Clamped stencils at the domain edges are not polynomial-exact.
      if (c.pos / 2 == 0 || c.pos / 2 == geom.cells_at(c.level - 1) - 1) continue;
      CHECK(std::abs(details.at(i)[0]) < 1e-14);
    }
  }

  SUBCASE("redundancy: the odd detail is the negated even detail") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      auto rt = random_graded_tree(geom, rng, 1, BoundaryMode::copy);
      LeafField field = make_leaf_field(rt, 1);
      for (std::size_t i = 0; i < field.cells.size(); ++i) field.at(i)[0] = unit(rng);
      MultilevelEvaluator eval(*rt, field, pred, BoundaryMode::copy);
      const DetailField details = compute_details(*rt, field, pred, BoundaryMode::copy);
      for (std::size_t i = 0; i < details.cells.size(); ++i) {
        const CellIndex c = details.cells[i];
        std::array<double, 3> window{};
        for (int d = -1; d <= 1; ++d)
          window[static_cast<std::size_t>(d + 1)] =
              eval.value({c.level - 1, map_position(std::int64_t{c.pos} / 2 + d,
                                                    geom.cells_at(c.level - 1), BoundaryMode::copy)},
                         0);
        auto [even, odd] = pred.predict(window);
        const double d_even = eval.value(c, 0) - even;
        const double d_odd = eval.value({c.level, c.pos + 1}, 0) - odd;
        CHECK(d_even == doctest::Approx(details.at(i)[0]).epsilon(1e-14));
        CHECK(d_odd == doctest::Approx(-d_even).epsilon(1e-14).scale(1.0));
      }
    }
  }
}

TEST_CASE("encode/decode is a lossless round trip") {
  const MeshGeometry geom(-1.0, 1.0, 2, 7);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (auto boundary : {BoundaryMode::copy, BoundaryMode::periodic}) {
    for (int trial = 0; trial < 20; ++trial) {
      auto tree = random_graded_tree(geom, rng, 1, boundary);
      LeafField field = make_leaf_field(tree, 2);
      for (double& v : field.values) v = unit(rng);

      const PredictionSpec pred = PredictionSpec::centered(1);
      const EncodedField encoded = encode(*tree, field, pred, boundary);
      // Same cardinality on both sides of the transform.
      CHECK(encoded.coarse.size() / 2 + encoded.details.cells.size() == field.cells.size());

      const LeafField back = decode(tree, encoded, pred, boundary);
      REQUIRE(back.values.size() == field.values.size());
      for (std::size_t i = 0; i < field.values.size(); ++i)
        CHECK(back.values[i] == doctest::Approx(field.values[i]).epsilon(1e-14));
    }
  }

  SUBCASE("ungraded tree is rejected") {
    const MeshGeometry g(0.0, 1.0, 2, 4);
    auto tree = std::make_shared<const MeshTree>(tree_from_slots(g, {{3, 2}, {4, 4}}));
    LeafField field = make_leaf_field(tree, 1);
    CHECK_THROWS_AS(encode(*tree, field, PredictionSpec::centered(1), BoundaryMode::copy), std::invalid_argument);
  }
}

TEST_CASE("reconstruction matches the naive recursion bit for bit") {
  const MeshGeometry geom(-1.0, 3.0, 1, 6);
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  const PredictionSpec pred = PredictionSpec::centered(1);

  for (auto boundary : {BoundaryMode::copy, BoundaryMode::periodic}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto tree = random_graded_tree(geom, rng, 1, boundary);
      LeafField field = make_leaf_field(tree, 2);
      for (double& v : field.values) v = unit(rng);

      MultilevelEvaluator eval(*tree, field, pred, boundary);
      for (std::int32_t k = 0; k < geom.cells_at(geom.max_level); ++k) {
        auto v = eval.values({geom.max_level, k});
        for (int h = 0; h < 2; ++h)
          CHECK(v[static_cast<std::size_t>(h)] == naive_value(*tree, field, pred, boundary, {geom.max_level, k}, h));
      }
    }
  }
}

TEST_CASE("reconstruct special cases") {
  const MeshGeometry geom(-1.0, 1.0, 2, 6);
  const PredictionSpec pred = PredictionSpec::centered(1);

  SUBCASE("full tree returns the stored value unchanged") {
    auto tree = std::make_shared<const MeshTree>(full_tree(geom));
    LeafField field = field_of(tree, [](double x1, double x2) { return std::sin(x1 + x2); });
    for (std::int32_t k : {0, 17, 63}) {
      const std::size_t i = field.find({6, k});
      REQUIRE(i != LeafField::npos);
      CHECK(reconstruct(*tree, field, pred, BoundaryMode::copy, k)[0] == field.at(i)[0]);
    }
  }

  SUBCASE("constant field reconstructs to the constant on any tree") {
    std::mt19937 rng(5);
    auto tree = random_graded_tree(geom, rng, 1, BoundaryMode::copy);
    const LeafField field = field_of(tree, [](double, double) { return -0.5; });
    for (std::int32_t k = 0; k < geom.cells_at(geom.max_level); ++k)
      CHECK(reconstruct(*tree, field, pred, BoundaryMode::copy, k)[0] == -0.5);
  }

  SUBCASE("linear field reconstructs exactly away from clamped stencils") {
    std::mt19937 rng(9);
    auto tree = random_graded_tree(geom, rng, 1, BoundaryMode::copy);
    const LeafField field = field_of(tree, [](double x1, double x2) { return monomial_average(1, x1, x2); });
    MultilevelEvaluator eval(*tree, field, pred, BoundaryMode::copy);
    const std::int32_t n = geom.cells_at(geom.max_level);
    for (std::int32_t k = n / 4; k < 3 * n / 4; ++k) {
      const double exact = monomial_average(1, geom.left_edge({geom.max_level, k}), geom.right_edge({geom.max_level, k}));
      CHECK(eval.value({geom.max_level, k}, 0) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("threshold keeps the coarsest level and the loud details") {
  const MeshGeometry geom(-3.0, 3.0, 2, 9);
  auto tree = std::make_shared<const MeshTree>(full_tree(geom));

  ThresholdPolicy policy;
  policy.epsilon = 1e-4;
  policy.max_level = 9;

  SUBCASE("level thresholds halve with each coarser level") {
    CHECK(policy.level_threshold(9) == doctest::Approx(1e-4));
    CHECK(policy.level_threshold(7) == doctest::Approx(2.5e-5));
    DetailField details;
    details.populations = 1;
    details.cells = {{7, 40}, {9, 40}};
    details.values = {3e-5, 3e-5};  // kept at level 7, dropped at level 9
    const MeshTree kept = threshold(*tree, details, policy);
    CHECK(kept.has_slot(7, 40));
    CHECK_FALSE(kept.has_slot(9, 40));
    CHECK(is_subtree(kept, *tree));
  }

  SUBCASE("all-zero details collapse to the coarsest level") {
    DetailField details;
    details.populations = 1;
    for (int j = 3; j <= 9; ++j)
      for (std::int32_t k = 0; k < geom.cells_at(j); k += 2) {
        details.cells.push_back({j, k});
        details.values.push_back(0.0);
      }
    CHECK(threshold(*tree, details, policy) == coarsest_tree(geom));
  }

  SUBCASE("zero epsilon keeps everything (ties kept)") {
    ThresholdPolicy keep_all = policy;
    keep_all.epsilon = 0.0;
    DetailField details;
    details.populations = 1;
    for (int j = 3; j <= 9; ++j)
      for (std::int32_t k = 0; k < geom.cells_at(j); k += 2) {
        details.cells.push_back({j, k});
        details.values.push_back(0.0);
      }
    CHECK(threshold(*tree, details, keep_all) == *tree);
  }
}

TEST_CASE("enlargement follows the transport and regularity rules") {
  const MeshGeometry geom(-3.0, 3.0, 2, 9);

  SUBCASE("the scheme radius drags same-level neighbors in") {
    const MeshTree kept = tree_from_slots(geom, {{5, 10}});
    ThresholdPolicy policy;
    policy.epsilon = 1e-4;
    policy.max_level = 9;
    policy.scheme_radius = 1;
    const MeshTree enlarged = enlarge(kept, DetailField{{}, 1, {}}, policy, BoundaryMode::copy);
    CHECK(enlarged.has_cell(5, 9));
    CHECK(enlarged.has_cell(5, 11));
    CHECK(is_subtree(kept, enlarged));
  }

  SUBCASE("zero scheme radius is a no-op for the transport rule") {
    const MeshTree kept = tree_from_slots(geom, {{5, 10}});
    ThresholdPolicy policy;
    policy.epsilon = 1e-4;
    policy.max_level = 9;
    policy.scheme_radius = 0;
    CHECK(enlarge(kept, DetailField{{}, 1, {}}, policy, BoundaryMode::copy) == kept);
  }

  SUBCASE("a loud detail refines both brother pairs below") {
    ThresholdPolicy policy;
    policy.epsilon = 1e-4;
    policy.max_level = 9;
    policy.regularity_guess = 0.0;  // refine when |d| >= 2 epsilon_j
    const MeshTree kept = tree_from_slots(geom, {{5, 8}});
    DetailField details;
    details.populations = 1;
    details.cells = {{5, 8}};

    details.values = {2.1 * policy.level_threshold(5)};
    const MeshTree refined = enlarge(kept, details, policy, BoundaryMode::copy);
    CHECK(refined.has_slot(6, 16));
    CHECK(refined.has_slot(6, 18));

    details.values = {1.9 * policy.level_threshold(5)};
    const MeshTree unchanged = enlarge(kept, details, policy, BoundaryMode::copy);
    CHECK_FALSE(unchanged.has_slot(6, 16));
    CHECK_FALSE(unchanged.has_slot(6, 18));
  }

  SUBCASE("infinite regularity guess uses the prediction order") {
    ThresholdPolicy policy;
    policy.prediction_order = 3;
    CHECK(policy.effective_regularity() == 3.0);
    policy.regularity_guess = 0.5;
    CHECK(policy.effective_regularity() == 0.5);
  }
}

TEST_CASE("mesh adaptation remaps the field consistently") {
  const MeshGeometry geom(-3.0, 3.0, 2, 7);
  auto tree = std::make_shared<const MeshTree>(full_tree(geom));
  const PredictionSpec pred = PredictionSpec::centered(1);

  SUBCASE("constant field collapses to the coarsest level") {
    const LeafField field = field_of(tree, [](double, double) { return 2.0; });
    ThresholdPolicy policy;
    policy.epsilon = 1e-4;
    policy.max_level = 7;
    policy.scheme_radius = 1;
    const AdaptResult adapted = adapt_mesh(field, policy, pred, BoundaryMode::copy);
    CHECK(*adapted.tree == coarsest_tree(geom));
    for (std::size_t i = 0; i < adapted.field.cells.size(); ++i) CHECK(adapted.field.at(i)[0] == 2.0);
  }

  SUBCASE("zero epsilon keeps the full tree and the data") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    LeafField field = make_leaf_field(tree, 1);
    for (double& v : field.values) v = unit(rng);
    ThresholdPolicy policy;
    policy.epsilon = 0.0;
    policy.max_level = 7;
    policy.scheme_radius = 1;
    const AdaptResult adapted = adapt_mesh(field, policy, pred, BoundaryMode::copy);
    CHECK(*adapted.tree == *tree);
    CHECK(adapted.field.values == field.values);
  }

  SUBCASE("coarsening averages, refinement predicts") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    LeafField field = make_leaf_field(tree, 1);
    for (double& v : field.values) v = unit(rng);
    ThresholdPolicy policy;
    policy.epsilon = 1e-2;
    policy.max_level = 7;
    policy.scheme_radius = 1;
    const AdaptResult adapted = adapt_mesh(field, policy, pred, BoundaryMode::copy);
    MultilevelEvaluator eval(*tree, field, pred, BoundaryMode::copy);
    for (std::size_t i = 0; i < adapted.field.cells.size(); ++i)
      CHECK(adapted.field.at(i)[0] == eval.value(adapted.field.cells[i], 0));
  }
}

TEST_CASE("thresholded encoding reconstructs within a stable multiple of epsilon") {
  const MeshGeometry geom(-3.0, 3.0, 2, 9);
  auto tree = std::make_shared<const MeshTree>(full_tree(geom));
  const PredictionSpec pred = PredictionSpec::centered(1);

  // Smooth random trigonometric field with exact cell averages.
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::array<double, 4> as{}, bs{};
  for (double& v : as) v = unit(rng);
  for (double& v : bs) v = unit(rng);
  auto antiderivative = [&](double x) {
    double acc = 0.0;
    for (int m = 1; m <= 4; ++m)
      acc += -as[static_cast<std::size_t>(m - 1)] * std::cos(m * x) / m + bs[static_cast<std::size_t>(m - 1)] * std::sin(m * x) / m;
    return acc;
  };
  const LeafField field = field_of(tree, [&](double x1, double x2) {
    return (antiderivative(x2) - antiderivative(x1)) / (x2 - x1);
  });

  const EncodedField encoded = encode(*tree, field, pred, BoundaryMode::copy);
  std::vector<double> ratios;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    ThresholdPolicy policy;
    policy.epsilon = eps;
    policy.max_level = 9;
    auto kept = std::make_shared<const MeshTree>(
        grade(threshold(*tree, encoded.details, policy), pred.gamma, BoundaryMode::copy));

    // Restrict the details to the kept slots and decode on the kept tree.
    EncodedField restricted;
    restricted.coarse = encoded.coarse;
    restricted.details.populations = 1;
    for (std::size_t i = 0; i < encoded.details.cells.size(); ++i) {
      const CellIndex c = encoded.details.cells[i];
      if (kept->has_slot(c.level, c.pos)) {
        restricted.details.cells.push_back(c);
        restricted.details.values.push_back(encoded.details.at(i)[0]);
      }
    }
    const LeafField compressed = decode(kept, restricted, pred, BoundaryMode::copy);
    const std::vector<double> back = reconstruct_finest(*kept, compressed, pred, BoundaryMode::copy);

    double l1 = 0.0;
    for (std::int32_t k = 0; k < geom.cells_at(9); ++k) {
      const std::size_t i = field.find({9, k});
      l1 += std::abs(back[static_cast<std::size_t>(k)] - field.at(i)[0]);
    }
    l1 *= geom.finest_width();
    CHECK(l1 > 0.0);
    ratios.push_back(l1 / eps);
  }
  // The compression error scales linearly with epsilon: the fitted constant
  // stays within one order of magnitude over two decades.
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo < 10.0);
}
