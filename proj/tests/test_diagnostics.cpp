#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "mrlbm/diagnostics.hpp"
#include "mrlbm/simulation.hpp"

using namespace mrlbm;

TEST_CASE("weighted l1 norm") {
  std::vector<double> u(512, 0.0), v(512, 0.0);
  CHECK(weighted_lp(u, v, 6.0 / 512.0) == 0.0);

  u[100] = 1.0;  // unit impulse
  CHECK(weighted_lp(u, v, 6.0 / 512.0) == doctest::Approx(0.01171875));

  std::vector<double> au(512), av(512);
  for (std::size_t i = 0; i < 512; ++i) {
    u[i] = std::sin(0.1 * static_cast<double>(i));
    v[i] = std::cos(0.1 * static_cast<double>(i));
    au[i] = -3.5 * u[i];
    av[i] = -3.5 * v[i];
  }
  CHECK(weighted_lp(au, av, 0.25) == doctest::Approx(3.5 * weighted_lp(u, v, 0.25)).epsilon(1e-13));

  std::vector<double> short_v(3, 0.0);
  CHECK_THROWS_AS(weighted_lp(u, short_v, 1.0), std::invalid_argument);
}

TEST_CASE("compression factor counts complete leaves") {
  const MeshGeometry geom(-3.0, 3.0, 2, 9);
  CHECK(compression_factor(full_tree(geom)) == 0.0);
  CHECK(compression_factor(coarsest_tree(geom)) == doctest::Approx(99.21875));

  // All cells refined down to level 6: 64 complete leaves out of 512.
  TreeBuilder builder(geom);
  for (int j = 3; j <= 6; ++j)
    for (std::int32_t k = 0; k < geom.cells_at(j); k += 2) builder.add_slot(j, k);
  CHECK(compression_factor(builder.build()) == doctest::Approx(87.5));
}

TEST_CASE("detail decay ratios reflect the field regularity") {
  // Levels up to 12 suffice: the ratio at level j only involves averages at
  // levels j-1 .. j+1, which do not depend on the study depth.
  const int max_level = 12;

  SUBCASE("smooth gaussian decays at the prediction order (ratio 8)") {
    const auto rows = detail_decay_study(0, 1, 2, max_level);
    for (const DecayRow& row : rows)
      if (row.level == 10) CHECK(row.ratio == doctest::Approx(8.0).epsilon(0.01));
  }

  SUBCASE("hat function decays at its regularity (ratio 2)") {
    const auto rows = detail_decay_study(1, 1, 2, max_level);
    for (const DecayRow& row : rows)
      if (row.level >= 5 && row.level <= 10) CHECK(row.ratio == doctest::Approx(2.0).epsilon(0.005));
  }

  SUBCASE("square-root kink gives ratio sqrt(2)") {
    const auto rows = detail_decay_study(2, 1, 2, max_level);
    for (const DecayRow& row : rows)
      if (row.level == 10) CHECK(row.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
  }

  SUBCASE("discontinuity does not decay (ratio 1)") {
    const auto rows = detail_decay_study(3, 1, 2, max_level);
    for (const DecayRow& row : rows)
      if (row.level >= 5 && row.level <= 10) CHECK(row.ratio == doctest::Approx(1.0).epsilon(0.01));
  }

  SUBCASE("field ids are validated") { CHECK_THROWS_AS(detail_decay_study(4, 1, 2, 8), std::invalid_argument); }
}

TEST_CASE("line fits") {
  SUBCASE("exact line") {
    const std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y = {1.0, 3.0, 5.0, 7.0};
    const LineFit fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.r_squared == doctest::Approx(1.0));
  }

  SUBCASE("power law on log axes") {
    std::vector<double> x, y;
    for (double v : {1e-2, 1e-3, 1e-4, 1e-5}) {
      x.push_back(v);
      y.push_back(3.0 * v * v);
    }
    const LineFit fit = fit_loglog(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("paired runs start with exactly zero adaptive-reference gap") {
  RunConfig cfg = preset_config("II");
  cfg.final_time = 0.02;
  const RunResult result = run(cfg);
  REQUIRE(!result.series.empty());
  for (double e : result.series.front().e) CHECK(e == 0.0);
  CHECK(result.series.front().compression == 0.0);  // starts from the full tree
}

TEST_CASE("compression is antitone in epsilon on an adaptive run") {
  RunConfig cfg = preset_config("II");
  cfg.s = 1.0;
  cfg.with_reference = false;
  const std::vector<double> epsilons = {1e-3, 1e-4, 1e-5};
  double previous = 101.0;
  for (double eps : epsilons) {
    RunConfig c = cfg;
    c.epsilon = eps;
    const RunResult result = run(c);
    CHECK(result.series.back().compression <= previous);
    previous = result.series.back().compression;
  }
}
