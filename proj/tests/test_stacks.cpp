#include <cmath>
#include <numbers>

#include "doctest.h"
#include "favlab/error.hpp"
#include "favlab/shadow.hpp"
#include "favlab/stacks.hpp"
#include "oracles.hpp"

using namespace favlab;

namespace {

constexpr double kPi = std::numbers::pi;

// |{f*_N > j}| by brute force: every breakpoint of every level, max count at
// each cell midpoint.
double strict_level_oracle(const SimilaritySystem& s, int depth, double theta, std::int64_t j) {
  std::vector<std::vector<std::pair<double, double>>> levels;
  std::vector<double> pts;
  for (int n = 0; n <= depth; ++n) {
    levels.push_back(oracle::shadows(s, n, theta));
    for (const auto& [a, b] : levels.back()) {
      pts.push_back(a);
      pts.push_back(b);
    }
  }
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    std::int64_t best = 0;
    for (const auto& lv : levels) {
      std::int64_t c = 0;
      for (const auto& [a, b] : lv) c += (a <= mid && mid <= b);
      best = std::max(best, c);
    }
    if (best > j) total += pts[i + 1] - pts[i];
  }
  return total;
}

std::vector<std::pair<int, int>> all_pairs(int k_max, int m_max) {
  std::vector<std::pair<int, int>> out;
  for (int k = 1; k <= k_max; ++k) {
    for (int m = 1; m <= m_max; ++m) out.emplace_back(k, m);
  }
  return out;
}

}  // namespace

TEST_CASE("uniform angles") {
  const auto a = uniform_angles(4, kPi);
  REQUIRE(a.size() == 4);
  CHECK(a[0] == 0.0);
  CHECK(a[2] == doctest::Approx(kPi / 2));
}

TEST_CASE("product inequality rows match the oracle") {
  const auto g = preset("gasket");
  const double theta = kPi / 6.0;
  const auto r = product_inequality_report(g, 4, {theta}, {{2, 2}});
  REQUIRE(r.rows.size() == 1);
  const auto& row = r.rows[0];
  CHECK(row.f_k == doctest::Approx(strict_level_oracle(g, 4, theta, 2)).epsilon(1e-12));
  CHECK(row.f_m == doctest::Approx(strict_level_oracle(g, 4, theta, 2)).epsilon(1e-12));
  CHECK(row.f_4km == doctest::Approx(strict_level_oracle(g, 4, theta, 16)).epsilon(1e-12).scale(1.0));
  CHECK(std::isfinite(row.ratio));
  if (row.f_4km == 0.0) CHECK(row.ratio == 0.0);
  CHECK(r.level_identity_holds);
}

TEST_CASE("empty top level set gives ratio zero") {
  // corner4 at the tiling angle never stacks: |F_4| = 0 for N = 3.
  const auto r = product_inequality_report(preset("corner4"), 3, {std::atan(0.5)}, {{1, 1}});
  CHECK(r.rows[0].f_4km == 0.0);
  CHECK(r.rows[0].ratio == 0.0);
}

TEST_CASE("product inequality regression") {
  const auto base = oracle::baselines();
  const auto thetas = uniform_angles(256, kPi);
  const auto c = product_inequality_report(preset("corner4"), 4, thetas, all_pairs(3, 3));
  CHECK(c.level_identity_holds);
  CHECK(c.worst_ratio <= base["product_ratio_corner4"].get<double>() * (1.0 + 1e-12));
  const auto g = product_inequality_report(preset("gasket"), 4, thetas, all_pairs(3, 3));
  CHECK(g.level_identity_holds);
  CHECK(g.worst_ratio == doctest::Approx(base["product_ratio_gasket"].get<double>()).epsilon(0.1));
  // Serial and parallel give the same report.
  const auto gs = product_inequality_report(preset("gasket"), 4, thetas, all_pairs(3, 3), Exec::serial);
  CHECK(gs.worst_ratio == g.worst_ratio);
  CHECK(gs.worst_theta == g.worst_theta);
  // Per-theta values do not depend on the grid they were computed on.
  const auto fine = product_inequality_report(preset("gasket"), 4, uniform_angles(512, kPi), all_pairs(3, 3));
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    CHECK(fine.rows[2 * 9 * (i / 9) + i % 9].ratio == g.rows[i].ratio);
  }
}

TEST_CASE("e scan") {
  const auto g = preset("gasket");
  EScanConfig cfg;
  cfg.depth = 3;
  cfg.thetas = uniform_angles(32, kPi);

  cfg.k = 28;  // K > L^N = 27
  const auto full = e_scan(cfg, g);
  CHECK(full.members == cfg.thetas.size());
  CHECK(full.measure == doctest::Approx(kPi));

  cfg.k = 1;
  const auto one = e_scan(cfg, g);
  CHECK_FALSE(one.in_e[0]);
  // f*_N >= 1 already holds on the whole depth-zero shadow [-1, 1].
  CHECK(one.level_measure[0] == doctest::Approx(2.0).epsilon(1e-12));

  // |A*_K'| <= |A*_K| for K' >= K, exactly.
  std::vector<std::vector<double>> by_k;
  for (std::int64_t k : {1, 2, 4, 8}) {
    cfg.k = k;
    by_k.push_back(e_scan(cfg, g).level_measure);
  }
  for (std::size_t a = 0; a + 1 < by_k.size(); ++a) {
    for (std::size_t i = 0; i < cfg.thetas.size(); ++i) CHECK(by_k[a + 1][i] <= by_k[a][i]);
  }
}

TEST_CASE("l2 bound") {
  const auto g = preset("gasket");
  const auto thetas = uniform_angles(16, kPi);
  // K above every multiplicity: ||f||^2 <= mass * K, so c <= 2.
  const auto big = l2_bound_report(g, 3, 27, thetas);
  CHECK_FALSE(big.vacuous);
  CHECK(big.c <= 2.0);
  const auto none = l2_bound_report(g, 3, 2, {});
  CHECK(none.vacuous);

  const auto base = oracle::baselines();
  EScanConfig cfg;
  cfg.depth = 5;
  cfg.k = 4;
  cfg.thetas = uniform_angles(256, kPi);
  const auto e = e_scan(cfg, g);
  std::vector<double> members;
  for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
    if (e.in_e[i]) members.push_back(cfg.thetas[i]);
  }
  CHECK(members.size() == base["l2_e_members"].get<std::size_t>());
  const auto r = l2_bound_report(g, 5, 4, members);
  CHECK(std::isfinite(r.c));
  CHECK(r.c == doctest::Approx(base["l2_c_gasket_n5_k4"].get<double>()).epsilon(1e-12));
}

TEST_CASE("bootstrap") {
  const auto c = preset("corner4");
  const auto r = bootstrap_report(c, 0.2, 2, 4);
  REQUIRE(r.series.size() == 4);
  CHECK(r.series[0].second == doctest::Approx(support_measure(multiplicity(c, 2, 0.2))));
  for (std::size_t i = 1; i < r.series.size(); ++i) CHECK(r.series[i].second <= r.series[i - 1].second);
  CHECK(r.nonincreasing);
  const auto base = oracle::baselines();
  CHECK(r.fit.residual <= base["bootstrap_residual_corner4"].get<double>() * (1.0 + 1e-9));

  // Exact two-term data is recovered by the fit.
  std::vector<std::pair<int, double>> series;
  for (int l = 1; l <= 6; ++l) {
    const double q = 0.6, a = 0.1;
    series.emplace_back(l, a * (1 - std::pow(q, l)) / (1 - q) + std::pow(q, l));
  }
  const auto fit = fit_bootstrap(series);
  CHECK(fit.a == doctest::Approx(0.1).epsilon(1e-4));
  CHECK(fit.q == doctest::Approx(0.6).epsilon(1e-4));
  CHECK(fit.residual < 1e-6);
}

TEST_CASE("bad directions") {
  const auto g = preset("gasket");
  std::vector<Direction> dirs;
  for (int j = 0; j < 200; ++j) dirs.push_back(Direction::slope(j / 200.0));
  const ProductSpec spec{10, 2, 4};
  const auto zero = bad_direction_scan(g, spec, 0.0, dirs, 1.0);
  CHECK(zero.threshold == 1.0);
  CHECK(zero.measure <= 1.0);
  double prev = -1.0;
  for (double tau : {0.01, 0.05, 0.1, 0.2}) {
    const auto r = bad_direction_scan(g, spec, tau, dirs, 1.0);
    CHECK(r.measure >= prev);
    prev = r.measure;
    if (tau == 0.05) CHECK(r.measure <= std::pow(3.0, -2.0));
  }
}
