#include <cmath>
#include <numbers>

#include "doctest.h"
#include "favlab/error.hpp"
#include "favlab/favard.hpp"
#include "favlab/kernels.hpp"
#include "favlab/rng.hpp"
#include "favlab/shadow.hpp"
#include "oracles.hpp"

using namespace favlab;

TEST_CASE("sorted projected centers: fast and reference agree") {
  for (const char* name : {"gasket", "corner4", "random-7-1"}) {
    const auto s = preset(name);
    for (int n = 0; n <= 5; ++n) {
      const auto fast = kernels::sorted_projected_centers(s, n, 0.83);
      const auto ref = kernels::sorted_projected_centers_reference(s, n, 0.83);
      REQUIRE(fast.size() == ref.size());
      for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == doctest::Approx(ref[i]));
    }
  }
}

TEST_CASE("projection lengths: parallel, serial, reference and oracle agree") {
  const auto s = preset("gasket");
  std::vector<double> thetas;
  for (int j = 0; j < 37; ++j) thetas.push_back(std::numbers::pi * j / 37.0);
  const auto par = kernels::projection_lengths(s, 5, thetas, Exec::parallel);
  const auto ser = kernels::projection_lengths(s, 5, thetas, Exec::serial);
  CHECK(par == ser);
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    CHECK(par[j] == doctest::Approx(kernels::projection_length_reference(s, 5, thetas[j])).epsilon(1e-12));
    CHECK(par[j] == doctest::Approx(oracle::union_measure(oracle::shadows(s, 5, thetas[j]))).epsilon(1e-12));
  }
}

TEST_CASE("needle hits match explicit intervals") {
  const auto g = preset("gasket");
  CHECK(needle_hits(g, 1, 0.0, 0.0));
  CHECK_FALSE(needle_hits(g, 1, 0.0, 0.9));
  CHECK_FALSE(needle_hits(g, 3, 1.3, 1.0001));
  CHECK_FALSE(needle_hits(g, 3, 2.2, -1.5));
  CounterRng rng(5, 5);
  for (int i = 0; i < 2000; ++i) {
    const int n = static_cast<int>(rng.next_below(5));
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const double x = rng.uniform(-1.0, 1.0);
    bool inside = false;
    for (const auto& [lo, hi] : oracle::shadows(g, n, theta)) inside |= (lo <= x && x <= hi);
    CHECK(needle_hits(g, n, theta, x) == inside);
  }
}

TEST_CASE("favard length: identity case") {
  const auto r = favard_length(preset("gasket"), 0);
  CHECK(std::abs(r.value - 2.0) < 1e-9);
  CHECK(r.converged);
  const auto c = favard_length(preset("corner4"), 0);
  // root square of half-side 1/2: mean of cos + sin over [0, pi) times 1 is 4/pi
  CHECK(c.value == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-7));
}

TEST_CASE("favard length against the dense-grid oracle") {
  const auto g = preset("gasket");
  const auto r = favard_length(g, 1, {64, 10, 1e-8});
  const double dense = oracle::favard_dense(g, 1, 100000);
  CHECK(std::abs(r.value - dense) <= 1e-6 * dense);
  const auto r2 = favard_length(g, 2);
  CHECK(r2.value <= r.value + 2.0 * (r.error_estimate + r2.error_estimate));
}

TEST_CASE("favard quadrature is thread independent") {
  const auto g = preset("random-4-9");
  const auto a = favard_length(g, 4, {}, Exec::parallel);
  const auto b = favard_length(g, 4, {}, Exec::serial);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.grid == b.grid);
}

TEST_CASE("favard config validation") {
  CHECK_THROWS_AS(favard_length(preset("gasket"), 1, {4, 10, 1e-6}), Error);
  CHECK_THROWS_AS(favard_length(preset("gasket"), 1, {64, 10, 0.0}), Error);
}

TEST_CASE("buffon: identity case and determinism") {
  const auto g = preset("gasket");
  const auto b0 = buffon_estimate(g, 0, 5000, 3);
  CHECK(b0.estimate == 2.0);
  CHECK(b0.hits == b0.trials);
  const auto x = buffon_estimate(g, 3, 20000, 11, Exec::parallel);
  const auto y = buffon_estimate(g, 3, 20000, 11, Exec::serial);
  CHECK(x.hits == y.hits);
  CHECK(x.estimate == y.estimate);
  const auto z = buffon_estimate(g, 3, 20000, 12);
  CHECK(z.hits != x.hits);
}

TEST_CASE("buffon cross-validates quadrature") {
  const auto g = preset("gasket");
  const auto q = favard_length(g, 1);
  const auto b = buffon_estimate(g, 1, 1000000, 2026);
  CHECK(std::abs(b.estimate - q.value) <= 4.0 * b.std_error);
}

TEST_CASE("decay fits recover exact models") {
  std::vector<std::pair<int, double>> power, sqrtlog;
  for (int n = 1; n <= 12; ++n) {
    power.emplace_back(n, 5.0 * std::pow(n, -0.25));
  }
  for (int n = 2; n <= 12; ++n) {
    sqrtlog.emplace_back(n, 3.0 * std::exp(-0.7 * std::sqrt(std::log(n))));
  }
  const auto p = fit_decay(power, DecayModel::power);
  CHECK(std::abs(p.c - 5.0) < 1e-6);
  CHECK(std::abs(p.exponent - 0.25) < 1e-6);
  const auto s = fit_decay(sqrtlog, DecayModel::sqrtlog);
  CHECK(std::abs(s.c - 3.0) < 1e-6);
  CHECK(std::abs(s.exponent - 0.7) < 1e-6);
  CHECK(decay_model_from_string("loglower") == DecayModel::loglower);
  CHECK_THROWS_AS(decay_model_from_string("cubic"), Error);
  CHECK_THROWS_AS(fit_decay({{1, 1.0}, {2, 1.0}}, DecayModel::power), Error);
  CHECK_THROWS_AS(fit_decay({{1, 1.0}, {2, 1.0}, {3, 1.0}}, DecayModel::power), Error);
}

TEST_CASE("gasket decay exponent lies in (0, 1)") {
  const auto g = preset("gasket");
  std::vector<std::pair<int, double>> series;
  for (int n = 1; n <= 7; ++n) series.emplace_back(n, favard_length(g, n).value);
  const auto fit = fit_decay(series, DecayModel::power);
  CHECK(fit.exponent > 0.0);
  CHECK(fit.exponent < 1.0);
}
