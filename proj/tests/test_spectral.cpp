#include <cmath>
#include <numbers>

#include "doctest.h"
#include "favlab/error.hpp"
#include "favlab/rng.hpp"
#include "favlab/spectral.hpp"
#include "oracles.hpp"

using namespace favlab;

namespace {

constexpr double kPi = std::numbers::pi;

// phi_theta rebuilt from the definition: (1/L) sum_l exp(-i q_l y / r).
Complex phi_theta_oracle(const SimilaritySystem& s, double theta, double y) {
  Complex acc{0.0, 0.0};
  for (const auto& m : s.maps()) {
    const double q = m.center.real() * std::cos(theta) + m.center.imag() * std::sin(theta);
    acc += std::exp(Complex{0.0, -q * y / s.ratio()});
  }
  return acc / static_cast<double>(s.size());
}

Complex product_oracle(const SimilaritySystem& s, double theta, int lo, int hi, double x) {
  Complex p{1.0, 0.0};
  for (int k = lo; k <= hi; ++k) p *= phi_theta_oracle(s, theta, std::pow(s.ratio(), k) * x);
  return p;
}

}  // namespace

TEST_CASE("phi at zero and modulus bound") {
  CounterRng rng(77);
  for (const char* name : {"gasket", "corner4", "random-5-2"}) {
    const auto s = preset(name);
    for (int i = 0; i < 200; ++i) {
      const double theta = rng.uniform(0.0, kPi);
      CHECK(std::abs(phi_eval(s, Direction::angle(theta), 0.0) - 1.0) < 1e-15);
      const double x = rng.uniform(-100.0, 100.0);
      CHECK(std::abs(phi_eval(s, Direction::angle(theta), x)) <= 1.0 + 1e-15);
      CHECK(std::abs(phi_eval(s, Direction::angle(theta), x) - phi_theta_oracle(s, theta, x)) < 1e-13);
    }
  }
}

TEST_CASE("gasket t-form") {
  const auto g = preset("gasket");
  CHECK(std::abs(phi_eval(g, Direction::slope(2.0), 2.0 * kPi / 3.0)) < 1e-15);
  const auto frame = normalize_frame(g);
  CounterRng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double t = rng.uniform(-2.0, 2.0);
    const double x = rng.uniform(-30.0, 30.0);
    CHECK(std::abs(phi_t(frame, t)(x) - oracle::gasket_phi_t(t, x)) < 1e-14);
  }
  CHECK_THROWS_AS(normalize_frame(build_system({{{0.5, 0.0}, 0.4, Shape::disc},
                                                 {{-0.5, 0.0}, 0.4, Shape::disc}})),
                  Error);
}

TEST_CASE("slope chart maps |phi_theta| onto |phi_t|") {
  CounterRng rng(4);
  for (const char* name : {"gasket", "random-4-7", "corner4"}) {
    const auto s = preset(name);
    const auto frame = normalize_frame(s);
    for (int i = 0; i < 50; ++i) {
      const double theta = rng.uniform(0.05, kPi - 0.05);
      SlopeChart chart;
      try {
        chart = slope_chart(s, frame, theta);
      } catch (const Error&) {
        continue;
      }
      const auto ft = phi_t(frame, chart.t);
      for (int j = 0; j < 10; ++j) {
        const double y = rng.uniform(-20.0, 20.0);
        CHECK(std::abs(std::abs(phi_eval(s, Direction::angle(theta), y)) -
                       std::abs(ft(chart.scale * y))) < 1e-12);
      }
    }
  }
}

TEST_CASE("nu_hat") {
  const auto g = preset("gasket");
  CHECK(std::abs(nu_hat_eval(g, Direction::angle(0.4), 5, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(nu_hat_eval(g, Direction::angle(0.4), 1, 2.5) -
                 phi_eval(g, Direction::angle(0.4), 2.5 / 3.0)) < 1e-15);
  CHECK(std::abs(nu_hat_eval(g, Direction::angle(0.0), 3, 5.0) -
                 oracle::character_sum(g, 3, 0.0, 5.0)) < 1e-12);
}

TEST_CASE("nu_hat equals the character sum (property)") {
  CounterRng rng(1234, 7);
  for (const char* name : {"gasket", "corner4", "random-3-5"}) {
    const auto s = preset(name);
    for (int i = 0; i < 60; ++i) {
      const int n = 1 + static_cast<int>(rng.next_below(5));
      const double theta = rng.uniform(0.0, kPi);
      const double x = rng.uniform(-200.0, 200.0);
      CHECK(std::abs(nu_hat_eval(s, Direction::angle(theta), n, x) -
                     oracle::character_sum(s, n, theta, x)) < 1e-10);
    }
  }
}

TEST_CASE("split products") {
  const auto g = preset("gasket");
  CHECK_THROWS_AS(validate({10, 0, 3}), Error);
  CHECK_THROWS_AS(validate({10, 3, 0}), Error);
  CHECK_THROWS_AS(validate({10, 4, 6}), Error);
  validate({10, 3, 6});

  const ProductSpec spec{12, 3, 6};
  const double x = std::pow(3.0, 10);
  const auto p = split_products(spec, g, Direction::angle(0.3), x);
  CHECK(std::abs(p.p1 - product_oracle(g, 0.3, 1, 9, x)) < 1e-10);
  CHECK(std::abs(p.p2 - product_oracle(g, 0.3, 9, 12, x)) < 1e-10);
  CHECK(std::abs(p.sharp - product_oracle(g, 0.3, 1, 2, x)) < 1e-10);
  CHECK(std::abs(p.flat - product_oracle(g, 0.3, 3, 8, x)) < 1e-10);

  // Smallest split: P2 has m + 1 = 2 factors.
  const ProductSpec tiny{3, 1, 1};
  const auto q = split_products(tiny, g, Direction::angle(1.0), 7.0);
  CHECK(std::abs(q.p2 - product_oracle(g, 1.0, 2, 3, 7.0)) < 1e-14);

  CounterRng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double y = rng.uniform(0.0, 3e4);
    const auto v = split_products({10, 3, 4}, g, Direction::slope(0.37), y);
    CHECK(std::abs(v.sharp * v.flat - v.p1_trimmed) <= 1e-10 * std::abs(v.p1_trimmed));
  }
  const auto w = product_window({10, 3, 4}, g);
  CHECK(w.lo == doctest::Approx(std::pow(3.0, 7)));
  CHECK(w.hi == doctest::Approx(std::pow(3.0, 10)));
}

TEST_CASE("ssv scan extremes") {
  const auto g = preset("gasket");
  const ProductSpec spec{8, 2, 3};
  const auto none = ssv_scan(g, Direction::slope(0.37), spec, 0.0, 2000);
  CHECK(none.intervals.empty());
  CHECK(none.component_count == 0);
  const auto all = ssv_scan(g, Direction::slope(0.37), spec, 1.0, 2000);
  CHECK(all.component_count == 1);
  CHECK(all.intervals.measure() == doctest::Approx(all.window.length()));
  CHECK_THROWS_AS(ssv_scan(g, Direction::slope(0.37), spec, 0.5, 10), Error);
  const auto a = ssv_scan(g, Direction::slope(0.5), {10, 3, 6}, std::pow(3.0, -6), 100000, Exec::parallel);
  const auto b = ssv_scan(g, Direction::slope(0.5), {10, 3, 6}, std::pow(3.0, -6), 100000, Exec::serial);
  CHECK(a.component_count == b.component_count);
  CHECK(a.small_samples == b.small_samples);
}

TEST_CASE("parseval") {
  const auto g = preset("gasket");
  const auto r0 = parseval_check(g, 0.0, 0, 1000.0);
  CHECK(r0.spatial == doctest::Approx(2.0));
  CHECK(r0.rel_error < 1e-3);
  const auto r1 = parseval_check(g, 0.0, 1, 729.0);
  CHECK(std::abs(r1.spatial - 3.69060) < 1e-5);
  CHECK(r1.rel_error < 0.02);
  double prev = 1.0;
  for (double range : {100.0, 200.0, 400.0, 800.0}) {
    const auto r = parseval_check(g, 0.7, 2, range);
    CHECK(r.rel_error < prev);
    CHECK(r.spectral <= r.spatial * (1.0 + 1e-9));
    prev = r.rel_error;
  }
}

TEST_CASE("key observation") {
  CHECK(std::abs(key_obs_gap(1.0 / 18.0, 0.0, kPi)) < 1e-12);
  CHECK(std::abs(key_obs_gap(1.0 / 18.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0)) < 1e-12);
  CHECK(std::abs(key_obs_gap(0.3, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0)) < 1e-12);
  // The constant 1/18 is too large: the grid minimum is clearly negative.
  const auto bad = key_obs_check(1.0 / 18.0, 1000);
  CHECK(bad.min_gap < -0.03);
  CHECK(key_obs_gap(1.0 / 18.0, bad.x, bad.y) == doctest::Approx(bad.min_gap));
  // 1/24 holds on the same grid, and the best grid constant is close to it.
  CHECK(key_obs_check(1.0 / 24.0, 1000).min_gap >= -1e-12);
  CHECK(key_obs_best_a(1000) == doctest::Approx(1.0 / 24.0).epsilon(1e-3));
}

TEST_CASE("sine identity") {
  const double x = kPi / 4.0;
  CHECK(std::sin(3 * x) / std::sin(x) == doctest::Approx(4 * std::cos(x) * std::cos(x) - 1));
  CHECK(sine_identity_check(1000000) < 1e-10);
  CHECK(sine_identity_check(1001) < 1e-10);
}

TEST_CASE("distance bound") {
  const auto g = preset("gasket");
  const auto frame = normalize_frame(g);
  CHECK(std::abs(big_phi(frame, 0.0, 0.0)) == doctest::Approx(1.0));
  CHECK(std::abs(big_phi(frame, 1.0, -2.0)) == doctest::Approx(1.0));
  const auto b = dist_bound_fit(g, 400, 2.0);
  const auto b_fine = dist_bound_fit(g, 800, 2.0);
  CHECK(b.b > 0.0);
  CHECK(std::abs(b_fine.b - b.b) < 0.05 * b.b);
  // With exponent 1 the fit collapses as the grid approaches the lattice.
  const auto lin = dist_bound_fit(g, 400, 1.0);
  const auto lin_fine = dist_bound_fit(g, 800, 1.0);
  CHECK(lin.b > 0.0);
  CHECK(lin_fine.b < 0.95 * lin.b);
}

TEST_CASE("ergodic sampler") {
  const auto zero = ergodic_sample(0.0, 50);
  CHECK(zero.classification == ErgodicCase::eventually_four);
  for (double a : zero.a) CHECK(a == 4.0);
  const auto fifth = ergodic_sample(2.0 * kPi / 5.0, 50);
  CHECK(fifth.classification == ErgodicCase::periodic);
  CHECK(fifth.q == 5);
  CHECK(fifth.period == 2);
  const auto quarter = ergodic_sample(2.0 * kPi / 4.0, 20);
  CHECK(quarter.classification == ErgodicCase::eventually_four);
  const auto generic = ergodic_sample(1.0, 100000);
  CHECK(generic.classification == ErgodicCase::equidistributed);
  CHECK(std::abs(generic.running_mean.back() - 2.0) < 0.1);
  // a_1 is a plain double evaluation; later terms need the extended range.
  CHECK(generic.a[0] == doctest::Approx(2.0 * (1.0 + std::cos(4.0))).epsilon(1e-14));
  CHECK(generic.a[1] == doctest::Approx(2.0 * (1.0 + std::cos(16.0))).epsilon(1e-13));
  CHECK_THROWS_AS(ergodic_sample(1.0, (1 << 18) + 1), Error);
}
