#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "favlab/rng.hpp"
#include "favlab/shadow.hpp"
#include "oracles.hpp"

using namespace favlab;

namespace {
const double kSqrt3 = std::sqrt(3.0);

// Same cells and values, breakpoints equal up to rounding.
bool close(const StepFunction& a, const StepFunction& b, double tol = 1e-12) {
  if (a.values() != b.values()) return false;
  for (std::size_t i = 0; i < a.breakpoints().size(); ++i) {
    if (std::abs(a.breakpoints()[i] - b.breakpoints()[i]) > tol) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("interval union") {
  const auto u = IntervalUnion::from({{3, 4}, {0, 1}, {0.5, 2}, {2 + 1e-13, 2.5}});
  REQUIRE(u.size() == 2);
  CHECK(u.measure() == doctest::Approx(3.5));
  CHECK(u.contains(2.2));
  CHECK_FALSE(u.contains(2.7));
  CHECK(u.covers(IntervalUnion::from({{0.1, 0.2}, {3.5, 4.0}})));
  CHECK_FALSE(u.covers(IntervalUnion::from({{2.4, 3.1}})));
  CHECK(u.covers(IntervalUnion::from({{2.4, 2.6}}), 0.1));
}

TEST_CASE("step function canonical form and evaluation") {
  StepFunction f({0, 1, 2, 3, 4}, {0, 2, 2, 1});
  CHECK(f.breakpoints() == std::vector<double>{1, 3, 4});
  CHECK(f.values() == std::vector<std::int64_t>{2, 1});
  CHECK(f(0.5) == 0);
  CHECK(f(1.0) == 2);
  CHECK(f(3.0) == 1);
  CHECK(f(4.0) == 0);
  CHECK(f.max_value() == 2);
  CHECK(mass(f) == doctest::Approx(5.0));
  CHECK(l2_norm_sq(f) == doctest::Approx(9.0));
  CHECK(level_measure(f, 2) == doctest::Approx(2.0));
  CHECK(strict_level_measure(f, 1) == doctest::Approx(2.0));
}

TEST_CASE("shadow of single pieces") {
  const auto iv = project_piece({{0.0, 0.0}, 1.0, 0}, 0.7, Shape::disc);
  CHECK(iv.lo == doctest::Approx(-1.0));
  CHECK(iv.hi == doctest::Approx(1.0));
  const double theta = std::atan(0.5);
  const auto sq = project_piece({{0.0, 0.0}, 0.5, 0}, theta, Shape::square);
  CHECK(sq.length() == doctest::Approx(3.0 / std::sqrt(5.0)).epsilon(1e-14));
  const auto top = project_piece({{0.0, 1.0 / 3.0}, 1.0 / 3.0, 1}, 0.0, Shape::disc);
  CHECK(top.lo == doctest::Approx(-1.0 / 3.0));
  CHECK(top.hi == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("depth zero multiplicity") {
  const auto f = multiplicity(preset("gasket"), 0, 1.1);
  CHECK(f.cell_count() == 1);
  CHECK(support_measure(f) == doctest::Approx(2.0));
  CHECK(mass(f) == doctest::Approx(2.0));
  CHECK(l2_norm_sq(maximal_profile(preset("gasket"), 0, 0.3)) == doctest::Approx(2.0));
}

TEST_CASE("gasket n=1 theta=0 closed forms") {
  const auto f = multiplicity(preset("gasket"), 1, 0.0);
  CHECK(std::abs(support_measure(f) - (2.0 / 3.0 + kSqrt3 / 3.0)) < 1e-12);
  CHECK(std::abs(mass(f) - 2.0) < 1e-12);
  CHECK(std::abs(level_measure(f, 3) - (2.0 / 3.0 - kSqrt3 / 3.0)) < 1e-12);
  CHECK(std::abs(level_measure(f, 2) - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(l2_norm_sq(f) - (6.0 - 4.0 * kSqrt3 / 3.0)) < 1e-12);
  CHECK(std::abs(l2_norm_sq(f) - 3.69060) < 1e-5);
}

TEST_CASE("gasket n=1 theta=pi/6 stacks three deep") {
  // Two centers project to 1/6, the third to -1/3: shadows [-2/3, 0] and
  // [-1/6, 1/2] twice, so the triple overlap is [-1/6, 0].
  const auto f = multiplicity(preset("gasket"), 1, std::numbers::pi / 6.0);
  CHECK(f.max_value() == 3);
  CHECK(std::abs(level_measure(f, 3) - 1.0 / 6.0) < 1e-12);
  CHECK(std::abs(level_measure(f, 2) - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("maximal profile stacks at theta=pi/6") {
  const auto g = preset("gasket");
  const double theta = std::numbers::pi / 6.0;
  const auto fstar = maximal_profile(g, 2, theta);
  const auto st = oracle::stats(oracle::shadows(g, 2, theta));
  std::int64_t max_count = 0;
  for (std::size_t k = 0; k < st.level.size(); ++k) {
    if (st.level[k] > 0.0) max_count = static_cast<std::int64_t>(k);
  }
  CHECK(max_count == 6);  // frozen from the oracle
  CHECK(fstar.max_value() == max_count);
  const auto f2 = multiplicity(g, 2, theta);
  for (double x : f2.breakpoints()) CHECK(fstar(x) >= f2(x));
  for (double x : fstar.breakpoints()) CHECK(fstar(x) >= f2(x));
}

TEST_CASE("corner4 tiles a segment at arctan(1/2)") {
  const auto c = preset("corner4");
  const double theta = std::atan(0.5);
  for (int n = 0; n <= 6; ++n) {
    const auto f = multiplicity(c, n, theta);
    CHECK(std::abs(support_measure(f) - 3.0 / std::sqrt(5.0)) < 1e-8);
    CHECK(level_measure(f, 2) <= 1e-8);
  }
}

TEST_CASE("multiplicity agrees with oracle statistics (property)") {
  CounterRng rng(2024, 1);
  for (const char* name : {"gasket", "corner4", "random-5-3", "random-3-8"}) {
    const auto s = preset(name);
    for (int trial = 0; trial < 12; ++trial) {
      const int n = static_cast<int>(rng.next_below(5));
      const double theta = rng.uniform(0.0, std::numbers::pi);
      const auto f = multiplicity(s, n, theta);
      const auto st = oracle::stats(oracle::shadows(s, n, theta));
      CHECK(support_measure(f) == doctest::Approx(st.support).epsilon(1e-9));
      CHECK(mass(f) == doctest::Approx(st.mass).epsilon(1e-9));
      CHECK(l2_norm_sq(f) == doctest::Approx(st.l2).epsilon(1e-9));
      for (std::int64_t k = 1; k <= 4; ++k) {
        const double ref = static_cast<std::size_t>(k) < st.level.size() ? st.level[k] : 0.0;
        CHECK(level_measure(f, k) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
        CHECK(level_identity_slack(f, k) >= 0.0);
      }
      CHECK(close(f, multiplicity_reference(s, n, theta)));
      // mass is L^n times one shadow length
      CHECK(mass(f) == doctest::Approx(std::pow(double(s.size()), n) * 2.0 *
                                       oracle::half_width(s, n, theta)));
      CHECK(strict_level_measure(f, 1) <= level_measure(f, 1) + 1e-15);
    }
  }
}

TEST_CASE("step function CSV round trip") {
  const auto g = preset("gasket");
  const auto f = multiplicity(g, 3, 0.4);
  std::stringstream buf;
  write_step_function_csv(buf, f, {"gasket", 3, 0.4});
  ShadowCsvHeader h;
  const auto back = read_step_function_csv(buf, &h);
  CHECK(back == f);
  CHECK(h.system == "gasket");
  CHECK(h.depth == 3);
  CHECK(h.theta == 0.4);
}
