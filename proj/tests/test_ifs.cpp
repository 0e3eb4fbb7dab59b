#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "favlab/error.hpp"
#include "favlab/ifs.hpp"
#include "favlab/rng.hpp"
#include "oracles.hpp"

using namespace favlab;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("philox known answer") {
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);
  const auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("counter rng streams are reproducible and distinct") {
  CounterRng a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.next_double();
    CHECK(x == b.next_double());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs |= x != c.next_double();
  }
  CHECK(differs);
  CounterRng d(9);
  for (int i = 0; i < 1000; ++i) CHECK(d.next_below(7) < 7u);
}

TEST_CASE("presets") {
  const auto g = preset("gasket");
  CHECK(g.size() == 3);
  CHECK(g.ratio() == doctest::Approx(1.0 / 3.0));
  CHECK(g.shape() == Shape::disc);
  const auto c = preset("corner4");
  CHECK(c.size() == 4);
  CHECK(c.ratio() == 0.25);
  CHECK(c.shape() == Shape::square);
  CHECK(c.root_size() == 0.5);
  CHECK(kind_of([] { preset("bogus"); }) == ErrorKind::UnknownPreset);
  CHECK(kind_of([] { preset("random-1-3"); }) == ErrorKind::UnknownPreset);
  const auto r1 = preset("random-5-11");
  const auto r2 = preset("random-5-11");
  CHECK(system_to_json(r1) == system_to_json(r2));
  CHECK(r1.size() == 5);
}

TEST_CASE("build_system validation") {
  CHECK(kind_of([] { build_system({{{0.9, 0.0}, 0.5, Shape::disc}, {{0.0, 0.0}, 0.5, Shape::disc}}); }) ==
        ErrorKind::ContainmentViolation);
  CHECK(kind_of([] { build_system({}); }) == ErrorKind::EmptySystem);
  CHECK(kind_of([] {
          build_system({{{0.5, 0.0}, 0.5, Shape::disc}, {{-0.5, 0.0}, 0.5, Shape::square}});
        }) == ErrorKind::MixedShapes);
  CHECK(kind_of([] {
          build_system({{{0.5, 0.0}, 0.5, Shape::disc}, {{-0.5, 0.0}, 0.4, Shape::disc}});
        }) == ErrorKind::InvalidMap);
  CHECK(kind_of([] { build_system({{{0.0, 0.0}, 1.5, Shape::disc}, {{0.0, 0.0}, 1.5, Shape::disc}}); }) ==
        ErrorKind::InvalidMap);
}

TEST_CASE("system json round trip") {
  const auto g = preset("corner4");
  const auto back = system_from_json(system_to_json(g));
  CHECK(system_to_json(back) == system_to_json(g));
  CHECK(kind_of([] { system_from_json("{not json"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { system_from_json(R"({"shape":"hex","ratio":0.5,"centers":[]})"); }) ==
        ErrorKind::ParseError);
}

TEST_CASE("piece centers") {
  const auto g = preset("gasket");
  std::vector<std::size_t> empty;
  CHECK(std::abs(piece_center(g, empty)) == 0.0);
  const std::vector<std::size_t> top{1};
  const auto z1 = piece_center(g, top);
  CHECK(z1.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(z1.imag() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const std::vector<std::size_t> top2{1, 1};
  const auto z2 = piece_center(g, top2);
  CHECK(std::abs(z2 - Complex{0.0, 1.0 / 3.0 + 1.0 / 9.0}) < 1e-15);
}

TEST_CASE("enumeration matches the recursive oracle") {
  for (const char* name : {"gasket", "corner4", "random-4-2"}) {
    const auto s = preset(name);
    for (int n = 0; n <= 4; ++n) {
      const auto ref = oracle::centers(s, n);
      std::vector<Complex> got;
      for_each_piece(s, n, [&](const Piece& p) {
        got.push_back(p.center);
        CHECK(p.size == doctest::Approx(s.root_size() * std::pow(s.ratio(), n)));
      });
      REQUIRE(got.size() == ref.size());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - ref[i]) < 1e-14);
    }
  }
  const auto g = preset("gasket");
  CHECK(piece_count(g, 2) == 9);
  CHECK(piece_count(preset("corner4"), 3) == 64);
  CHECK(piece_size(preset("corner4"), 3) == doctest::Approx(0.5 / 64.0));
  CHECK(kind_of([&] { piece_count(g, 40); }) == ErrorKind::EnumerationCapExceeded);
}

TEST_CASE("prefix cursor enumerates one subtree") {
  const auto g = preset("gasket");
  const std::vector<std::size_t> prefix{2, 0};
  PieceCursor cur(g, 4, prefix);
  std::size_t count = 0;
  while (auto p = cur.next()) {
    CHECK(cur.word()[0] == 2);
    CHECK(cur.word()[1] == 0);
    ++count;
  }
  CHECK(count == 9);
}

TEST_CASE("pieces stay inside the root region") {
  const auto g = preset("random-6-4");
  for_each_piece(g, 3, [&](const Piece& p) {
    CHECK(std::abs(p.center) + p.size <= g.root_size() + 1e-9);
  });
}
