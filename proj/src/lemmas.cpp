#include "favlab/lemmas.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>

#include "favlab/error.hpp"
#include "favlab/rng.hpp"

namespace favlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxRefineDepth = 40;

struct PathResult {
  double turns = 0.0;  // accumulated argument / 2pi
  bool touched = false;
  double min_abs = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
};

// Accumulates arg f along gamma(s), s in [0, 1]. A chord is split until the
// two endpoint values differ by less than a third of the smaller modulus, so
// the image chord cannot wind around the origin unseen.
class PathWalker {
 public:
  PathWalker(const AnalyticFn& f, const std::function<Complex(double)>& gamma, double touch)
      : f_(f), gamma_(gamma), touch_(touch) {}

  PathResult walk(int initial) {
    PathResult res;
    double s0 = 0.0;
    Complex f0 = sample(s0, res);
    for (int i = 1; i <= initial && !res.touched; ++i) {
      const double s1 = static_cast<double>(i) / initial;
      const Complex f1 = sample(s1, res);
      refine(s0, f0, s1, f1, 0, res);
      s0 = s1;
      f0 = f1;
    }
    return res;
  }

 private:
  Complex sample(double s, PathResult& res) {
    const Complex v = f_(gamma_(s));
    const double a = std::abs(v);
    res.min_abs = std::min(res.min_abs, a);
    res.max_abs = std::max(res.max_abs, a);
    if (!(a >= touch_)) res.touched = true;
    return v;
  }

  void refine(double sa, Complex fa, double sb, Complex fb, int depth, PathResult& res) {
    if (res.touched) return;
    const double small = std::min(std::abs(fa), std::abs(fb));
    if (depth < kMaxRefineDepth && std::abs(fb - fa) > small / 3.0) {
      const double sm = 0.5 * (sa + sb);
      const Complex fm = sample(sm, res);
      refine(sa, fa, sm, fm, depth + 1, res);
      refine(sm, fm, sb, fb, depth + 1, res);
      return;
    }
    res.turns += std::arg(fb / fa) / kTwoPi;
  }

  const AnalyticFn& f_;
  const std::function<Complex(double)>& gamma_;
  double touch_;
};

PathResult circle_path(const AnalyticFn& f, Complex center, double radius, double touch) {
  const std::function<Complex(double)> gamma = [&](double s) {
    return center + std::polar(radius, kTwoPi * s);
  };
  return PathWalker(f, gamma, touch).walk(256);
}

PathResult box_path(const AnalyticFn& f, Complex lo, Complex hi, double touch) {
  const std::array<Complex, 5> corners = {lo, Complex{hi.real(), lo.imag()}, hi,
                                          Complex{lo.real(), hi.imag()}, lo};
  const std::function<Complex(double)> gamma = [&](double s) {
    const double scaled = std::min(s, 1.0) * 4.0;
    const int side = std::min(3, static_cast<int>(scaled));
    const double u = scaled - side;
    return corners[side] + u * (corners[side + 1] - corners[side]);
  };
  return PathWalker(f, gamma, touch).walk(64);
}

int rounded(const PathResult& r) { return static_cast<int>(std::lround(r.turns)); }

Complex polish(const AnalyticFn& f, Complex z, double box) {
  // A few Newton steps; kept only if they stay near the box and improve |f|.
  Complex best = z;
  double best_abs = std::abs(f(z));
  Complex cur = z;
  for (int it = 0; it < 6; ++it) {
    const double h = std::max(1e-7 * std::max(1.0, std::abs(cur)), 1e-9);
    const Complex fv = f(cur);
    const Complex d = (f(cur + h) - f(cur - h)) / (2.0 * h);
    if (std::abs(d) == 0.0) break;
    cur -= fv / d;
    if (std::abs(cur - z) > 4.0 * box) break;
    const double a = std::abs(f(cur));
    if (a < best_abs) {
      best = cur;
      best_abs = a;
    }
  }
  return best;
}

constexpr double kLocalTouch = 1e-13;
constexpr std::array<double, 6> kSplits = {0.5, 0.5137, 0.4781, 0.5311, 0.4573, 0.5471};

void localize(const AnalyticFn& f, Complex lo, Complex hi, int count, const ZeroConfig& cfg,
              std::vector<Complex>& out, int depth) {
  if (count <= 0) return;
  const double size = std::max(hi.real() - lo.real(), hi.imag() - lo.imag());
  const Complex mid = 0.5 * (lo + hi);
  if (size <= cfg.zero_tolerance || depth > 80) {
    const Complex z = count == 1 ? polish(f, mid, size) : mid;
    for (int i = 0; i < count; ++i) out.push_back(z);
    return;
  }
  for (double fx : kSplits) {
    for (double fy : kSplits) {
      const double sx = lo.real() + fx * (hi.real() - lo.real());
      const double sy = lo.imag() + fy * (hi.imag() - lo.imag());
      const std::array<std::pair<Complex, Complex>, 4> kids = {
          std::pair{lo, Complex{sx, sy}},
          std::pair{Complex{sx, lo.imag()}, Complex{hi.real(), sy}},
          std::pair{Complex{lo.real(), sy}, Complex{sx, hi.imag()}},
          std::pair{Complex{sx, sy}, hi}};
      std::array<int, 4> counts{};
      bool ok = true;
      int total = 0;
      for (std::size_t k = 0; k < 4 && ok; ++k) {
        const auto res = box_path(f, kids[k].first, kids[k].second, kLocalTouch);
        if (res.touched) ok = false;
        counts[k] = rounded(res);
        total += counts[k];
      }
      if (!ok || total != count) continue;
      for (std::size_t k = 0; k < 4; ++k) {
        localize(f, kids[k].first, kids[k].second, counts[k], cfg, out, depth + 1);
      }
      return;
    }
  }
  // No clean split: report the box centre with its multiplicity.
  for (int i = 0; i < count; ++i) out.push_back(mid);
}

}  // namespace

int winding_number(const AnalyticFn& f, Complex center, double radius, double boundary_tolerance) {
  const auto res = circle_path(f, center, radius, boundary_tolerance);
  if (res.touched) raise(ErrorKind::ContourThroughZero, "contour passes through a zero");
  return rounded(res);
}

std::vector<Complex> zeros_in_box(const AnalyticFn& f, Complex lo, Complex hi,
                                  const ZeroConfig& cfg) {
  for (double shrink : {0.0, 1e-7, 3e-7, 1e-6}) {
    const Complex pad{shrink * (hi.real() - lo.real()), shrink * (hi.imag() - lo.imag())};
    const auto res = box_path(f, lo + pad, hi - pad, kLocalTouch);
    if (res.touched) continue;
    std::vector<Complex> out;
    localize(f, lo + pad, hi - pad, rounded(res), cfg, out, 0);
    return out;
  }
  raise(ErrorKind::ContourThroughZero, "box boundary passes through a zero");
}

ZeroCertificate count_zeros(const AnalyticFn& f, Complex center, double radius,
                            const ZeroConfig& cfg) {
  if (!(radius > 0.0)) raise(ErrorKind::InvalidArgument, "radius must be positive");
  for (int attempt = 0; attempt <= cfg.max_jitter; ++attempt) {
    const double r = radius * (1.0 - 1e-4 * attempt);
    const auto res = circle_path(f, center, r, cfg.boundary_tolerance);
    if (res.touched) continue;
    ZeroCertificate cert;
    cert.count = rounded(res);
    cert.radius = r;
    cert.sup_bound = res.max_abs;
    cert.base_value = std::abs(f(center));
    if (cert.count > 0) {
      // The bounding box is slightly larger than the disc so its boundary
      // avoids the zeros near the circle; outside zeros are dropped.
      const Complex half{1.03125 * r, 1.03125 * r};
      for (const auto& z : zeros_in_box(f, center - half, center + half, cfg)) {
        if (std::abs(z - center) < r) cert.zeros.push_back(z);
      }
    }
    return cert;
  }
  raise(ErrorKind::ContourThroughZero,
        "every jittered contour passes within the boundary tolerance of a zero");
}

double circle_sup(const AnalyticFn& f, Complex center, double radius, std::size_t samples) {
  samples = std::max<std::size_t>(samples, 16);
  std::vector<double> mod(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    mod[i] = std::abs(f(center + std::polar(radius, kTwoPi * i / samples)));
  }
  std::vector<std::size_t> order(samples);
  for (std::size_t i = 0; i < samples; ++i) order[i] = i;
  const std::size_t top = std::min<std::size_t>(8, samples);
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](std::size_t a, std::size_t b) { return mod[a] > mod[b]; });
  double best = mod[order[0]];
  const double step = kTwoPi / samples;
  const auto g = [&](double t) { return std::abs(f(center + std::polar(radius, t))); };
  for (std::size_t k = 0; k < top; ++k) {
    double a = step * order[k] - step, b = step * order[k] + step;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < 60; ++it) {
      if (gc > gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - phi * (b - a);
        gc = g(c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + phi * (b - a);
        gd = g(d);
      }
    }
    best = std::max({best, gc, gd});
  }
  return best;
}

BlaschkeReport blaschke_check(const AnalyticFn& f, std::size_t sup_samples, const ZeroConfig& cfg) {
  if (!(std::abs(f(Complex{0.0, 0.0})) >= 1.0 - 1e-12)) {
    raise(ErrorKind::PreconditionUnmet, "Blaschke bound needs |f(0)| >= 1");
  }
  BlaschkeReport rep;
  rep.zeros = count_zeros(f, Complex{0.0, 0.0}, 0.5, cfg).count;
  rep.sup = circle_sup(f, Complex{0.0, 0.0}, 1.0, sup_samples);
  rep.log2_sup = std::log2(rep.sup);
  rep.pass = rep.zeros <= rep.log2_sup + 1e-12;
  return rep;
}

CoverReport small_value_cover_check(const AnalyticFn& f, double delta, std::size_t grid,
                                    const ZeroConfig& cfg) {
  if (!(delta > 0.0 && delta < 1.0 / 3.0)) {
    raise(ErrorKind::DeltaOutOfRange, "delta must lie in (0, 1/3)");
  }
  if (!(std::abs(f(Complex{0.0, 0.0})) >= 1.0 - 1e-12)) {
    raise(ErrorKind::PreconditionUnmet, "small-value cover needs |f(0)| >= 1");
  }
  if (grid < 2) raise(ErrorKind::InvalidArgument, "grid must be at least 2");
  const auto cert = count_zeros(f, Complex{0.0, 0.0}, 0.5, cfg);
  CoverReport rep;
  rep.zeros = cert.count;
  rep.epsilon = cert.count > 0 ? (9.0 / 16.0) * std::pow(3.0 * delta, 1.0 / cert.count) : 0.0;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  const double step = 0.5 / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      const Complex z{-0.25 + step * i, -0.25 + step * j};
      if (std::abs(z) > 0.25) continue;
      if (!(std::abs(f(z)) < delta)) continue;
      ++rep.small_samples;
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& w : cert.zeros) nearest = std::min(nearest, std::abs(z - w));
      rep.worst_excess = std::max(rep.worst_excess, nearest - rep.epsilon);
      if (!(nearest <= rep.epsilon)) ++rep.uncovered;
    }
  }
  if (rep.small_samples == 0) rep.worst_excess = 0.0;
  rep.pass = rep.uncovered == 0;
  return rep;
}

Complex ExpSum::operator()(double x) const {
  Complex sum{0.0, 0.0};
  for (std::size_t l = 0; l < exponents.size(); ++l) sum += coefficients[l] * std::exp(exponents[l] * x);
  return sum;
}

double interval_sup(const std::function<double(double)>& modulus, double lo, double hi) {
  const double len = hi - lo;
  if (!(len >= 0.0)) raise(ErrorKind::InvalidArgument, "interval with hi < lo");
  if (len == 0.0) return modulus(lo);
  const auto samples = static_cast<std::size_t>(std::max(2000.0, std::ceil(1000.0 * len)));
  const double h = len / static_cast<double>(samples);
  std::vector<double> mod(samples + 1);
  for (std::size_t i = 0; i <= samples; ++i) mod[i] = modulus(lo + h * i);
  std::vector<std::size_t> order(mod.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t top = std::min<std::size_t>(5, order.size());
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&](std::size_t a, std::size_t b) { return mod[a] > mod[b]; });
  double best = mod[order[0]];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t k = 0; k < top; ++k) {
    double a = std::max(lo, lo + h * order[k] - h);
    double b = std::min(hi, lo + h * order[k] + h);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double gc = modulus(c), gd = modulus(d);
    for (int it = 0; it < 50; ++it) {
      if (gc > gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - phi * (b - a);
        gc = modulus(c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + phi * (b - a);
        gd = modulus(d);
      }
    }
    best = std::max({best, gc, gd});
  }
  return best;
}

TuranReport turan_ratio(const TuranTrial& trial) {
  const auto& f = trial.f;
  if (f.exponents.empty() || f.exponents.size() != f.coefficients.size()) {
    raise(ErrorKind::InvalidArgument, "Turan trial needs matching, nonempty exponent lists");
  }
  const double len_i = trial.domain.length();
  const double len_e = trial.subset.measure();
  if (!(len_e > 0.0)) raise(ErrorKind::InvalidArgument, "E must have positive measure");
  IntervalUnion domain = IntervalUnion::from({trial.domain});
  if (!domain.covers(trial.subset, 1e-12)) raise(ErrorKind::InvalidArgument, "E must lie in I");

  const auto modulus = [&](double x) { return std::abs(f(x)); };
  TuranReport rep;
  rep.sup_domain = interval_sup(modulus, trial.domain.lo, trial.domain.hi);
  for (const auto& piece : trial.subset.intervals()) {
    rep.sup_subset = std::max(rep.sup_subset, interval_sup(modulus, piece.lo, piece.hi));
  }
  double max_re = 0.0;
  for (const auto& lam : f.exponents) max_re = std::max(max_re, std::abs(lam.real()));
  const double terms = static_cast<double>(f.exponents.size());
  const double excess = rep.sup_domain / (std::exp(max_re * len_i) * rep.sup_subset);
  rep.a = (len_e / len_i) * std::pow(excess, 1.0 / terms);
  return rep;
}

namespace {

double boundary_sup(const ExpPoly& f, double scale, double x0, double half,
                    std::size_t samples) {
  const std::array<Complex, 5> corners = {Complex{x0 - half, -half}, Complex{x0 + half, -half},
                                          Complex{x0 + half, half}, Complex{x0 - half, half},
                                          Complex{x0 - half, -half}};
  double best = 0.0;
  for (int side = 0; side < 4; ++side) {
    const Complex a = corners[side], b = corners[side + 1];
    const auto modulus = [&](double u) { return std::abs(f(scale * (a + u * (b - a)))); };
    // Same grid-plus-golden search as interval_sup, sized by the caller.
    const double h = 1.0 / static_cast<double>(samples);
    std::size_t arg = 0;
    double top = -1.0;
    for (std::size_t i = 0; i <= samples; ++i) {
      const double v = modulus(h * i);
      if (v > top) {
        top = v;
        arg = i;
      }
    }
    double lo = std::max(0.0, h * arg - h), hi = std::min(1.0, h * arg + h);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double gc = modulus(c), gd = modulus(d);
    for (int it = 0; it < 40; ++it) {
      if (gc > gd) {
        hi = d;
        d = c;
        gd = gc;
        c = hi - phi * (hi - lo);
        gc = modulus(c);
      } else {
        lo = c;
        c = d;
        gc = gd;
        d = lo + phi * (hi - lo);
        gd = modulus(d);
      }
    }
    best = std::max({best, top, gc, gd});
  }
  return best;
}

}  // namespace

DoublingReport doubling_ratio(const ExpPoly& f, double scale, double x_center,
                              std::size_t samples_per_side) {
  DoublingReport rep;
  rep.sup_half = boundary_sup(f, scale, x_center, 0.5, samples_per_side);
  rep.sup_q = std::max(boundary_sup(f, scale, x_center, 1.0, 2 * samples_per_side), rep.sup_half);
  rep.ratio = rep.sup_half > 0.0 ? rep.sup_q / rep.sup_half : std::numeric_limits<double>::infinity();
  return rep;
}

DoublingSweep doubling_sweep(const SimilaritySystem& system, const std::vector<double>& slopes,
                             const std::vector<double>& centers, int k_max,
                             std::size_t samples_per_side, Exec exec) {
  const AffineFrame frame = normalize_frame(system);
  const std::size_t per_slope = centers.size() * static_cast<std::size_t>(k_max + 1);
  const auto rows = map_indices(
      slopes.size(),
      [&](std::size_t i) {
        const ExpPoly f = phi_t(frame, slopes[i]);
        std::pair<double, double> mm{std::numeric_limits<double>::infinity(), 0.0};
        for (double x0 : centers) {
          double scale = 1.0;
          for (int k = 0; k <= k_max; ++k) {
            const double r = doubling_ratio(f, scale, x0, samples_per_side).ratio;
            mm.first = std::min(mm.first, r);
            mm.second = std::max(mm.second, r);
            scale *= system.ratio();
          }
        }
        return mm;
      },
      exec);
  DoublingSweep out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& [lo, hi] : rows) {
    out.min_ratio = std::min(out.min_ratio, lo);
    out.max_ratio = std::max(out.max_ratio, hi);
  }
  out.evaluations = per_slope * slopes.size();
  return out;
}

double cetsq_lhs_exact(const std::vector<double>& frequencies,
                       const std::vector<Complex>& coefficients, double delta) {
  const double top = 1.0 / delta;
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < frequencies.size(); ++j) {
    for (std::size_t k = 0; k < frequencies.size(); ++k) {
      const double w = frequencies[j] - frequencies[k];
      const Complex integral = std::abs(w) < 1e-300
                                   ? Complex{top, 0.0}
                                   : (std::polar(1.0, w * top) - 1.0) / Complex{0.0, w};
      sum += coefficients[j] * std::conj(coefficients[k]) * integral;
    }
  }
  return sum.real();
}

CetsqReport cetsq_ratio(const std::vector<double>& frequencies,
                        const std::vector<Complex>& coefficients, double delta) {
  if (frequencies.empty() || frequencies.size() != coefficients.size()) {
    raise(ErrorKind::InvalidArgument, "need matching, nonempty frequency and coefficient lists");
  }
  if (!(delta > 0.0)) raise(ErrorKind::InvalidArgument, "delta must be positive");
  const ExpPoly f(frequencies, coefficients, 1.0);
  const auto [lo_it, hi_it] = std::minmax_element(frequencies.begin(), frequencies.end());
  const double span = *hi_it - *lo_it;
  const double top = 1.0 / delta;
  // |f|^2 oscillates at most span / 2pi times per unit length.
  auto intervals = static_cast<std::size_t>(std::ceil(64.0 * (span * top / kTwoPi + 1.0)));
  intervals = std::max<std::size_t>(intervals, 1024);
  if (intervals % 2) ++intervals;
  const double h = top / static_cast<double>(intervals);
  double acc = 0.0;
  for (std::size_t j = 0; j <= intervals; ++j) {
    const double w = (j == 0 || j == intervals) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc += w * std::norm(f(h * static_cast<double>(j)));
  }
  CetsqReport rep;
  rep.lhs = acc * h / 3.0;
  std::vector<Interval> bumps;
  bumps.reserve(frequencies.size());
  for (double a : frequencies) bumps.push_back({a - delta, a + delta});
  rep.s = l2_norm_sq(StepFunction::sum_of_indicators(bumps));
  rep.ratio = rep.lhs * delta * delta / rep.s;
  std::vector<double> sorted = frequencies;
  std::sort(sorted.begin(), sorted.end());
  std::size_t best = 0;
  for (std::size_t i = 0, j = 0; i < sorted.size(); ++i) {
    while (sorted[i] - sorted[j] > 1.0) ++j;
    best = std::max(best, i - j + 1);
  }
  rep.unit_count = static_cast<double>(best);
  return rep;
}

AnalyticFn random_exp_poly(std::uint64_t seed, std::uint64_t trial, double frequency_bound) {
  CounterRng rng(seed, trial);
  for (;;) {
    const auto terms = static_cast<std::size_t>(2 + rng.next_below(5));
    std::vector<double> lam(terms);
    std::vector<Complex> coef(terms);
    Complex at_zero{0.0, 0.0};
    for (std::size_t l = 0; l < terms; ++l) {
      lam[l] = rng.uniform(-frequency_bound, frequency_bound);
      coef[l] = std::polar(1.0, rng.uniform(0.0, kTwoPi));
      at_zero += coef[l];
    }
    if (std::abs(at_zero) < 0.05) continue;
    for (auto& c : coef) c /= at_zero;
    // Coefficients are no longer unimodular, so evaluate directly.
    return [lam = std::move(lam), coef = std::move(coef)](Complex z) {
      const Complex i{0.0, 1.0};
      Complex sum{0.0, 0.0};
      for (std::size_t l = 0; l < lam.size(); ++l) sum += coef[l] * std::exp(i * lam[l] * z);
      return sum;
    };
  }
}

namespace {

TuranTrial random_turan_trial(std::uint64_t seed, std::uint64_t trial) {
  CounterRng rng(seed, trial);
  TuranTrial t;
  const auto terms = static_cast<std::size_t>(1 + rng.next_below(6));
  for (std::size_t l = 0; l < terms; ++l) {
    t.f.exponents.push_back(Complex{0.0, rng.uniform(-10.0, 10.0)});
    t.f.coefficients.push_back(std::polar(1.0, rng.uniform(0.0, kTwoPi)));
  }
  const double len = rng.uniform(1.0, 4.0);
  t.domain = {0.0, len};
  for (;;) {
    std::vector<Interval> parts;
    const auto pieces = 1 + rng.next_below(3);
    for (std::uint64_t p = 0; p < pieces; ++p) {
      const double w = rng.uniform(0.02, 0.4) * len;
      const double a = rng.uniform(0.0, len - w);
      parts.push_back({a, a + w});
    }
    t.subset = IntervalUnion::from(std::move(parts));
    if (t.subset.measure() >= len / 10.0) break;
  }
  return t;
}

std::pair<std::vector<double>, std::vector<Complex>> random_frequency_set(std::uint64_t seed,
                                                                          std::uint64_t trial) {
  CounterRng rng(seed, trial);
  const auto count = static_cast<std::size_t>(1 + rng.next_below(100));
  const auto clusters = static_cast<std::size_t>(1 + rng.next_below(8));
  std::vector<double> centers(clusters);
  for (auto& c : centers) c = rng.uniform(0.0, 200.0);
  const double spread = std::pow(10.0, rng.uniform(-2.0, 1.0));
  std::vector<double> freq(count);
  std::vector<Complex> coef(count);
  for (std::size_t j = 0; j < count; ++j) {
    freq[j] = centers[rng.next_below(clusters)] + rng.uniform(-spread, spread);
    coef[j] = std::polar(1.0, rng.uniform(0.0, kTwoPi));
  }
  return {freq, coef};
}

}  // namespace

CertifiedSsvCover certified_ssv_cover(const SimilaritySystem& system, Direction direction,
                                      const ProductSpec& spec, double threshold, double strip) {
  validate(spec);
  if (!(threshold > 0.0 && threshold < 1.0)) {
    raise(ErrorKind::InvalidArgument, "threshold must lie in (0, 1)");
  }
  if (!(strip > 0.0)) raise(ErrorKind::InvalidArgument, "strip must be positive");
  const ExpPoly f = phi(system, direction);
  const double big_l = 1.0 / system.ratio();
  const double u_lo = std::pow(big_l, -spec.m);
  const double u_hi = std::pow(big_l, spec.m);

  CertifiedSsvCover out;
  out.factor_threshold = std::pow(threshold, 1.0 / (spec.m + 1));
  const double s = out.factor_threshold;

  const AnalyticFn fz = [&f](Complex z) { return f(z); };
  out.zeros = zeros_in_box(fz, {u_lo - 1.0, -strip}, {u_hi + 1.0, strip});
  std::vector<double> centers;
  for (const auto& z : out.zeros) centers.push_back(z.real());
  std::sort(centers.begin(), centers.end());

  // |phi'| <= normalization * sum |frequency| on the real line.
  double lip = 0.0;
  for (double w : f.frequencies()) lip += std::abs(w);
  lip *= f.normalization();
  const double h_target = lip > 0.0 ? s / (20.0 * lip) : u_hi - u_lo;
  const auto cells = static_cast<std::size_t>(std::ceil((u_hi - u_lo) / h_target));
  if (cells > (std::size_t{1} << 26)) raise(ErrorKind::InvalidArgument, "certification grid too large");
  out.grid = cells;
  const double h = (u_hi - u_lo) / static_cast<double>(cells);

  // Farthest point of a failing cell from the nearest zero real part.
  const auto reach = [&](double a, double b) {
    if (centers.empty()) return std::numeric_limits<double>::infinity();
    const double mid = 0.5 * (a + b);
    auto it = std::lower_bound(centers.begin(), centers.end(), mid);
    double best = std::numeric_limits<double>::infinity();
    for (auto jt : {it, it == centers.begin() ? it : std::prev(it)}) {
      if (jt == centers.end()) continue;
      best = std::min(best, std::max(std::abs(a - *jt), std::abs(b - *jt)));
    }
    return best;
  };

  double rho = 0.0;
  double prev = std::abs(f(u_lo));
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = u_lo + h * static_cast<double>(i);
    const double b = i + 1 == cells ? u_hi : a + h;
    const double next = std::abs(f(b));
    if (!(0.5 * (prev + next - lip * h) > s)) rho = std::max(rho, reach(a, b));
    prev = next;
  }
  out.radius = rho;

  const ProductSpec& p = spec;
  const Interval window = product_window(p, system);
  std::vector<Interval> pieces;
  if (rho > 0.0) {
    for (int k = p.n - p.m; k <= p.n; ++k) {
      const double scale = std::pow(big_l, k);
      for (double c : centers) {
        const double lo = std::max(window.lo, scale * (c - rho));
        const double hi = std::min(window.hi, scale * (c + rho));
        if (lo <= hi) pieces.push_back({lo, hi});
      }
    }
    if (std::isinf(rho)) pieces = {window};
  }
  out.intervals = IntervalUnion::from(std::move(pieces));
  return out;
}

VerificationReport run_suite(const std::string& suite, const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = suite;
  rep.trials = cfg.trials;
  const auto trials = static_cast<std::size_t>(cfg.trials);

  if (suite == "blaschke") {
    const auto rows = map_indices(
        trials,
        [&](std::size_t i) {
          const auto r = blaschke_check(random_exp_poly(cfg.seed, i, 8.0));
          return std::pair{r.pass, r.zeros - r.log2_sup};
        },
        cfg.exec);
    rep.worst_case = -std::numeric_limits<double>::infinity();
    for (const auto& [ok, slack] : rows) {
      rep.failures += !ok;
      rep.worst_case = std::max(rep.worst_case, slack);
    }
    rep.limit = 0.0;
    rep.pass = rep.failures == 0;
  } else if (suite == "cover") {
    const std::array<double, 3> deltas = {0.01, 0.1, 0.3};
    const double bound = cfg.limit > 0.0 ? cfg.limit : 4.0;
    const auto rows = map_indices(
        trials,
        [&](std::size_t i) {
          const auto r = small_value_cover_check(random_exp_poly(cfg.seed, i, bound),
                                                 deltas[i % deltas.size()], 101);
          return std::pair{r.pass, r.worst_excess};
        },
        cfg.exec);
    rep.worst_case = -std::numeric_limits<double>::infinity();
    for (const auto& [ok, excess] : rows) {
      rep.failures += !ok;
      rep.worst_case = std::max(rep.worst_case, excess);
    }
    rep.limit = bound;
    rep.pass = rep.failures == 0;
  } else if (suite == "turan") {
    rep.limit = cfg.limit > 0.0 ? cfg.limit : 20.0;
    const auto rows = map_indices(
        trials, [&](std::size_t i) { return turan_ratio(random_turan_trial(cfg.seed, i)).a; },
        cfg.exec);
    rep.worst_case = 0.0;
    for (double a : rows) {
      rep.failures += !(a <= rep.limit);
      rep.worst_case = std::max(rep.worst_case, a);
    }
    rep.pass = rep.failures == 0;
  } else if (suite == "doubling") {
    const SimilaritySystem gasket = preset("gasket");
    const AffineFrame frame = normalize_frame(gasket);
    const auto rows = map_indices(
        trials,
        [&](std::size_t i) {
          CounterRng rng(cfg.seed, i);
          const double t = rng.uniform(0.0, 1.0);
          const double x0 = rng.uniform(-50.0, 50.0);
          const int k = static_cast<int>(rng.next_below(6));
          return doubling_ratio(phi_t(frame, t), std::pow(gasket.ratio(), k), x0, 128).ratio;
        },
        cfg.exec);
    rep.worst_case = std::numeric_limits<double>::infinity();
    for (double r : rows) {
      rep.failures += !(r >= 1.0);
      rep.worst_case = std::min(rep.worst_case, r);
    }
    rep.limit = 1.0;
    rep.pass = rep.failures == 0;
  } else if (suite == "cetsq") {
    rep.limit = cfg.limit > 0.0 ? cfg.limit : 25.0;
    const auto rows = map_indices(
        trials,
        [&](std::size_t i) {
          const auto [freq, coef] = random_frequency_set(cfg.seed, i);
          return cetsq_ratio(freq, coef).ratio;
        },
        cfg.exec);
    rep.worst_case = 0.0;
    for (double r : rows) {
      rep.failures += !(r <= rep.limit);
      rep.worst_case = std::max(rep.worst_case, r);
    }
    rep.pass = rep.failures == 0;
  } else if (suite == "keyobs") {
    rep.limit = cfg.limit > 0.0 ? cfg.limit : 1.0 / 18.0;
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(cfg.trials))));
    rep.trials = side * side;
    rep.worst_case = key_obs_check(rep.limit, side, cfg.exec).min_gap;
    rep.pass = rep.worst_case >= -1e-12;
    rep.failures = !rep.pass;
  } else if (suite == "sine") {
    rep.limit = 1e-10;
    rep.worst_case = sine_identity_check(trials, cfg.exec);
    rep.pass = rep.worst_case < rep.limit;
    rep.failures = !rep.pass;
  } else if (suite == "dist") {
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(cfg.trials))));
    rep.trials = side * side;
    rep.limit = cfg.limit > 0.0 ? cfg.limit : 1.0;
    rep.worst_case = dist_bound_fit(preset("gasket"), side, rep.limit, cfg.exec).b;
    rep.pass = rep.worst_case > 0.0;
    rep.failures = !rep.pass;
  } else {
    raise(ErrorKind::InvalidArgument, "unknown suite '" + suite + "'");
  }
  return rep;
}

}  // namespace favlab
