#include "favlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "favlab/error.hpp"

namespace favlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnitTolerance = 1e-12;
}  // namespace

ExpPoly::ExpPoly(std::vector<double> frequencies, std::vector<Complex> coefficients,
                 double normalization)
    : frequencies_(std::move(frequencies)),
      coefficients_(std::move(coefficients)),
      normalization_(normalization) {
  if (frequencies_.size() != coefficients_.size()) {
    raise(ErrorKind::InvalidArgument, "frequency and coefficient counts differ");
  }
  for (const auto& c : coefficients_) {
    if (std::abs(std::abs(c) - 1.0) > kUnitTolerance) {
      raise(ErrorKind::InvalidArgument, "coefficients must have unit modulus");
    }
  }
}

ExpPoly::ExpPoly(std::vector<double> frequencies, double normalization)
    : ExpPoly(frequencies, std::vector<Complex>(frequencies.size(), Complex{1.0, 0.0}),
              normalization) {}

Complex ExpPoly::operator()(double x) const {
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < frequencies_.size(); ++j) {
    sum += coefficients_[j] * std::polar(1.0, frequencies_[j] * x);
  }
  return normalization_ * sum;
}

Complex ExpPoly::operator()(Complex z) const {
  const Complex i{0.0, 1.0};
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < frequencies_.size(); ++j) {
    sum += coefficients_[j] * std::exp(i * frequencies_[j] * z);
  }
  return normalization_ * sum;
}

double ExpPoly::frequency_bound() const {
  double m = 0.0;
  for (double f : frequencies_) m = std::max(m, std::abs(f));
  return m;
}

AffineFrame normalize_frame(const SimilaritySystem& system) {
  const std::size_t count = system.size();
  if (count < 3) raise(ErrorKind::InvalidArgument, "the t-form needs at least three maps");
  const Complex origin = system.center(0);
  for (std::size_t j = 1; j < count; ++j) {
    for (std::size_t k = j + 1; k < count; ++k) {
      const Complex u = system.center(j) - origin;
      const Complex v = system.center(k) - origin;
      const double det = u.real() * v.imag() - u.imag() * v.real();
      if (std::abs(det) < 1e-12) continue;
      AffineFrame frame;
      frame.basis = {0, j, k};
      frame.a.resize(count);
      frame.b.resize(count);
      for (std::size_t l = 0; l < count; ++l) {
        const Complex w = system.center(l) - origin;
        frame.a[l] = (w.real() * v.imag() - w.imag() * v.real()) / det;
        frame.b[l] = (u.real() * w.imag() - u.imag() * w.real()) / det;
      }
      // Exact basis coordinates rather than their rounded solves.
      frame.a[0] = frame.b[0] = 0.0;
      frame.a[j] = 1.0;
      frame.b[j] = 0.0;
      frame.a[k] = 0.0;
      frame.b[k] = 1.0;
      return frame;
    }
  }
  raise(ErrorKind::InvalidArgument, "map centres are collinear; no affine frame");
}

ExpPoly phi_theta(const SimilaritySystem& system, double theta) {
  std::vector<double> freq(system.size());
  for (std::size_t l = 0; l < system.size(); ++l) {
    freq[l] = -project_point(system.center(l), theta) / system.ratio();
  }
  return ExpPoly(std::move(freq), 1.0 / static_cast<double>(system.size()));
}

ExpPoly phi_t(const AffineFrame& frame, double t) {
  std::vector<double> freq(frame.a.size());
  for (std::size_t l = 0; l < freq.size(); ++l) freq[l] = frame.a[l] + frame.b[l] * t;
  return ExpPoly(std::move(freq), 1.0 / static_cast<double>(freq.size()));
}

ExpPoly phi(const SimilaritySystem& system, Direction direction) {
  if (direction.kind == Direction::Kind::theta) return phi_theta(system, direction.value);
  return phi_t(normalize_frame(system), direction.value);
}

Complex phi_eval(const SimilaritySystem& system, Direction direction, double x) {
  return phi(system, direction)(x);
}

SlopeChart slope_chart(const SimilaritySystem& system, const AffineFrame& frame, double theta) {
  const double q0 = project_point(system.center(frame.basis[0]), theta);
  const double d1 = project_point(system.center(frame.basis[1]), theta) - q0;
  const double d2 = project_point(system.center(frame.basis[2]), theta) - q0;
  if (std::abs(d1) < 1e-15) {
    raise(ErrorKind::InvalidArgument, "direction is orthogonal to the first frame axis");
  }
  return {d2 / d1, -d1 / system.ratio()};
}

namespace {

template <class Arg>
Complex scaled_product_impl(const ExpPoly& f, double r, int k_lo, int k_hi, Arg x) {
  Complex prod{1.0, 0.0};
  if (k_hi < k_lo) return prod;
  double scale = 1.0;
  for (int k = 0; k < k_lo; ++k) scale *= r;
  for (int k = k_lo; k <= k_hi; ++k) {
    prod *= f(scale * x);
    scale *= r;
  }
  return prod;
}

}  // namespace

Complex scaled_product(const ExpPoly& f, double r, int k_lo, int k_hi, double x) {
  return scaled_product_impl(f, r, k_lo, k_hi, x);
}

Complex scaled_product(const ExpPoly& f, double r, int k_lo, int k_hi, Complex z) {
  return scaled_product_impl(f, r, k_lo, k_hi, z);
}

Complex nu_hat_eval(const SimilaritySystem& system, Direction direction, int n, double x) {
  if (n < 0) raise(ErrorKind::InvalidArgument, "depth must be non-negative");
  return scaled_product(phi(system, direction), system.ratio(), 1, n, x);
}

void validate(const ProductSpec& spec) {
  if (spec.m <= 0 || spec.ell <= 0 || spec.m + spec.ell >= spec.n) {
    raise(ErrorKind::SpecInvalid, "product spec needs 0 < m, 0 < ell and m + ell < n (got n=" +
                                      std::to_string(spec.n) + ", m=" + std::to_string(spec.m) +
                                      ", ell=" + std::to_string(spec.ell) + ")");
  }
}

ProductValues split_products(const ProductSpec& spec, const SimilaritySystem& system,
                             Direction direction, double x) {
  validate(spec);
  const ExpPoly f = phi(system, direction);
  const double r = system.ratio();
  const int n = spec.n, m = spec.m, ell = spec.ell;
  ProductValues v;
  v.p1 = scaled_product(f, r, 1, n - m, x);
  v.p2 = scaled_product(f, r, n - m, n, x);
  v.sharp = scaled_product(f, r, 1, n - m - ell - 1, x);
  v.flat = scaled_product(f, r, n - m - ell, n - m - 1, x);
  v.p1_trimmed = scaled_product(f, r, 1, n - m - 1, x);
  return v;
}

Interval product_window(const ProductSpec& spec, const SimilaritySystem& system) {
  validate(spec);
  const double base = 1.0 / system.ratio();
  return {std::pow(base, spec.n - spec.m), std::pow(base, spec.n)};
}

SsvCover ssv_scan(const SimilaritySystem& system, Direction direction, const ProductSpec& spec,
                  double threshold, std::size_t grid_size, Exec exec) {
  if (grid_size < 1000) raise(ErrorKind::InvalidArgument, "ssv grid needs at least 1000 samples");
  const Interval window = product_window(spec, system);
  const ExpPoly f = phi(system, direction);
  const double r = system.ratio();
  const double h = window.length() / static_cast<double>(grid_size - 1);

  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (grid_size + kBlock - 1) / kBlock;
  const auto flags = map_indices(
      blocks,
      [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(grid_size, lo + kBlock);
        std::vector<unsigned char> out(hi - lo);
        for (std::size_t j = lo; j < hi; ++j) {
          const double x = window.lo + h * static_cast<double>(j);
          out[j - lo] = std::abs(scaled_product(f, r, spec.n - spec.m, spec.n, x)) <= threshold;
        }
        return out;
      },
      exec);

  SsvCover cover;
  cover.threshold = threshold;
  cover.window = window;
  cover.step = h;
  cover.samples = grid_size;
  std::vector<Interval> runs;
  bool open = false;
  std::size_t first = 0;
  std::size_t j = 0;
  for (const auto& block : flags) {
    for (unsigned char small : block) {
      if (small) {
        ++cover.small_samples;
        if (!open) {
          open = true;
          first = j;
        }
      } else if (open) {
        open = false;
        runs.push_back({window.lo + h * static_cast<double>(first) - h,
                        window.lo + h * static_cast<double>(j - 1) + h});
      }
      ++j;
    }
  }
  if (open) {
    runs.push_back({window.lo + h * static_cast<double>(first) - h,
                    window.lo + h * static_cast<double>(j - 1) + h});
  }
  for (auto& iv : runs) {
    iv.lo = std::max(iv.lo, window.lo);
    iv.hi = std::min(iv.hi, window.hi);
  }
  cover.intervals = IntervalUnion::from(std::move(runs));
  cover.component_count = cover.intervals.size();
  return cover;
}

ParsevalReport parseval_check(const SimilaritySystem& system, double theta, int n, double range,
                              std::size_t grid, Exec exec) {
  if (!(range > 0.0)) raise(ErrorKind::InvalidArgument, "integration range must be positive");
  const double half = shadow_half_width(piece_size(system, n), theta, system.shape());
  const double pieces = static_cast<double>(piece_count(system, n));
  const ExpPoly f = phi_theta(system, theta);
  const double r = system.ratio();

  std::size_t intervals = std::max<std::size_t>(grid, static_cast<std::size_t>(16.0 * range));
  intervals = std::max<std::size_t>(intervals, 2);
  if (intervals % 2) ++intervals;
  const double h = range / static_cast<double>(intervals);

  auto integrand = [&](std::size_t j) {
    const double xi = h * static_cast<double>(j);
    const double box = j == 0 ? 2.0 * half : 2.0 * std::sin(half * xi) / xi;
    const double nu = std::norm(scaled_product(f, r, 1, n, xi));
    return pieces * pieces * nu * box * box;
  };

  constexpr std::size_t kBlock = 4096;
  const std::size_t nodes = intervals + 1;
  const std::size_t blocks = (nodes + kBlock - 1) / kBlock;
  const auto partial = map_indices(
      blocks,
      [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(nodes, lo + kBlock);
        double s = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
          const double w = (j == 0 || j == intervals) ? 1.0 : (j % 2 ? 4.0 : 2.0);
          s += w * integrand(j);
        }
        return s;
      },
      exec);
  const double half_line = ordered_sum(partial) * h / 3.0;

  ParsevalReport rep;
  rep.spectral = half_line / kPi;  // (1/2pi) * 2 * int_0^R
  rep.spatial = l2_norm_sq(multiplicity(system, n, theta));
  rep.rel_error = std::abs(rep.spectral - rep.spatial) / rep.spatial;
  rep.range = range;
  rep.nodes = nodes;
  return rep;
}

double key_obs_gap(double a, double x, double y) {
  const Complex big = Complex{1.0, 0.0} + std::polar(1.0, x) + std::polar(1.0, y);
  const double cx = std::cos(x), cy = std::cos(y);
  const double u = 4.0 * cx * cx - 1.0;
  const double v = 4.0 * cy * cy - 1.0;
  return std::norm(big) - a * (u * u + v * v);
}

GapReport key_obs_check(double a, std::size_t grid, Exec exec) {
  if (!(a > 0.0)) raise(ErrorKind::InvalidArgument, "a must be positive");
  if (grid < 1) raise(ErrorKind::InvalidArgument, "grid must be positive");
  const double step = kTwoPi / static_cast<double>(grid);
  const auto rows = map_indices(
      grid,
      [&](std::size_t i) {
        GapReport best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
        const double x = step * static_cast<double>(i);
        for (std::size_t j = 0; j < grid; ++j) {
          const double y = step * static_cast<double>(j);
          const double g = key_obs_gap(a, x, y);
          if (g < best.min_gap) best = {g, x, y};
        }
        return best;
      },
      exec);
  GapReport out = rows.front();
  for (const auto& row : rows) {
    if (row.min_gap < out.min_gap) out = row;
  }
  return out;
}

double key_obs_best_a(std::size_t grid, Exec exec) {
  const double step = kTwoPi / static_cast<double>(grid);
  const auto rows = map_indices(
      grid,
      [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        const double x = step * static_cast<double>(i);
        const double cx = std::cos(x);
        const double u = 4.0 * cx * cx - 1.0;
        for (std::size_t j = 0; j < grid; ++j) {
          const double y = step * static_cast<double>(j);
          const double cy = std::cos(y);
          const double v = 4.0 * cy * cy - 1.0;
          const double bracket = u * u + v * v;
          if (bracket < 1e-12) continue;
          const Complex big = Complex{1.0, 0.0} + std::polar(1.0, x) + std::polar(1.0, y);
          best = std::min(best, std::norm(big) / bracket);
        }
        return best;
      },
      exec);
  return *std::min_element(rows.begin(), rows.end());
}

double sine_identity_check(std::size_t grid, Exec exec) {
  if (grid < 1) raise(ErrorKind::InvalidArgument, "grid must be positive");
  constexpr std::size_t kBlock = 8192;
  const std::size_t blocks = (grid + kBlock - 1) / kBlock;
  const auto partial = map_indices(
      blocks,
      [&](std::size_t b) {
        double worst = 0.0;
        const std::size_t hi = std::min(grid, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < hi; ++i) {
          const double x = kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
          // Both sides are pi-periodic; evaluate them on the same reduced
          // argument so the comparison is not swamped by the rounding of 3x.
          const double u = x - kPi * std::round(x / kPi);
          const double s = std::sin(u);
          if (std::abs(s) < 1e-8) continue;
          const double c = std::cos(u);
          worst = std::max(worst, std::abs(std::sin(3.0 * u) / s - (4.0 * c * c - 1.0)));
        }
        return worst;
      },
      exec);
  return partial.empty() ? 0.0 : *std::max_element(partial.begin(), partial.end());
}

Complex big_phi(const AffineFrame& frame, double y1, double y2) {
  Complex sum{0.0, 0.0};
  for (std::size_t l = 0; l < frame.a.size(); ++l) {
    sum += std::polar(1.0, kTwoPi * (frame.a[l] * y1 + frame.b[l] * y2));
  }
  return sum / static_cast<double>(frame.a.size());
}

DistBoundReport dist_bound_fit(const SimilaritySystem& system, std::size_t grid, double exponent,
                               Exec exec) {
  if (grid < 2) raise(ErrorKind::InvalidArgument, "grid must be at least 2");
  if (!(exponent > 0.0)) raise(ErrorKind::InvalidArgument, "exponent must be positive");
  const AffineFrame frame = normalize_frame(system);
  const double step = 1.0 / static_cast<double>(grid);
  const auto rows = map_indices(
      grid,
      [&](std::size_t i) {
        DistBoundReport best{std::numeric_limits<double>::infinity(), exponent, 0.0, 0.0};
        const double y1 = -0.5 + step * (static_cast<double>(i) + 0.5);
        for (std::size_t j = 0; j < grid; ++j) {
          const double y2 = -0.5 + step * (static_cast<double>(j) + 0.5);
          const double dist = std::hypot(y1, y2);
          const double b = (1.0 - std::abs(big_phi(frame, y1, y2))) / std::pow(dist, exponent);
          if (b < best.b) best = {b, exponent, y1, y2};
        }
        return best;
      },
      exec);
  DistBoundReport out = rows.front();
  for (const auto& row : rows) {
    if (row.b < out.b) out = row;
  }
  return out;
}

namespace {

// Unsigned fixed-point number: limbs_[frac] is the integer part, limbs below
// it are 32-bit fractional digits, least significant first.
class Fixed {
 public:
  explicit Fixed(std::size_t frac) : limbs_(frac + 1, 0), frac_(frac) {}

  static Fixed integer(std::size_t frac, std::uint32_t value) {
    Fixed f(frac);
    f.limbs_[frac] = value;
    return f;
  }

  static Fixed from_double(std::size_t frac, double value) {
    Fixed f(frac);
    int exp = 0;
    const double mant = std::frexp(value, &exp);
    const auto bits = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    for (int b = 0; b < 53; ++b) {
      if (!((bits >> b) & 1u)) continue;
      const long long global = static_cast<long long>(32 * frac) + exp - 53 + b;
      if (global < 0) continue;
      f.limbs_[static_cast<std::size_t>(global / 32)] |= std::uint32_t{1} << (global % 32);
    }
    return f;
  }

  void div_small(std::uint32_t d) {
    std::uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      const std::uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur / d);
      rem = cur % d;
    }
  }

  void mul_small(std::uint32_t m) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
      const std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
  }

  void add(const Fixed& o) {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      const std::uint64_t cur = static_cast<std::uint64_t>(limbs_[i]) + o.limbs_[i] + carry;
      limbs_[i] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
  }

  void sub(const Fixed& o) {
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::int64_t cur = static_cast<std::int64_t>(limbs_[i]) - o.limbs_[i] - borrow;
      borrow = cur < 0;
      if (cur < 0) cur += std::int64_t{1} << 32;
      limbs_[i] = static_cast<std::uint32_t>(cur);
    }
  }

  bool less(const Fixed& o) const {
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i];
    }
    return false;
  }

  void shl2() {
    std::uint32_t carry = 0;
    for (auto& limb : limbs_) {
      const std::uint32_t next = limb >> 30;
      limb = (limb << 2) | carry;
      carry = next;
    }
  }

  bool is_zero() const {
    return std::all_of(limbs_.begin(), limbs_.end(), [](std::uint32_t v) { return v == 0; });
  }

  double to_double() const {
    double v = limbs_[frac_];
    double scale = 1.0;
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, frac_); ++k) {
      scale *= 0x1.0p-32;
      v += scale * limbs_[frac_ - k];
    }
    return v;
  }

 private:
  std::vector<std::uint32_t> limbs_;
  std::size_t frac_;
};

// atan(1/k) by its Taylor series.
Fixed arctan_inverse(std::size_t frac, std::uint32_t k) {
  Fixed sum = Fixed::integer(frac, 1);
  sum.div_small(k);
  Fixed power = sum;
  const std::uint32_t k2 = k * k;
  for (std::uint32_t j = 1;; ++j) {
    power.div_small(k2);
    if (power.is_zero()) break;
    Fixed term = power;
    term.div_small(2 * j + 1);
    if (j % 2) {
      sum.sub(term);
    } else {
      sum.add(term);
    }
  }
  return sum;
}

// 2 pi = 32 atan(1/5) - 8 atan(1/239).
Fixed two_pi(std::size_t frac) {
  Fixed a = arctan_inverse(frac, 5);
  a.mul_small(32);
  Fixed b = arctan_inverse(frac, 239);
  b.mul_small(8);
  a.sub(b);
  return a;
}

struct Fraction {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

bool small_fraction(double x, std::int64_t max_q, double tol, Fraction& out) {
  // Continued-fraction convergents of x.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rest);
    if (std::abs(a) > 1e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_q) break;
    if (std::abs(x - static_cast<double>(p2) / static_cast<double>(q2)) <=
        tol * std::max(1.0, std::abs(x))) {
      out = {p2, q2};
      return true;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = rest - a;
    if (frac == 0.0) break;
    rest = 1.0 / frac;
  }
  return false;
}

}  // namespace

ErgodicSample ergodic_sample(double lambda, int count) {
  if (count < 1) raise(ErrorKind::InvalidArgument, "N must be at least 1");
  if (count > (1 << 18)) raise(ErrorKind::InvalidArgument, "N must be at most 2^18");
  if (!std::isfinite(lambda) || std::abs(lambda) > 1e9) {
    raise(ErrorKind::InvalidArgument, "lambda must be finite with |lambda| <= 1e9");
  }
  ErgodicSample out;
  out.a.resize(static_cast<std::size_t>(count));
  out.running_mean.resize(static_cast<std::size_t>(count));

  Fraction fr;
  if (small_fraction(lambda / kTwoPi, 10000, 1e-12, fr)) {
    out.p = fr.p;
    out.q = fr.q;
    const std::int64_t q = fr.q;
    std::int64_t r = ((fr.p % q) + q) % q;
    std::vector<int> seen(static_cast<std::size_t>(q), -1);
    // Follow r_k = 4^k p mod q until a residue repeats (k = 0 included).
    int k = 0;
    while (seen[static_cast<std::size_t>(r)] < 0) {
      seen[static_cast<std::size_t>(r)] = k;
      if (k >= 1 && k <= count) {
        out.a[k - 1] = 2.0 * (1.0 + std::cos(kTwoPi * static_cast<double>(r) / q));
      }
      r = (4 * r) % q;
      ++k;
    }
    out.preperiod = seen[static_cast<std::size_t>(r)];
    out.period = k - out.preperiod;
    out.classification = r == 0 && out.period == 1 ? ErgodicCase::eventually_four
                                                   : ErgodicCase::periodic;
    for (; k <= count; ++k) {
      out.a[k - 1] = 2.0 * (1.0 + std::cos(kTwoPi * static_cast<double>(r) / q));
      r = (4 * r) % q;
    }
  } else {
    out.classification = ErgodicCase::equidistributed;
    const std::size_t frac = (2 * static_cast<std::size_t>(count) + 96) / 32 + 2;
    const Fixed period = two_pi(frac);
    Fixed angle = Fixed::from_double(frac, std::abs(lambda));
    // Initial reduction: subtract floor(lambda / 2pi) * 2pi, then fix up.
    const auto whole = static_cast<std::uint32_t>(std::floor(std::abs(lambda) / kTwoPi));
    if (whole > 0) {
      Fixed shift = period;
      shift.mul_small(whole);
      if (shift.less(angle) || !angle.less(shift)) {
        angle.sub(shift);
      } else {
        shift = period;
        shift.mul_small(whole - 1);
        angle.sub(shift);
      }
    }
    while (!angle.less(period)) angle.sub(period);
    for (int k = 1; k <= count; ++k) {
      angle.shl2();
      while (!angle.less(period)) angle.sub(period);
      out.a[k - 1] = 2.0 * (1.0 + std::cos(angle.to_double()));
    }
  }
  double sum = 0.0;
  for (int k = 0; k < count; ++k) {
    sum += out.a[k];
    out.running_mean[k] = sum / (k + 1);
  }
  return out;
}

}  // namespace favlab
