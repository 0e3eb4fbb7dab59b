#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "favlab/ifs.hpp"
#include "favlab/parallel.hpp"
#include "favlab/shadow.hpp"

namespace favlab {

/// normalization * sum_j coefficients[j] * exp(i * frequencies[j] * z), with
/// unit-modulus coefficients.
class ExpPoly {
 public:
  ExpPoly() = default;
  ExpPoly(std::vector<double> frequencies, std::vector<Complex> coefficients,
          double normalization = 1.0);
  /// All coefficients 1.
  ExpPoly(std::vector<double> frequencies, double normalization);

  Complex operator()(double x) const;
  Complex operator()(Complex z) const;

  const std::vector<double>& frequencies() const { return frequencies_; }
  const std::vector<Complex>& coefficients() const { return coefficients_; }
  double normalization() const { return normalization_; }
  std::size_t size() const { return frequencies_.size(); }
  /// max |frequency|
  double frequency_bound() const;

 private:
  std::vector<double> frequencies_;
  std::vector<Complex> coefficients_;
  double normalization_ = 1.0;
};

/// Either an angle theta or a slope t of the normalized t-form.
struct Direction {
  enum class Kind { theta, slope };
  Kind kind = Kind::theta;
  double value = 0.0;

  static Direction angle(double theta) { return {Kind::theta, theta}; }
  static Direction slope(double t) { return {Kind::slope, t}; }
};

/// Affine coordinates of the map centres in the frame that sends
/// centre[basis[0]] -> (0,0), centre[basis[1]] -> (1,0), centre[basis[2]] -> (0,1).
struct AffineFrame {
  std::array<std::size_t, 3> basis{0, 1, 2};
  std::vector<double> a;
  std::vector<double> b;
};

/// Picks the first basis triple in letter order whose centres are not
/// collinear. Systems with L < 3 or all centres collinear are rejected.
AffineFrame normalize_frame(const SimilaritySystem& system);

/// theta-form: (1/L) sum_l exp(-i (q_l / r) x), q_l the projection of centre l.
/// With this scaling nu_hat_n(x) = prod_{k=1..n} phi(r^k x).
ExpPoly phi_theta(const SimilaritySystem& system, double theta);

/// t-form: (1/L) sum_l exp(i (a_l + b_l t) x); for a three-map system this is
/// (1 + e^{ix} + e^{itx}) / 3.
ExpPoly phi_t(const AffineFrame& frame, double t);

ExpPoly phi(const SimilaritySystem& system, Direction direction);
Complex phi_eval(const SimilaritySystem& system, Direction direction, double x);

/// The slope t and frequency scale s with |phi_theta(x)| = |phi_t(s x)|.
struct SlopeChart {
  double t = 0.0;
  double scale = 0.0;
};
SlopeChart slope_chart(const SimilaritySystem& system, const AffineFrame& frame, double theta);

/// prod_{k = k_lo..k_hi} f(r^k x), evaluated left to right. Empty range -> 1.
Complex scaled_product(const ExpPoly& f, double r, int k_lo, int k_hi, double x);
Complex scaled_product(const ExpPoly& f, double r, int k_lo, int k_hi, Complex z);

/// prod_{k=1..n} phi(r^k x).
Complex nu_hat_eval(const SimilaritySystem& system, Direction direction, int n, double x);

struct ProductSpec {
  int n = 0;
  int m = 0;
  int ell = 0;
};

/// Throws SpecInvalid unless 0 < m, 0 < ell and m + ell < n.
void validate(const ProductSpec& spec);

/// P1 = prod_{k=1}^{n-m}, P2 = prod_{k=n-m}^{n} (both contain k = n - m, as
/// written in the source formulas), sharp = prod_{k=1}^{n-m-ell-1},
/// flat = prod_{k=n-m-ell}^{n-m-1}, and p1_trimmed = prod_{k=1}^{n-m-1} so
/// that sharp * flat == p1_trimmed.
struct ProductValues {
  Complex p1;
  Complex p2;
  Complex sharp;
  Complex flat;
  Complex p1_trimmed;
};

ProductValues split_products(const ProductSpec& spec, const SimilaritySystem& system,
                             Direction direction, double x);

/// Frequency window [L^{n-m}, L^n] (L = 1 / ratio).
Interval product_window(const ProductSpec& spec, const SimilaritySystem& system);

struct SsvCover {
  IntervalUnion intervals;
  double threshold = 0.0;
  std::size_t component_count = 0;
  Interval window;
  double step = 0.0;
  std::size_t samples = 0;
  std::size_t small_samples = 0;
};

/// Uniform scan of the window; runs of samples with |P2| <= threshold become
/// intervals padded by one grid step (clipped to the window).
SsvCover ssv_scan(const SimilaritySystem& system, Direction direction, const ProductSpec& spec,
                  double threshold, std::size_t grid_size, Exec exec = Exec::parallel);

struct ParsevalReport {
  double spectral = 0.0;  // (1/2pi) int_{-R}^{R} |f_hat|^2
  double spatial = 0.0;   // int f^2 from the step function
  double rel_error = 0.0;
  double range = 0.0;
  std::size_t nodes = 0;
};

/// f_hat(xi) = L^n nu_hat_n(xi) * 2 sin(s xi) / xi with s the depth-n shadow
/// half-width. Composite Simpson on [0, R] using the evenness of |f_hat|^2;
/// at least `grid` nodes and at least 16 per unit length.
ParsevalReport parseval_check(const SimilaritySystem& system, double theta, int n, double range,
                              std::size_t grid = 0, Exec exec = Exec::parallel);

struct GapReport {
  double min_gap = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// |Phi|^2 - a (|4cos^2 x - 1|^2 + |4cos^2 y - 1|^2) with Phi = 1 + e^{ix} + e^{iy}.
double key_obs_gap(double a, double x, double y);

/// Minimum gap over the grid x_i = 2 pi i / grid, y_j = 2 pi j / grid.
GapReport key_obs_check(double a, std::size_t grid, Exec exec = Exec::parallel);

/// Largest a for which the gap is >= 0 on the grid (skipping points where the
/// right-hand bracket is below 1e-12).
double key_obs_best_a(std::size_t grid, Exec exec = Exec::parallel);

/// max |sin 3x / sin x - (4 cos^2 x - 1)| over x_i = 2 pi (i + 1/2) / grid,
/// skipping |sin x| < 1e-8.
double sine_identity_check(std::size_t grid, Exec exec = Exec::parallel);

struct DistBoundReport {
  double b = 0.0;
  double exponent = 1.0;
  double y1 = 0.0;
  double y2 = 0.0;
};

/// Phi(y) = (1/L) sum_l exp(2 pi i <(a_l, b_l), y>) in the normalized frame.
Complex big_phi(const AffineFrame& frame, double y1, double y2);

/// Largest b with |Phi(y)| <= 1 - b dist(y, Z^2)^exponent on a grid x grid
/// sampling of [-1/2, 1/2)^2 (lattice point excluded).
DistBoundReport dist_bound_fit(const SimilaritySystem& system, std::size_t grid,
                               double exponent = 1.0, Exec exec = Exec::parallel);

enum class ErgodicCase { periodic = 1, eventually_four = 2, equidistributed = 3 };

struct ErgodicSample {
  std::vector<double> a;            // a_k = 2 (1 + cos(4^k lambda)), k = 1..N
  std::vector<double> running_mean; // mean of a_1..a_k
  ErgodicCase classification = ErgodicCase::equidistributed;
  // Rational lambda / 2pi = p / q (classifications 1, 2 only).
  std::int64_t p = 0;
  std::int64_t q = 0;
  int preperiod = 0;
  int period = 0;
};

/// lambda / 2pi is tested against fractions p / q with q <= 10^4 (tolerance
/// 1e-12); a match is followed exactly in Z / qZ. Otherwise 4^k lambda mod 2pi
/// is computed in fixed point with 2N + 96 fractional bits, so every a_k is
/// correct to double precision. N <= 2^18.
ErgodicSample ergodic_sample(double lambda, int count);

}  // namespace favlab
