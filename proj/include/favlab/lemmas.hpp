#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "favlab/ifs.hpp"
#include "favlab/parallel.hpp"
#include "favlab/shadow.hpp"
#include "favlab/spectral.hpp"

namespace favlab {

using AnalyticFn = std::function<Complex(Complex)>;

struct ZeroConfig {
  double zero_tolerance = 1e-9;       // side of the final localization boxes
  double residual_tolerance = 1e-6;   // |f| at a reported zero
  double boundary_tolerance = 1e-6;   // contour samples below this => retry
  int max_jitter = 8;
};

struct ZeroCertificate {
  int count = 0;
  std::vector<Complex> zeros;
  double radius = 0.0;      // radius actually used (after any jitter)
  double sup_bound = 0.0;   // max |f| seen on the contour
  double base_value = 0.0;  // |f(center)|
};

/// Winding number of f along the circle; throws ContourThroughZero when a
/// contour sample has |f| below `boundary_tolerance`.
int winding_number(const AnalyticFn& f, Complex center, double radius,
                   double boundary_tolerance = 1e-6);

/// Argument-principle count of the zeros inside the circle, with zeros
/// localized by recursive quadrisection. A contour that passes within
/// boundary_tolerance of a zero is shrunk by 1e-4 relative and retried.
ZeroCertificate count_zeros(const AnalyticFn& f, Complex center, double radius,
                            const ZeroConfig& cfg = {});

/// Zeros inside an axis-aligned box found by quadrisection (no retry logic;
/// split lines that touch a zero are moved).
std::vector<Complex> zeros_in_box(const AnalyticFn& f, Complex lo, Complex hi,
                                  const ZeroConfig& cfg = {});

/// max |f| on the circle: uniform samples plus golden-section polish of the
/// best few.
double circle_sup(const AnalyticFn& f, Complex center, double radius, std::size_t samples);

struct BlaschkeReport {
  int zeros = 0;
  double sup = 0.0;
  double log2_sup = 0.0;
  bool pass = false;
};

/// Zeros in (1/2)D against log2 of the sup on the unit circle. Requires
/// |f(0)| >= 1.
BlaschkeReport blaschke_check(const AnalyticFn& f, std::size_t sup_samples = 4096,
                              const ZeroConfig& cfg = {});

struct CoverReport {
  int zeros = 0;
  double epsilon = 0.0;
  std::size_t small_samples = 0;  // grid points of (1/4)D with |f| < delta
  std::size_t uncovered = 0;      // ...of which farther than epsilon from every zero
  double worst_excess = 0.0;      // max (distance to nearest zero - epsilon)
  bool pass = false;
};

/// {z in (1/4)D : |f| < delta} inside the union of B(lambda_k, eps) with
/// eps = (9/16)(3 delta)^{1/M}. delta in (0, 1/3), |f(0)| >= 1.
CoverReport small_value_cover_check(const AnalyticFn& f, double delta, std::size_t grid = 201,
                                    const ZeroConfig& cfg = {});

/// sum_l c_l e^{lambda_l x} with complex lambda_l.
struct ExpSum {
  std::vector<Complex> exponents;
  std::vector<Complex> coefficients;
  Complex operator()(double x) const;
};

struct TuranTrial {
  ExpSum f;
  Interval domain;
  IntervalUnion subset;  // E, inside domain
};

struct TuranReport {
  double sup_domain = 0.0;
  double sup_subset = 0.0;
  double a = 0.0;  // smallest A making the inequality hold
};

TuranReport turan_ratio(const TuranTrial& trial);

/// sup of |f| on [lo, hi]: >= 1000 samples per unit length, then golden
/// section around the best samples.
double interval_sup(const std::function<double(double)>& modulus, double lo, double hi);

struct DoublingReport {
  double sup_q = 0.0;
  double sup_half = 0.0;
  double ratio = 1.0;
};

/// sup over Q = [x'-1, x'+1] x [-1, 1] of |f(scale z)| against the sup over
/// the half-size square. Both sups are read on the square boundaries (maximum
/// modulus); the Q value also sees the inner samples so ratio >= 1.
DoublingReport doubling_ratio(const ExpPoly& f, double scale, double x_center,
                              std::size_t samples_per_side = 256);

struct CetsqReport {
  double lhs = 0.0;    // int_0^{1/delta} |sum c e^{i alpha y}|^2 dy
  double s = 0.0;      // int (sum chi_[alpha - delta, alpha + delta])^2
  double ratio = 0.0;  // lhs * delta^2 / s
  double unit_count = 0.0;  // max #frequencies in a unit interval (S_0)
};

/// Composite Simpson for lhs with >= 64 nodes per oscillation of the widest
/// frequency gap; S from the step-function sum of indicators.
CetsqReport cetsq_ratio(const std::vector<double>& frequencies,
                        const std::vector<Complex>& coefficients, double delta = 1.0);

/// Closed-form lhs: sum_{j,k} c_j conj(c_k) int_0^{1/delta} e^{i(a_j - a_k) y} dy.
double cetsq_lhs_exact(const std::vector<double>& frequencies,
                       const std::vector<Complex>& coefficients, double delta = 1.0);

struct DoublingSweep {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t evaluations = 0;
};

/// doubling_ratio of phi_t(r^k .) over every (t, x', k) with k = 0..k_max.
DoublingSweep doubling_sweep(const SimilaritySystem& system, const std::vector<double>& slopes,
                             const std::vector<double>& centers, int k_max,
                             std::size_t samples_per_side = 256, Exec exec = Exec::parallel);

/// Zero-certified cover of the SSV. |P2(x)| <= threshold forces one of its
/// m + 1 factors below s = threshold^{1/(m+1)}, i.e. |phi(u)| <= s at some
/// u = r^k x in [L^-m, L^m]. Zeros of phi near that range come from
/// zeros_in_box; radius is the smallest rho such that a Lipschitz grid scan
/// proves |phi| > s on the real points farther than rho from every zero's
/// real part. The cover is the union over k of L^k [Re lambda - rho, Re lambda + rho]
/// clipped to the window.
struct CertifiedSsvCover {
  IntervalUnion intervals;
  double factor_threshold = 0.0;
  double radius = 0.0;          // in the u variable; inf when no zero was found
  std::vector<Complex> zeros;   // of phi, in the scanned box
  std::size_t grid = 0;         // real-line cells in the Lipschitz scan
};

CertifiedSsvCover certified_ssv_cover(const SimilaritySystem& system, Direction direction,
                                      const ProductSpec& spec, double threshold,
                                      double strip = 1.0);

/// Result of one randomized verification suite. worst_case is the statistic
/// the suite is judged by (max ratio, failure count, min gap...).
struct VerificationReport {
  std::string suite;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double worst_case = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct SuiteConfig {
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  double limit = 0.0;  // suite-specific; 0 -> built-in default
  Exec exec = Exec::parallel;
};

/// blaschke, cover, turan, doubling, cetsq, keyobs, sine, dist.
VerificationReport run_suite(const std::string& suite, const SuiteConfig& cfg);

/// Random trial functions used by the suites, exposed for tests. Both are
/// normalized so |f(0)| = 1.
AnalyticFn random_exp_poly(std::uint64_t seed, std::uint64_t trial, double frequency_bound);

}  // namespace favlab
