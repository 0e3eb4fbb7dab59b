#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "favlab/ifs.hpp"
#include "favlab/parallel.hpp"
#include "favlab/spectral.hpp"

namespace favlab {

/// theta_j = span * j / count, j = 0..count-1.
std::vector<double> uniform_angles(std::size_t count, double span);

struct ProductRow {
  double theta = 0.0;
  int k = 0;
  int m = 0;
  double f_k = 0.0;    // |{f*_N > K}|
  double f_m = 0.0;    // |{f*_N > M}|
  double f_4km = 0.0;  // |{f*_N > 4KM}|
  double ratio = 0.0;  // f_4km / (K f_k f_m); 0 when f_4km == 0
};

struct ProductCheckReport {
  std::vector<ProductRow> rows;  // theta-major, pair-minor
  double worst_ratio = 0.0;
  double worst_theta = 0.0;
  std::pair<int, int> worst_pair{0, 0};
  /// mass >= support + (K-1) |A_K| held on every profile and K tested.
  bool level_identity_holds = true;
};

/// Strict level sets of the maximal profile f*_N for every theta and pair.
/// The level identity is checked on each f_{n,theta}, n <= N, for K = 1..4KM.
ProductCheckReport product_inequality_report(const SimilaritySystem& system, int depth,
                                             const std::vector<double>& thetas,
                                             const std::vector<std::pair<int, int>>& pairs,
                                             Exec exec = Exec::parallel,
                                             std::uint64_t cap = kDefaultEnumerationCap);

struct EScanConfig {
  int depth = 3;                // N
  std::int64_t k = 2;           // K
  std::vector<double> thetas;   // angles in [0, pi)
  double k_exponent = 3.0;      // E := {theta : |A*_K| <= K^-k_exponent}
  double span = 0.0;            // parameter length for the measure; 0 -> pi
};

struct EScanResult {
  std::vector<double> level_measure;  // |A*_K| per theta
  std::vector<bool> in_e;
  std::size_t members = 0;
  double measure = 0.0;  // (members / grid) * span
  double threshold = 0.0;
};

EScanResult e_scan(const EScanConfig& cfg, const SimilaritySystem& system,
                   Exec exec = Exec::parallel, std::uint64_t cap = kDefaultEnumerationCap);

struct L2BoundReport {
  bool vacuous = true;
  double c = 0.0;  // max over sampled theta, n <= N of ||f_{n,theta}||^2 / K
  double worst_theta = 0.0;
  int worst_n = 0;
};

L2BoundReport l2_bound_report(const SimilaritySystem& system, int depth, std::int64_t k,
                              const std::vector<double>& thetas, Exec exec = Exec::parallel,
                              std::uint64_t cap = kDefaultEnumerationCap);

/// Two-term model m_l = a (1 - q^l) / (1 - q) + q^l, the shape of the
/// bootstrap recursion (a geometric series plus an exponential remainder).
struct BootstrapFit {
  double a = 0.0;
  double q = 0.0;
  double residual = 0.0;  // RMS relative residual
  double limit = 0.0;     // a / (1 - q)
};

struct BootstrapReport {
  double theta = 0.0;
  int depth = 0;
  std::vector<std::pair<int, double>> series;  // (l, |L_{theta, l N}|)
  bool nonincreasing = true;
  BootstrapFit fit;
};

BootstrapReport bootstrap_report(const SimilaritySystem& system, double theta, int depth,
                                 int l_max, std::uint64_t cap = kDefaultEnumerationCap);

BootstrapFit fit_bootstrap(const std::vector<std::pair<int, double>>& series);

struct BadDirectionReport {
  std::vector<bool> bad;     // per direction
  std::size_t bad_count = 0;
  double measure = 0.0;      // (bad / grid) * span
  double threshold = 0.0;    // e^{-tau ell}
  std::size_t x_samples = 0;
};

/// Directions where some grid x in [L^{n-m}, L^n] has |P_flat(x)| > e^{-tau ell}.
/// The x grid is refined until one cell moves |P_flat| by less than
/// threshold / 10 according to its derivative bound.
BadDirectionReport bad_direction_scan(const SimilaritySystem& system, const ProductSpec& spec,
                                      double tau, const std::vector<Direction>& directions,
                                      double span, std::size_t x_grid = 0,
                                      Exec exec = Exec::parallel);

}  // namespace favlab
