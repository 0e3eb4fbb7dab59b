#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "favlab/ifs.hpp"
#include "favlab/parallel.hpp"

namespace favlab {

struct QuadratureConfig {
  int grid_size = 64;          // starting number of angles, >= 8
  int refinement_limit = 10;   // maximum number of grid doublings
  double target_rel_error = 1e-6;
};

struct FavardResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int n = 0;
  std::string label;
  bool converged = false;  // false: refinement_limit hit before target
  int grid = 0;            // angles in the finest grid used
};

/// (1/pi) * integral over [0, pi) of |proj_theta(G_n)|. The integrand is pi
/// periodic, so the trapezoid rule is the sample mean on theta_j = j pi / M.
/// M doubles until two successive Richardson values agree to
/// target_rel_error; error_estimate is their difference.
FavardResult favard_length(const SimilaritySystem& system, int n, const QuadratureConfig& cfg = {},
                           Exec exec = Exec::parallel, std::uint64_t cap = kDefaultEnumerationCap);

/// Plain trapezoid mean of |proj_theta(G_n)| over `grid` equispaced angles in
/// [lo, lo + span). Used by the dense-grid oracle and the symmetry check.
double projection_mean(const SimilaritySystem& system, int n, int grid, double lo, double span,
                       Exec exec = Exec::parallel, std::uint64_t cap = kDefaultEnumerationCap);

/// Half-width of the offset window used by the needle simulator: the
/// radius of the smallest origin-centred disc holding the root region.
double buffon_reach(const SimilaritySystem& system);

/// Does the line {x} x R in the theta-rotated frame meet G_n?
bool needle_hits(const SimilaritySystem& system, int n, double theta, double x);

struct BuffonEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

/// theta ~ U[0, pi), x ~ U[-rho, rho] with rho = buffon_reach; the estimate is
/// 2 rho * (hit fraction). Bitwise deterministic in (seed, trials).
BuffonEstimate buffon_estimate(const SimilaritySystem& system, int n, std::uint64_t trials,
                               std::uint64_t seed, Exec exec = Exec::parallel);

enum class DecayModel { power, sqrtlog, loglower };

std::string_view to_string(DecayModel model);
DecayModel decay_model_from_string(std::string_view name);

/// power:    Fav = C n^-p               params = (C, p)
/// sqrtlog:  Fav = C exp(-c sqrt(log n)) params = (C, c)
/// loglower: Fav * n / log n             params = (mean, inf) of that ratio
/// residual is the RMS residual in the transformed coordinates (relative
/// spread for loglower).
struct DecayFit {
  DecayModel model = DecayModel::power;
  double c = 0.0;
  double exponent = 0.0;
  double residual = 0.0;
};

DecayFit fit_decay(const std::vector<std::pair<int, double>>& series, DecayModel model);

}  // namespace favlab
