#include "favlab/favard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "favlab/error.hpp"
#include "favlab/kernels.hpp"

namespace favlab {

double projection_mean(const SimilaritySystem& system, int n, int grid, double lo, double span,
                       Exec exec, std::uint64_t cap) {
  if (grid < 1) raise(ErrorKind::InvalidArgument, "grid must be positive");
  std::vector<double> thetas(static_cast<std::size_t>(grid));
  for (int j = 0; j < grid; ++j) thetas[j] = lo + span * j / grid;
  const auto lengths = kernels::projection_lengths(system, n, thetas, exec, cap);
  return ordered_sum(lengths) / grid;
}

FavardResult favard_length(const SimilaritySystem& system, int n, const QuadratureConfig& cfg,
                           Exec exec, std::uint64_t cap) {
  if (cfg.grid_size < 8) raise(ErrorKind::InvalidArgument, "grid_size must be at least 8");
  if (!(cfg.target_rel_error > 0.0)) {
    raise(ErrorKind::InvalidArgument, "target_rel_error must be positive");
  }
  if (cfg.refinement_limit < 2) raise(ErrorKind::InvalidArgument, "refinement_limit must be >= 2");
  piece_count(system, n, cap);

  const double pi = std::numbers::pi;
  FavardResult out;
  out.n = n;
  out.label = system.label();

  // T(2M) reuses T(M): the new angles are the odd multiples of pi / 2M.
  int grid = cfg.grid_size;
  double trap = projection_mean(system, n, grid, 0.0, pi, exec, cap);
  double previous_richardson = 0.0;
  bool have_previous = false;
  for (int level = 1; level <= cfg.refinement_limit; ++level) {
    const double odd = projection_mean(system, n, grid, pi / (2.0 * grid), pi, exec, cap);
    const double refined = 0.5 * (trap + odd);
    grid *= 2;
    const double richardson = (4.0 * refined - trap) / 3.0;
    trap = refined;
    out.value = richardson;
    out.grid = grid;
    if (have_previous) {
      out.error_estimate = std::abs(richardson - previous_richardson);
      if (out.error_estimate < cfg.target_rel_error * std::abs(richardson)) {
        out.converged = true;
        break;
      }
    }
    previous_richardson = richardson;
    have_previous = true;
  }
  return out;
}

double buffon_reach(const SimilaritySystem& system) { return system.bounding_radius(); }

bool needle_hits(const SimilaritySystem& system, int n, double theta, double x) {
  return kernels::needle_hits(kernels::project_system(system, n, theta), x);
}

BuffonEstimate buffon_estimate(const SimilaritySystem& system, int n, std::uint64_t trials,
                               std::uint64_t seed, Exec exec) {
  if (trials < 1) raise(ErrorKind::InvalidArgument, "trials must be at least 1");
  if (n < 0) raise(ErrorKind::InvalidArgument, "depth must be non-negative");
  const double reach = buffon_reach(system);
  const auto count = kernels::buffon_hits(system, n, trials, seed, reach, exec);
  BuffonEstimate out;
  out.hits = count.hits;
  out.trials = count.trials;
  const double p = static_cast<double>(count.hits) / static_cast<double>(count.trials);
  out.estimate = 2.0 * reach * p;
  out.std_error = 2.0 * reach * std::sqrt(p * (1.0 - p) / static_cast<double>(count.trials));
  return out;
}

std::string_view to_string(DecayModel model) {
  switch (model) {
    case DecayModel::power: return "power";
    case DecayModel::sqrtlog: return "sqrtlog";
    case DecayModel::loglower: return "loglower";
  }
  return "power";
}

DecayModel decay_model_from_string(std::string_view name) {
  if (name == "power") return DecayModel::power;
  if (name == "sqrtlog") return DecayModel::sqrtlog;
  if (name == "loglower") return DecayModel::loglower;
  raise(ErrorKind::InvalidArgument, "unknown decay model '" + std::string(name) + "'");
}

namespace {

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double rms = 0.0;
};

Line least_squares(const std::vector<double>& u, const std::vector<double>& v) {
  const double k = static_cast<double>(u.size());
  double su = 0, sv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    su += u[i];
    sv += v[i];
  }
  const double mu = su / k, mv = sv / k;
  double suu = 0, suv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
  }
  if (suu == 0.0) raise(ErrorKind::DegenerateSeries, "abscissae are all equal");
  Line line;
  line.slope = suv / suu;
  line.intercept = mv - line.slope * mu;
  double ss = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = v[i] - (line.intercept + line.slope * u[i]);
    ss += r * r;
  }
  line.rms = std::sqrt(ss / k);
  return line;
}

}  // namespace

DecayFit fit_decay(const std::vector<std::pair<int, double>>& series, DecayModel model) {
  if (series.size() < 3) raise(ErrorKind::DegenerateSeries, "need at least three points");
  const int min_n = model == DecayModel::power ? 1 : 2;
  bool constant = true;
  for (const auto& [n, fav] : series) {
    if (n < min_n) {
      raise(ErrorKind::DegenerateSeries,
            "n must be >= " + std::to_string(min_n) + " for the " + std::string(to_string(model)) +
                " model");
    }
    if (!(fav > 0.0) || !std::isfinite(fav)) {
      raise(ErrorKind::DegenerateSeries, "values must be positive and finite");
    }
    if (fav != series.front().second) constant = false;
  }
  if (constant) raise(ErrorKind::DegenerateSeries, "constant series");

  DecayFit fit;
  fit.model = model;
  std::vector<double> u, v;
  for (const auto& [n, fav] : series) {
    const double dn = n;
    switch (model) {
      case DecayModel::power: u.push_back(std::log(dn)); break;
      case DecayModel::sqrtlog: u.push_back(std::sqrt(std::log(dn))); break;
      case DecayModel::loglower: u.push_back(fav * dn / std::log(dn)); break;
    }
    v.push_back(std::log(fav));
  }
  if (model == DecayModel::loglower) {
    double sum = 0, lowest = u.front();
    for (double r : u) {
      sum += r;
      lowest = std::min(lowest, r);
    }
    const double mean = sum / static_cast<double>(u.size());
    double ss = 0;
    for (double r : u) ss += (r - mean) * (r - mean);
    fit.c = mean;
    fit.exponent = lowest;
    fit.residual = std::sqrt(ss / static_cast<double>(u.size())) / mean;
    return fit;
  }
  const Line line = least_squares(u, v);
  fit.c = std::exp(line.intercept);
  fit.exponent = -line.slope;
  fit.residual = line.rms;
  return fit;
}

}  // namespace favlab
