#include "favlab/stacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "favlab/error.hpp"
#include "favlab/shadow.hpp"

namespace favlab {

std::vector<double> uniform_angles(std::size_t count, double span) {
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    out[j] = span * static_cast<double>(j) / static_cast<double>(count);
  }
  return out;
}

ProductCheckReport product_inequality_report(const SimilaritySystem& system, int depth,
                                             const std::vector<double>& thetas,
                                             const std::vector<std::pair<int, int>>& pairs,
                                             Exec exec, std::uint64_t cap) {
  if (pairs.empty()) raise(ErrorKind::InvalidArgument, "need at least one (K, M) pair");
  std::int64_t top_level = 1;
  for (const auto& [k, m] : pairs) {
    if (k < 1 || m < 1) raise(ErrorKind::InvalidArgument, "K and M must be positive");
    top_level = std::max<std::int64_t>(top_level, 4 * std::int64_t{k} * m);
  }
  piece_count(system, depth, cap);

  struct PerTheta {
    std::vector<ProductRow> rows;
    bool identity = true;
  };
  const auto per_theta = map_indices(
      thetas.size(),
      [&](std::size_t i) {
        PerTheta out;
        const double theta = thetas[i];
        for (int n = 0; n <= depth; ++n) {
          const StepFunction f = multiplicity(system, n, theta, cap);
          for (std::int64_t k = 1; k <= top_level; ++k) {
            if (level_identity_slack(f, k) < 0.0) out.identity = false;
          }
        }
        const StepFunction profile = maximal_profile(system, depth, theta, cap);
        for (const auto& [k, m] : pairs) {
          ProductRow row;
          row.theta = theta;
          row.k = k;
          row.m = m;
          row.f_k = strict_level_measure(profile, k);
          row.f_m = strict_level_measure(profile, m);
          row.f_4km = strict_level_measure(profile, 4 * std::int64_t{k} * m);
          if (row.f_4km > 0.0) row.ratio = row.f_4km / (k * row.f_k * row.f_m);
          out.rows.push_back(row);
        }
        return out;
      },
      exec);

  ProductCheckReport rep;
  for (const auto& pt : per_theta) {
    rep.level_identity_holds = rep.level_identity_holds && pt.identity;
    for (const auto& row : pt.rows) {
      if (row.ratio > rep.worst_ratio) {
        rep.worst_ratio = row.ratio;
        rep.worst_theta = row.theta;
        rep.worst_pair = {row.k, row.m};
      }
      rep.rows.push_back(row);
    }
  }
  return rep;
}

EScanResult e_scan(const EScanConfig& cfg, const SimilaritySystem& system, Exec exec,
                   std::uint64_t cap) {
  if (cfg.k < 1) raise(ErrorKind::InvalidArgument, "K must be at least 1");
  if (cfg.thetas.empty()) raise(ErrorKind::InvalidArgument, "theta grid is empty");
  piece_count(system, cfg.depth, cap);
  EScanResult res;
  res.threshold = std::pow(static_cast<double>(cfg.k), -cfg.k_exponent);
  res.level_measure = map_indices(
      cfg.thetas.size(),
      [&](std::size_t i) {
        return level_measure(maximal_profile(system, cfg.depth, cfg.thetas[i], cap), cfg.k);
      },
      exec);
  res.in_e.resize(cfg.thetas.size());
  for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
    res.in_e[i] = res.level_measure[i] <= res.threshold;
    res.members += res.in_e[i];
  }
  const double span = cfg.span > 0.0 ? cfg.span : std::numbers::pi;
  res.measure = span * static_cast<double>(res.members) / static_cast<double>(cfg.thetas.size());
  return res;
}

L2BoundReport l2_bound_report(const SimilaritySystem& system, int depth, std::int64_t k,
                              const std::vector<double>& thetas, Exec exec, std::uint64_t cap) {
  if (k < 1) raise(ErrorKind::InvalidArgument, "K must be at least 1");
  L2BoundReport rep;
  if (thetas.empty()) return rep;
  piece_count(system, depth, cap);
  rep.vacuous = false;
  const auto rows = map_indices(
      thetas.size(),
      [&](std::size_t i) {
        std::pair<double, int> best{-1.0, 0};
        for (int n = 0; n <= depth; ++n) {
          const double v = l2_norm_sq(multiplicity(system, n, thetas[i], cap)) / k;
          if (v > best.first) best = {v, n};
        }
        return best;
      },
      exec);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first > rep.c) {
      rep.c = rows[i].first;
      rep.worst_theta = thetas[i];
      rep.worst_n = rows[i].second;
    }
  }
  return rep;
}

namespace {

double model(double a, double q, int l) {
  const double ql = std::pow(q, l);
  return a * (1.0 - ql) / (1.0 - q) + ql;
}

// Best a for fixed q (linear least squares in relative units) and its residual.
std::pair<double, double> solve_a(const std::vector<std::pair<int, double>>& series, double q) {
  double num = 0.0, den = 0.0;
  for (const auto& [l, v] : series) {
    const double ql = std::pow(q, l);
    const double g = (1.0 - ql) / (1.0 - q) / v;
    num += g * (v - ql) / v;
    den += g * g;
  }
  const double a = den > 0.0 ? std::max(0.0, num / den) : 0.0;
  double ss = 0.0;
  for (const auto& [l, v] : series) {
    const double r = (model(a, q, l) - v) / v;
    ss += r * r;
  }
  return {a, std::sqrt(ss / static_cast<double>(series.size()))};
}

}  // namespace

BootstrapFit fit_bootstrap(const std::vector<std::pair<int, double>>& series) {
  if (series.size() < 2) raise(ErrorKind::DegenerateSeries, "need at least two points");
  for (const auto& [l, v] : series) {
    if (!(v > 0.0)) raise(ErrorKind::DegenerateSeries, "measures must be positive");
  }
  // Coarse scan of q in (0, 1), then golden section around the best cell.
  constexpr int kCoarse = 2000;
  double best_q = 0.5;
  double best_res = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kCoarse; ++i) {
    const double q = static_cast<double>(i) / kCoarse;
    const double res = solve_a(series, q).second;
    if (res < best_res) {
      best_res = res;
      best_q = q;
    }
  }
  double lo = std::max(1e-9, best_q - 1.0 / kCoarse);
  double hi = std::min(1.0 - 1e-9, best_q + 1.0 / kCoarse);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  double rc = solve_a(series, c).second, rd = solve_a(series, d).second;
  for (int it = 0; it < 80; ++it) {
    if (rc < rd) {
      hi = d;
      d = c;
      rd = rc;
      c = hi - phi * (hi - lo);
      rc = solve_a(series, c).second;
    } else {
      lo = c;
      c = d;
      rc = rd;
      d = lo + phi * (hi - lo);
      rd = solve_a(series, d).second;
    }
  }
  const double q = rc < best_res || rd < best_res ? (rc < rd ? c : d) : best_q;
  const auto [a, res] = solve_a(series, q);
  BootstrapFit fit;
  fit.a = a;
  fit.q = q;
  fit.residual = res;
  fit.limit = a / (1.0 - q);
  return fit;
}

BootstrapReport bootstrap_report(const SimilaritySystem& system, double theta, int depth,
                                 int l_max, std::uint64_t cap) {
  if (depth < 1 || l_max < 1) raise(ErrorKind::InvalidArgument, "N and l_max must be positive");
  piece_count(system, depth * l_max, cap);
  BootstrapReport rep;
  rep.theta = theta;
  rep.depth = depth;
  for (int l = 1; l <= l_max; ++l) {
    const double v = support_measure(multiplicity(system, l * depth, theta, cap));
    if (!rep.series.empty() && v > rep.series.back().second) rep.nonincreasing = false;
    rep.series.emplace_back(l, v);
  }
  if (rep.series.size() >= 2) rep.fit = fit_bootstrap(rep.series);
  return rep;
}

BadDirectionReport bad_direction_scan(const SimilaritySystem& system, const ProductSpec& spec,
                                      double tau, const std::vector<Direction>& directions,
                                      double span, std::size_t x_grid, Exec exec) {
  validate(spec);
  if (!(tau >= 0.0)) raise(ErrorKind::InvalidArgument, "tau must be non-negative");
  if (directions.empty()) raise(ErrorKind::InvalidArgument, "direction grid is empty");
  const Interval window = product_window(spec, system);
  const double r = system.ratio();
  const int k_lo = spec.n - spec.m - spec.ell;
  const int k_hi = spec.n - spec.m - 1;

  BadDirectionReport rep;
  rep.threshold = std::exp(-tau * spec.ell);

  // Each factor f(r^k x) has |d/dx| <= r^k * max|freq|, and every factor is
  // bounded by 1, so |P_flat'| <= sum_k r^k * max|freq|.
  double freq = 0.0;
  for (const auto& d : directions) freq = std::max(freq, phi(system, d).frequency_bound());
  double deriv = 0.0;
  double scale = std::pow(r, k_lo);
  for (int k = k_lo; k <= k_hi; ++k) {
    deriv += scale * freq;
    scale *= r;
  }
  std::size_t needed = 2;
  if (deriv > 0.0) {
    const double h = rep.threshold / (10.0 * deriv);
    needed = static_cast<std::size_t>(std::ceil(window.length() / h)) + 1;
  }
  rep.x_samples = std::max(needed, x_grid);
  const double h = window.length() / static_cast<double>(rep.x_samples - 1);

  const auto flags = map_indices(
      directions.size(),
      [&](std::size_t i) {
        const ExpPoly f = phi(system, directions[i]);
        for (std::size_t j = 0; j < rep.x_samples; ++j) {
          const double x = window.lo + h * static_cast<double>(j);
          if (std::abs(scaled_product(f, r, k_lo, k_hi, x)) > rep.threshold) {
            return static_cast<unsigned char>(1);
          }
        }
        return static_cast<unsigned char>(0);
      },
      exec);
  for (unsigned char b : flags) rep.bad.push_back(b != 0);
  for (bool b : rep.bad) rep.bad_count += b;
  rep.measure = span * static_cast<double>(rep.bad_count) / static_cast<double>(directions.size());
  return rep;
}

}  // namespace favlab
