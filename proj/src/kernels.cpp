#include "favlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "favlab/error.hpp"
#include "favlab/rng.hpp"
#include "favlab/shadow.hpp"

namespace favlab::kernels {

namespace {

/// Merges `runs` consecutive sorted runs of equal width in `data`.
void merge_runs(std::vector<double>& data, std::size_t width, std::vector<double>& scratch) {
  scratch.resize(data.size());
  while (width < data.size()) {
    for (std::size_t lo = 0; lo < data.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, data.size());
      const std::size_t hi = std::min(lo + 2 * width, data.size());
      std::merge(data.begin() + static_cast<std::ptrdiff_t>(lo),
                 data.begin() + static_cast<std::ptrdiff_t>(mid),
                 data.begin() + static_cast<std::ptrdiff_t>(mid),
                 data.begin() + static_cast<std::ptrdiff_t>(hi),
                 scratch.begin() + static_cast<std::ptrdiff_t>(lo));
    }
    data.swap(scratch);
    width *= 2;
  }
}

}  // namespace

std::vector<double> sorted_projected_centers(const SimilaritySystem& system, int depth,
                                             double theta, std::uint64_t cap) {
  piece_count(system, depth, cap);
  const std::size_t count = system.size();
  std::vector<double> offsets(count);
  for (std::size_t l = 0; l < count; ++l) offsets[l] = project_point(system.center(l), theta);
  const double r = system.ratio();

  std::vector<double> current{0.0};
  std::vector<double> next;
  std::vector<double> scratch;
  for (int k = 0; k < depth; ++k) {
    const std::size_t width = current.size();
    next.resize(width * count);
    for (std::size_t l = 0; l < count; ++l) {
      double* out = next.data() + l * width;
      for (std::size_t i = 0; i < width; ++i) out[i] = offsets[l] + r * current[i];
    }
    merge_runs(next, width, scratch);
    current.swap(next);
  }
  return current;
}

std::vector<double> sorted_projected_centers_reference(const SimilaritySystem& system, int depth,
                                                       double theta, std::uint64_t cap) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(piece_count(system, depth, cap)));
  for_each_piece(
      system, depth, [&](const Piece& p) { out.push_back(project_point(p.center, theta)); }, cap);
  std::sort(out.begin(), out.end());
  return out;
}

double union_length_sorted(std::span<const double> sorted_centers, double half_width) {
  if (sorted_centers.empty()) return 0.0;
  double total = 0.0;
  double lo = sorted_centers.front() - half_width;
  double hi = sorted_centers.front() + half_width;
  for (std::size_t i = 1; i < sorted_centers.size(); ++i) {
    const double a = sorted_centers[i] - half_width;
    const double b = sorted_centers[i] + half_width;
    if (a <= hi) {
      hi = std::max(hi, b);
    } else {
      total += hi - lo;
      lo = a;
      hi = b;
    }
  }
  return total + (hi - lo);
}

std::vector<double> projection_lengths(const SimilaritySystem& system, int depth,
                                       std::span<const double> thetas, Exec exec,
                                       std::uint64_t cap) {
  piece_count(system, depth, cap);
  const double size = piece_size(system, depth);
  return map_indices(
      thetas.size(),
      [&](std::size_t i) {
        const double theta = thetas[i];
        const auto centers = sorted_projected_centers(system, depth, theta, cap);
        return union_length_sorted(centers, shadow_half_width(size, theta, system.shape()));
      },
      exec);
}

double projection_length_reference(const SimilaritySystem& system, int depth, double theta,
                                   std::uint64_t cap) {
  return support_measure(multiplicity_reference(system, depth, theta, cap));
}

ProjectedSystem project_system(const SimilaritySystem& system, int depth, double theta) {
  if (depth < 0) raise(ErrorKind::InvalidArgument, "depth must be non-negative");
  ProjectedSystem p;
  p.depth = depth;
  p.offsets.resize(system.size());
  for (std::size_t l = 0; l < system.size(); ++l) {
    p.offsets[l] = project_point(system.center(l), theta);
  }
  p.scale.resize(static_cast<std::size_t>(depth) + 1);
  p.half_width.resize(static_cast<std::size_t>(depth) + 1);
  p.scale[0] = 1.0;
  for (int k = 1; k <= depth; ++k) p.scale[k] = p.scale[k - 1] * system.ratio();
  for (int k = 0; k <= depth; ++k) {
    p.half_width[k] = shadow_half_width(system.root_size() * p.scale[k], theta, system.shape());
  }
  return p;
}

namespace {

bool hits_from(const ProjectedSystem& p, int k, double center, double x) {
  const double slack = k < p.depth ? kContainmentTolerance * p.scale[k] : 0.0;
  if (std::abs(x - center) > p.half_width[k] + slack) return false;
  if (k == p.depth) return true;
  const double step = p.scale[k];
  for (double offset : p.offsets) {
    if (hits_from(p, k + 1, center + step * offset, x)) return true;
  }
  return false;
}

}  // namespace

bool needle_hits(const ProjectedSystem& projected, double x) {
  return hits_from(projected, 0, 0.0, x);
}

HitCount buffon_hits(const SimilaritySystem& system, int depth, std::uint64_t trials,
                     std::uint64_t seed, double reach, Exec exec) {
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  const CounterRng rng(seed, 0);
  const auto per_block = map_indices(
      static_cast<std::size_t>(blocks),
      [&](std::size_t b) {
        const std::uint64_t begin = b * kBlock;
        const std::uint64_t end = std::min(trials, begin + kBlock);
        std::uint64_t hits = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
          const auto words = rng.block(t);
          const double theta = std::numbers::pi * to_unit_double(words[0], words[1]);
          const double x = reach * (2.0 * to_unit_double(words[2], words[3]) - 1.0);
          if (needle_hits(project_system(system, depth, theta), x)) ++hits;
        }
        return hits;
      },
      exec);
  HitCount out;
  out.trials = trials;
  for (auto h : per_block) out.hits += h;
  return out;
}

}  // namespace favlab::kernels
