#pragma once

// Hot loops shared by the favard, spectral and stacks modules. Each kernel has
// a parallel form (OpenMP over independent work items, ordered reduction) and
// either an Exec::serial switch or a separate *_reference routine that takes
// the plain route; tests pin the two together and bench/ times them.

#include <cstdint>
#include <span>
#include <vector>

#include "favlab/ifs.hpp"
#include "favlab/parallel.hpp"

namespace favlab::kernels {

/// Sorted projections onto angle theta of all level-n piece centers, built
/// level by level as an L-way merge of already sorted runs: O(L^n log L).
std::vector<double> sorted_projected_centers(const SimilaritySystem& system, int depth,
                                             double theta,
                                             std::uint64_t cap = kDefaultEnumerationCap);

/// Reference: enumerate every piece, project, std::sort.
std::vector<double> sorted_projected_centers_reference(const SimilaritySystem& system, int depth,
                                                       double theta,
                                                       std::uint64_t cap = kDefaultEnumerationCap);

/// Length of the union of [p - h, p + h] over sorted p.
double union_length_sorted(std::span<const double> sorted_centers, double half_width);

/// |proj_theta(G_n)| for every theta.
std::vector<double> projection_lengths(const SimilaritySystem& system, int depth,
                                       std::span<const double> thetas, Exec exec = Exec::parallel,
                                       std::uint64_t cap = kDefaultEnumerationCap);

/// |proj_theta(G_n)| through the explicit intervals and a multiplicity sweep.
double projection_length_reference(const SimilaritySystem& system, int depth, double theta,
                                   std::uint64_t cap = kDefaultEnumerationCap);

/// Level data needed to decide needle hits without enumerating G_n.
struct ProjectedSystem {
  std::vector<double> offsets;      // projected map centers
  std::vector<double> scale;        // ratio^k, k = 0..depth
  std::vector<double> half_width;   // shadow half-width of a depth-k piece
  int depth = 0;
};

ProjectedSystem project_system(const SimilaritySystem& system, int depth, double theta);

/// Depth-first search with shadow pruning: does x lie in proj_theta(G_n)?
bool needle_hits(const ProjectedSystem& projected, double x);

struct HitCount {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

/// Buffon trials: trial i draws (theta, x) from Philox block i of stream
/// (seed, 0) with theta ~ U[0, pi) and x ~ U[-reach, reach].
HitCount buffon_hits(const SimilaritySystem& system, int depth, std::uint64_t trials,
                     std::uint64_t seed, double reach, Exec exec = Exec::parallel);

}  // namespace favlab::kernels
