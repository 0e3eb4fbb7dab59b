#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "favlab/ifs.hpp"

namespace favlab {

/// Breakpoints closer than this are treated as one point.
inline constexpr double kMergeTolerance = 1e-12;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Sorted, pairwise-disjoint closed intervals.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  /// Sorts and merges; intervals whose gap is <= merge_tolerance are joined.
  static IntervalUnion from(std::vector<Interval> intervals, double merge_tolerance = kMergeTolerance);

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  double measure() const;
  bool contains(double x) const;
  /// True when every interval of `other` lies inside this union, allowing
  /// `slack` at the ends.
  bool covers(const IntervalUnion& other, double slack = 0.0) const;

 private:
  std::vector<Interval> intervals_;
};

/// Integer-valued piecewise-constant function with compact support. Cell i is
/// [breakpoints[i], breakpoints[i+1]) with value values[i]; zero outside.
/// Canonical form: adjacent cells differ, first and last cells are nonzero.
class StepFunction {
 public:
  StepFunction() = default;
  /// Builds from cells and canonicalizes. breakpoints.size() == values.size() + 1
  /// unless both are empty.
  StepFunction(std::vector<double> breakpoints, std::vector<std::int64_t> values);

  /// Sweep-line sum of indicator functions of closed intervals.
  static StepFunction sum_of_indicators(std::span<const Interval> intervals,
                                        double merge_tolerance = kMergeTolerance);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<std::int64_t>& values() const { return values_; }
  std::size_t cell_count() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  /// Value at x; on a breakpoint the cell to the right wins.
  std::int64_t operator()(double x) const;
  std::int64_t max_value() const;

  bool operator==(const StepFunction&) const = default;

 private:
  void canonicalize();
  std::vector<double> breakpoints_;
  std::vector<std::int64_t> values_;
};

double support_measure(const StepFunction& f);
/// Measure of {f >= k}.
double level_measure(const StepFunction& f, std::int64_t k);
/// Measure of {f > k}.
double strict_level_measure(const StepFunction& f, std::int64_t k);
double l2_norm_sq(const StepFunction& f);
double mass(const StepFunction& f);
IntervalUnion level_set(const StepFunction& f, std::int64_t k);

/// mass - support - (k-1) * |{f >= k}| accumulated cell by cell as a sum of
/// nonnegative terms; it can only be negative if f itself is.
double level_identity_slack(const StepFunction& f, std::int64_t k);

StepFunction pointwise_max(const StepFunction& a, const StepFunction& b,
                           double merge_tolerance = kMergeTolerance);

/// Half-width of the shadow of a piece of the given size.
double shadow_half_width(double size, double theta, Shape shape);
/// Coordinate of the orthogonal projection of z onto the line of angle theta.
inline double project_point(Complex z, double theta) {
  return z.real() * std::cos(theta) + z.imag() * std::sin(theta);
}

Interval project_piece(const Piece& piece, double theta, Shape shape);

/// f_{n,theta}: how many level-n pieces cover each point of the line.
StepFunction multiplicity(const SimilaritySystem& system, int depth, double theta,
                          std::uint64_t cap = kDefaultEnumerationCap);

/// Same function built from the explicit piece enumeration and a plain event
/// sort. Kept as the reference for the merge-based kernel.
StepFunction multiplicity_reference(const SimilaritySystem& system, int depth, double theta,
                                    std::uint64_t cap = kDefaultEnumerationCap);

/// f*_N = max over 0 <= n <= N of f_{n,theta}.
StepFunction maximal_profile(const SimilaritySystem& system, int max_depth, double theta,
                             std::uint64_t cap = kDefaultEnumerationCap);

struct ShadowCsvHeader {
  std::string system;
  int depth = 0;
  double theta = 0.0;
};

/// Rows (cell_lo, cell_hi, value) after a '#' header line with theta, n, label.
void write_step_function_csv(std::ostream& out, const StepFunction& f, const ShadowCsvHeader& header);
StepFunction read_step_function_csv(std::istream& in, ShadowCsvHeader* header = nullptr);

}  // namespace favlab
