#include "favlab/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "favlab/error.hpp"
#include "favlab/kernels.hpp"

namespace favlab {

// ---------------------------------------------------------------------------
// IntervalUnion

IntervalUnion IntervalUnion::from(std::vector<Interval> intervals, double merge_tolerance) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalUnion u;
  for (const auto& iv : intervals) {
    if (iv.hi < iv.lo) continue;
    if (!u.intervals_.empty() && iv.lo <= u.intervals_.back().hi + merge_tolerance) {
      u.intervals_.back().hi = std::max(u.intervals_.back().hi, iv.hi);
    } else {
      u.intervals_.push_back(iv);
    }
  }
  return u;
}

double IntervalUnion::measure() const {
  double s = 0.0;
  for (const auto& iv : intervals_) s += iv.length();
  return s;
}

bool IntervalUnion::contains(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  return std::prev(it)->contains(x);
}

bool IntervalUnion::covers(const IntervalUnion& other, double slack) const {
  for (const auto& iv : other.intervals()) {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), iv.lo + slack,
                               [](double v, const Interval& c) { return v < c.lo; });
    if (it == intervals_.begin()) return false;
    const auto& host = *std::prev(it);
    if (iv.lo + slack < host.lo || iv.hi - slack > host.hi) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// StepFunction

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<std::int64_t> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty()) {
    breakpoints_.clear();
    return;
  }
  if (breakpoints_.size() != values_.size() + 1) {
    raise(ErrorKind::InvalidArgument, "step function needs one more breakpoint than values");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] <= breakpoints_[i + 1])) {
      raise(ErrorKind::InvalidArgument, "step function breakpoints must be sorted");
    }
  }
  canonicalize();
}

void StepFunction::canonicalize() {
  struct Cell {
    double lo, hi;
    std::int64_t value;
  };
  std::vector<Cell> cells;
  cells.reserve(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double lo = breakpoints_[i];
    const double hi = breakpoints_[i + 1];
    if (!(hi > lo)) continue;
    if (!cells.empty() && cells.back().value == values_[i] && cells.back().hi == lo) {
      cells.back().hi = hi;
    } else {
      cells.push_back({lo, hi, values_[i]});
    }
  }
  std::size_t first = 0;
  std::size_t last = cells.size();
  while (first < last && cells[first].value == 0) ++first;
  while (last > first && cells[last - 1].value == 0) --last;
  breakpoints_.clear();
  values_.clear();
  for (std::size_t i = first; i < last; ++i) {
    breakpoints_.push_back(cells[i].lo);
    values_.push_back(cells[i].value);
  }
  if (!values_.empty()) breakpoints_.push_back(cells[last - 1].hi);
}

namespace {

struct Event {
  double x;
  int delta;
};

/// Events sorted by position; clusters closer than the tolerance collapse
/// onto their first position.
StepFunction sweep_sorted_events(const std::vector<Event>& events, double merge_tolerance) {
  std::vector<double> bp;
  std::vector<std::int64_t> vals;
  std::int64_t running = 0;
  std::size_t i = 0;
  while (i < events.size()) {
    const double x = events[i].x;
    double last = x;
    std::int64_t delta = 0;
    while (i < events.size() && events[i].x - last <= merge_tolerance) {
      last = events[i].x;
      delta += events[i].delta;
      ++i;
    }
    running += delta;
    bp.push_back(x);
    vals.push_back(running);
  }
  if (!vals.empty()) vals.pop_back();  // running is back to 0 after the final cluster
  return StepFunction(std::move(bp), std::move(vals));
}

}  // namespace

StepFunction StepFunction::sum_of_indicators(std::span<const Interval> intervals,
                                             double merge_tolerance) {
  std::vector<Event> events;
  events.reserve(2 * intervals.size());
  for (const auto& iv : intervals) {
    if (iv.hi < iv.lo) continue;
    events.push_back({iv.lo, +1});
    events.push_back({iv.hi, -1});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.x < b.x; });
  return sweep_sorted_events(events, merge_tolerance);
}

std::int64_t StepFunction::operator()(double x) const {
  if (values_.empty() || x < breakpoints_.front() || x >= breakpoints_.back()) return 0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

std::int64_t StepFunction::max_value() const {
  return values_.empty() ? 0 : *std::max_element(values_.begin(), values_.end());
}

namespace {

template <class Weight>
double integrate_cells(const StepFunction& f, Weight&& weight) {
  double s = 0.0;
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) s += weight(v[i]) * (bp[i + 1] - bp[i]);
  return s;
}

}  // namespace

double support_measure(const StepFunction& f) {
  return integrate_cells(f, [](std::int64_t v) { return v != 0 ? 1.0 : 0.0; });
}

double level_measure(const StepFunction& f, std::int64_t k) {
  return integrate_cells(f, [k](std::int64_t v) { return v >= k ? 1.0 : 0.0; });
}

double strict_level_measure(const StepFunction& f, std::int64_t k) {
  return integrate_cells(f, [k](std::int64_t v) { return v > k ? 1.0 : 0.0; });
}

double l2_norm_sq(const StepFunction& f) {
  return integrate_cells(f, [](std::int64_t v) { return static_cast<double>(v) * static_cast<double>(v); });
}

double mass(const StepFunction& f) {
  return integrate_cells(f, [](std::int64_t v) { return static_cast<double>(v); });
}

double level_identity_slack(const StepFunction& f, std::int64_t k) {
  return integrate_cells(f, [k](std::int64_t v) {
    if (v == 0) return 0.0;
    const std::int64_t over = v >= k ? k - 1 : 0;
    return static_cast<double>(v - 1 - over);
  });
}

IntervalUnion level_set(const StepFunction& f, std::int64_t k) {
  std::vector<Interval> cells;
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= k) cells.push_back({bp[i], bp[i + 1]});
  }
  return IntervalUnion::from(std::move(cells), 0.0);
}

StepFunction pointwise_max(const StepFunction& a, const StepFunction& b, double merge_tolerance) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<double> merged;
  merged.reserve(a.breakpoints().size() + b.breakpoints().size());
  std::merge(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
             b.breakpoints().end(), std::back_inserter(merged));
  std::vector<double> bp;
  for (double x : merged) {
    if (bp.empty() || x - bp.back() > merge_tolerance) bp.push_back(x);
  }
  std::vector<std::int64_t> vals(bp.size() - 1);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double mid = 0.5 * (bp[i] + bp[i + 1]);
    vals[i] = std::max(a(mid), b(mid));
  }
  if (vals.empty()) return {};
  return StepFunction(std::move(bp), std::move(vals));
}

// ---------------------------------------------------------------------------
// Projections

double shadow_half_width(double size, double theta, Shape shape) {
  if (shape == Shape::disc) return size;
  return size * (std::abs(std::cos(theta)) + std::abs(std::sin(theta)));
}

Interval project_piece(const Piece& piece, double theta, Shape shape) {
  const double c = project_point(piece.center, theta);
  const double h = shadow_half_width(piece.size, theta, shape);
  return {c - h, c + h};
}

StepFunction multiplicity(const SimilaritySystem& system, int depth, double theta,
                          std::uint64_t cap) {
  const auto centers = kernels::sorted_projected_centers(system, depth, theta, cap);
  const double h = shadow_half_width(piece_size(system, depth), theta, system.shape());
  // Left ends and right ends are each sorted already: a linear merge replaces
  // the event sort.
  std::vector<Event> events;
  events.reserve(2 * centers.size());
  std::size_t i = 0;
  std::size_t j = 0;
  const std::size_t n = centers.size();
  while (i < n || j < n) {
    if (i < n && centers[i] - h <= centers[j] + h) {
      events.push_back({centers[i++] - h, +1});
    } else {
      events.push_back({centers[j++] + h, -1});
    }
  }
  return sweep_sorted_events(events, kMergeTolerance);
}

StepFunction multiplicity_reference(const SimilaritySystem& system, int depth, double theta,
                                    std::uint64_t cap) {
  std::vector<Interval> shadows;
  shadows.reserve(static_cast<std::size_t>(piece_count(system, depth, cap)));
  for_each_piece(
      system, depth,
      [&](const Piece& p) { shadows.push_back(project_piece(p, theta, system.shape())); }, cap);
  return StepFunction::sum_of_indicators(shadows);
}

StepFunction maximal_profile(const SimilaritySystem& system, int max_depth, double theta,
                             std::uint64_t cap) {
  if (max_depth < 0) raise(ErrorKind::InvalidArgument, "depth must be non-negative");
  piece_count(system, max_depth, cap);
  StepFunction best = multiplicity(system, 0, theta, cap);
  for (int n = 1; n <= max_depth; ++n) {
    best = pointwise_max(best, multiplicity(system, n, theta, cap));
  }
  return best;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_step_function_csv(std::ostream& out, const StepFunction& f,
                             const ShadowCsvHeader& header) {
  out << "# system=" << header.system << ",n=" << header.depth
      << ",theta=" << fmt17(header.theta) << "\n";
  out << "cell_lo,cell_hi,value\n";
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << fmt17(bp[i]) << ',' << fmt17(bp[i + 1]) << ',' << v[i] << '\n';
  }
}

StepFunction read_step_function_csv(std::istream& in, ShadowCsvHeader* header) {
  std::string line;
  std::vector<double> bp;
  std::vector<std::int64_t> vals;
  bool seen_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header != nullptr) {
        std::stringstream fields(line.substr(1));
        std::string kv;
        while (std::getline(fields, kv, ',')) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) continue;
          std::string key = kv.substr(0, eq);
          key.erase(0, key.find_first_not_of(' '));
          const std::string value = kv.substr(eq + 1);
          if (key == "system") header->system = value;
          if (key == "n") header->depth = std::stoi(value);
          if (key == "theta") header->theta = std::stod(value);
        }
      }
      continue;
    }
    if (!seen_columns) {
      if (line != "cell_lo,cell_hi,value") raise(ErrorKind::ParseError, "unexpected CSV header");
      seen_columns = true;
      continue;
    }
    std::stringstream row(line);
    std::string lo, hi, value;
    if (!std::getline(row, lo, ',') || !std::getline(row, hi, ',') || !std::getline(row, value)) {
      raise(ErrorKind::ParseError, "malformed step-function row: " + line);
    }
    const double l = std::stod(lo);
    const double h = std::stod(hi);
    if (!bp.empty() && bp.back() != l) {
      vals.push_back(0);  // gap cell
      bp.push_back(l);
    } else if (bp.empty()) {
      bp.push_back(l);
    }
    bp.push_back(h);
    vals.push_back(std::stoll(value));
  }
  return StepFunction(std::move(bp), std::move(vals));
}

}  // namespace favlab
