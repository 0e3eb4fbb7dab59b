#pragma once

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <vector>

namespace favlab {

/// Execution policy for the data-parallel kernels. Results never depend on
/// the policy or on the thread count: every reduction happens afterwards in
/// index order.
enum class Exec { serial, parallel };

void set_thread_count(int threads);
int thread_count();

/// Thread count taken from FAVLAB_THREADS, or 0 when unset/invalid.
int thread_count_from_env();

/// out[i] = fn(i) for i in [0, count).
template <class Fn>
auto map_indices(std::size_t count, Fn&& fn, Exec exec = Exec::parallel)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using T = std::invoke_result_t<Fn&, std::size_t>;
  static_assert(!std::is_same_v<T, bool>, "vector<bool> is not safe for concurrent writes");
  std::vector<T> out(count);
  const auto n = static_cast<std::int64_t>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    }
  }
  return out;
}

/// Ordered sum; the summation order is fixed so results are bitwise stable.
inline double ordered_sum(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace favlab
