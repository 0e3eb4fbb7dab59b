#include "favlab/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace favlab {

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

int thread_count_from_env() {
  const char* raw = std::getenv("FAVLAB_THREADS");
  if (raw == nullptr) return 0;
  try {
    const int v = std::stoi(raw);
    return v > 0 ? v : 0;
  } catch (...) {
    return 0;
  }
}

}  // namespace favlab
