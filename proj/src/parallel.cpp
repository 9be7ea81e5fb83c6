#include "entmeas/parallel.hpp"

#include <cstdlib>
#include <string>

namespace entmeas {

int worker_count() { return omp_get_max_threads(); }

void apply_thread_cap_from_environment() {
  const char* raw = std::getenv("ENTMEAS_THREADS");
  if (raw == nullptr || *raw == '\0') return;
  try {
    const int cap = std::stoi(raw);
    if (cap >= 1 && cap < omp_get_max_threads()) omp_set_num_threads(cap);
  } catch (const std::exception&) {
    // Unparseable values leave the OpenMP default in place.
  }
}

}  // namespace entmeas
