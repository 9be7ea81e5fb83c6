#pragma once

#include <vector>

#include <omp.h>

namespace entmeas {

/// Selects between the OpenMP kernel and the serial reference loop. Both
/// produce bit-identical results; serial exists for testing and debugging.
enum class Execution { serial, parallel };

/// Calls body(i) for every i in [0, n). Work items must be independent and
/// write only to slot i of caller-owned storage; callers reduce afterwards
/// in index order, which keeps results independent of scheduling.
template <class Body>
void for_each_index(Execution policy, int n, Body&& body) {
  if (policy == Execution::parallel && n > 1) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) body(i);
  } else {
    for (int i = 0; i < n; ++i) body(i);
  }
}

/// Worker count honoured by parallel kernels (ENTMEAS_THREADS caps it).
int worker_count();

/// Applies ENTMEAS_THREADS, if set, as an upper bound on OpenMP threads.
void apply_thread_cap_from_environment();

}  // namespace entmeas
