#pragma once

// Indexed work distribution. Every work item writes only its own slot, so the
// assembled result is independent of thread count and schedule. The serial
// variant is the reference the parallel kernel is tested against.

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace atomwalk {

/// Worker count actually used for `requested` (values < 1 mean "all cores").
inline int resolve_workers(int requested) {
#ifdef _OPENMP
  return requested >= 1 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

template <class Fn>
auto serial_indexed(std::size_t n, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  std::vector<std::invoke_result_t<Fn&, std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

/// OpenMP kernel: out[i] = fn(i) for i in [0, n). Items are scheduled
/// dynamically one at a time (their costs vary by orders of magnitude). An
/// exception thrown by any item is rethrown after the loop; when several
/// items throw, the one with the lowest index wins.
template <class Fn>
auto parallel_indexed(std::size_t n, int workers, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using T = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  const long long count = static_cast<long long>(n);
  [[maybe_unused]] const int threads = resolve_workers(workers);

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace atomwalk
