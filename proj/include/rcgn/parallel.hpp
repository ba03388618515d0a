#ifndef RCGN_PARALLEL_HPP
#define RCGN_PARALLEL_HPP

#include <exception>
#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace rcgn::par {

//! Serial reference kernel: f(k) for k = 0..count-1. Kept alongside the
//! OpenMP kernel so tests can pin bit-identical results and the benchmark
//! can compare the two.
template <class F>
void for_each_index_serial(int count, F&& f) {
  for (int k = 0; k < count; ++k) f(k);
}

//! OpenMP kernel over independent per-index work (per-eps sweeps). Bodies
//! must not share mutable state across indices; the first exception is
//! rethrown after the loop joins.
template <class F>
void for_each_index_parallel(int count, F&& f) {
#if defined(_OPENMP)
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < count; ++k) {
    try {
      f(k);
    } catch (...) {
#pragma omp critical(rcgn_par_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
#else
  for_each_index_serial(count, std::forward<F>(f));
#endif
}

template <class F>
void for_each_index(int count, bool parallel, F&& f) {
  if (parallel)
    for_each_index_parallel(count, std::forward<F>(f));
  else
    for_each_index_serial(count, std::forward<F>(f));
}

inline int thread_count() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace rcgn::par

#endif  // RCGN_PARALLEL_HPP
