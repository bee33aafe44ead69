#pragma once

#include <exception>
#include <mutex>

namespace sparsetree::detail {

// OpenMP loop over [0, n) that forwards the first exception thrown by `fn`.
template <typename Fn>
void parallel_for(long n, Fn&& fn) {
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace sparsetree::detail
