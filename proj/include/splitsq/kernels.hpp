#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace splitsq::kernels {

// out[i] = f(i) for i < n, in index order.
template <class T, class F>
std::vector<T> map_grid_serial(std::size_t n, F&& f) {
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

// Same result as map_grid_serial with the points spread over OpenMP threads.
// If any point throws, the exception of the lowest failing index is rethrown.
template <class T, class F>
std::vector<T> map_grid_parallel(std::size_t n, F&& f) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

template <class T, class F>
std::vector<T> map_grid(std::size_t n, bool parallel, F&& f) {
  return parallel ? map_grid_parallel<T>(n, f) : map_grid_serial<T>(n, f);
}

}  // namespace splitsq::kernels
