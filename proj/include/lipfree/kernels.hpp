#pragma once

// Data-parallel loop kernels. Every kernel has an OpenMP path and a serial
// reference path; both produce identical results (reductions are max-type or
// are accumulated per index and summed serially), so the serial path is used
// as the test oracle for the parallel one.

#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

#include <omp.h>

namespace lipfree {

enum class Exec { Parallel, Serial };

struct ArgMax {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = static_cast<std::size_t>(-1);

  // Larger value wins; equal values resolve to the lower index.
  void absorb(double v, std::size_t i) {
    if (v > value || (v == value && i < index)) {
      value = v;
      index = i;
    }
  }
  void absorb(const ArgMax& other) { absorb(other.value, other.index); }
};

namespace kernels {

template <class Fn>
void for_each_index(std::size_t n, Fn&& fn, Exec exec) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(lipfree_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

template <class Fn>
ArgMax max_over(std::size_t n, Fn&& fn, Exec exec) {
  ArgMax best;
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) best.absorb(fn(i), i);
    return best;
  }
  std::exception_ptr failure;
  const auto count = static_cast<long long>(n);
#pragma omp parallel
  {
    ArgMax local;
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < count; ++i) {
      try {
        local.absorb(fn(static_cast<std::size_t>(i)), static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(lipfree_kernel_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(lipfree_kernel_merge)
    best.absorb(local);
  }
  if (failure) std::rethrow_exception(failure);
  return best;
}

// Sum with a fixed association order: terms are computed (possibly in
// parallel) into a buffer, then added left to right.
template <class Fn>
double ordered_sum(std::size_t n, Fn&& fn, Exec exec) {
  std::vector<double> terms(n);
  for_each_index(n, [&](std::size_t i) { terms[i] = fn(i); }, exec);
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

}  // namespace kernels
}  // namespace lipfree
