#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "toetd/config.hpp"

namespace toetd {

// Runs body(i) for i in [0, count). The parallel path hands indices to OpenMP
// threads; the serial path is the plain loop and is kept as the reference.
// Each index must write only its own output slot. The first exception (by
// index) is rethrown after all indices finish.
template <typename Body>
void for_each_index(std::size_t count, Execution execution, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  if (execution == Execution::parallel) {
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

int worker_threads();

}  // namespace toetd
