#pragma once

#include <cstdint>
#include <exception>

#include "thresholdci/execution.hpp"

namespace thresholdci::detail {

// Runs body(i) for i in [0, count). The parallel path captures the first
// exception thrown by any iteration and rethrows it after the loop.
template <class Body>
void parallel_for(std::int64_t count, Execution exec, Body&& body) {
  if (exec == Execution::serial) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(thresholdci_parallel_for_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace thresholdci::detail
