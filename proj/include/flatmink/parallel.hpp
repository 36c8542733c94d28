#pragma once

// Trial runners. Serial is the reference path; Parallel distributes indices
// over OpenMP threads. Each index must only write its own output slot.

#include <cstddef>
#include <cstdint>

namespace flatmink {

enum class Exec { Serial, Parallel };

template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace flatmink
