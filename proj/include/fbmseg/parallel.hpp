#pragma once

#include <cstddef>
#include <functional>

namespace fbmseg {

/// Worker cap used by the data-parallel kernels. 0 restores the default
/// (hardware concurrency). Results never depend on this value.
void set_max_threads(int n);
int max_threads();

/// Runs body(begin, end) over a static partition of [0, n) into at most
/// max_threads() contiguous chunks. Each index is visited exactly once.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace fbmseg
