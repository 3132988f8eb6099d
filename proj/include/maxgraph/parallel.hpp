#pragma once

#include <cstddef>
#include <functional>

namespace maxgraph {

/// Worker count: MAXGRAPH_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index is
/// visited exactly once; after all workers join, the exception of the lowest
/// failing index is rethrown, so failures are reported deterministically.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace maxgraph
