#pragma once

#include <cstddef>
#include <functional>

namespace onenorm {

/// Number of worker threads used by parallel_for. 0 means "hardware default".
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Iterations must be independent; each writes
/// only its own output slot, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace onenorm
