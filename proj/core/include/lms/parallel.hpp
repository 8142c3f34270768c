#pragma once

#include <cstddef>
#include <functional>

namespace lms {

/// Worker count used by parallel_for. Defaults to LMS_THREADS when set,
/// otherwise std::thread::hardware_concurrency().
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n). Iterations must be independent; results are
/// identical to serial execution as long as each body writes only its own slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lms
