#pragma once

#include <cstddef>
#include <functional>

namespace gpeq {

/// Number of worker threads used by library loops. Defaults to 1.
void set_num_threads(unsigned threads);
[[nodiscard]] unsigned num_threads();

/// Calls body(i) for i in [0, count). Each index is processed exactly once by
/// one thread, so results written to slot i do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gpeq
