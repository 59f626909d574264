#pragma once

#include <cstddef>
#include <functional>

namespace otbary {

// Runs fn(0) .. fn(count-1) on up to `threads` workers. Tasks must be
// independent; callers keep determinism by writing into per-index slots
// and reducing in index order afterwards. threads <= 1 runs inline.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace otbary
