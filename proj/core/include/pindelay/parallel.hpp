#pragma once

#include <cstddef>
#include <functional>

namespace pindelay {

/// Worker count used by parallel_for: hardware concurrency, capped by the
/// PINDELAY_THREADS environment variable when it is set to a positive value.
int thread_budget();

/// Runs fn(i) for every i in [0, count), possibly on several threads.
/// Indices are dealt out in contiguous stripes, so callers that write result
/// i into slot i get identical output at any thread count. The first
/// exception (lowest stripe) is rethrown after all workers join.
void parallel_for(std::ptrdiff_t count,
                  const std::function<void(std::ptrdiff_t)>& fn);

}  // namespace pindelay
