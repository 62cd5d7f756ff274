#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace hyperlab {

// Number of worker threads reductions may use.  HYPERLAB_THREADS caps it;
// unset or invalid values fall back to the hardware concurrency.
unsigned thread_budget();

// max over i in [0, count) of eval(i), computed in parallel chunks.  Safe
// for nondeterminism because max is order independent; used for sup-norm
// style reductions over region cells.  Returns lowest double on count == 0.
double parallel_max(std::size_t count, const std::function<double(std::size_t)>& eval);

}  // namespace hyperlab
