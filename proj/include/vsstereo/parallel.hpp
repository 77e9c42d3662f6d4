#pragma once

#include <functional>

namespace vsstereo {

/// Worker count used by the row-parallel kernels. Defaults to the hardware
/// concurrency, capped by the STEREO_THREADS environment variable.
int thread_count();

/// Overrides the worker count for this process (0 restores the default).
void set_thread_count(int n);

/// Runs fn(begin, end) over contiguous chunks of [0, n). Each index is visited
/// exactly once; chunk boundaries depend only on n and the worker count, and
/// callers write disjoint outputs, so results do not depend on scheduling.
void parallel_for(int n, const std::function<void(int, int)>& fn);

}  // namespace vsstereo
