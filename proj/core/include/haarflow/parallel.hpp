// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace haarflow::par {

// Worker cap: set_max_threads wins, else HAARFLOW_THREADS, else the machine
// parallelism. Always at least 1.
int max_threads();
void set_max_threads(int n);

// Runs fn(i) for every i in [0, n) across up to max_threads() workers. Each
// call must write only to storage owned by index i; the caller combines the
// per-index results in index order afterwards, which keeps every reduction
// identical for any thread count. The first exception thrown by any fn is
// rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace haarflow::par
