//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_PARALLEL_H_
#define MOLBO_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace molbo {

/// Worker cap: MOLBO_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Calls fn(i) for i in [0, n). Each index is visited exactly once; callers
/// write results into per-index slots so the outcome is independent of
/// scheduling. The first exception thrown by any call is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

}  // namespace molbo

#endif  // MOLBO_PARALLEL_H_
