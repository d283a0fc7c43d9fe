// Copyright 2026 The Umbra Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

namespace umbra {

/// Worker count: `requested` if positive, else UMBRA_THREADS, else hardware concurrency.
/// UMBRA_THREADS caps the result in every case.
int resolve_workers(int requested = 0);

/// Runs body(i) for i in [0, count) on `workers` threads, handing out indices dynamically.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

}  // namespace umbra
