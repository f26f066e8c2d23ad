#pragma once

#include <functional>

namespace robin {

// Bounded worker pool over an index range. fn(i) must write its result into a
// caller-owned slot i so the output order stays deterministic regardless of
// completion order. threads = 0 resolves ROBIN_SPECTRA_THREADS, then the
// hardware count.
void run_indexed(int count, const std::function<void(int)>& fn, int threads = 0);

int default_thread_count();

}  // namespace robin
