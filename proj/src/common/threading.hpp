#pragma once

#include <cstddef>
#include <functional>

namespace resonet {

// Global worker-count knob. 0 means "auto" (hardware concurrency). The
// effective count is what parallel_for actually uses.
void set_thread_count(int n);
int thread_count_setting();
int effective_thread_count();

// Runs fn(i) for i in [0, n) on a static partition: worker t gets the
// contiguous block [t*n/k, (t+1)*n/k). The partition depends only on (n, k),
// never on timing, so results written into pre-sized buffers are identical
// from run to run. Exceptions from workers are rethrown on the caller thread
// (first worker index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace resonet
