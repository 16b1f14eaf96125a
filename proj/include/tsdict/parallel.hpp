#pragma once

#include <cstddef>
#include <functional>

namespace tsdict {

/// Worker count used by grid searches and experiment runners. Results are
/// identical for any value; 1 disables threading.
void set_threads(int n);
int threads();

/// Runs fn(0..n-1) on up to threads() workers. Rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tsdict
