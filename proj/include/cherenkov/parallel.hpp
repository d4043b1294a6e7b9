#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cherenkov {

// Global cap on worker threads; 0 means hardware concurrency.
void set_max_workers(unsigned workers);
unsigned max_workers();

// Splits [0, n) into contiguous blocks, one per worker. body(begin, end) must only write to
// slots it owns; results are then independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_block = 64);

// Fixed-shape pairwise summation: same association tree for a given length.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace cherenkov
