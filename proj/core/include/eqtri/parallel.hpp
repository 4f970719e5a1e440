#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace eqtri {

/// Worker count from EQTRI_THREADS, else std::thread::hardware_concurrency().
std::size_t thread_count();

/// Runs body(i) for i in [0, count) over contiguous blocks on thread_count()
/// workers. Each index is handled by exactly one call, so per-index results
/// do not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation with a fixed split order.
double pairwise_sum(std::span<const double> values);

}  // namespace eqtri
