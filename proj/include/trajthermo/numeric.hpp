#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace trajthermo {

using Vector = std::vector<double>;
using ConstSpan = std::span<const double>;

/// Pairwise (tree) summation in fixed index order. Result depends only on
/// the values and their order, never on thread count.
double pairwise_sum(ConstSpan values);

double dot(ConstSpan a, ConstSpan b);
double max_abs(ConstSpan v);

/// Thread count used by parallel loops. 0 selects hardware concurrency.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// must only write to slots owned by i so results are order independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace trajthermo
