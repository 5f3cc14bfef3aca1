#pragma once

#include <cstddef>
#include <span>

namespace landauer::detail {

// Pairwise summation; the reduction tree depends only on the length, so the
// result is reproducible for a given input order.
inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace landauer::detail
