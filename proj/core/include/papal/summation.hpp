#pragma once

#include <span>

#include "papal/types.hpp"

namespace papal {

// Pairwise (cascade) summation; error grows as O(log n) instead of O(n).
double pairwise_sum(std::span<const double> values);

// Column means of a row-major matrix using pairwise summation per column.
Vector pairwise_column_mean(const Matrix& rows);

}  // namespace papal
