#include "papal/summation.hpp"

#include <vector>

namespace papal {

namespace {

constexpr std::size_t kBlock = 16;

double sum_strided(const double* data, std::size_t n, std::size_t stride) {
  if (n <= kBlock) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i * stride];
    return s;
  }
  const std::size_t half = n / 2;
  return sum_strided(data, half, stride) + sum_strided(data + half * stride, n - half, stride);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return sum_strided(values.data(), values.size(), 1);
}

Vector pairwise_column_mean(const Matrix& rows) {
  Vector out(rows.cols());
  const auto n = static_cast<std::size_t>(rows.rows());
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    out[c] = n == 0 ? 0.0
                    : sum_strided(rows.data() + c, n, static_cast<std::size_t>(rows.cols())) /
                          static_cast<double>(n);
  }
  return out;
}

}  // namespace papal
