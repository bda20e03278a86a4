#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace papal {

using Vector = Eigen::VectorXd;
// Particle storage: one particle per row, rows contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Point = std::span<const double>;
using MutPoint = std::span<double>;

inline Point row_view(const Matrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}
inline MutPoint row_view(Matrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}
inline Point as_point(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline MutPoint as_point(Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// The min player owns x in R^m, the max player owns y in R^n.
enum class Player { kMin, kMax };

inline Player opponent(Player p) { return p == Player::kMin ? Player::kMax : Player::kMin; }
inline const char* to_string(Player p) { return p == Player::kMin ? "x" : "y"; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (bad sizes, non-positive constants, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Non-finite values, underflow of a derived constant, non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace papal
