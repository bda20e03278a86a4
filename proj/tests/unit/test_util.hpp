#pragma once

#include <cmath>
#include <memory>

#include "papal/games.hpp"
#include "papal/payoff.hpp"
#include "papal/rng.hpp"
#include "papal/types.hpp"

namespace papal::test {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, double sd, std::uint64_t seed) {
  ParticleRng rng(CounterStream(mix64(seed)));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = sd * rng.normal();
  return m;
}

inline PayoffPtr sine(int dim, double shift, double amplitude) {
  return std::make_shared<SinePayoff>(dim, shift, amplitude);
}

inline PayoffPtr zero_payoff(int dim) { return std::make_shared<ConstantPayoff>(dim, dim, 0.0); }

// Central finite difference of f along coordinate i.
template <class F>
double central_difference(F&& f, Vector z, int i, double h = 1e-6) {
  z[i] += h;
  const double up = f(z);
  z[i] -= 2 * h;
  const double down = f(z);
  return (up - down) / (2 * h);
}

}  // namespace papal::test
