#pragma once

#include <complex>
#include <random>

#include <Eigen/Core>

#include "kamrotor/quantum.hpp"

namespace support {

// Random density matrix A A^dagger / Tr, A with Gaussian entries.
inline kamrotor::ComplexMatrix random_density(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  kamrotor::ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = {g(gen), g(gen)};
  }
  kamrotor::ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline double max_abs(const kamrotor::ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace support
