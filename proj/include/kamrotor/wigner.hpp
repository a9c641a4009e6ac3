#pragma once

// Discrete toroidal Wigner function on the 2N x 2N grid
//   X_k = pi k / N,  k = 0 .. 2N-1,
//   P_l = (hbar_k / 2) l,  l = -N .. N-1  (row r = l + N),
//
//   w(X_k, P_l) = sum_j exp(i pi j k / N) [(1 + (-1)^(l+j)) / 2] <(l+j)/2|rho|(l-j)/2>,
//
// with j running over the representatives -N .. N-1 of Z_2N and matrix
// elements outside the truncated ladder taken as zero.

#include <Eigen/Core>

#include "kamrotor/quantum.hpp"

namespace kamrotor {

struct WignerGrid {
  Eigen::MatrixXd values;  // 2N x 2N, rows indexed by l + N, columns by k
  Eigen::MatrixXd coarse;  // N x N, 2 x 2 cell means
  double scaled_planck = 1.0;
  double max_imaginary = 0.0;  // largest discarded imaginary part

  int basis_size() const noexcept { return static_cast<int>(values.rows() / 2); }
  double position(int k) const noexcept;  // X_k
  double momentum(int row) const noexcept;  // P_l for row = l + N
  double coarse_position(int k) const noexcept;
  double coarse_momentum(int row) const noexcept;
  /// Phase-space area of one coarse cell, (2 pi / N) hbar_k.
  double coarse_cell_area() const noexcept;
};

/// FFT evaluation: one length-2N transform per momentum row.
WignerGrid toroidal_wigner(const DensityMatrix& rho, double scaled_planck);

/// Non-overlapping 2 x 2 cell means. Throws InvalidArgument on odd dimensions.
Eigen::MatrixXd coarse_grain(const Eigen::MatrixXd& fine);

/// max over rows of |sum_k w(X_k, P_l) / 2N - p(l/2)|, with p(l/2) the
/// population of ladder value l/2 for even l and 0 for odd l.
double momentum_marginal_error(const WignerGrid& w, const DensityMatrix& rho);

/// Sum over negative coarse cells of |w| times the coarse cell area.
double negativity_volume(const WignerGrid& w);

}  // namespace kamrotor
