#include "kamrotor/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "kamrotor/errors.hpp"

namespace kamrotor {

double WignerGrid::position(int k) const noexcept {
  return constants::pi * k / basis_size();
}

double WignerGrid::momentum(int row) const noexcept {
  return 0.5 * scaled_planck * (row - basis_size());
}

double WignerGrid::coarse_position(int k) const noexcept {
  return 0.5 * (position(2 * k) + position(2 * k + 1));
}

double WignerGrid::coarse_momentum(int row) const noexcept {
  return 0.5 * (momentum(2 * row) + momentum(2 * row + 1));
}

double WignerGrid::coarse_cell_area() const noexcept {
  return 2.0 * constants::pi / basis_size() * scaled_planck;
}

WignerGrid toroidal_wigner(const DensityMatrix& rho, double scaled_planck) {
  const int n = rho.size();
  if (n <= 0 || n % 2 != 0) throw InvalidArgument("Wigner function needs an even basis");
  const int m = 2 * n;
  const ComplexMatrix& a = rho.matrix();

  WignerGrid out;
  out.scaled_planck = scaled_planck;
  out.values.resize(m, m);

  // The inverse transform carries exp(+i 2 pi j k / 2N); undo its 1/2N scale.
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> coeff(m);
  std::vector<std::complex<double>> row(m);
  for (int r = 0; r < m; ++r) {
    const int l = r - n;
    std::fill(coeff.begin(), coeff.end(), std::complex<double>(0.0));
    for (int j = -n; j < n; ++j) {
      if (((l + j) & 1) != 0) continue;
      const int i1 = ladder_index((l + j) / 2, n);
      const int i2 = ladder_index((l - j) / 2, n);
      if (i1 < 0 || i1 >= n || i2 < 0 || i2 >= n) continue;
      coeff[static_cast<std::size_t>((j + m) % m)] = a(i1, i2);
    }
    fft.inv(row, coeff);
    for (int k = 0; k < m; ++k) {
      const std::complex<double> v = row[static_cast<std::size_t>(k)] * static_cast<double>(m);
      out.values(r, k) = v.real();
      out.max_imaginary = std::max(out.max_imaginary, std::abs(v.imag()));
    }
  }
  out.coarse = coarse_grain(out.values);
  return out;
}

Eigen::MatrixXd coarse_grain(const Eigen::MatrixXd& fine) {
  if (fine.rows() % 2 != 0 || fine.cols() % 2 != 0) {
    throw InvalidArgument("coarse_grain needs even grid dimensions");
  }
  const Eigen::Index rows = fine.rows() / 2;
  const Eigen::Index cols = fine.cols() / 2;
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      out(r, c) = 0.25 * (fine(2 * r, 2 * c) + fine(2 * r + 1, 2 * c) +
                          fine(2 * r, 2 * c + 1) + fine(2 * r + 1, 2 * c + 1));
    }
  }
  return out;
}

double momentum_marginal_error(const WignerGrid& w, const DensityMatrix& rho) {
  const int n = rho.size();
  if (w.basis_size() != n) throw InvalidArgument("Wigner grid and state sizes differ");
  const Eigen::VectorXd p = momentum_distribution(rho);
  double err = 0.0;
  for (int r = 0; r < 2 * n; ++r) {
    const int l = r - n;
    double expected = 0.0;
    if ((l & 1) == 0) {
      const int i = ladder_index(l / 2, n);
      if (i >= 0 && i < n) expected = p[i];
    }
    err = std::max(err, std::abs(w.values.row(r).sum() / (2.0 * n) - expected));
  }
  return err;
}

double negativity_volume(const WignerGrid& w) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < w.coarse.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.coarse.rows(); ++r) {
      if (w.coarse(r, c) < 0.0) sum -= w.coarse(r, c);
    }
  }
  return sum * w.coarse_cell_area();
}

}  // namespace kamrotor
