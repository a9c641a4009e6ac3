#include "kamrotor/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "kamrotor/errors.hpp"

namespace kamrotor {

namespace {

using namespace std::complex_literals;

void require_basis(int basis_size) {
  if (basis_size <= 0 || basis_size % 2 != 0) {
    throw InvalidParameter("basis size must be a positive even integer");
  }
}

// exp(-i t H_light / hbar) from a precomputed eigensystem H = V diag(lambda) V^T.
ComplexMatrix light_propagator(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& values,
                               double duration, double scaled_planck) {
  const ComplexVector phases =
      (values.array() * (-duration / scaled_planck)).unaryExpr([](double a) {
        return std::polar(1.0, a);
      });
  const ComplexMatrix v = vectors.cast<std::complex<double>>();
  return v * phases.asDiagonal() * v.adjoint();
}

// exp(-i t (n + beta)^2 hbar_k / 2), argument formed and reduced in long double;
// the phase reaches thousands of radians at the edge of the basis.
std::complex<double> free_phase(int n, double beta, double duration, double scaled_planck) {
  const long double m = static_cast<long double>(n) + beta;
  const long double angle = -static_cast<long double>(duration) * m * m * scaled_planck / 2.0L;
  constexpr long double two_pi = 6.283185307179586476925286766559005768L;
  return std::polar(1.0, static_cast<double>(std::remainder(angle, two_pi)));
}

}  // namespace

Hamiltonians build_hamiltonians(int basis_size, double kick_strength, double scaled_planck,
                                double beta) {
  require_basis(basis_size);
  Hamiltonians h;
  h.dark.resize(basis_size);
  for (int i = 0; i < basis_size; ++i) {
    const double rho = (ladder_value(i, basis_size) + beta) * scaled_planck;
    h.dark[i] = 0.5 * rho * rho;
  }
  h.light = h.dark.asDiagonal();
  const double coupling = -0.5 * kick_strength;
  for (int i = 0; i < basis_size; ++i) {
    const int j = (i + 1) % basis_size;
    // For N = 2 both neighbours are the same state; the couplings add.
    h.light(i, j) += coupling;
    h.light(j, i) += coupling;
  }
  return h;
}

FloquetOperator build_floquet(int basis_size, double kick_strength, double scaled_planck,
                              const PulseTrain& pulses, double beta) {
  require_basis(basis_size);
  if (!(scaled_planck > 0.0)) throw InvalidParameter("scaled_planck must be > 0");
  const Hamiltonians h = build_hamiltonians(basis_size, kick_strength, scaled_planck, beta);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  bool have_light = false;

  ComplexMatrix u = ComplexMatrix::Identity(basis_size, basis_size);
  int segment_index = 0;
  for (const auto& seg : pulses.segments()) {
    if (seg.driven) {
      if (!have_light) {
        solver.compute(h.light);
        if (solver.info() != Eigen::Success) {
          throw NumericalError("eigensolver failed for H_light (segment " +
                               std::to_string(segment_index) + ")");
        }
        have_light = true;
      }
      u = light_propagator(solver.eigenvectors(), solver.eigenvalues(), seg.duration,
                           scaled_planck) *
          u;
    } else {
      for (int i = 0; i < basis_size; ++i) {
        u.row(i) *= free_phase(ladder_value(i, basis_size), beta, seg.duration, scaled_planck);
      }
    }
    ++segment_index;
  }

  FloquetOperator op;
  op.matrix = std::move(u);
  op.kick_strength = kick_strength;
  op.scaled_planck = scaled_planck;
  op.beta = beta;
  op.pulses = pulses;
  return op;
}

double unitarity_error(const ComplexMatrix& u) {
  const ComplexMatrix d = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(ComplexMatrix elements) : elements_(std::move(elements)) {
  if (elements_.rows() != elements_.cols()) {
    throw InvalidArgument("density matrix must be square");
  }
}

DensityMatrix DensityMatrix::pure_momentum(int basis_size, int n) {
  require_basis(basis_size);
  const int i = ladder_index(n, basis_size);
  if (i < 0 || i >= basis_size) throw InvalidArgument("momentum state outside the basis");
  ComplexMatrix m = ComplexMatrix::Zero(basis_size, basis_size);
  m(i, i) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure_state(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InvalidArgument("cannot normalise a zero state");
  const ComplexVector v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int basis_size) {
  require_basis(basis_size);
  return DensityMatrix(ComplexMatrix::Identity(basis_size, basis_size) /
                       static_cast<double>(basis_size));
}

DensityMatrix DensityMatrix::thermal(int basis_size, double sigma, double scaled_planck,
                                     double beta) {
  require_basis(basis_size);
  if (sigma < 0.0) throw InvalidParameter("thermal width must be >= 0");
  if (sigma == 0.0) return pure_momentum(basis_size, 0);
  Eigen::VectorXd w(basis_size);
  for (int i = 0; i < basis_size; ++i) {
    const double rho = (ladder_value(i, basis_size) + beta) * scaled_planck;
    w[i] = std::exp(-0.5 * rho * rho / (sigma * sigma));
  }
  w /= w.sum();
  return DensityMatrix(w.cast<std::complex<double>>().asDiagonal().toDenseMatrix());
}

std::complex<double> DensityMatrix::trace() const { return elements_.trace(); }

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return elements_.cwiseAbs2().sum();
}

double DensityMatrix::hermiticity_error() const {
  return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix h = 0.5 * (elements_ + elements_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed for rho");
  return solver.eigenvalues().minCoeff();
}

DensityMatrix apply_decoherence(const DensityMatrix& rho, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidParameter("spontaneous emission probability must lie in [0, 1]");
  }
  if (eta == 0.0) return rho;
  const int n = rho.size();
  const ComplexMatrix& a = rho.matrix();
  ComplexMatrix out(n, n);
  const double keep = 1.0 - eta;
  const double half = 0.5 * eta;
  for (int c = 0; c < n; ++c) {
    const int cp = (c + 1) % n;
    const int cm = (c + n - 1) % n;
    for (int r = 0; r < n; ++r) {
      const int rp = (r + 1) % n;
      const int rm = (r + n - 1) % n;
      out(r, c) = half * (a(rp, cp) + a(rm, cm)) + keep * a(r, c);
    }
  }
  return DensityMatrix(std::move(out));
}

Eigen::VectorXd momentum_distribution(const DensityMatrix& rho) {
  return rho.matrix().diagonal().real();
}

DensityEvolution evolve_density(const DensityMatrix& rho0, const FloquetOperator& u,
                                double eta, int n_kicks,
                                const std::vector<int>& checkpoint_kicks) {
  if (rho0.size() != u.size()) throw InvalidArgument("state and Floquet operator sizes differ");
  if (n_kicks < 0) throw InvalidArgument("n_kicks must be >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidParameter("spontaneous emission probability must lie in [0, 1]");
  }
  const auto wanted = [&](int kick) {
    return std::find(checkpoint_kicks.begin(), checkpoint_kicks.end(), kick) !=
           checkpoint_kicks.end();
  };
  const int n = rho0.size();
  const auto edge = [n](const Eigen::VectorXd& p) { return std::max(p[0], p[n - 1]); };

  DensityEvolution out;
  out.populations.reserve(static_cast<std::size_t>(n_kicks) + 1);
  DensityMatrix rho = rho0;
  out.populations.push_back(momentum_distribution(rho));
  out.max_edge_population = edge(out.populations.back());
  if (wanted(0)) out.checkpoints.push_back({0, rho});

  const ComplexMatrix& um = u.matrix;
  const ComplexMatrix ud = um.adjoint();
  ComplexMatrix tmp(n, n);
  for (int kick = 1; kick <= n_kicks; ++kick) {
    const std::complex<double> before = rho.trace();
    tmp.noalias() = um * rho.matrix();
    rho.matrix().noalias() = tmp * ud;
    rho = apply_decoherence(rho, eta);
    out.max_trace_drift = std::max(out.max_trace_drift, std::abs(rho.trace() - before));
    out.populations.push_back(momentum_distribution(rho));
    out.max_edge_population = std::max(out.max_edge_population, edge(out.populations.back()));
    if (wanted(kick)) out.checkpoints.push_back({kick, rho});
  }
  return out;
}

ComplexVector FloquetModes::evolve(const ComplexVector& psi, int n_kicks) const {
  const ComplexVector coeffs = vectors.adjoint() * psi;
  const ComplexVector powered =
      coeffs.array() * eigenvalues.array().unaryExpr([n_kicks](std::complex<double> z) {
        return std::pow(z, n_kicks);
      });
  return vectors * powered;
}

ComplexMatrix FloquetModes::power(int n_kicks) const {
  const ComplexVector lam = eigenvalues.array().unaryExpr(
      [n_kicks](std::complex<double> z) { return std::pow(z, n_kicks); });
  return vectors * lam.asDiagonal() * vectors.adjoint();
}

FloquetModes floquet_modes(const FloquetOperator& u) {
  Eigen::ComplexSchur<ComplexMatrix> schur(u.matrix);
  if (schur.info() != Eigen::Success) throw NumericalError("Schur decomposition failed");
  FloquetModes modes;
  modes.vectors = schur.matrixU();
  // Off-diagonal Schur entries vanish for a unitary up to round-off.
  modes.eigenvalues = schur.matrixT().diagonal();
  return modes;
}

}  // namespace kamrotor
