#include "kamrotor/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kamrotor/errors.hpp"
#include "kamrotor/quantum.hpp"

namespace kamrotor {

namespace {

// Share of the cell [lo, hi) lying outside [-b, b]; exact 0 and 1 for cells
// wholly on one side.
double outside_share(double lo, double hi, double b) {
  if (lo >= -b && hi <= b) return 0.0;
  if (lo >= b || hi <= -b) return 1.0;
  const double inner = std::max(0.0, std::min(hi, b) - std::max(lo, -b));
  return 1.0 - inner / (hi - lo);
}

double site_momentum(int index, int size, double scaled_planck, double beta) {
  return (ladder_value(index, size) + beta) * scaled_planck;
}

}  // namespace

double fraction_outside_classical(const ClassicalEnsemble& ensemble, double boundary) {
  if (ensemble.empty()) throw InvalidArgument("fraction_outside_classical: empty ensemble");
  std::size_t count = 0;
  for (double r : ensemble.rho) count += std::abs(r) > boundary ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(ensemble.size());
}

double fraction_outside_quantum(const Eigen::VectorXd& populations, double scaled_planck,
                                double boundary, double beta) {
  const int n = static_cast<int>(populations.size());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rho = site_momentum(i, n, scaled_planck, beta);
    const double lo = rho - 0.5 * scaled_planck;
    sum += populations[i] * outside_share(lo, lo + scaled_planck, boundary);
  }
  return sum;
}

std::pair<double, double> fraction_outside_quantum_bounds(const Eigen::VectorXd& populations,
                                                          double scaled_planck,
                                                          double boundary, double beta) {
  const int n = static_cast<int>(populations.size());
  double lower = 0.0;
  double upper = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rho = site_momentum(i, n, scaled_planck, beta);
    const double lo = rho - 0.5 * scaled_planck;
    const double out = outside_share(lo, lo + scaled_planck, boundary);
    if (out == 1.0) lower += populations[i];
    if (out > 0.0) upper += populations[i];
  }
  return {lower, upper};
}

double kinetic_energy(const ClassicalEnsemble& ensemble) {
  if (ensemble.empty()) throw InvalidArgument("kinetic_energy: empty ensemble");
  double sum = 0.0;
  for (double r : ensemble.rho) sum += 0.5 * r * r;
  return sum / static_cast<double>(ensemble.size());
}

double kinetic_energy(const Eigen::VectorXd& populations, double scaled_planck, double beta) {
  const int n = static_cast<int>(populations.size());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rho = site_momentum(i, n, scaled_planck, beta);
    sum += 0.5 * rho * rho * populations[i];
  }
  return sum;
}

double shoulder_contrast(const Eigen::VectorXd& populations, double scaled_planck,
                         double boundary, double outer) {
  if (!(outer > boundary) || !(boundary > 0.0)) {
    throw InvalidArgument("shoulder_contrast needs 0 < boundary < outer");
  }
  const int n = static_cast<int>(populations.size());
  const auto at = [&](int ladder) {
    const int i = ladder_index(ladder, n);
    if (i < 0 || i >= n) throw InvalidArgument("shoulder_contrast: momentum outside the basis");
    return populations[i];
  };
  // Largest site strictly inside the boundary, and the sites bracketing `outer`.
  const int inside = static_cast<int>(std::ceil(boundary / scaled_planck)) - 1;
  const double x = outer / scaled_planck;
  const int below = static_cast<int>(std::floor(x));
  const double t = x - below;

  double inner_density = 0.0;
  double outer_density = 0.0;
  for (int sign : {1, -1}) {
    inner_density += at(sign * inside);
    outer_density += (1.0 - t) * at(sign * below) + t * at(sign * (below + 1));
  }
  if (outer_density <= 0.0) return std::numeric_limits<double>::infinity();
  return inner_density / outer_density;
}

std::vector<std::int64_t> continued_fraction(double w, int depth) {
  if (depth < 1) throw InvalidArgument("continued_fraction: depth must be >= 1");
  if (!std::isfinite(w)) throw InvalidArgument("continued_fraction: value must be finite");
  std::vector<std::int64_t> terms;
  double x = w;
  for (int i = 0; i < depth; ++i) {
    // Remainders within tol of 0 or 1 are round-off from earlier terms.
    const double tol = 1e-12 * std::max(1.0, std::abs(x));
    double a = std::floor(x);
    if (x - a > 1.0 - tol) a += 1.0;
    if (std::abs(a) > 9.0e18) break;
    terms.push_back(static_cast<std::int64_t>(a));
    const double frac = x - a;
    if (frac <= tol) break;
    x = 1.0 / frac;
  }
  return terms;
}

std::pair<std::int64_t, std::int64_t> convergent(std::span<const std::int64_t> terms) {
  if (terms.empty()) throw InvalidArgument("convergent: no terms");
  std::int64_t p_prev = 1, p = terms[0];
  std::int64_t q_prev = 0, q = 1;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    const std::int64_t p_next = terms[i] * p + p_prev;
    const std::int64_t q_next = terms[i] * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  return {p, q};
}

std::string to_string(CurveSource source) {
  return source == CurveSource::classical ? "classical" : "quantum";
}

void TransportCurve::validate() const {
  if (kick_index.size() != fraction_outside.size()) {
    throw InvalidArgument("transport curve arrays differ in length");
  }
  for (double f : fraction_outside) {
    if (!(f >= 0.0 && f <= 1.0 + 1e-12)) {
      throw InvalidArgument("transport curve fraction outside [0, 1]");
    }
  }
}

}  // namespace kamrotor
