#include "fibspec/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fibspec {

TransferMatrix operator*(const TransferMatrix& lhs, const TransferMatrix& rhs) {
  return {lhs.m11 * rhs.m11 + lhs.m12 * rhs.m21, lhs.m11 * rhs.m12 + lhs.m12 * rhs.m22,
          lhs.m21 * rhs.m11 + lhs.m22 * rhs.m21, lhs.m21 * rhs.m12 + lhs.m22 * rhs.m22,
          lhs.energy};
}

TransferMatrix constant_step(double v, double h, double energy) {
  if (!(h > 0.0)) throw std::invalid_argument("constant_step: width must be positive");
  const double k2 = energy - v;
  if (k2 == 0.0) return {1.0, h, 0.0, 1.0, energy};

  if (std::abs(k2) < 1e-9) {
    // Series in k^2 through second order, valid on both sides of E = v.
    const double h2 = h * h;
    const double c = 1.0 - k2 * h2 / 2.0 + k2 * k2 * h2 * h2 / 24.0;
    const double s = h * (1.0 - k2 * h2 / 6.0 + k2 * k2 * h2 * h2 / 120.0);
    const double ks = k2 * h * (1.0 - k2 * h2 / 6.0 + k2 * k2 * h2 * h2 / 120.0);
    return {c, s, -ks, c, energy};
  }

  if (k2 > 0.0) {
    const double k = std::sqrt(k2);
    const double c = std::cos(k * h);
    const double s = std::sin(k * h);
    return {c, s / k, -k * s, c, energy};
  }
  const double mu = std::sqrt(-k2);
  const double c = std::cosh(mu * h);
  const double s = std::sinh(mu * h);
  return {c, s / mu, mu * s, c, energy};
}

TransferMatrix transfer_matrix(const PotentialPiece& p, double energy) {
  TransferMatrix m = TransferMatrix::identity(energy);
  for (const Cell& c : p.cells()) m = constant_step(c.value, c.width, energy) * m;
  return m;
}

double half_trace(const TransferMatrix& m) { return 0.5 * m.trace(); }

double c_kappa(double kappa, double x) { return std::cos(kappa * x); }

double s_kappa(double kappa, double x) {
  return kappa == 0.0 ? x : std::sin(kappa * x) / kappa;
}

ComparisonData comparison_bound(const PotentialPiece& p, const PotentialPiece& p_ab,
                                double energy) {
  if (!(energy > 0.0)) throw std::invalid_argument("comparison_bound: energy must be positive");
  const double kappa = std::sqrt(energy);
  const double q = std::max(l2_norm(p_ab), 1.0);
  const double c = q * std::exp(q * std::sqrt(p_ab.length()));
  return {kappa, c_kappa(kappa, p.length()), c, q};
}

}  // namespace fibspec
