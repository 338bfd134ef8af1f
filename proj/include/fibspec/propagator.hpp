#pragma once

#include "fibspec/potential.hpp"

namespace fibspec {

/// Solution data across a piece at energy E. Column one holds the
/// Neumann solution (y(0)=1, y'(0)=0), column two the Dirichlet solution
/// (y(0)=0, y'(0)=1), each evaluated at the right end: rows are (y, y').
struct TransferMatrix {
  double m11 = 1.0, m12 = 0.0;
  double m21 = 0.0, m22 = 1.0;
  double energy = 0.0;

  static TransferMatrix identity(double energy) { return {1.0, 0.0, 0.0, 1.0, energy}; }

  double determinant() const { return m11 * m22 - m12 * m21; }
  double trace() const { return m11 + m22; }
};

/// Matrix product; the energy of the left factor is kept.
TransferMatrix operator*(const TransferMatrix& lhs, const TransferMatrix& rhs);

/// Exact propagator of -y'' + v y = E y over a cell of width h.
/// Throws std::invalid_argument unless h > 0.
TransferMatrix constant_step(double v, double h, double energy);

/// Ordered product over the cells of `p`, last cell leftmost.
TransferMatrix transfer_matrix(const PotentialPiece& p, double energy);

double half_trace(const TransferMatrix& m);

/// Free comparison solutions c_k(x) = cos(kx), s_k(x) = sin(kx)/k.
double c_kappa(double kappa, double x);
double s_kappa(double kappa, double x);

/// Constants of the high-energy comparison estimate
///   |x_p(E) - cos(kappa l_p)| <= C / kappa,
/// with Q = max(||f_ab||, 1) and C = Q exp(Q sqrt(l_ab)).
struct ComparisonData {
  double kappa;
  double c_of_ell;
  double bound_constant;
  double norm_Q;

  double bound() const { return bound_constant / kappa; }
};

/// Throws std::invalid_argument unless E > 0.
ComparisonData comparison_bound(const PotentialPiece& p, const PotentialPiece& p_ab,
                                double energy);

}  // namespace fibspec
