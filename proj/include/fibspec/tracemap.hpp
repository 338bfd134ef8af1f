#pragma once

#include <optional>

#include "fibspec/potential.hpp"
#include "fibspec/propagator.hpp"

namespace fibspec {

struct TraceTriple {
  double x = 0.0, y = 0.0, z = 0.0;

  double sup_norm() const;
  bool finite() const;
  bool operator==(const TraceTriple&) const = default;
};

/// T(x, y, z) = (2xy - z, x, y).
TraceTriple trace_map_step(const TraceTriple& p);

/// T^{-1}(x, y, z) = (y, z, 2yz - x).
TraceTriple inverse_trace_map_step(const TraceTriple& p);

/// Fricke-Vogt invariant x^2 + y^2 + z^2 - 2xyz - 1, conserved by T.
double invariant(const TraceTriple& p);

/// A model with the coupling already applied to both pieces. Holds the
/// scaled f_a, f_b and f_ab = (f_a | f_b); cheap to evaluate repeatedly.
class CoupledModel {
public:
  explicit CoupledModel(const ModelSpec& spec);

  const PotentialPiece& piece_a() const { return a_; }
  const PotentialPiece& piece_b() const { return b_; }
  const PotentialPiece& piece_ab() const { return ab_; }
  double coupling() const { return coupling_; }

  TransferMatrix matrix(Letter l, double energy) const;

  /// gamma(E) = (x_ab(E), x_a(E), x_b(E)), with M_ab = M_b M_a.
  TraceTriple gamma(double energy) const;

private:
  double coupling_;
  PotentialPiece a_;
  PotentialPiece b_;
  PotentialPiece ab_;
};

TraceTriple gamma(const ModelSpec& model, double energy);

/// I(E) = invariant(gamma(E)).
double invariant_of_energy(const ModelSpec& model, double energy);
double invariant_of_energy(const CoupledModel& model, double energy);

struct OrbitResult {
  unsigned iterates_computed = 0;
  std::optional<unsigned> escaped_at;
  double max_norm = 0.0;
  TraceTriple final_triple;
};

inline constexpr unsigned kDefaultMaxSteps = 40;
inline constexpr double kDefaultRadius = 1e6;

/// Iterates T from `start`, testing T^n(start) for n = 0..max_steps. The
/// orbit is declared escaping at the first n where
///   - a coordinate is non-finite, or
///   - the sup-norm exceeds `radius`, or
///   - the two leading coordinates both exceed 1 in absolute value.
/// Throws std::invalid_argument unless max_steps >= 1 and radius > 1.
OrbitResult iterate_orbit(const TraceTriple& start, unsigned max_steps,
                          double radius = kDefaultRadius);

/// x_n: the half-trace over S^n(a), read off the orbit of gamma(E)
/// (T^m(gamma) = (x_{m+1}, x_m, x_{m-1})). May be non-finite for large n.
double orbit_coordinate(const TraceTriple& gamma_point, unsigned n);

}  // namespace fibspec
