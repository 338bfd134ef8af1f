#include "fibspec/tracemap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fibspec {

double TraceTriple::sup_norm() const {
  return std::max({std::abs(x), std::abs(y), std::abs(z)});
}

bool TraceTriple::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

TraceTriple trace_map_step(const TraceTriple& p) { return {2.0 * p.x * p.y - p.z, p.x, p.y}; }

TraceTriple inverse_trace_map_step(const TraceTriple& p) {
  return {p.y, p.z, 2.0 * p.y * p.z - p.x};
}

double invariant(const TraceTriple& p) {
  return p.x * p.x + p.y * p.y + p.z * p.z - 2.0 * p.x * p.y * p.z - 1.0;
}

namespace {

const ModelSpec& validated(const ModelSpec& spec) {
  spec.validate();
  return spec;
}

}  // namespace

CoupledModel::CoupledModel(const ModelSpec& spec)
    : coupling_(validated(spec).coupling),
      a_(scale(spec.piece_a, spec.coupling)),
      b_(scale(spec.piece_b, spec.coupling)),
      ab_(make_ab(a_, b_)) {}

TransferMatrix CoupledModel::matrix(Letter l, double energy) const {
  return transfer_matrix(l == Letter::a ? a_ : b_, energy);
}

TraceTriple CoupledModel::gamma(double energy) const {
  const TransferMatrix ma = transfer_matrix(a_, energy);
  const TransferMatrix mb = transfer_matrix(b_, energy);
  return {half_trace(mb * ma), half_trace(ma), half_trace(mb)};
}

TraceTriple gamma(const ModelSpec& model, double energy) {
  return CoupledModel(model).gamma(energy);
}

double invariant_of_energy(const ModelSpec& model, double energy) {
  return invariant(gamma(model, energy));
}

double invariant_of_energy(const CoupledModel& model, double energy) {
  return invariant(model.gamma(energy));
}

OrbitResult iterate_orbit(const TraceTriple& start, unsigned max_steps, double radius) {
  if (max_steps < 1) throw std::invalid_argument("iterate_orbit: max_steps must be >= 1");
  if (!(radius > 1.0)) throw std::invalid_argument("iterate_orbit: radius must exceed 1");

  OrbitResult r;
  TraceTriple p = start;
  for (unsigned n = 0;; ++n) {
    const bool finite = p.finite();
    if (finite) r.max_norm = std::max(r.max_norm, p.sup_norm());
    if (!finite || p.sup_norm() > radius ||
        (std::abs(p.x) > 1.0 && std::abs(p.y) > 1.0)) {
      r.escaped_at = n;
      break;
    }
    if (n == max_steps) break;
    p = trace_map_step(p);
    ++r.iterates_computed;
  }
  r.final_triple = p;
  return r;
}

double orbit_coordinate(const TraceTriple& gamma_point, unsigned n) {
  if (n == 0) return gamma_point.y;
  TraceTriple p = gamma_point;
  for (unsigned i = 1; i < n && std::isfinite(p.x); ++i) p = trace_map_step(p);
  return p.x;
}

}  // namespace fibspec
