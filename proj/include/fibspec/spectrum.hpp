#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fibspec/potential.hpp"
#include "fibspec/regression.hpp"
#include "fibspec/tracemap.hpp"

namespace fibspec {

enum class Spacing { linear, logarithmic };

/// `samples` energies from lo to hi inclusive.
struct EnergyWindow {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t samples = 2;
  Spacing spacing = Spacing::linear;

  /// Throws std::invalid_argument unless lo < hi, samples >= 2, and lo > 0
  /// for logarithmic spacing.
  void validate() const;
  double energy(std::size_t i) const;
  /// Grid step of a linear window.
  double spacing_width() const { return (hi - lo) / static_cast<double>(samples - 1); }
};

struct Interval {
  double lo;
  double hi;

  double length() const { return hi - lo; }
  bool contains(double e) const { return lo <= e && e <= hi; }
  bool operator==(const Interval&) const = default;
};

struct ScanParams {
  unsigned max_steps = kDefaultMaxSteps;
  double radius = kDefaultRadius;
  /// Bisection tolerance of the last refine_edges pass; 0 if unrefined.
  double refine_tol = 0.0;
};

struct SampleVerdict {
  double energy;
  std::optional<unsigned> escaped_at;
  double invariant;
};

/// Bracket left behind by refine_edges: `inside` survives max_steps,
/// `outside` escapes at step `outside_escape_step`.
struct EdgeBracket {
  double inside;
  double outside;
  unsigned outside_escape_step;
};

/// Escape-time approximation of the spectrum on a window. Retained
/// samples are those whose orbit does not escape within max_steps, which
/// over-approximates the spectrum.
struct SpectrumApproximation {
  EnergyWindow window;
  std::vector<SampleVerdict> verdicts;
  std::vector<Interval> intervals;
  ScanParams params;
  std::vector<EdgeBracket> edges;

  std::size_t retained_count() const;
};

SpectrumApproximation scan(const ModelSpec& model, const EnergyWindow& window,
                           unsigned max_steps = kDefaultMaxSteps,
                           double radius = kDefaultRadius);

/// Moves every interval endpoint that borders an escaping sample by
/// bisection on the escape verdict until the bracket is at most `tol`
/// wide. Endpoints stay on the non-escaping side. Throws
/// std::invalid_argument unless tol > 0.
SpectrumApproximation refine_edges(const ModelSpec& model, const SpectrumApproximation& approx,
                                   double tol);

struct ProfilePoint {
  double energy;
  double invariant;
};

std::vector<ProfilePoint> invariant_profile(const ModelSpec& model, const EnergyWindow& window);

/// Log-log fit of the sup-envelope of |I|: the profile is split into `bins`
/// logarithmic energy bins, and log max|I| per bin is regressed on log of
/// the bin's geometric centre. Bins that are empty or identically zero are
/// skipped; throws std::invalid_argument if fewer than 3 bins remain.
LineFit envelope_decay(std::span<const ProfilePoint> profile, std::size_t bins = 30);

struct SweepRow {
  double lambda;
  double sup_abs_invariant;
  std::size_t samples;
};

/// For each coupling, the sampled maximum of |I(E, lambda)| over the window.
/// The coupling replaces model.coupling. Couplings must be nonnegative and
/// strictly decreasing.
std::vector<SweepRow> lambda_sweep(const ModelSpec& model, std::span<const double> lambdas,
                                   const EnergyWindow& window);

/// Bands of the n-th periodic approximant, i.e. where |x_n(E)| <= 1.
struct BandTable {
  unsigned level;
  std::vector<Interval> bands;
};

/// Sign changes of |x_n| - 1 on the window grid, each located by bisection
/// to `tol`. Bands narrower than the grid step may be missed. Requires
/// 1 <= n <= 25.
BandTable approximant_bands(const ModelSpec& model, unsigned n, const EnergyWindow& window,
                            double tol = 1e-10);

}  // namespace fibspec
