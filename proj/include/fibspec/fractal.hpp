#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fibspec/spectrum.hpp"

namespace fibspec {

/// Number of grid boxes [k eps, (k+1) eps), anchored at 0, that meet the
/// union of the closed intervals. A right endpoint lying exactly on a grid
/// line occupies the box that starts there. Intervals must be sorted by
/// lo; they may touch or overlap.
std::int64_t box_count(std::span<const Interval> intervals, double eps);

struct BoxCount {
  double eps;
  std::int64_t count;
};

/// Box-counting slope of a set over a range of scales. This is the
/// finite-resolution stand-in for the local Hausdorff dimension.
struct DimensionEstimate {
  double slope = 0.0;
  double r_squared = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;
  std::vector<BoxCount> counts;  // eps ascending

  /// r^2 below this marks the estimate unreliable.
  static constexpr double kReliableR2 = 0.98;
  bool reliable() const { return r_squared >= kReliableR2; }
};

/// OLS slope of log N(eps) against log(1/eps) over `points` logarithmically
/// spaced scales in [eps_min, eps_max]. Throws std::invalid_argument for an
/// empty set, points < 3, or a scale range outside (0, diameter).
DimensionEstimate box_dimension(std::span<const Interval> intervals,
                                std::pair<double, double> eps_range, std::size_t points = 12);

/// 2 log(1 + sqrt 2): limit of D(I) log I as I grows.
double large_invariant_asymptote();

struct WindowEstimate {
  Interval window;
  DimensionEstimate estimate;
};

struct WindowReport {
  Interval window;
  double max_abs_invariant;
  double dimension;
  double r_squared;
  /// Some window with larger max|I| has a dimension estimate more than
  /// `slack` above this one.
  bool flag;
};

struct ConsistencyReport {
  std::vector<WindowReport> windows;
  double slack;
  double large_invariant_asymptote;
  std::size_t flag_count() const;
  std::string to_json() const;
};

/// Pairs each window's dimension estimate with max|I| over the profile
/// points inside it and checks that smaller invariants do not come with
/// materially smaller dimension estimates. Throws std::invalid_argument if
/// a window contains no profile point.
ConsistencyReport dimension_consistency_report(std::span<const ProfilePoint> profile,
                                               std::span<const WindowEstimate> estimates,
                                               double slack = 0.1);

}  // namespace fibspec
