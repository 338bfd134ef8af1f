#include "fibspec/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "fibspec/regression.hpp"

namespace fibspec {

std::int64_t box_count(std::span<const Interval> intervals, double eps) {
  if (intervals.empty()) throw std::invalid_argument("box_count: empty interval set");
  if (!(eps > 0.0)) throw std::invalid_argument("box_count: eps must be positive");

  std::int64_t count = 0;
  bool have_last = false;
  std::int64_t last = 0;  // highest box index counted so far
  for (const Interval& iv : intervals) {
    std::int64_t first = static_cast<std::int64_t>(std::floor(iv.lo / eps));
    const std::int64_t end = static_cast<std::int64_t>(std::floor(iv.hi / eps));
    if (have_last && first <= last) first = last + 1;
    if (end < first) continue;
    count += end - first + 1;
    last = end;
    have_last = true;
  }
  return count;
}

DimensionEstimate box_dimension(std::span<const Interval> intervals,
                                std::pair<double, double> eps_range, std::size_t points) {
  if (intervals.empty()) throw std::invalid_argument("box_dimension: empty interval set");
  if (points < 3) throw std::invalid_argument("box_dimension: need at least 3 scales");
  const auto [eps_min, eps_max] = eps_range;
  double lo = intervals.front().lo, hi = intervals.front().hi;
  for (const Interval& iv : intervals) {
    lo = std::min(lo, iv.lo);
    hi = std::max(hi, iv.hi);
  }
  const double diameter = hi - lo;
  if (!(eps_min > 0.0 && eps_min < eps_max && eps_max < diameter)) {
    throw std::invalid_argument("box_dimension: need 0 < eps_min < eps_max < diameter");
  }

  DimensionEstimate est;
  est.eps_min = eps_min;
  est.eps_max = eps_max;
  std::vector<double> xs, ys;
  const double ratio = std::log(eps_max / eps_min);
  for (std::size_t i = 0; i < points; ++i) {
    const double eps =
        i + 1 == points
            ? eps_max
            : eps_min * std::exp(ratio * static_cast<double>(i) / static_cast<double>(points - 1));
    const std::int64_t n = box_count(intervals, eps);
    est.counts.push_back({eps, n});
    xs.push_back(-std::log(eps));
    ys.push_back(std::log(static_cast<double>(n)));
  }
  const LineFit fit = fit_line(xs, ys);
  est.slope = fit.slope;
  est.r_squared = fit.r_squared;
  return est;
}

double large_invariant_asymptote() { return 2.0 * std::log(1.0 + std::sqrt(2.0)); }

std::size_t ConsistencyReport::flag_count() const {
  return static_cast<std::size_t>(
      std::count_if(windows.begin(), windows.end(), [](const WindowReport& w) { return w.flag; }));
}

std::string ConsistencyReport::to_json() const {
  nlohmann::json out;
  out["estimator"] = "box-counting slope (proxy for local Hausdorff dimension)";
  out["slack"] = slack;
  out["large_invariant_asymptote"] = large_invariant_asymptote;
  out["windows"] = nlohmann::json::array();
  for (const WindowReport& w : windows) {
    out["windows"].push_back({{"window", {w.window.lo, w.window.hi}},
                              {"max_abs_invariant", w.max_abs_invariant},
                              {"dimension", w.dimension},
                              {"r2", w.r_squared},
                              {"reliable", w.r_squared >= DimensionEstimate::kReliableR2},
                              {"flag", w.flag}});
  }
  return out.dump(2);
}

ConsistencyReport dimension_consistency_report(std::span<const ProfilePoint> profile,
                                               std::span<const WindowEstimate> estimates,
                                               double slack) {
  ConsistencyReport report{{}, slack, large_invariant_asymptote()};
  for (const WindowEstimate& we : estimates) {
    bool any = false;
    double max_abs = 0.0;
    for (const ProfilePoint& p : profile) {
      if (!we.window.contains(p.energy)) continue;
      any = true;
      max_abs = std::max(max_abs, std::abs(p.invariant));
    }
    if (!any) {
      throw std::invalid_argument("dimension_consistency_report: no invariant samples in window [" +
                                  std::to_string(we.window.lo) + ", " +
                                  std::to_string(we.window.hi) + "]");
    }
    report.windows.push_back(
        {we.window, max_abs, we.estimate.slope, we.estimate.r_squared, false});
  }
  for (WindowReport& w : report.windows) {
    for (const WindowReport& other : report.windows) {
      if (other.max_abs_invariant > w.max_abs_invariant &&
          w.dimension < other.dimension - slack) {
        w.flag = true;
      }
    }
  }
  return report;
}

}  // namespace fibspec
