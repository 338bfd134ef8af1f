#include "fibspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fibspec/parallel.hpp"

namespace fibspec {

void EnergyWindow::validate() const {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw std::invalid_argument("energy window: need finite lo < hi");
  }
  if (samples < 2) throw std::invalid_argument("energy window: need at least 2 samples");
  if (spacing == Spacing::logarithmic && !(lo > 0.0)) {
    throw std::invalid_argument("energy window: logarithmic spacing needs lo > 0");
  }
}

double EnergyWindow::energy(std::size_t i) const {
  if (i + 1 >= samples) return hi;
  const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
  if (spacing == Spacing::logarithmic) return lo * std::pow(hi / lo, t);
  return lo + (hi - lo) * t;
}

std::size_t SpectrumApproximation::retained_count() const {
  return static_cast<std::size_t>(std::count_if(
      verdicts.begin(), verdicts.end(), [](const SampleVerdict& v) { return !v.escaped_at; }));
}

namespace {

std::optional<unsigned> escape_step(const CoupledModel& m, double e, const ScanParams& p) {
  return iterate_orbit(m.gamma(e), p.max_steps, p.radius).escaped_at;
}

/// Index ranges [first, last] of maximal runs where keep(i) holds.
template <typename Pred>
std::vector<std::pair<std::size_t, std::size_t>> runs(std::size_t n, Pred keep) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < n) {
    if (!keep(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && keep(j + 1)) ++j;
    out.emplace_back(i, j);
    i = j + 1;
  }
  return out;
}

}  // namespace

SpectrumApproximation scan(const ModelSpec& model, const EnergyWindow& window,
                           unsigned max_steps, double radius) {
  window.validate();
  const CoupledModel m(model);
  SpectrumApproximation out;
  out.window = window;
  out.params = ScanParams{max_steps, radius, 0.0};
  out.verdicts.resize(window.samples);

  parallel_for(window.samples, [&](std::size_t i) {
    const double e = window.energy(i);
    const TraceTriple g = m.gamma(e);
    out.verdicts[i] = {e, iterate_orbit(g, max_steps, radius).escaped_at, invariant(g)};
  });

  for (auto [first, last] : runs(out.verdicts.size(),
                                 [&](std::size_t i) { return !out.verdicts[i].escaped_at; })) {
    out.intervals.push_back({out.verdicts[first].energy, out.verdicts[last].energy});
  }
  return out;
}

SpectrumApproximation refine_edges(const ModelSpec& model, const SpectrumApproximation& approx,
                                   double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("refine_edges: tol must be positive");
  const CoupledModel m(model);
  const auto& v = approx.verdicts;
  const auto spans = runs(v.size(), [&](std::size_t i) { return !v[i].escaped_at; });

  // Bisect between a retained and an escaping energy.
  auto bisect = [&](double inside, double outside, unsigned outside_step) {
    while (std::abs(outside - inside) > tol) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      if (auto step = escape_step(m, mid, approx.params)) {
        outside = mid;
        outside_step = *step;
      } else {
        inside = mid;
      }
    }
    return EdgeBracket{inside, outside, outside_step};
  };

  struct Refined {
    Interval interval;
    std::optional<EdgeBracket> left, right;
  };
  std::vector<Refined> refined(spans.size());
  parallel_for(spans.size(), [&](std::size_t k) {
    const auto [first, last] = spans[k];
    Refined r{{v[first].energy, v[last].energy}, std::nullopt, std::nullopt};
    if (first > 0) {
      r.left = bisect(v[first].energy, v[first - 1].energy, *v[first - 1].escaped_at);
      r.interval.lo = r.left->inside;
    }
    if (last + 1 < v.size()) {
      r.right = bisect(v[last].energy, v[last + 1].energy, *v[last + 1].escaped_at);
      r.interval.hi = r.right->inside;
    }
    refined[k] = r;
  });

  SpectrumApproximation out = approx;
  out.params.refine_tol = tol;
  out.intervals.clear();
  out.edges.clear();
  for (const Refined& r : refined) {
    out.intervals.push_back(r.interval);
    if (r.left) out.edges.push_back(*r.left);
    if (r.right) out.edges.push_back(*r.right);
  }
  return out;
}

std::vector<ProfilePoint> invariant_profile(const ModelSpec& model, const EnergyWindow& window) {
  window.validate();
  const CoupledModel m(model);
  std::vector<ProfilePoint> out(window.samples);
  parallel_for(window.samples, [&](std::size_t i) {
    const double e = window.energy(i);
    out[i] = {e, invariant_of_energy(m, e)};
  });
  return out;
}

LineFit envelope_decay(std::span<const ProfilePoint> profile, std::size_t bins) {
  if (profile.empty() || bins < 3) throw std::invalid_argument("envelope_decay: empty profile");
  double lo = profile.front().energy, hi = lo;
  for (const ProfilePoint& p : profile) {
    lo = std::min(lo, p.energy);
    hi = std::max(hi, p.energy);
  }
  if (!(lo > 0.0 && hi > lo)) {
    throw std::invalid_argument("envelope_decay: energies must be positive and not all equal");
  }

  const double log_lo = std::log(lo);
  const double log_width = (std::log(hi) - log_lo) / static_cast<double>(bins);
  std::vector<double> envelope(bins, 0.0);
  for (const ProfilePoint& p : profile) {
    auto b = static_cast<std::size_t>((std::log(p.energy) - log_lo) / log_width);
    b = std::min(b, bins - 1);
    envelope[b] = std::max(envelope[b], std::abs(p.invariant));
  }

  std::vector<double> xs, ys;
  for (std::size_t b = 0; b < bins; ++b) {
    if (!(envelope[b] > 0.0)) continue;
    xs.push_back(log_lo + (static_cast<double>(b) + 0.5) * log_width);
    ys.push_back(std::log(envelope[b]));
  }
  if (xs.size() < 3) throw std::invalid_argument("envelope_decay: fewer than 3 nonzero bins");
  return fit_line(xs, ys);
}

std::vector<SweepRow> lambda_sweep(const ModelSpec& model, std::span<const double> lambdas,
                                   const EnergyWindow& window) {
  window.validate();
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] >= 0.0)) throw std::invalid_argument("lambda_sweep: couplings must be >= 0");
    if (i > 0 && !(lambdas[i] < lambdas[i - 1])) {
      throw std::invalid_argument("lambda_sweep: couplings must be strictly decreasing");
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    ModelSpec scaled = model;
    scaled.coupling = lambda;
    double sup = 0.0;
    for (const ProfilePoint& p : invariant_profile(scaled, window)) {
      sup = std::max(sup, std::abs(p.invariant));
    }
    rows.push_back({lambda, sup, window.samples});
  }
  return rows;
}

BandTable approximant_bands(const ModelSpec& model, unsigned n, const EnergyWindow& window,
                            double tol) {
  window.validate();
  if (n < 1 || n > 25) throw std::invalid_argument("approximant_bands: level must be in [1, 25]");
  if (!(tol > 0.0)) throw std::invalid_argument("approximant_bands: tol must be positive");
  const CoupledModel m(model);

  auto inside = [&](double e) {
    const double x = orbit_coordinate(m.gamma(e), n);
    return std::isfinite(x) && std::abs(x) <= 1.0;
  };
  auto bisect = [&](double in, double out) {
    while (std::abs(out - in) > tol) {
      const double mid = 0.5 * (in + out);
      if (mid == in || mid == out) break;
      (inside(mid) ? in : out) = mid;
    }
    return in;
  };

  std::vector<char> flags(window.samples);
  parallel_for(window.samples, [&](std::size_t i) { flags[i] = inside(window.energy(i)); });

  BandTable table{n, {}};
  for (auto [first, last] : runs(flags.size(), [&](std::size_t i) { return flags[i] != 0; })) {
    double lo = window.energy(first), hi = window.energy(last);
    if (first > 0) lo = bisect(lo, window.energy(first - 1));
    if (last + 1 < flags.size()) hi = bisect(hi, window.energy(last + 1));
    table.bands.push_back({lo, hi});
  }
  return table;
}

}  // namespace fibspec
