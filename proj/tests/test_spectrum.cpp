#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>

#include "fibspec/spectrum.hpp"
#include "oracles.hpp"

using namespace fibspec;

namespace {

bool covered(const std::vector<Interval>& bands, double e, double slack) {
  for (const Interval& b : bands) {
    if (b.lo - slack <= e && e <= b.hi + slack) return true;
  }
  return false;
}

struct ThreadsEnv {
  explicit ThreadsEnv(const char* value) { setenv("FIBSPEC_THREADS", value, 1); }
  ~ThreadsEnv() { unsetenv("FIBSPEC_THREADS"); }
};

}  // namespace

TEST_CASE("energy windows") {
  const EnergyWindow lin{0.0, 10.0, 11};
  CHECK(lin.energy(0) == 0.0);
  CHECK(lin.energy(3) == 3.0);
  CHECK(lin.energy(10) == 10.0);
  const EnergyWindow lg{1.0, 1000.0, 4, Spacing::logarithmic};
  CHECK(lg.energy(1) == doctest::Approx(10.0));
  CHECK(lg.energy(3) == 1000.0);
  CHECK_THROWS_AS((EnergyWindow{1.0, 1.0, 10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((EnergyWindow{0.0, 1.0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((EnergyWindow{0.0, 1.0, 10, Spacing::logarithmic}.validate()),
                  std::invalid_argument);
}

TEST_CASE("scan: free model") {
  const auto pos = scan(free_model(), {0.1, 50.0, 1000});
  REQUIRE(pos.intervals.size() == 1);
  CHECK(pos.intervals[0] == Interval{0.1, 50.0});
  CHECK(pos.retained_count() == 1000);

  const auto neg = scan(free_model(), {-5.0, -0.1, 1000});
  CHECK(neg.intervals.empty());
  CHECK(neg.retained_count() == 0);
}

TEST_CASE("scan: chi-model has gaps") {
  const auto s = scan(chi_model(1.0), {0.0, 20.0, 10000});
  CHECK(s.intervals.size() > 1);
  for (std::size_t i = 0; i < s.intervals.size(); ++i) {
    CHECK(s.intervals[i].lo <= s.intervals[i].hi);
    CHECK(s.intervals[i].lo >= 0.0);
    CHECK(s.intervals[i].hi <= 20.0);
    if (i > 0) CHECK(s.intervals[i - 1].hi < s.intervals[i].lo);
  }
  for (const SampleVerdict& v : s.verdicts) {
    if (covered(s.intervals, v.energy, 0.0)) CHECK_FALSE(v.escaped_at);
  }
}

TEST_CASE("retained set shrinks as max_steps grows") {
  const EnergyWindow w{0.0, 20.0, 4000};
  const auto s10 = scan(chi_model(1.0), w, 10);
  const auto s20 = scan(chi_model(1.0), w, 20);
  const auto s40 = scan(chi_model(1.0), w, 40);
  for (std::size_t i = 0; i < w.samples; ++i) {
    if (!s40.verdicts[i].escaped_at) CHECK_FALSE(s20.verdicts[i].escaped_at);
    if (!s20.verdicts[i].escaped_at) CHECK_FALSE(s10.verdicts[i].escaped_at);
  }
  CHECK(s40.retained_count() <= s20.retained_count());
  CHECK(s20.retained_count() <= s10.retained_count());
}

TEST_CASE("refine_edges: free band edge at zero") {
  const ModelSpec free = free_model();
  const auto s = scan(free, {-1.0, 5.0, 601});
  const double tol = 1e-9;
  const auto r = refine_edges(free, s, tol);
  REQUIRE(r.intervals.size() == 1);
  CHECK(std::abs(r.intervals[0].lo) <= tol);
  CHECK(r.intervals[0].hi == 5.0);
  CHECK(r.params.refine_tol == tol);
  REQUIRE(r.edges.size() == 1);
  CHECK(r.edges[0].inside >= 0.0);
  CHECK(r.edges[0].outside < 0.0);

  CHECK_THROWS_AS(refine_edges(free, s, 0.0), std::invalid_argument);
}

TEST_CASE("refine_edges leaves resolved intervals alone") {
  const ModelSpec chi = chi_model(1.0);
  const auto s = scan(chi, {0.0, 20.0, 2000});
  const auto r = refine_edges(chi, s, 1.0);  // tol above the grid step
  CHECK(r.intervals == s.intervals);
  const double tol = 1e-8;
  const auto once = refine_edges(chi, s, tol);
  const auto twice = refine_edges(chi, once, tol);
  CHECK(once.intervals == twice.intervals);
}

TEST_CASE("refined chi-model gap edges sit on |x_n| = 1 crossings") {
  const ModelSpec chi = chi_model(1.0);
  const CoupledModel m(chi);
  const double tol = 1e-9;
  const auto r = refine_edges(chi, scan(chi, {0.0, 20.0, 4000}), tol);
  REQUIRE(r.edges.size() > 2);
  for (const EdgeBracket& e : r.edges) {
    CHECK(std::abs(e.inside - e.outside) <= tol);
    // The escape test at step m reads x_m and x_{m+1}; one of them crosses
    // |x| = 1 inside the bracket, so within tol <= 10 tol of the edge.
    const double a = e.inside, b = e.outside;
    bool crossing = false;
    for (unsigned j : {e.outside_escape_step, e.outside_escape_step + 1}) {
      const double xa = std::abs(orbit_coordinate(m.gamma(a), j)) - 1.0;
      const double xb = std::abs(orbit_coordinate(m.gamma(b), j)) - 1.0;
      crossing = crossing || (xa <= 0.0) != (xb <= 0.0);
    }
    CHECK(crossing);
  }
  for (std::size_t i = 1; i < r.intervals.size(); ++i) {
    CHECK(r.intervals[i - 1].hi < r.intervals[i].lo);
  }
}

TEST_CASE("invariant_profile") {
  for (const ProfilePoint& p : invariant_profile(free_model(), {0.1, 100.0, 2000})) {
    CHECK(std::abs(p.invariant) <= 1e-10);
  }
  std::mt19937_64 rng(8);
  ModelSpec zero = oracle::random_model(rng);
  zero.coupling = 0.0;
  for (const ProfilePoint& p : invariant_profile(zero, {0.1, 100.0, 2000})) {
    CHECK(std::abs(p.invariant) <= 1e-10);
  }

  const auto profile = invariant_profile(chi_model(1.0), {1e2, 1e5, 4000, Spacing::logarithmic});
  const LineFit fit = envelope_decay(profile, 30);
  CHECK(fit.slope <= -0.45);
  CHECK(fit.r_squared >= 0.9);
}

TEST_CASE("envelope_decay on a synthetic power law") {
  std::vector<ProfilePoint> pts;
  for (int i = 0; i < 3000; ++i) {
    const double e = std::pow(10.0, 1.0 + 3.0 * i / 2999.0);
    pts.push_back({e, 5.0 * std::pow(e, -0.5) * std::sin(e) * std::sin(e)});
  }
  const LineFit fit = envelope_decay(pts, 20);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.02));
  CHECK_THROWS_AS(envelope_decay(std::vector<ProfilePoint>{}, 20), std::invalid_argument);
}

TEST_CASE("lambda_sweep") {
  const EnergyWindow w{1.0, 50.0, 2000};
  const std::vector<double> lambdas{1.0, 0.1, 0.01, 0.0};
  const auto rows = lambda_sweep(chi_model(1.0), lambdas, w);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].sup_abs_invariant > rows[1].sup_abs_invariant);
  CHECK(rows[1].sup_abs_invariant > rows[2].sup_abs_invariant);
  CHECK(rows[3].sup_abs_invariant <= 1e-10);
  CHECK(rows[0].samples == 2000);

  const std::vector<double> small{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  const auto srows = lambda_sweep(chi_model(1.0), small, w);
  std::vector<double> lx, ly;
  for (const SweepRow& r : srows) {
    lx.push_back(std::log(r.lambda));
    ly.push_back(std::log(r.sup_abs_invariant));
  }
  CHECK(fit_line(lx, ly).slope >= 0.9);

  CHECK(lambda_sweep(chi_model(1.0), std::vector<double>{1.0}, w).size() == 1);
  CHECK_THROWS_AS(lambda_sweep(chi_model(1.0), std::vector<double>{0.1, 1.0}, w),
                  std::invalid_argument);
  CHECK_THROWS_AS(lambda_sweep(chi_model(1.0), std::vector<double>{-1.0}, w),
                  std::invalid_argument);
}

TEST_CASE("approximant_bands") {
  const auto free1 = approximant_bands(free_model(), 1, {0.0, 10.0, 500});
  REQUIRE(free1.bands.size() == 1);
  CHECK(free1.bands[0] == Interval{0.0, 10.0});

  const ModelSpec chi = chi_model(1.0);
  const EnergyWindow w{0.0, 20.0, 5000};
  std::size_t previous = 0;
  for (unsigned n = 4; n <= 10; ++n) {
    const auto t = approximant_bands(chi, n, w);
    CHECK(t.level == n);
    CHECK(t.bands.size() >= previous);
    previous = t.bands.size();
    for (std::size_t i = 1; i < t.bands.size(); ++i) CHECK(t.bands[i - 1].hi < t.bands[i].lo);
  }

  CHECK_THROWS_AS(approximant_bands(chi, 0, w), std::invalid_argument);
  CHECK_THROWS_AS(approximant_bands(chi, 26, w), std::invalid_argument);
}

TEST_CASE("retained samples lie in consecutive approximant bands") {
  const ModelSpec chi = chi_model(1.0);
  const EnergyWindow w{0.0, 20.0, 5000};
  const double tol = 1e-10;
  const auto s = scan(chi, w, 40);
  for (unsigned n = 1; n <= 24; ++n) {
    const auto bn = approximant_bands(chi, n, w, tol);
    const auto bn1 = approximant_bands(chi, n + 1, w, tol);
    std::size_t misses = 0;
    for (const SampleVerdict& v : s.verdicts) {
      if (v.escaped_at) continue;
      if (!covered(bn.bands, v.energy, tol) && !covered(bn1.bands, v.energy, tol)) ++misses;
    }
    CHECK_MESSAGE(misses == 0, "level " << n);
  }
}

TEST_CASE("invariant is nonnegative on retained samples") {
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto s = scan(chi_model(lambda), {0.0, 30.0, 20000});
    for (const SampleVerdict& v : s.verdicts) {
      if (!v.escaped_at) CHECK(v.invariant >= -1e-6);
    }
  }
}

TEST_CASE("scan output does not depend on the thread count") {
  std::mt19937_64 rng(12);
  const ModelSpec model = oracle::random_model(rng);
  const EnergyWindow w{-2.0, 30.0, 7001};
  SpectrumApproximation one, many;
  {
    ThreadsEnv env("1");
    one = refine_edges(model, scan(model, w), 1e-9);
  }
  {
    ThreadsEnv env("7");
    many = refine_edges(model, scan(model, w), 1e-9);
  }
  CHECK(one.intervals == many.intervals);
  for (std::size_t i = 0; i < w.samples; ++i) {
    CHECK(one.verdicts[i].escaped_at == many.verdicts[i].escaped_at);
    CHECK(std::memcmp(&one.verdicts[i].invariant, &many.verdicts[i].invariant, sizeof(double)) == 0);
  }
}
