#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fibspec/propagator.hpp"
#include "oracles.hpp"

using namespace fibspec;
using doctest::Approx;

namespace {

double max_entry_diff(const TransferMatrix& a, const TransferMatrix& b) {
  return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                   std::abs(a.m22 - b.m22)});
}

double max_entry(const TransferMatrix& m) {
  return std::max({std::abs(m.m11), std::abs(m.m12), std::abs(m.m21), std::abs(m.m22)});
}

}  // namespace

TEST_CASE("constant_step closed forms") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const auto m = constant_step(0.0, 1.0, pi2);
  CHECK(std::abs(m.m11 + 1.0) < 1e-12);
  CHECK(std::abs(m.m12) < 1e-12);
  CHECK(std::abs(m.m21) < 1e-12);
  CHECK(std::abs(m.m22 + 1.0) < 1e-12);

  const auto flat = constant_step(0.0, 1.0, 0.0);
  CHECK(flat.m11 == 1.0);
  CHECK(flat.m12 == 1.0);
  CHECK(flat.m21 == 0.0);
  CHECK(flat.m22 == 1.0);

  // Frozen from cosh(1), sinh(1); cross-checked against RK4 below.
  const auto hyp = constant_step(1.0, 1.0, 0.0);
  CHECK(hyp.m11 == Approx(1.5430806348152437).epsilon(1e-15));
  CHECK(hyp.m12 == Approx(1.1752011936438014).epsilon(1e-15));
  CHECK(hyp.m21 == Approx(1.1752011936438014).epsilon(1e-15));
  CHECK(hyp.m22 == Approx(1.5430806348152437).epsilon(1e-15));
  const PotentialPiece cell(PieceLabel::a, 1.0, {{1.0, 1.0}});
  CHECK(max_entry_diff(hyp, oracle::rk4_transfer(cell, 0.0)) < 1e-10);

  CHECK_THROWS_AS(constant_step(0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(constant_step(0.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("constant_step is continuous across E = v") {
  for (double v : {-3.0, 0.0, 2.5}) {
    for (double h : {0.1, 1.0, 4.0}) {
      const auto at = constant_step(v, h, v);
      for (double d : {1e-12, 1e-10, 5e-10, 2e-9, 1e-8}) {
        for (double sign : {-1.0, 1.0}) {
          const auto m = constant_step(v, h, v + sign * d);
          // Entries move by O(d h^3) away from the turning value.
          CHECK(max_entry_diff(m, at) < 10.0 * d * (h + h * h * h) + 1e-15);
          CHECK(std::abs(m.determinant() - 1.0) < 1e-13);
        }
      }
      // Either side of the series cutoff agrees with the exact forms.
      const double k2_in = 0.999e-9, k2_out = 1.001e-9;
      const auto inside = constant_step(v, h, v + k2_in);
      const auto outside = constant_step(v, h, v + k2_out);
      CHECK(max_entry_diff(inside, outside) < 1e-11 * (h + h * h * h) + 1e-14);
    }
  }
}

TEST_CASE("constant_step agrees with fine-step integration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> v(-5.0, 5.0), h(0.1, 1.5), e(-10.0, 60.0);
  for (int i = 0; i < 25; ++i) {
    const double vi = v(rng), hi = h(rng), ei = e(rng);
    const PotentialPiece cell(PieceLabel::a, hi, {{hi, vi}});
    const auto exact = constant_step(vi, hi, ei);
    const auto ref = oracle::rk4_transfer(cell, ei);
    CHECK(max_entry_diff(exact, ref) < 1e-8 * std::max(1.0, max_entry(exact)));
  }
}

TEST_CASE("transfer_matrix over pieces") {
  const PotentialPiece free(PieceLabel::a, 1.0, {{1.0, 0.0}});
  for (double e : {0.3, 2.0, 17.0, 400.0}) {
    const double k = std::sqrt(e);
    const auto m = transfer_matrix(free, e);
    CHECK(m.m11 == Approx(std::cos(k)).epsilon(1e-14));
    CHECK(m.m12 == Approx(std::sin(k) / k).epsilon(1e-14));
    CHECK(m.m21 == Approx(-k * std::sin(k)).epsilon(1e-14));
    CHECK(m.m22 == Approx(std::cos(k)).epsilon(1e-14));
  }

  const PotentialPiece chi_a(PieceLabel::a, 1.0, {{1.0, 1.0}});
  const auto m = transfer_matrix(chi_a, 2.0);
  CHECK(m.m11 == Approx(0.5403023058681398).epsilon(1e-14));
  CHECK(m.m12 == Approx(0.8414709848078965).epsilon(1e-14));
  CHECK(m.m21 == Approx(-0.8414709848078965).epsilon(1e-14));
  CHECK(m.m22 == Approx(0.5403023058681398).epsilon(1e-14));
  CHECK(max_entry_diff(m, oracle::rk4_transfer(chi_a, 2.0)) < 1e-10);

  const PotentialPiece two(PieceLabel::a, 1.5, {{0.5, 2.0}, {1.0, -1.0}});
  const PotentialPiece first(PieceLabel::a, 0.5, {{0.5, 2.0}});
  const PotentialPiece second(PieceLabel::a, 1.0, {{1.0, -1.0}});
  for (double e : {-3.0, 0.0, 1.0, 8.0}) {
    CHECK(max_entry_diff(transfer_matrix(two, e),
                         transfer_matrix(second, e) * transfer_matrix(first, e)) < 1e-14);
  }
}

TEST_CASE("half_trace") {
  CHECK(half_trace(TransferMatrix::identity(0.0)) == 1.0);
  const PotentialPiece free(PieceLabel::a, 1.0, {{1.0, 0.0}});
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(half_trace(transfer_matrix(free, pi2)) == Approx(-1.0).epsilon(1e-12));
  const PotentialPiece chi_a(PieceLabel::a, 1.0, {{1.0, 1.0}});
  CHECK(half_trace(transfer_matrix(chi_a, 2.0)) == Approx(0.5403023058681398).epsilon(1e-14));
}

TEST_CASE("free pieces give cosine and cosh half-traces") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> len(0.1, 3.0), e(-20.0, 1000.0);
  for (int i = 0; i < 300; ++i) {
    const double l = len(rng), ei = e(rng);
    const PotentialPiece free(PieceLabel::b, l, {{l * 0.3, 0.0}, {l * 0.7, 0.0}});
    const double x = half_trace(transfer_matrix(free, ei));
    const double expected =
        ei > 0 ? std::cos(std::sqrt(ei) * l) : std::cosh(std::sqrt(-ei) * l);
    CHECK(std::abs(x - expected) < 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("Wronskian: det M = 1") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> low(-100.0, 100.0), log_high(std::log(100.0), std::log(1e6));
  std::bernoulli_distribution high(0.5);
  for (int i = 0; i < 2000; ++i) {
    // Total length <= 0.6 keeps |M| below ~1e4 at E = -100, where rounding
    // in cosh^2 - sinh^2 stays under 1e-10.
    const auto p = oracle::random_piece(rng, PieceLabel::a, 0.05, 0.6, 5.0, 8);
    const double e = high(rng) ? std::exp(log_high(rng)) : low(rng);
    CHECK(std::abs(transfer_matrix(p, e).determinant() - 1.0) <= 1e-10);
  }
}

TEST_CASE("Wronskian drift is bounded by rounding in |M|^2 for long pieces") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> e(-100.0, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const auto p = oracle::random_piece(rng, PieceLabel::a, 0.5, 3.0, 5.0, 8);
    const double ei = i % 2 == 0 ? e(rng) / 1e4 : e(rng);
    const auto m = transfer_matrix(p, ei);
    const double scale = std::max(1.0, max_entry(m) * max_entry(m));
    CHECK(std::abs(m.determinant() - 1.0) <= 1e-13 * scale);
  }
}

TEST_CASE("M_ab = M_b M_a") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> e(-5.0, 500.0);
  for (int model = 0; model < 10; ++model) {
    const auto pa = oracle::random_piece(rng, PieceLabel::a, 0.2, 1.5, 3.0);
    const auto pb = oracle::random_piece(rng, PieceLabel::b, 0.2, 1.5, 3.0);
    const auto pab = make_ab(pa, pb);
    for (int i = 0; i < 100; ++i) {
      const double ei = e(rng);
      CHECK(max_entry_diff(transfer_matrix(pab, ei),
                           transfer_matrix(pb, ei) * transfer_matrix(pa, ei)) <= 1e-10);
    }
  }
}

TEST_CASE("comparison_bound constants") {
  const PotentialPiece fa(PieceLabel::a, 1.0, {{1.0, 0.0}});
  const PotentialPiece fb(PieceLabel::b, 1.0, {{1.0, 0.0}});
  const auto fab = make_ab(fa, fb);
  const auto free = comparison_bound(fa, fab, 50.0);
  CHECK(free.norm_Q == 1.0);
  CHECK(free.bound_constant == Approx(4.1132503787829275).epsilon(1e-15));
  CHECK(free.kappa == Approx(std::sqrt(50.0)));
  CHECK(std::abs(half_trace(transfer_matrix(fa, 50.0)) - free.c_of_ell) <= 1e-15);

  const PotentialPiece chi_a(PieceLabel::a, 1.0, {{1.0, 1.0}});
  const auto chi_ab = make_ab(chi_a, fb);
  for (double e : {100.0, 1e4}) {
    const auto c = comparison_bound(chi_a, chi_ab, e);
    CHECK(c.norm_Q == 1.0);
    CHECK(c.bound_constant == Approx(4.1132503787829275).epsilon(1e-15));
    CHECK(std::abs(half_trace(transfer_matrix(chi_a, e)) - c.c_of_ell) <= c.bound());
  }
  CHECK(comparison_bound(chi_a, chi_ab, 1e4).bound() == Approx(0.041132503787829275));
  CHECK(comparison_bound(chi_a, chi_ab, 1e4).c_of_ell == Approx(std::cos(100.0)));

  const PotentialPiece big(PieceLabel::a, 2.0, {{2.0, 3.0}});
  const auto big_ab = make_ab(big, fb);
  const auto c = comparison_bound(big, big_ab, 10.0);
  CHECK(c.norm_Q == Approx(std::sqrt(18.0)));
  CHECK(c.bound_constant == Approx(std::sqrt(18.0) * std::exp(std::sqrt(18.0) * std::sqrt(3.0))));
  CHECK(c.bound_constant >= c.norm_Q);

  CHECK_THROWS_AS(comparison_bound(fa, fab, 0.0), std::invalid_argument);
}

TEST_CASE("comparison bound holds on random models") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> log_e(0.0, std::log(1e5));
  for (int model = 0; model < 20; ++model) {
    const auto pa = oracle::random_piece(rng, PieceLabel::a, 0.2, 2.0, 4.0);
    const auto pb = oracle::random_piece(rng, PieceLabel::b, 0.2, 2.0, 4.0);
    const auto pab = make_ab(pa, pb);
    for (int i = 0; i < 200; ++i) {
      const double e = std::exp(log_e(rng));
      for (const PotentialPiece* p : {&pa, &pb, &pab}) {
        const auto c = comparison_bound(*p, pab, e);
        CHECK(std::abs(half_trace(transfer_matrix(*p, e)) - c.c_of_ell) <= c.bound());
      }
    }
  }
}
