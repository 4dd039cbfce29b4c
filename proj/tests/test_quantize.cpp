#include "doctest.h"
#include "exactwkb/quantize.hpp"
#include "helpers.hpp"

using namespace exactwkb;

TEST_CASE("config validation") {
  FixedPointConfig c;
  CHECK_NOTHROW(c.validate());
  c.damping = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.K = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.tol = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS(solve_homogeneous(2, Parity::Even), Error);
}

TEST_CASE("homogeneous quartic contraction") {
  for (auto p : {Parity::Even, Parity::Odd}) {
    SolveReport rep;
    const auto S = solve_homogeneous(4, p, {}, &rep);
    const double* ref = p == Parity::Even ? frozen::quartic_even : frozen::quartic_odd;
    for (int i = 0; i < 4; ++i) CHECK(rel_err(S.level(i).real(), ref[i]) < 1e-9);
    for (int i = 1; i < S.size(); ++i) CHECK(S.level(i).real() > S.level(i - 1).real());
    const auto& h = rep.error_history;
    REQUIRE(h.size() > 4);
    for (std::size_t s = 2; s + 1 < h.size(); ++s) CHECK(h[s + 1] / h[s] < 0.9);
    CHECK(h.back() < 1e-10);
    // the stored top level sits on the asymptotic curve
    const int top = S.size() - 1;
    CHECK(std::abs(S.level(top) - invert_counting(S.tail(), S.index(top))) < 1e-2 * std::abs(S.level(top)));
  }
}

TEST_CASE("general system reduces to the homogeneous one at v = 0") {
  const auto c = solve_general(quartic(0.0), Parity::Even);
  const auto h = solve_homogeneous(4, Parity::Even);
  CHECK(c.L() == 3);
  for (int i = 0; i < h.size(); ++i) CHECK(std::abs(c.sectors[0].level(i) - h.level(i)) < 1e-9 * std::abs(h.level(i)));
}

TEST_CASE("double well") {
  FixedPointConfig cfg;
  const auto c = solve_general(quartic(-5.0), Parity::Even, cfg);
  CHECK(std::abs(c.sectors[0].level(0).real() - frozen::double_well_E0) < 1e-8);
  for (int i = 0; i < c.sectors[0].size(); ++i) CHECK(std::abs(c.sectors[0].level(i).imag()) < 1e-12);
  for (int ell = 0; ell < c.L(); ++ell)
    for (int i = 0; i < 12; ++i) CHECK(std::abs(quantization_residual(c, ell, i)) < 10.0 * cfg.tol);
  for (int i = 0; i < c.sectors[1].size(); ++i)
    CHECK(std::abs(c.sectors[2].level(i) - std::conj(c.sectors[1].level(i))) < 10.0 * cfg.tol);
}

TEST_CASE("quartic family v2 = +-10") {
  for (double v : {-10.0, 10.0}) {
    const auto c = solve_general(quartic(v), Parity::Odd);
    const double* ref = v < 0 ? frozen::minus10_odd : frozen::plus10_odd;
    for (int i = 0; i < 3; ++i) CHECK(rel_err(c.sectors[0].level(i).real(), ref[i]) < 1e-6);
    const int top = c.sectors[0].size() - 1;
    const auto& S = c.sectors[0];
    CHECK(std::abs(S.level(top) - invert_counting(S.tail(), S.index(top))) < 1e-2 * std::abs(S.level(top)));
  }
}

TEST_CASE("Wronskian relation is lambda independent") {
  const auto plus = solve_general(quartic(-5.0), Parity::Even);
  const auto minus = solve_general(quartic(-5.0), Parity::Odd);
  // both products grow like exp(c |lambda|^{3/4}) while their difference stays 2i, so the
  // grid stays at moderate |lambda|; 2 - 4i rotates onto the negative axis in sector 1
  for (cplx lam : {cplx(1.0), cplx(5.0), cplx(10.0, 3.0), cplx(-2.0, 1.0), cplx(0.5, -4.0), cplx(2.0, -4.0),
                   cplx(-1.0), cplx(8.0), cplx(3.0, 6.0), cplx(12.0, -2.0)})
    CHECK(wronskian_residual(plus, minus, lam) < 1e-6);
}

TEST_CASE("non-even potential uses all conjugates") {
  const std::vector<double> c = {0.5, -1.0, 0.3};
  const auto V = PolynomialPotential::real(4, c);
  const auto plus = solve_general(V, Parity::Even);
  const auto minus = solve_general(V, Parity::Odd);
  CHECK(plus.L() == 6);
  for (cplx lam : {cplx(2.0), cplx(6.0, 1.0)}) CHECK(wronskian_residual(plus, minus, lam) < 1e-6);
}
