#include "doctest.h"
#include "exactwkb/classical.hpp"
#include "exactwkb/oracle.hpp"
#include "helpers.hpp"

using namespace exactwkb;

TEST_CASE("harmonic oscillator") {
  const auto V = PolynomialPotential::homogeneous(2);
  const auto even = shoot_levels(V, Parity::Even, 4);
  const auto odd = shoot_levels(V, Parity::Odd, 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(even[k] - (4 * k + 1)) < 1e-9);
    CHECK(std::abs(odd[k] - (4 * k + 3)) < 1e-9);
  }
}

TEST_CASE("quartic levels") {
  const auto V = PolynomialPotential::homogeneous(4);
  // published values 1.0603620904841829, 3.7996730298013942, 7.4556979379867384
  CHECK(std::abs(shoot_levels(V, Parity::Even, 1)[0] - 1.0603620904841829) < 1e-9);
  CHECK(std::abs(shoot_levels(V, Parity::Odd, 1)[0] - 3.7996730298013942) < 1e-9);
  CHECK(std::abs(shoot_levels(V, Parity::Even, 2)[1] - 7.4556979379867384) < 1e-9);
  CHECK(shoot_levels(quartic(-5.0), Parity::Even, 1)[0] == doctest::Approx(-3.41014).epsilon(2e-6));

  OracleConfig tight;
  tight.rel_tol = 5e-13;
  const auto a = shoot_levels(quartic(-5.0), Parity::Odd, 5);
  const auto b = shoot_levels(quartic(-5.0), Parity::Odd, 5, tight);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-11 * std::max(1.0, std::abs(b[k])));
}

TEST_CASE("recessive solution is canonically normalized") {
  const auto V = PolynomialPotential::homogeneous(4);
  const double qm = default_q_max(V, 1.0);
  const std::vector<double> grid = {qm - 1.0, 0.0};
  const auto sol = recessive_solution(V, 1.0, grid);
  CHECK(sol.normalization == "canonical-WKB");
  // the bare WKB form is off by its first correction, -1/(3 q^3) for q^4
  for (double q : {qm - 1.0, qm - 0.5}) {
    const auto s = recessive_solution(V, 1.0, std::vector<double>{q}).samples[0];
    const double ratio = s.psi_value() / classical_wkb(V, 1.0, q).psi.real();
    CHECK(std::abs((ratio - 1.0) * 3.0 * q * q * q + 1.0) < 0.2);
  }

  OracleConfig far;
  far.q_max = qm + 2.0;
  const auto moved = recessive_solution(V, 1.0, std::vector<double>{0.0}, far);
  CHECK(std::abs(moved.samples[0].log_abs_psi() - sol.samples[1].log_abs_psi()) < 1e-8);
}

TEST_CASE("trace formulas") {
  for (auto [v, lam] : {std::pair{0.0, 1.0}, std::pair{-5.0, 5.0}})
    for (auto p : {Parity::Even, Parity::Odd}) {
      const auto t = trace_formula_check(quartic(v), lam, p);
      CHECK(std::abs(t.lhs - t.rhs) < 1e-6);
      CHECK(std::abs(t.green - t.rhs) < 1e-6);
    }
  CHECK_THROWS_AS(trace_formula_check(PolynomialPotential::homogeneous(2), 1.0, Parity::Even), Error);
}

TEST_CASE("non-real potentials are refused") {
  const auto V = conjugate(quartic(1.0), 1).first;
  CHECK_THROWS_AS(shoot_levels(V, Parity::Even, 1), Error);
}
