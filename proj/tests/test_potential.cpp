#include <random>

#include "doctest.h"
#include "exactwkb/potential.hpp"
#include "helpers.hpp"

using namespace exactwkb;

TEST_CASE("parameters of the conjugate family") {
  auto p = derive_parameters(quartic(-5.0));
  CHECK(p.mu == Rational(3, 4));
  CHECK(p.phi == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-15));
  CHECK(p.L == 3);

  auto cubic = derive_parameters(PolynomialPotential::homogeneous(3));
  CHECK(cubic.mu == Rational(5, 6));
  CHECK(cubic.phi == doctest::Approx(4.0 * pi / 5.0).epsilon(1e-15));
  CHECK(cubic.L == 5);

  const std::vector<double> sextic = {0.0, 1.0, 0.0, -2.0, 0.0};
  CHECK(derive_parameters(PolynomialPotential::real(6, sextic)).L == 4);

  const std::vector<double> odd_term = {1.0, 0.0, 0.0};
  CHECK(derive_parameters(PolynomialPotential::real(4, odd_term)).L == 6);
}

TEST_CASE("normalization is enforced") {
  const std::vector<cplx> monic = {3.0, 0.0, -5.0, 0.0, 1.0};
  auto [V, c] = PolynomialPotential::from_ascending(monic);
  CHECK(c == cplx(3.0));
  CHECK(V.degree() == 4);
  CHECK(V.is_even());
  CHECK(V.coeff(2) == cplx(-5.0));

  const std::vector<cplx> scaled = {0.0, 0.0, 0.0, 0.0, 2.0};
  CHECK_THROWS_AS(PolynomialPotential::from_ascending(scaled), Error);

  const std::vector<double> odd = {0.0, 1.0, 1.0};
  CHECK_FALSE(PolynomialPotential::real(4, odd).is_even());
}

TEST_CASE("conjugation") {
  const auto V = quartic(2.5);
  auto [V1, f1] = conjugate(V, 1);
  CHECK(std::abs(f1 - std::exp(-2.0 * pi * I / 3.0)) < 1e-15);
  CHECK(std::abs(V1.coeff(2) - 2.5 * std::exp(2.0 * pi * I / 3.0)) < 1e-14);

  auto [V0, f0] = conjugate(V, 0);
  CHECK(f0 == cplx(1.0));
  CHECK(V0.coeff(2) == cplx(2.5));

  // a non-even quintic: L = 7, conjugation is periodic and commutes with complex conjugation
  const std::vector<double> c = {0.3, -1.0, 0.7, 2.0};
  const auto W = PolynomialPotential::real(5, c);
  const int L = derive_parameters(W).L;
  auto [WL, fL] = conjugate(W, L);
  CHECK(std::abs(fL - 1.0) < 1e-14);
  for (int j = 1; j < 5; ++j) CHECK(std::abs(WL.coeff(j) - W.coeff(j)) < 1e-14);
  for (int ell = 1; ell < L; ++ell) {
    auto a = conjugate(W, ell).first;
    auto b = conjugate(W, L - ell).first;
    for (int j = 1; j < 5; ++j) CHECK(std::abs(a.coeff(j) - std::conj(b.coeff(j))) < 1e-14);
  }

  // V^[l](q) = e^{-il phi} V(e^{-il phi/2} q) pointwise
  const double phi = derive_parameters(W).phi;
  const cplx q(0.4, -1.1);
  for (int ell = 0; ell < L; ++ell) {
    auto Vl = conjugate(W, ell).first;
    const cplx direct = std::exp(-I * (ell * phi)) * W(std::exp(-I * (ell * phi / 2.0)) * q);
    CHECK(std::abs(Vl(q) - direct) < 1e-12);
  }
}

TEST_CASE("translation") {
  auto [T, off] = translate(quartic(-5.0), cplx(1.0));
  CHECK(off == cplx(-4.0));
  CHECK(std::abs(T.coeff(1) - 4.0) < 1e-14);
  CHECK(std::abs(T.coeff(2) - 1.0) < 1e-14);
  CHECK(std::abs(T.coeff(3) + 6.0) < 1e-14);

  auto [same, zero] = translate(quartic(-5.0), cplx(0.0));
  CHECK(zero == cplx(0.0));
  CHECK(same.coeff(2) == cplx(-5.0));

  auto back = translate(T, cplx(-1.0)).first;
  for (int j = 1; j < 4; ++j) CHECK(std::abs(back.coeff(j) - quartic(-5.0).coeff(j)) < 1e-14);
}

TEST_CASE("beta_minus_one") {
  CHECK(std::abs(beta_minus_one(quartic(7.0))) < 1e-15);

  const std::vector<double> c3 = {0.4, -2.0};
  CHECK(std::abs(beta_minus_one(PolynomialPotential::real(3, c3))) < 1e-15);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int trial = 0; trial < 3; ++trial) {
    const double a = U(rng), b = U(rng);
    const std::vector<double> c = {0.0, a, 0.0, b, 0.0};
    const auto V = PolynomialPotential::real(6, c);
    CHECK(std::abs(beta_minus_one(V) - (-a * a / 8.0 + b / 2.0)) < 1e-13);
    // same number as the q^{-1} coefficient of the large-q expansion
    CHECK(std::abs(beta_expansion(V, 0.0, 5).at(-1.0) - beta_minus_one(V)) < 1e-13);
  }

  // conjugates flip the sign on odd ell
  const std::vector<double> c = {1.0, 0.5, -2.0};
  const auto W = PolynomialPotential::real(4, c);
  for (int ell = 0; ell < 6; ++ell) {
    const double s = ell % 2 ? -1.0 : 1.0;
    CHECK(std::abs(beta_minus_one(conjugate(W, ell).first) - s * beta_minus_one(W)) < 1e-13);
  }
}

TEST_CASE("large-q expansion") {
  const auto pure = beta_expansion(PolynomialPotential::homogeneous(4), 2.0, 9);
  CHECK(std::abs(pure.at(2.0) - 1.0) < 1e-15);
  CHECK(std::abs(pure.at(-2.0) - 1.0) < 1e-15);   // binomial(1/2, 1) * 2
  CHECK(std::abs(pure.at(-6.0) + 0.5) < 1e-15);   // binomial(1/2, 2) * 4

  const double v = 3.0, lam = 1.5;
  const auto e = beta_expansion(quartic(v), lam, 7);
  CHECK(std::abs(e.at(2.0) - 1.0) < 1e-15);
  CHECK(std::abs(e.at(0.0) - v / 2.0) < 1e-15);
  CHECK(std::abs(e.at(-1.0)) < 1e-15);
  CHECK(std::abs(e.at(-2.0) - (lam / 2.0 - v * v / 8.0)) < 1e-14);
}

TEST_CASE("roots of V + lambda") {
  const std::vector<double> c = {1.0, -2.0, 0.5};
  const auto V = PolynomialPotential::real(4, c);
  for (cplx lam : {cplx(1.0), cplx(-3.0, 2.0)}) {
    const auto r = V.roots(lam);
    CHECK(r.size() == 4);
    for (auto z : r) CHECK(std::abs(V(z) + lam) < 1e-11);
  }
}
