#include "doctest.h"
#include "exactwkb/asymptotics.hpp"
#include "exactwkb/oracle.hpp"
#include "helpers.hpp"

using namespace exactwkb;

TEST_CASE("leading coefficient of the counting function") {
  const auto t = bs_coefficients(PolynomialPotential::homogeneous(4));
  CHECK(t.mu() == Rational(3, 4));
  const double b = std::tgamma(0.25) * std::tgamma(1.5) / (2.0 * pi * std::tgamma(1.75));
  CHECK(std::abs(t.leading() - b) < 1e-14);
  // no other positive exponents without lower coefficients
  CHECK(t.positive_terms().size() == 1);

  const auto tv = bs_coefficients(quartic(3.0));
  CHECK(std::abs(tv.leading() - b) < 1e-14);
  for (const auto& term : tv.terms)
    if (term.exponent == Rational(1, 2)) CHECK(std::abs(term.coeff) < 1e-14);
  bool has_quarter = false;
  for (const auto& term : tv.terms)
    if (term.exponent == Rational(1, 4)) has_quarter = std::abs(term.coeff) > 1e-3;
  CHECK(has_quarter);
}

TEST_CASE("b_1/4 is linear in v") {
  auto coeff = [](double v) {
    for (const auto& term : bs_coefficients(quartic(v)).terms)
      if (term.exponent == Rational(1, 4)) return term.coeff;
    return cplx(0.0);
  };
  const cplx c1 = coeff(1.0);
  CHECK(std::abs(coeff(3.0) - 3.0 * c1) < 1e-13);
  CHECK(std::abs(coeff(-5.0) + 5.0 * c1) < 1e-13);
}

TEST_CASE("inversion of the counting function") {
  const auto t = bs_coefficients(PolynomialPotential::homogeneous(4));
  const double lead = std::pow(10.5 / t.leading().real(), 4.0 / 3.0);
  CHECK(std::abs(invert_counting(t, 10, CountingTerms::Positive).real() - lead) < 1e-10);
  CHECK(invert_counting(t, 10).real() == doctest::Approx(50.26).epsilon(1e-2));
  CHECK(invert_counting(t, 0, CountingTerms::Positive).real() == doctest::Approx(0.867).epsilon(1e-3));
  double prev = -1.0;
  for (int k = 0; k < 60; k += 2) {
    const double E = invert_counting(t, k).real();
    CHECK(E > prev);
    prev = E;
    CHECK(std::abs(counting(t, E) - (k + 0.5)) < 1e-10);
  }
}

TEST_CASE("counting function against the oracle spectrum") {
  for (double v : {0.0, -5.0}) {
    const auto V = quartic(v);
    const auto t = bs_coefficients(V);
    const auto even = shoot_levels(V, Parity::Even, 22);
    const double E40 = even[20];  // k = 40
    CHECK(std::abs(counting(t, E40).real() - 40.5) < 1e-2);
  }
}

TEST_CASE("conjugate tails follow the rotated couplings") {
  // b_{mu - j/N} is homogeneous of weight j in the couplings, and v_j picks up e^{i l phi j / 2}
  const std::vector<double> c = {0.4, -5.0, 1.0};
  const auto V = PolynomialPotential::real(4, c);
  const auto t = bs_coefficients(V);
  const double phi = derive_parameters(V).phi;
  for (int ell = 1; ell < 6; ++ell) {
    const auto tl = bs_coefficients(conjugate(V, ell).first);
    REQUIRE(tl.terms.size() == t.terms.size());
    for (std::size_t n = 0; n < t.terms.size(); ++n) {
      CHECK(tl.terms[n].exponent == t.terms[n].exponent);
      const double j = (t.mu().value() - t.terms[n].exponent.value()) * 4.0;
      const cplx expect = t.terms[n].coeff * std::exp(I * (ell * phi * j / 2.0));
      CHECK(std::abs(tl.terms[n].coeff - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("counterterms") {
  TailModel empty;
  empty.degree = 4;
  CHECK(counterterm_sum(empty, 10.0) == cplx(0.0));

  TailModel one;
  one.degree = 4;
  one.terms.push_back({Rational(1), 1.0});
  CHECK(std::abs(counterterm_sum(one, std::exp(1.0))) < 1e-15);
}
