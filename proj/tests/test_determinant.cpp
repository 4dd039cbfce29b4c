#include "doctest.h"
#include "exactwkb/classical.hpp"
#include "exactwkb/determinant.hpp"
#include "exactwkb/oracle.hpp"
#include "exactwkb/quantize.hpp"
#include "helpers.hpp"

using namespace exactwkb;

namespace {

const SpectrumModel& dirichlet_q4() {
  static const auto S = shoot_spectrum(PolynomialPotential::homogeneous(4), Parity::Odd, 48);
  return S;
}

}  // namespace

TEST_CASE("radial branch") {
  CHECK(std::abs(radial_log(2.0, 3.0) - std::log(5.0)) < 1e-15);
  // continuous along a ray that crosses the principal cut of E + lambda
  const cplx E(-10.0, 0.0);
  cplx prev = radial_log(E, cplx(40.0, 10.0));
  for (double t = 1.0; t > 0.05; t -= 0.01) {
    const cplx cur = radial_log(E, t * cplx(40.0, 10.0));
    CHECK(std::abs(cur.imag() - prev.imag()) < pi / 8.0);
    prev = cur;
  }
}

TEST_CASE("zeros of the determinant are the spectrum") {
  const auto& S = dirichlet_q4();
  for (int i = 0; i < 5; ++i) {
    const double E = S.level(i).real();
    const double at = std::exp(log_det(S, -E + 1e-9).value.real());
    const double off = std::max(std::exp(log_det(S, -E - 0.1).value.real()),
                                std::exp(log_det(S, -E + 0.1).value.real()));
    CHECK(at < 1e-7 * off);
  }
  CHECK_THROWS_AS(log_det(S, -S.level(0)), Error);
}

TEST_CASE("structure formula against the canonical oracle value") {
  const auto V = PolynomialPotential::homogeneous(4);
  const auto b = boundary_data(V, 1.0);
  const double logpsi = std::log(b.at_zero.psi) + b.at_zero.log_scale;
  CHECK(std::abs(log_det(dirichlet_q4(), 1.0).value.real() - logpsi) < 1e-7);

  const auto even = shoot_spectrum(V, Parity::Even, 48);
  const double logdpsi = std::log(-b.at_zero.dpsi) + b.at_zero.log_scale;
  CHECK(std::abs(log_det(even, 1.0).value.real() - logdpsi) < 1e-7);

  const auto wide = shoot_spectrum(V, Parity::Odd, 96);
  CHECK(std::abs(log_det(wide, 1.0).value - log_det(dirichlet_q4(), 1.0).value) < 1e-8);
}

TEST_CASE("derivative relations") {
  const auto& S = dirichlet_q4();
  const double h = 1e-4;
  for (double lam : {1.0, 5.0}) {
    const cplx fd = (log_det(S, lam + h).value - log_det(S, lam - h).value) / (2 * h);
    CHECK(std::abs(fd - zeta_s1(S, lam)) < 1e-7);
    const cplx fz = (zeta_s1(S, lam + h) - zeta_s1(S, lam - h)) / (2 * h);
    CHECK(std::abs(fz + zeta(S, lam, 2)) < 1e-6);
  }
  const auto tc = trace_formula_check(PolynomialPotential::homogeneous(4), 1.0, Parity::Odd);
  CHECK(std::abs(zeta_s1(S, 1.0).real() - tc.lhs) < 1e-6);
}

TEST_CASE("branch continuity of Im log D") {
  const auto& S = dirichlet_q4();
  // a loop in the lambda plane avoiding the zeros at -E_k
  cplx prev = log_det(S, cplx(20.0, 0.0)).value;
  for (int i = 1; i <= 400; ++i) {
    const double t = pi * i / 400.0;
    const cplx lam = cplx(-10.0, 0.0) + 30.0 * cplx(std::cos(t), 0.8 * std::sin(t));
    const cplx cur = log_det(S, lam).value;
    CHECK(std::abs(cur.imag() - prev.imag()) < pi / 8.0);
    prev = cur;
  }
}

TEST_CASE("parity sectors share no state") {
  const auto V = PolynomialPotential::homogeneous(4);
  const auto plus = shoot_spectrum(V, Parity::Even, 48);
  const auto minus = shoot_spectrum(V, Parity::Odd, 48);
  const cplx before = log_det(plus, 2.0).value;
  auto bad = minus.eigenvalues();
  bad[0] *= 1.5;
  (void)log_det(minus.with_eigenvalues(bad), 2.0);
  CHECK(log_det(plus, 2.0).value == before);
}

TEST_CASE("canonical expansion") {
  const auto& S = dirichlet_q4();
  std::vector<double> grid, values;
  for (int i = 0; i < 24; ++i) grid.push_back(1e3 * std::pow(100.0, i / 23.0));
  CHECK(canonical_residual(S, grid) < 1e-3);
  for (double lam : grid) values.push_back(log_det(S, lam).value.real() + 0.5);
  CHECK(std::abs(canonical_fit(S.tail(), grid, values).constant - 0.5) < 0.01);

  // log D+ + log D- carries twice the classical lambda^{3/4} coefficient
  const auto plus = shoot_spectrum(PolynomialPotential::homogeneous(4), Parity::Even, 48);
  values.clear();
  for (double lam : grid) values.push_back(log_det(plus, lam).value.real() + log_det(S, lam).value.real());
  const auto fit = canonical_fit(S.tail(), grid, values);
  for (std::size_t c = 0; c < fit.exponents.size(); ++c)
    if (fit.exponents[c] == 0.75)
      CHECK(std::abs(fit.coeffs[c] - 2.0 * homogeneous_action(4, 1.0).real()) < 1e-3);
}

TEST_CASE("synthetic spectrum") {
  // E_k = (k + 1)^2: counting k + 1/2 = E^{1/2} - 1/2
  TailModel t;
  t.degree = 2;
  t.step = 1;
  t.terms = {{Rational(1, 2), 1.0}, {Rational(0), -0.5}};
  std::vector<cplx> E;
  for (int k = 0; k < 20; ++k) E.push_back(double((k + 1) * (k + 1)));
  const SpectrumModel S(Parity::Even, E, t);
  CHECK(std::abs(S.asymptotic_level(30) - 961.0) < 1e-9);
  CHECK(std::abs(zeta_s1(S, 0.0) - pi * pi / 6.0) < 1e-8);
}
