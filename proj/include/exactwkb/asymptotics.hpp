#pragma once

#include <vector>

#include "exactwkb/potential.hpp"

namespace exactwkb {

struct TailTerm {
  Rational exponent;
  cplx coeff;
};

// Descending power series n(E) = sum_alpha b_alpha E^alpha ~ k + 1/2 for one parity sector.
//
// Terms with alpha > 0 are the classical Bohr-Sommerfeld coefficients consumed by the
// structure-formula counterterms. Terms with alpha <= 0 (higher classical orders, the
// leading hbar^2 correction and the half-line boundary term) only sharpen the asymptotic
// eigenvalues used for tails; they never enter the counterterms.
struct TailModel {
  int degree = 0;
  Parity parity = Parity::Even;
  int step = 2;  // index spacing inside the sector: 2 for a parity sector, 1 for a full spectrum
  std::vector<TailTerm> terms;

  Rational mu() const { return terms.empty() ? Rational(0) : terms.front().exponent; }
  cplx leading() const { return terms.empty() ? cplx(0.0) : terms.front().coeff; }
  std::vector<TailTerm> positive_terms() const;
  int first_index() const { return step == 1 ? 0 : parity_offset(parity); }
};

enum class CountingTerms { Positive, All };

struct TailOptions {
  bool corrections = true;       // include alpha <= 0 terms
  double exponent_floor = -5.0;  // lowest exponent kept among corrections
};

// Half-line counting coefficients (2/pi) int_0^{q+} sqrt(E - V) dq expanded at large E.
// For even V these coincide with the full-line Bohr-Sommerfeld coefficients. N >= 3.
TailModel bs_coefficients(const PolynomialPotential& potential, Parity parity = Parity::Even,
                          const TailOptions& options = {});

// d^order/dE^order of n(E).
cplx counting(const TailModel& tail, cplx E, int order = 0, CountingTerms which = CountingTerms::All);

// Root of n(E) = k + 1/2 from the leading-order seed ((k + 1/2)/b_mu)^{1/mu}.
cplx invert_counting(const TailModel& tail, int k, CountingTerms which = CountingTerms::All);

// 1/2 sum_{alpha > 0} b_alpha E^alpha (log E - 1/alpha).
cplx counterterm_sum(const TailModel& tail, cplx E_K);

// <lambda^alpha>: lambda^alpha, except lambda^n (log lambda - H_n) for n = 0, 1, 2, ...
cplx canonical_power(double alpha, cplx lambda);
double harmonic_number(int n);

}  // namespace exactwkb
