#pragma once

#include <span>
#include <utility>
#include <vector>

#include "exactwkb/common.hpp"

namespace exactwkb {

struct Rational {
  long num = 0;
  long den = 1;

  Rational() = default;
  Rational(long n, long d = 1);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// V(q) = q^N + v_1 q^{N-1} + ... + v_{N-1} q, i.e. monic with zero constant term.
// Coefficients are stored densely: coeffs()[j-1] multiplies q^{N-j}.
class PolynomialPotential {
 public:
  PolynomialPotential(int degree, std::vector<cplx> coeffs);

  static PolynomialPotential real(int degree, std::span<const double> coeffs);
  static PolynomialPotential homogeneous(int degree);

  // Reduces an arbitrary polynomial given in ascending powers (a_0 + a_1 q + ...)
  // by absorbing the constant. A leading coefficient other than 1 is rejected.
  static std::pair<PolynomialPotential, cplx> from_ascending(std::span<const cplx> ascending);

  int degree() const { return degree_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx coeff(int j) const { return coeffs_[j - 1]; }
  bool is_real() const { return is_real_; }
  bool is_even() const { return is_even_; }

  // a_0..a_N with a_N = 1 and a_0 = 0.
  std::vector<cplx> ascending() const;

  cplx operator()(cplx q) const;
  double operator()(double q) const;
  // n-th derivative at q.
  cplx derivative(cplx q, int order) const;
  double derivative(double q, int order) const;

  // Complex roots of V(q) + lambda.
  std::vector<cplx> roots(cplx lambda) const;

 private:
  int degree_;
  std::vector<cplx> coeffs_;
  bool is_real_ = true;
  bool is_even_ = false;
};

struct ProblemParameters {
  Rational mu;  // 1/2 + 1/N
  double phi;   // 4 pi / (N + 2)
  int L;        // number of distinct conjugates
};

ProblemParameters derive_parameters(const PolynomialPotential& potential);

// Conjugate index ell taken mod L.
class ConjugateIndex {
 public:
  ConjugateIndex(int ell, int L);
  int value() const { return ell_; }
  int modulus() const { return L_; }

 private:
  int ell_;
  int L_;
};

// e^{2 pi i m / (N + 2)} with m reduced exactly, so that conjugation is exactly periodic.
cplx unit_root(int degree, long m);

// V^[l](q) = e^{-i l phi} V(e^{-i l phi / 2} q) and the factor e^{-i l phi} with lambda^[l] = factor * lambda.
std::pair<PolynomialPotential, cplx> conjugate(const PolynomialPotential& potential, int ell);

// V~(x) = V(q0 + x) - V(q0); returns (V~, V(q0)).
std::pair<PolynomialPotential, cplx> translate(const PolynomialPotential& potential, cplx q0);

// Coefficient of q^{-1} in the large-q expansion of V(q)^{1/2} (finite multi-index sum). N != 2.
cplx beta_minus_one(const PolynomialPotential& potential);

// Descending expansion (V(q) + lambda)^a ~ sum_m c_m q^{N a - m}.
struct BetaExpansion {
  int degree = 0;
  double power = 0.5;          // a
  std::vector<cplx> coeffs;    // c_m, m = 0..depth-1

  // exponent N a - m; for a = 1/2 this is sigma = N/2 - m
  double exponent(std::size_t m) const { return degree * power - static_cast<double>(m); }
  // Coefficient at a given exponent sigma (zero if not present in the stored depth).
  cplx at(double sigma) const;
};

BetaExpansion beta_expansion(const PolynomialPotential& potential, cplx lambda, int depth,
                             double power = 0.5);

// Coefficient of x^m in (1 + w(x))^a, w = sum_j v_j x^j + lambda x^N, together with its a-derivative.
std::pair<cplx, cplx> expansion_coefficient_with_power_derivative(
    const PolynomialPotential& potential, cplx lambda, double a, int m);

}  // namespace exactwkb
