#pragma once

#include <optional>

#include "exactwkb/potential.hpp"

namespace exactwkb {

// Zeta-regularized improper action int_q^inf (V + lambda)^{1/2}.
struct RegularizedAction {
  cplx value;
  double endpoint;
  cplx lambda;
};

// Canonically normalized recessive WKB value and its q-derivative partner.
struct WkbPair {
  cplx psi;
  cplx dpsi;
};

// Pi_lambda(q) = (V(q) + lambda)^{1/2}, on the branch that is continuous along [q, +inf)
// and positive at +inf. Requires the roots of V + lambda.
cplx momentum(std::span<const cplx> roots, double q);

// Finite part at s = 0 of int_q^inf (V + lambda)^{1/2 - s}, plus (2 - 2 log 2) beta_{-1} / N
// (the constant that makes the large-lambda expansion canonical). The split point between
// quadrature and the analytic tail is chosen automatically unless given.
RegularizedAction regularized_action(const PolynomialPotential& potential, cplx lambda, double q,
                                     std::optional<double> split = std::nullopt);

// int_q^inf (V + lambda)^{-1/2}; convergent for N > 2. Equals 2 d/dlambda of the action.
cplx inverse_momentum_integral(const PolynomialPotential& potential, cplx lambda, double q);

// Closed form of int_0^inf (q^N + lambda)^{1/2}; principal branch of lambda powers.
cplx homogeneous_action(int degree, cplx lambda);

enum class QuarticBranch { LargeV, SmallV };

// int_0^inf (q^4 + v q^2 + lambda)^{1/2} for v, lambda >= 0 via complete elliptic integrals.
double quartic_action(double v, double lambda);
double quartic_action(double v, double lambda, QuarticBranch branch);

WkbPair classical_wkb(const PolynomialPotential& potential, cplx lambda, double q);

}  // namespace exactwkb
