#include "exactwkb/classical.hpp"

#include <algorithm>
#include <cmath>

#include "exactwkb/quadrature.hpp"

namespace exactwkb {

namespace {

constexpr double kOnPathTol = 1e-12;

void check_path(std::span<const cplx> roots, double q, const char* where) {
  for (const auto& r : roots) {
    const double scale = std::max(1.0, std::abs(r));
    if (std::abs(r.imag()) <= kOnPathTol * scale && r.real() >= q - kOnPathTol * scale)
      throw Error(ErrorKind::TurningPointOnPath, where,
                  "V + lambda vanishes at q = " + std::to_string(r.real()) + " on the integration path");
  }
}

double root_radius(std::span<const cplx> roots) {
  double r = 0.0;
  for (const auto& z : roots) r = std::max(r, std::abs(z));
  return r;
}

// prod_i (x - r_i)^p with principal powers; continuous on [q, inf) when no root lies on it.
cplx root_product_power(std::span<const cplx> roots, double x, double p) {
  cplx acc = 1.0;
  for (const auto& r : roots) acc *= std::pow(cplx(x, 0.0) - r, p);
  return acc;
}

// Sum over the descending expansion of (V + lambda)^a of int_X^inf c_m q^{N a - m} dq,
// skipping the exponent -1 term (its index is reported through log_index).
cplx expansion_tail(const PolynomialPotential& potential, cplx lambda, double a, double X,
                    int* log_index) {
  const int N = potential.degree();
  constexpr int kMaxDepth = 600;
  const auto series = beta_expansion(potential, lambda, kMaxDepth, a);
  cplx total = 0.0;
  int small_run = 0;
  *log_index = -1;
  for (int m = 0; m < kMaxDepth; ++m) {
    const double sigma = N * a - m;
    const cplx c = series.coeffs[m];
    if (std::abs(sigma + 1.0) < 1e-12) {
      *log_index = m;
      continue;
    }
    const cplx term = -c * std::pow(X, sigma + 1.0) / (sigma + 1.0);
    total += term;
    if (std::abs(term) <= 1e-17 * std::max(1.0, std::abs(total))) {
      if (++small_run >= N + 2 && sigma + 1.0 < 0.0) return total;
    } else {
      small_run = 0;
    }
  }
  throw Error(ErrorKind::NotConverged, "regularized_action", "tail expansion did not converge");
}

double default_split(std::span<const cplx> roots, double q) {
  return std::max({q, 2.5 * root_radius(roots), 1.0});
}

}  // namespace

cplx momentum(std::span<const cplx> roots, double q) { return root_product_power(roots, q, 0.5); }

RegularizedAction regularized_action(const PolynomialPotential& potential, cplx lambda, double q,
                                     std::optional<double> split) {
  const int N = potential.degree();
  const auto roots = potential.roots(lambda);
  check_path(roots, q, "regularized_action");

  double X = split.value_or(default_split(roots, q));
  if (X < q) X = q;
  if (X < 1.5 * root_radius(roots))
    throw Error(ErrorKind::InvalidArgument, "regularized_action",
                "split point inside the convergence radius of the large-q expansion");

  const cplx bulk = integrate_adaptive([&](double x) { return root_product_power(roots, x, 0.5); }, q, X,
                                       1e-15, 1e-300);
  int log_index = -1;
  cplx tail = expansion_tail(potential, lambda, 0.5, X, &log_index);
  if (log_index >= 0) {
    // s-continued int_X^inf beta(s) q^{-1 - N s} = beta(s) X^{-N s} / (N s): drop the pole,
    // keep beta'(0)/N - beta(0) log X, then add the Gamma-factor constant of the classical zeta.
    const auto [beta, dbeta_da] = expansion_coefficient_with_power_derivative(potential, lambda, 0.5, log_index);
    const cplx dbeta_ds = -dbeta_da;
    tail += dbeta_ds / static_cast<double>(N) - beta * std::log(X);
    tail += (2.0 - 2.0 * std::log(2.0)) * beta / static_cast<double>(N);
  }
  return RegularizedAction{bulk + tail, q, lambda};
}

cplx inverse_momentum_integral(const PolynomialPotential& potential, cplx lambda, double q) {
  if (potential.degree() <= 2)
    throw Error(ErrorKind::InvalidArgument, "inverse_momentum_integral", "divergent for N <= 2");
  const auto roots = potential.roots(lambda);
  check_path(roots, q, "inverse_momentum_integral");
  const double X = default_split(roots, q);
  const cplx bulk = integrate_adaptive([&](double x) { return root_product_power(roots, x, -0.5); }, q, X,
                                       1e-15, 1e-300);
  int log_index = -1;
  const cplx tail = expansion_tail(potential, lambda, -0.5, X, &log_index);
  return bulk + tail;
}

cplx homogeneous_action(int degree, cplx lambda) {
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "homogeneous_action", "degree must be >= 1");
  if (degree == 2) return -0.25 * lambda * (std::log(lambda) - 1.0);
  const double inv = 1.0 / degree;
  const double coeff = -std::tgamma(1.0 + inv) * std::tgamma(-0.5 - inv) / (2.0 * std::sqrt(pi));
  return coeff * std::pow(lambda, 0.5 + inv);
}

double quartic_action(double v, double lambda, QuarticBranch branch) {
  if (!(v >= 0.0 && lambda >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "quartic_action", "requires v >= 0 and lambda >= 0");
  const double r = std::sqrt(lambda);
  if (branch == QuarticBranch::LargeV) {
    if (v + 2.0 * r == 0.0) return 0.0;
    const double k = std::sqrt(std::max(0.0, (v - 2.0 * r) / (v + 2.0 * r)));
    return std::sqrt(v + 2.0 * r) * (2.0 * r * elliptic_k(k) - v * elliptic_e(k)) / 3.0;
  }
  if (lambda == 0.0) return 0.0;
  const double kt = std::sqrt(std::max(0.0, 2.0 * r - v)) / (2.0 * std::pow(lambda, 0.25));
  return std::pow(lambda, 0.25) * ((2.0 * r + v) * elliptic_k(kt) - 2.0 * v * elliptic_e(kt)) / 3.0;
}

double quartic_action(double v, double lambda) {
  if (!(v >= 0.0 && lambda >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "quartic_action", "requires v >= 0 and lambda >= 0");
  return quartic_action(v, lambda, v >= 2.0 * std::sqrt(lambda) ? QuarticBranch::LargeV : QuarticBranch::SmallV);
}

WkbPair classical_wkb(const PolynomialPotential& potential, cplx lambda, double q) {
  const auto roots = potential.roots(lambda);
  const cplx value = potential(cplx(q, 0.0)) + lambda;
  if (std::abs(value) <= 1e-14 * std::max(1.0, std::abs(lambda)))
    throw Error(ErrorKind::TurningPoint, "classical_wkb", "Pi_lambda(q) = 0");
  const auto action = regularized_action(potential, lambda, q);
  const cplx quarter = root_product_power(roots, q, 0.25);  // Pi^{1/2}
  const cplx e = std::exp(action.value);
  return WkbPair{e / quarter, -quarter * e};
}

}  // namespace exactwkb
