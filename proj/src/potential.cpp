#include "exactwkb/potential.hpp"

#include "partitions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace exactwkb {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::TurningPointOnPath: return "TurningPointOnPath";
    case ErrorKind::TurningPoint: return "TurningPoint";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::PoleAtLambda: return "PoleAtLambda";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotContracting: return "NotContracting";
    case ErrorKind::DivergentSector: return "DivergentSector";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Unknown";
}

Rational::Rational(long n, long d) : num(n), den(d) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "Rational", "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

namespace {

bool is_zero(cplx z) { return z.real() == 0.0 && z.imag() == 0.0; }

}  // namespace

PolynomialPotential::PolynomialPotential(int degree, std::vector<cplx> coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)) {
  if (degree_ < 1) throw Error(ErrorKind::InvalidArgument, "potential", "degree must be >= 1");
  if (static_cast<int>(coeffs_.size()) != degree_ - 1)
    throw Error(ErrorKind::InvalidArgument, "potential",
                "expected " + std::to_string(degree_ - 1) + " coefficients, got " +
                    std::to_string(coeffs_.size()));
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::InvalidArgument, "potential", "non-finite coefficient");
    if (c.imag() != 0.0) is_real_ = false;
  }
  is_even_ = degree_ % 2 == 0;
  for (int j = 1; j < degree_ && is_even_; j += 2)
    if (!is_zero(coeffs_[j - 1])) is_even_ = false;
}

PolynomialPotential PolynomialPotential::real(int degree, std::span<const double> coeffs) {
  return PolynomialPotential(degree, std::vector<cplx>(coeffs.begin(), coeffs.end()));
}

PolynomialPotential PolynomialPotential::homogeneous(int degree) {
  return PolynomialPotential(degree, std::vector<cplx>(std::max(degree - 1, 0), 0.0));
}

std::pair<PolynomialPotential, cplx> PolynomialPotential::from_ascending(
    std::span<const cplx> ascending) {
  std::size_t n = ascending.size();
  while (n > 1 && is_zero(ascending[n - 1])) --n;
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "potential", "polynomial has degree < 1");
  const int degree = static_cast<int>(n) - 1;
  if (ascending[n - 1] != cplx(1.0, 0.0))
    throw Error(ErrorKind::InvalidArgument, "potential",
                "leading coefficient must be 1; rescaling by dilation is not applied");
  std::vector<cplx> v(degree - 1);
  for (int j = 1; j < degree; ++j) v[j - 1] = ascending[degree - j];
  return {PolynomialPotential(degree, std::move(v)), ascending[0]};
}

std::vector<cplx> PolynomialPotential::ascending() const {
  std::vector<cplx> a(degree_ + 1, 0.0);
  a[degree_] = 1.0;
  for (int j = 1; j < degree_; ++j) a[degree_ - j] = coeffs_[j - 1];
  return a;
}

cplx PolynomialPotential::operator()(cplx q) const {
  // Horner on q^{N-1} + v_1 q^{N-2} + ... + v_{N-1}, times q.
  cplx acc = 1.0;
  for (const auto& c : coeffs_) acc = acc * q + c;
  return acc * q;
}

double PolynomialPotential::operator()(double q) const {
  if (!is_real_) throw Error(ErrorKind::InvalidArgument, "potential", "real evaluation of complex potential");
  double acc = 1.0;
  for (const auto& c : coeffs_) acc = acc * q + c.real();
  return acc * q;
}

cplx PolynomialPotential::derivative(cplx q, int order) const {
  const auto a = ascending();
  cplx acc = 0.0;
  for (int p = degree_; p >= order; --p) {
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= static_cast<double>(p - i);
    acc = acc * q + a[p] * falling;
  }
  return acc;
}

double PolynomialPotential::derivative(double q, int order) const {
  return derivative(cplx(q, 0.0), order).real();
}

std::vector<cplx> PolynomialPotential::roots(cplx lambda) const {
  // Aberth-Ehrlich iteration on the monic polynomial V(q) + lambda.
  auto a = ascending();
  a[0] += lambda;
  const int n = degree_;
  auto eval = [&](cplx z, cplx& dp) {
    cplx p = a[n];
    dp = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + a[k];
    }
    return p;
  };
  double radius = 0.0;
  for (int k = 0; k < n; ++k)
    radius = std::max(radius, std::pow(std::abs(a[k]), 1.0 / static_cast<double>(n - k)));
  radius = std::max(radius, 1e-3);
  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k)
    z[k] = std::polar(radius, 2.0 * pi * (k + 0.25) / n + 0.4);
  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0.0;
    for (int k = 0; k < n; ++k) {
      cplx dp;
      const cplx p = eval(z[k], dp);
      if (is_zero(p)) continue;
      const cplx ratio = p / dp;
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const cplx step = ratio / (1.0 - ratio * sum);
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (max_step < 1e-15) break;
  }
  for (auto& root : z) {
    for (int it = 0; it < 3; ++it) {
      cplx dp;
      const cplx p = eval(root, dp);
      if (is_zero(dp)) break;
      root -= p / dp;
    }
  }
  return z;
}

ProblemParameters derive_parameters(const PolynomialPotential& potential) {
  const int N = potential.degree();
  ProblemParameters out{Rational(N + 2, 2 * N), 4.0 * pi / (N + 2), N + 2};
  if (potential.is_even()) out.L = N / 2 + 1;
  return out;
}

ConjugateIndex::ConjugateIndex(int ell, int L) : ell_(0), L_(L) {
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "ConjugateIndex", "L must be positive");
  ell_ = ((ell % L) + L) % L;
}

cplx unit_root(int degree, long m) {
  const long period = degree + 2;
  const long r = ((m % period) + period) % period;
  if (r == 0) return {1.0, 0.0};
  if (2 * r == period) return {-1.0, 0.0};
  return std::polar(1.0, 2.0 * pi * static_cast<double>(r) / static_cast<double>(period));
}

std::pair<PolynomialPotential, cplx> conjugate(const PolynomialPotential& potential, int ell) {
  const int N = potential.degree();
  // v_j -> v_j e^{i l phi j / 2} = v_j e^{2 pi i l j / (N+2)}; lambda factor e^{-4 pi i l / (N+2)}.
  std::vector<cplx> v(potential.coeffs());
  for (int j = 1; j < N; ++j)
    if (!is_zero(v[j - 1])) v[j - 1] *= unit_root(N, static_cast<long>(ell) * j);
  return {PolynomialPotential(N, std::move(v)), unit_root(N, -2L * ell)};
}

std::pair<PolynomialPotential, cplx> translate(const PolynomialPotential& potential, cplx q0) {
  // Taylor shift by repeated synthetic division.
  auto a = potential.ascending();
  const int n = potential.degree();
  for (int k = 0; k < n; ++k)
    for (int j = n - 1; j >= k; --j) a[j] += q0 * a[j + 1];
  const cplx offset = a[0];
  a[0] = 0.0;
  std::vector<cplx> v(n - 1);
  for (int j = 1; j < n; ++j) v[j - 1] = a[n - j];
  return {PolynomialPotential(n, std::move(v)), offset};
}

cplx beta_minus_one(const PolynomialPotential& potential) {
  const int N = potential.degree();
  if (N == 2) throw Error(ErrorKind::InvalidArgument, "beta_minus_one", "undefined for N = 2");
  if (N % 2 != 0 || N < 2) return 0.0;  // sum_j j r_j is an integer, 1 + N/2 is not
  const int target = 1 + N / 2;
  cplx total = 0.0;
  std::vector<int> r(N - 1, 0);
  detail::for_each_weighted_partition(N - 1, target, r, 1, [&](const std::vector<int>& idx) {
    int n = 0;
    cplx term = 1.0;
    for (int j = 1; j < N; ++j) {
      const int rj = idx[j - 1];
      if (rj == 0) continue;
      const cplx vj = potential.coeff(j);
      if (is_zero(vj)) {
        term = 0.0;
        break;
      }
      n += rj;
      term *= std::pow(vj, rj) / std::tgamma(rj + 1.0);
    }
    if (is_zero(term)) return;
    // Gamma(3/2) / Gamma(3/2 - n) = prod_{i=1}^{n} (3/2 - i)
    double ratio = 1.0;
    for (int i = 1; i <= n; ++i) ratio *= 1.5 - i;
    total += ratio * term;
  });
  return total;
}

cplx BetaExpansion::at(double sigma) const {
  const double m = degree * power - sigma;
  const double mr = std::round(m);
  if (std::abs(m - mr) > 1e-9 || mr < 0 || mr >= static_cast<double>(coeffs.size())) return 0.0;
  return coeffs[static_cast<std::size_t>(mr)];
}

namespace {

// w(x) = sum_j v_j x^j + lambda x^N, truncated at x^{depth-1}.
std::vector<cplx> inner_series(const PolynomialPotential& potential, cplx lambda, int depth) {
  const int N = potential.degree();
  std::vector<cplx> w(depth, 0.0);
  for (int j = 1; j < N && j < depth; ++j) w[j] = potential.coeff(j);
  if (N < depth) w[N] += lambda;
  return w;
}

}  // namespace

BetaExpansion beta_expansion(const PolynomialPotential& potential, cplx lambda, int depth,
                             double power) {
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "beta_expansion", "depth must be >= 1");
  const auto g = inner_series(potential, lambda, depth);  // g = 1 + w, g_0 = 1
  // f = g^a via f_n = (1/n) sum_{k=1}^{n} ((a + 1) k - n) g_k f_{n-k}
  std::vector<cplx> f(depth, 0.0);
  f[0] = 1.0;
  for (int n = 1; n < depth; ++n) {
    cplx acc = 0.0;
    for (int k = 1; k <= n; ++k)
      if (!is_zero(g[k])) acc += ((power + 1.0) * k - n) * g[k] * f[n - k];
    f[n] = acc / static_cast<double>(n);
  }
  return BetaExpansion{potential.degree(), power, std::move(f)};
}

std::pair<cplx, cplx> expansion_coefficient_with_power_derivative(
    const PolynomialPotential& potential, cplx lambda, double a, int m) {
  if (m < 0) return {0.0, 0.0};
  const auto w = inner_series(potential, lambda, m + 1);
  // sum_n binom(a, n) [x^m] w^n; w has no constant term so n <= m.
  std::vector<cplx> wn(m + 1, 0.0);
  wn[0] = 1.0;
  cplx value = m == 0 ? 1.0 : 0.0;
  cplx deriv = 0.0;
  double binom = 1.0;
  double dlog = 0.0;  // d/da log binom(a, n) = sum_{i<n} 1/(a - i)
  for (int n = 1; n <= m; ++n) {
    std::vector<cplx> next(m + 1, 0.0);
    for (int i = 0; i <= m; ++i) {
      if (is_zero(wn[i])) continue;
      for (int j = 1; i + j <= m; ++j) next[i + j] += wn[i] * w[j];
    }
    wn = std::move(next);
    binom *= (a - (n - 1)) / n;
    dlog += 1.0 / (a - (n - 1));
    value += binom * wn[m];
    deriv += binom * dlog * wn[m];
  }
  return {value, deriv};
}

}  // namespace exactwkb
