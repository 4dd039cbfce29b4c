#include "exactwkb/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "partitions.hpp"

namespace exactwkb {

namespace {

double rgamma(double z) {
  if (z <= 0.0 && z == std::floor(z)) return 0.0;
  return 1.0 / std::tgamma(z);
}

// Continued Beta function; x > 0 always holds for the terms we build.
double beta_fn(double x, double y) { return std::tgamma(x) * std::tgamma(y) * rgamma(x + y); }

// Ascending polynomial product.
std::vector<cplx> poly_mul(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Large-E expansion of int_0^{q+} F(q) (E - V(q))^a dq, F given in ascending powers.
// Keys are exponents times 2N. Only exponents >= floor2N are kept.
std::map<long, cplx> moment_series(const PolynomialPotential& V, const std::vector<cplx>& F, double a,
                                   long floor2N) {
  const int N = V.degree();
  std::map<long, cplx> out;
  std::vector<int> r(std::max(N - 1, 1), 0);
  for (std::size_t p = 0; p < F.size(); ++p) {
    if (F[p] == cplx(0.0)) continue;
    // exponent = a + (p + 1 - m)/N
    const long base2N = std::lround(2.0 * N * a) + 2L * (static_cast<long>(p) + 1);
    for (int m = 0; base2N - 2L * m >= floor2N; ++m) {
      cplx acc = 0.0;
      if (N == 1) {
        if (m == 0) acc = beta_fn((p + 1.0) / N, a + 1.0) / N;
      } else {
        detail::for_each_weighted_partition(N - 1, m, r, 1, [&](const std::vector<int>& idx) {
          int n = 0;
          cplx term = 1.0;
          for (int j = 1; j < N; ++j) {
            const int rj = idx[j - 1];
            if (rj == 0) continue;
            const cplx vj = V.coeff(j);
            if (vj == cplx(0.0)) {
              term = 0.0;
              return;
            }
            n += rj;
            term *= std::pow(vj, rj) / std::tgamma(rj + 1.0);
          }
          // (-1)^n a (a-1) ... (a-n+1)
          double falling = 1.0;
          for (int i = 0; i < n; ++i) falling *= static_cast<double>(i) - a;
          const double x = (static_cast<double>(p) + n * N - m + 1.0) / N;
          acc += term * falling * beta_fn(x, a - n + 1.0) / static_cast<double>(N);
        });
      }
      if (acc != cplx(0.0)) out[base2N - 2L * m] += F[p] * acc;
    }
  }
  return out;
}

}  // namespace

std::vector<TailTerm> TailModel::positive_terms() const {
  std::vector<TailTerm> out;
  for (const auto& t : terms)
    if (t.exponent.num > 0) out.push_back(t);
  return out;
}

TailModel bs_coefficients(const PolynomialPotential& potential, Parity parity, const TailOptions& options) {
  const int N = potential.degree();
  if (N <= 2) throw Error(ErrorKind::InvalidArgument, "bs_coefficients", "requires N >= 3");
  const double two_over_pi = 2.0 / pi;
  const long floor2N = options.corrections ? static_cast<long>(std::ceil(options.exponent_floor * 2 * N)) : 1;

  std::map<long, cplx> acc;
  for (const auto& [e, c] : moment_series(potential, {1.0}, 0.5, floor2N)) acc[e] += two_over_pi * c;

  if (options.corrections) {
    // -(2/pi)/24 d^2/dE^2 int_0^{q+} V'^2 (E - V)^{-1/2}
    const auto a = potential.ascending();
    std::vector<cplx> dv(N, 0.0);
    for (int p = 1; p <= N; ++p) dv[p - 1] = static_cast<double>(p) * a[p];
    const auto F = poly_mul(dv, dv);
    for (const auto& [e, c] : moment_series(potential, F, -0.5, floor2N + 4L * N)) {
      const double g = static_cast<double>(e) / (2.0 * N);
      const cplx coeff = -two_over_pi / 24.0 * g * (g - 1.0) * c;
      if (coeff != cplx(0.0)) acc[e - 4L * N] += coeff;
    }
    // reflection at the q = 0 wall
    const long e_wall = -3L * N;
    if (e_wall >= floor2N && N >= 2) {
      const cplx slope = potential.coeff(N - 1);
      if (slope != cplx(0.0)) acc[e_wall] += parity_sign(parity) * two_over_pi * slope / 8.0;
    }
  }

  TailModel model;
  model.degree = N;
  model.parity = parity;
  model.step = 2;
  for (auto it = acc.rbegin(); it != acc.rend(); ++it) {
    if (it->second == cplx(0.0)) continue;
    if (it->first <= 0 && !options.corrections) continue;
    model.terms.push_back({Rational(it->first, 2L * N), it->second});
  }
  // keep the leading slot even when it would vanish (never does for a monic V)
  return model;
}

cplx counting(const TailModel& tail, cplx E, int order, CountingTerms which) {
  cplx acc = 0.0;
  for (const auto& t : tail.terms) {
    if (which == CountingTerms::Positive && t.exponent.num <= 0) continue;
    const double alpha = t.exponent.value();
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= alpha - i;
    if (falling == 0.0) continue;
    acc += t.coeff * falling * std::pow(E, alpha - order);
  }
  return acc;
}

cplx invert_counting(const TailModel& tail, int k, CountingTerms which) {
  if (tail.terms.empty()) throw Error(ErrorKind::InvalidArgument, "invert_counting", "empty tail");
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "invert_counting", "k must be >= 0");
  if (tail.step == 2 && (k - tail.first_index()) % 2 != 0)
    throw Error(ErrorKind::InvalidArgument, "invert_counting",
                "index " + std::to_string(k) + " does not belong to the " + parity_name(tail.parity) + " sector");
  const double target = k + 0.5;
  const double mu = tail.mu().value();
  const cplx seed = std::pow(cplx(target) / tail.leading(), 1.0 / mu);

  bool real_tail = true;
  for (const auto& t : tail.terms)
    if (t.coeff.imag() != 0.0) real_tail = false;

  if (real_tail && seed.real() > 0.0) {
    auto f = [&](double E) { return counting(tail, E, 0, which).real() - target; };
    double lo = seed.real(), hi = seed.real();
    int guard = 0;
    while (f(lo) > 0.0 && guard++ < 200) lo *= 0.5;
    guard = 0;
    while (f(hi) < 0.0 && guard++ < 200) hi *= 2.0;
    if (f(lo) > 0.0 || f(hi) < 0.0)
      throw Error(ErrorKind::NoRoot, "invert_counting", "no bracket for k = " + std::to_string(k));
    // the counting function must be increasing across the bracket
    constexpr int kSamples = 16;
    for (int i = 0; i <= kSamples; ++i) {
      const double E = lo * std::pow(hi / lo, static_cast<double>(i) / kSamples);
      if (counting(tail, E, 1, which).real() <= 0.0)
        throw Error(ErrorKind::NoRoot, "invert_counting",
                    "counting function not monotone near k = " + std::to_string(k));
    }
    double E = std::clamp(seed.real(), lo, hi);
    for (int it = 0; it < 200; ++it) {
      const double fe = f(E);
      if (fe == 0.0) return E;
      if (fe < 0.0) lo = E; else hi = E;
      double next = E - fe / counting(tail, E, 1, which).real();
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - E) <= 4e-16 * std::abs(next) || hi - lo <= 4e-16 * hi) return next;
      E = next;
    }
    return E;
  }

  cplx E = seed;
  double last = std::abs(counting(tail, E, 0, which) - target);
  for (int it = 0; it < 200; ++it) {
    const cplx fe = counting(tail, E, 0, which) - target;
    const cplx step = fe / counting(tail, E, 1, which);
    cplx next = E - step;
    double res = std::abs(counting(tail, next, 0, which) - target);
    for (int half = 0; half < 30 && res > last; ++half) {
      next = 0.5 * (next + E);
      res = std::abs(counting(tail, next, 0, which) - target);
    }
    if (std::abs(next - E) <= 4e-16 * std::abs(next)) return next;
    E = next;
    last = res;
  }
  if (last <= 1e-12 * target) return E;
  throw Error(ErrorKind::NoRoot, "invert_counting", "Newton failed for k = " + std::to_string(k));
}

cplx counterterm_sum(const TailModel& tail, cplx E_K) {
  cplx acc = 0.0;
  const cplx logE = std::log(E_K);
  for (const auto& t : tail.terms) {
    if (t.exponent.num <= 0) continue;
    const double alpha = t.exponent.value();
    acc += t.coeff * std::pow(E_K, alpha) * (logE - 1.0 / alpha);
  }
  return 0.5 * acc;
}

double harmonic_number(int n) {
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

cplx canonical_power(double alpha, cplx lambda) {
  const double r = std::round(alpha);
  if (r >= 0.0 && std::abs(alpha - r) < 1e-12) {
    const int n = static_cast<int>(r);
    return std::pow(lambda, n) * (std::log(lambda) - harmonic_number(n));
  }
  return std::pow(lambda, alpha);
}

}  // namespace exactwkb
