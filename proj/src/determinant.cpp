#include "exactwkb/determinant.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <mutex>

namespace exactwkb {

namespace detail {

struct LevelCache {
  std::mutex mutex;
  std::vector<cplx> levels;  // asymptotic levels by sector position, NaN until computed
};

}  // namespace detail

namespace {

constexpr int kMaxAsymptotic = 4096;
constexpr int kOrder = 6;  // Taylor length, enough for f^(5)

using Series = std::array<cplx, kOrder>;

Series mul(const Series& a, const Series& b) {
  Series out{};
  for (int i = 0; i < kOrder; ++i)
    for (int j = 0; i + j < kOrder; ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Taylor coefficients in k of g(E(k)) at the sector level E_a, where n(E(k)) = k + 1/2 and
// gcoef are the E-Taylor coefficients of g.
Series compose_in_k(const TailModel& tail, cplx Ea, const Series& gcoef) {
  Series c{};
  double fact = 1.0;
  for (int j = 1; j < kOrder; ++j) {
    fact *= j;
    c[j] = counting(tail, Ea, j) / fact;
  }
  // revert t = sum c_j eps^j
  Series eps{};
  eps[1] = 1.0 / c[1];
  for (int it = 0; it < kOrder; ++it) {
    Series power = eps, rhs{};
    rhs[1] = 1.0;
    for (int j = 2; j < kOrder; ++j) {
      power = mul(power, eps);
      for (int i = 0; i < kOrder; ++i) rhs[i] -= c[j] * power[i];
    }
    for (int i = 0; i < kOrder; ++i) eps[i] = rhs[i] / c[1];
  }
  // Horner: g(eps) = sum gcoef_j eps^j
  Series out{};
  for (int j = kOrder - 1; j >= 0; --j) {
    out = mul(out, eps);
    out[0] += gcoef[j];
  }
  return out;
}

// -sum_j c_j f^{(2j-1)}(a): the Euler-Maclaurin end correction of a trapezoid sum from a to infinity
cplx euler_maclaurin_end(const Series& fk, int h) {
  const double hh = h;
  const double c1 = hh / 12.0, c2 = -hh * hh * hh / 720.0, c3 = std::pow(hh, 5) / 30240.0;
  // f^{(m)} = m! * coefficient
  return -(c1 * fk[1] + c2 * 6.0 * fk[3] + c3 * 120.0 * fk[5]);
}

void check_pole(cplx E, cplx lambda) {
  if (std::abs(E + lambda) <= 1e-15 * std::max(1.0, std::abs(E)))
    throw Error(ErrorKind::PoleAtLambda, "determinant", "lambda coincides with -E_k");
}

void check_order(const TailModel& tail, const char* where) {
  if (tail.terms.empty()) throw Error(ErrorKind::InvalidArgument, where, "empty tail model");
  if (tail.mu().value() >= 1.0)
    throw Error(ErrorKind::InvalidArgument, where, "requires order mu < 1 (N > 2)");
}

// First sector position a >= size() whose level exceeds 2|lambda| in modulus.
int remainder_start(const SpectrumModel& spectrum, cplx lambda) {
  int a = spectrum.size();
  const double need = 2.0 * std::abs(lambda);
  while (std::abs(spectrum.level(a)) < need) {
    if (++a - spectrum.size() > kMaxAsymptotic)
      throw Error(ErrorKind::NotConverged, "determinant",
                  "tail refinement needs more than " + std::to_string(kMaxAsymptotic) + " asymptotic levels");
  }
  return a;
}

}  // namespace

SpectrumModel::SpectrumModel(Parity parity, std::vector<cplx> eigenvalues, TailModel tail,
                             std::optional<PolynomialPotential> potential)
    : parity_(parity),
      eigenvalues_(std::move(eigenvalues)),
      tail_(std::move(tail)),
      potential_(std::move(potential)),
      cache_(std::make_shared<detail::LevelCache>()) {
  if (eigenvalues_.size() < 4)
    throw Error(ErrorKind::InvalidArgument, "SpectrumModel", "at least 4 stored levels required");
  if (tail_.terms.empty()) throw Error(ErrorKind::InvalidArgument, "SpectrumModel", "empty tail model");
  tail_.parity = parity;
  const int last = size() - 1;
  const cplx expected = asymptotic_level(last);
  if (std::abs(eigenvalues_.back() - expected) > 0.05 * std::abs(expected))
    throw Error(ErrorKind::InvalidArgument, "SpectrumModel",
                "last stored level disagrees with the tail model by more than 5% at k = " +
                    std::to_string(index(last)));
}

cplx SpectrumModel::asymptotic_level(int i) const {
  std::lock_guard lock(cache_->mutex);
  auto& levels = cache_->levels;
  if (static_cast<int>(levels.size()) <= i) levels.resize(i + 1, cplx(std::nan(""), 0.0));
  if (std::isnan(levels[i].real())) levels[i] = invert_counting(tail_, index(i));
  return levels[i];
}

cplx SpectrumModel::level(int i) const { return i < size() ? eigenvalues_[i] : asymptotic_level(i); }

SpectrumModel SpectrumModel::with_eigenvalues(std::vector<cplx> eigenvalues) const {
  SpectrumModel out(*this);
  if (eigenvalues.size() < 4)
    throw Error(ErrorKind::InvalidArgument, "SpectrumModel", "at least 4 stored levels required");
  out.eigenvalues_ = std::move(eigenvalues);
  return out;
}

SpectrumModel make_spectrum(const PolynomialPotential& potential, Parity parity, std::vector<cplx> eigenvalues,
                            const TailOptions& options) {
  return SpectrumModel(parity, std::move(eigenvalues), bs_coefficients(potential, parity, options), potential);
}

cplx radial_log(cplx E, cplx lambda) {
  const cplx z = E + lambda;
  if (lambda == cplx(0.0)) return std::log(z);
  const double theta = std::arg(lambda);
  return {std::log(std::abs(z)), theta + std::arg(z * std::polar(1.0, -theta))};
}

LogDeterminant log_det(const SpectrumModel& spectrum, cplx lambda) {
  const auto& tail = spectrum.tail();
  check_order(tail, "log_det");
  const int a = remainder_start(spectrum, lambda);
  cplx acc = 0.0;
  for (int i = 0; i < a; ++i) {
    const cplx E = spectrum.level(i);
    check_pole(E, lambda);
    acc += radial_log(E, lambda);
  }
  const cplx Ea = spectrum.level(a);
  check_pole(Ea, lambda);
  const double h = spectrum.step();
  // half weight on the tail branch, but the level still counts its radial wrap like the explicit ones
  const cplx logEa = std::log(Ea);
  const cplx x = lambda / Ea;
  const cplx principal = logEa + std::log(1.0 + x);
  acc += radial_log(Ea, lambda) - 0.5 * principal;
  acc -= (2.0 / h) * counterterm_sum(tail, Ea);

  // (1/h) int_{Ea}^inf [log(E + lambda) n'(E) - log E n'_{alpha>0}(E)] dE
  cplx integral = 0.0;
  for (const auto& t : tail.terms) {
    const double alpha = t.exponent.value();
    if (alpha == 0.0) continue;
    const cplx Ea_alpha = std::pow(Ea, alpha);
    if (alpha < 0.0) integral -= t.coeff * Ea_alpha * (logEa - 1.0 / alpha);
    cplx series = 0.0, xp = 1.0;
    for (int j = 1; j < 400; ++j) {
      xp *= x;
      const cplx term = (j % 2 == 1 ? 1.0 : -1.0) * xp / (static_cast<double>(j) * (j - alpha));
      series += term;
      if (std::abs(term) <= 1e-18 * std::max(1e-300, std::abs(series))) break;
    }
    integral += alpha * t.coeff * Ea_alpha * series;
  }
  acc += integral / h;

  const cplx A = Ea + lambda;
  Series g{};
  cplx Ap = 1.0;
  for (int j = 1; j < kOrder; ++j) {
    Ap *= A;
    g[j] = (j % 2 == 1 ? 1.0 : -1.0) / (static_cast<double>(j) * Ap);
  }
  acc += euler_maclaurin_end(compose_in_k(tail, Ea, g), spectrum.step());
  return LogDeterminant{acc};
}

cplx zeta(const SpectrumModel& spectrum, cplx lambda, int s) {
  if (s != 1 && s != 2) throw Error(ErrorKind::InvalidArgument, "zeta", "only s = 1, 2 are supported");
  const auto& tail = spectrum.tail();
  check_order(tail, "zeta");
  const int a = remainder_start(spectrum, lambda);
  auto f = [&](cplx E) {
    const cplx z = E + lambda;
    return s == 1 ? 1.0 / z : 1.0 / (z * z);
  };
  cplx acc = 0.0;
  for (int i = 0; i < a; ++i) {
    const cplx E = spectrum.level(i);
    check_pole(E, lambda);
    acc += f(E);
  }
  const cplx Ea = spectrum.level(a);
  check_pole(Ea, lambda);
  acc += 0.5 * f(Ea);

  // (1/h) int_{Ea}^inf n'(E) (E + lambda)^{-s} dE, expanded in lambda / E
  const cplx x = lambda / Ea;
  cplx integral = 0.0;
  for (const auto& t : tail.terms) {
    const double alpha = t.exponent.value();
    if (alpha == 0.0) continue;
    cplx series = 0.0, xp = 1.0;
    double binom = 1.0;  // (-1)^j binom(-s, j) = binom(s + j - 1, j)
    for (int j = 0; j < 400; ++j) {
      const cplx term = (j % 2 == 0 ? 1.0 : -1.0) * binom * xp / (s + j - alpha);
      series += term;
      if (j > 0 && std::abs(term) <= 1e-18 * std::max(1e-300, std::abs(series))) break;
      xp *= x;
      binom *= static_cast<double>(s + j) / (j + 1);
    }
    integral += alpha * t.coeff * std::pow(Ea, alpha - s) * series;
  }
  acc += integral / static_cast<double>(spectrum.step());

  const cplx A = Ea + lambda;
  Series g{};
  double binom = 1.0;
  for (int j = 0; j < kOrder; ++j) {
    g[j] = (j % 2 == 0 ? 1.0 : -1.0) * binom * std::pow(A, -s - j);
    binom *= static_cast<double>(s + j) / (j + 1);
  }
  acc += euler_maclaurin_end(compose_in_k(tail, Ea, g), spectrum.step());
  return acc;
}

CanonicalFit canonical_fit(const TailModel& tail, std::span<const double> lambda_grid,
                           std::span<const double> values) {
  if (lambda_grid.size() != values.size() || lambda_grid.empty())
    throw Error(ErrorKind::InvalidArgument, "canonical_fit", "grid and values must have equal nonzero length");
  CanonicalFit fit;
  const int N = tail.degree;
  // alpha = mu - j/N on the grid of exponents, down to -3/N
  for (long num = N + 2; num >= -6; num -= 2) {
    const double alpha = static_cast<double>(num) / (2.0 * N);
    fit.exponents.push_back(alpha);
  }
  const int cols = static_cast<int>(fit.exponents.size()) + 1;
  const int rows = static_cast<int>(lambda_grid.size());
  if (rows < cols) throw Error(ErrorKind::InvalidArgument, "canonical_fit", "grid too small for the fit basis");
  Eigen::MatrixXd M(rows, cols);
  Eigen::VectorXd y(rows);
  for (int r = 0; r < rows; ++r) {
    const double lam = lambda_grid[r];
    if (!(lam > 0.0)) throw Error(ErrorKind::InvalidArgument, "canonical_fit", "grid must be positive");
    for (int c = 0; c + 1 < cols; ++c) M(r, c) = canonical_power(fit.exponents[c], lam).real();
    M(r, cols - 1) = 1.0;
    y(r) = values[r];
  }
  Eigen::VectorXd scale = M.colwise().norm().transpose();
  for (int c = 0; c < cols; ++c) M.col(c) /= scale(c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto sv = svd.singularValues();
  fit.condition = sv(0) / sv(sv.size() - 1);
  if (!(fit.condition <= 1e12))
    throw Error(ErrorKind::IllConditioned, "canonical_fit",
                "design matrix condition " + std::to_string(fit.condition) + " exceeds 1e12");
  Eigen::VectorXd sol = M.colPivHouseholderQr().solve(y);
  for (int c = 0; c < cols; ++c) fit.coeffs.push_back(sol(c) / scale(c));
  fit.constant = fit.coeffs.back();
  return fit;
}

double canonical_residual(const SpectrumModel& spectrum, std::span<const double> lambda_grid) {
  std::vector<double> values;
  values.reserve(lambda_grid.size());
  for (double lam : lambda_grid) values.push_back(log_det(spectrum, lam).value.real());
  return std::abs(canonical_fit(spectrum.tail(), lambda_grid, values).constant);
}

}  // namespace exactwkb
