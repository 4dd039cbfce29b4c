#include "exactwkb/oracle.hpp"

#include <array>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "exactwkb/classical.hpp"
#include "exactwkb/parallel.hpp"

namespace exactwkb {

namespace odeint = boost::numeric::odeint;

double OracleSample::psi_value() const { return psi * std::exp(log_scale); }
double OracleSample::dpsi_value() const { return dpsi * std::exp(log_scale); }
double OracleSample::log_abs_psi() const { return std::log(std::abs(psi)) + log_scale; }

namespace {

constexpr int kSeriesDepth = 360;  // half-integer steps in the descending q-expansions

void require_real(const PolynomialPotential& V, const char* where) {
  if (!V.is_real()) throw Error(ErrorKind::InvalidArgument, where, "oracle needs a real potential");
}

// Large-q expansions in powers q^{N/2 - m/2}:
//   y = psi'/psi ~ sum a_m q^{N/2 - m/2}            (recessive Riccati solution)
//   log psi - I + log(Q)/4 ~ sum r_m q^{N/2 - m/2 + 1}
//   w = int_q^inf psi^2 / psi(q)^2 ~ sum c_m q^{-N/2 - m/2}
//   int_q^inf w ~ sum t_m q^{1 - N/2 - m/2}
struct WkbSeries {
  int N = 0;
  std::vector<double> a, r, c, t;
};

WkbSeries wkb_series(const PolynomialPotential& V, double lambda) {
  const int N = V.degree();
  const int M = kSeriesDepth;
  WkbSeries s;
  s.N = N;
  std::vector<double> Qc(M, 0.0);
  Qc[0] = 1.0;
  for (int j = 1; j < N; ++j) Qc[2 * j] = V.coeff(j).real();
  if (2 * N < M) Qc[2 * N] += lambda;

  s.a.assign(M, 0.0);
  s.a[0] = -1.0;
  for (int m = 1; m < M; ++m) {
    double acc = Qc[m];
    for (int i = 1; i < m; ++i) acc -= s.a[i] * s.a[m - i];
    const int mp = m - N - 2;
    if (mp >= 0) acc -= (0.5 * N - 0.5 * mp) * s.a[mp];
    s.a[m] = acc / (2.0 * s.a[0]);
  }

  // y0 + y1 = -sqrt(Q) - Q'/(4Q) in the same basis
  std::vector<double> e(M, 0.0);
  const auto root = beta_expansion(V, lambda, M / 2 + 1, 0.5);
  for (int k = 0; 2 * k < M; ++k) e[2 * k] -= root.coeffs[k].real();
  const int J = M / 2;
  std::vector<double> g(J + 1, 0.0), L(J + 1, 0.0);
  for (int j = 1; j <= N && j <= J; ++j) g[j] = Qc[2 * j];
  for (int j = 1; j <= J; ++j) {
    double acc = j * g[j];
    for (int i = 1; i < j; ++i) acc -= i * L[i] * g[j - i];
    L[j] = acc / j;
  }
  // Q'/Q = N/q - sum_j j L_j q^{-j-1}
  if (N + 2 < M) e[N + 2] -= 0.25 * N;
  for (int j = 1; N + 2 + 2 * j < M; ++j) e[N + 2 + 2 * j] += 0.25 * j * L[j];

  s.r.assign(M, 0.0);
  for (int m = 0; m < M; ++m) {
    const double p = 0.5 * N - 0.5 * m;
    const double d = s.a[m] - e[m];
    if (p >= -1.0) continue;  // cancels identically
    s.r[m] = d / (p + 1.0);
  }

  s.c.assign(M, 0.0);
  s.c[0] = 0.5;
  for (int m = 1; m < M; ++m) {
    double acc = 0.0;
    for (int i = 1; i <= m; ++i) acc += s.a[i] * s.c[m - i];
    const int mp = m - N - 2;
    if (mp >= 0) acc += 0.5 * (-0.5 * N - 0.5 * mp) * s.c[mp];
    s.c[m] = acc;
  }
  s.t.assign(M, 0.0);
  for (int m = 0; m < M; ++m) {
    const double p = -0.5 * N - 0.5 * m;
    if (p >= -1.0) continue;
    s.t[m] = -s.c[m] / (p + 1.0);
  }
  return s;
}

// Period of the coefficient pattern: lambda enters every 2N half-steps, derivatives every N + 2.
int block_of(int N) { return std::lcm(2 * N, N + 2); }

struct SeriesValue {
  double value = 0.0;
  double error = std::numeric_limits<double>::infinity();
};

// Optimally truncated sum of coeffs[m] q^{shift - m/2}. Terms are grouped in blocks of
// `block` indices, since single coefficients vanish or dip irregularly; summation stops once the
// block maxima start to grow.
SeriesValue sum_series(const std::vector<double>& coeffs, double q, double shift, int block) {
  SeriesValue out;
  const double step = std::pow(q, -0.5);
  double qp = std::pow(q, shift);
  double acc = 0.0, last_block = std::numeric_limits<double>::infinity();
  const int M = static_cast<int>(coeffs.size());
  for (int start = 0; start < M; start += block) {
    double block_max = 0.0, block_sum = 0.0;
    for (int m = start; m < std::min(M, start + block); ++m) {
      const double term = coeffs[m] * qp;
      qp *= step;
      block_sum += term;
      block_max = std::max(block_max, std::abs(term));
    }
    if (block_max == 0.0) continue;
    if (block_max > last_block) break;
    acc += block_sum;
    out.error = block_max;
    last_block = block_max;
    if (block_max <= 1e-18 * std::abs(acc)) break;
  }
  out.value = acc;
  return out;
}

double outer_turning_point(const PolynomialPotential& V, double lambda) {
  double best = 0.0;
  for (const auto& r : V.roots(lambda)) {
    const double scale = std::max(1.0, std::abs(r));
    if (std::abs(r.imag()) <= 1e-7 * scale) best = std::max(best, r.real());
  }
  return best;
}

double root_radius(const PolynomialPotential& V, double lambda) {
  double rad = 0.0;
  for (const auto& r : V.roots(lambda)) rad = std::max(rad, std::abs(r));
  return rad;
}

bool series_accurate(const WkbSeries& s, double q) {
  const auto y = sum_series(s.a, q, 0.5 * s.N, block_of(s.N));
  const auto r = sum_series(s.r, q, 0.5 * s.N + 1.0, block_of(s.N));
  return y.error <= 1e-16 * std::abs(y.value) && r.error <= 1e-16;
}

using State = std::array<double, 4>;  // u, u', p = int_q^inf psi^2 in scale units, T

struct Integrator {
  const PolynomialPotential& V;
  double lambda;
  bool green;
  double rel_tol, abs_tol;

  State x{};
  double q = 0.0;
  double log_scale = 0.0;
  double angle = 0.0;
  double dt = -1e-3;

  void rhs(const State& s, State& ds, double at) const {
    const double Q = V(at) + lambda;
    ds[0] = s[1];
    ds[1] = Q * s[0];
    if (green) {
      ds[2] = -s[0] * s[0];
      ds[3] = -s[2] / (s[0] * s[0]);
    } else {
      ds[2] = 0.0;
      ds[3] = 0.0;
    }
  }

  void rescale() {
    const double norm = std::abs(x[0]) + std::abs(x[1]);
    if (norm > 1e30 || norm < 1e-30) {
      x[0] /= norm;
      x[1] /= norm;
      x[2] /= norm * norm;
      log_scale += std::log(norm);
    }
  }

  void run_to(double target) {
    auto stepper = odeint::make_controlled(abs_tol, rel_tol, odeint::runge_kutta_fehlberg78<State>());
    auto sys = [this](const State& s, State& ds, double at) { rhs(s, ds, at); };
    int guard = 0;
    while (q > target) {
      const double Q = V(q) + lambda;
      const double cap = 0.5 / std::sqrt(std::max(-Q, 0.0) + 1.0);
      double h = -std::min({-dt, q - target, cap});
      if (q + h < target + 1e-14 * std::max(1.0, std::abs(target))) h = target - q;
      double t = q;
      const auto result = stepper.try_step(sys, x, t, h);
      if (result == odeint::success) {
        q = (t <= target + 1e-15 * std::max(1.0, std::abs(target))) ? target : t;
        dt = h;
        const double raw = std::atan2(x[0], x[1]);
        angle += std::remainder(raw - angle, 2.0 * pi);
        rescale();
      } else {
        dt = h;
      }
      if (++guard > 50000000)
        throw Error(ErrorKind::NotConverged, "oracle", "step budget exhausted");
    }
  }

  OracleSample sample() const { return {q, x[0], x[1], log_scale}; }
};

Integrator start(const PolynomialPotential& V, double lambda, double q_max, const WkbSeries& s, bool green,
                 const OracleConfig& config) {
  Integrator it{V, lambda, green, config.rel_tol, config.abs_tol};
  const double Q = V(q_max) + lambda;
  const double y = sum_series(s.a, q_max, 0.5 * s.N, block_of(s.N)).value;
  const double R = sum_series(s.r, q_max, 0.5 * s.N + 1.0, block_of(s.N)).value;
  const double I = regularized_action(V, lambda, q_max).value.real();
  it.q = q_max;
  it.x = {1.0, y, 0.0, 0.0};
  it.log_scale = I - 0.25 * std::log(Q) + R;
  if (green) {
    it.x[2] = sum_series(s.c, q_max, -0.5 * s.N, block_of(s.N)).value;
    it.x[3] = sum_series(s.t, q_max, 1.0 - 0.5 * s.N, block_of(s.N)).value;
  }
  it.angle = std::atan2(it.x[0], it.x[1]);
  it.dt = -std::min(1e-2, 0.1 / std::sqrt(std::abs(Q) + 1.0));
  return it;
}

double choose_q_max(const PolynomialPotential& V, double lambda, const WkbSeries& s, const OracleConfig& config) {
  if (config.q_max) return *config.q_max;
  const double tp = outer_turning_point(V, lambda);
  const double slope = std::abs(V.derivative(tp, 1));
  const double decay = slope > 0.0 ? std::pow(slope, -1.0 / 3.0) : 1.0;
  double q = std::max({tp + 6.0 * decay, 1.6 * root_radius(V, lambda), 1.0});
  for (int i = 0; i < 400 && !series_accurate(s, q); ++i) q *= 1.05;
  return q;
}

}  // namespace

double default_q_max(const PolynomialPotential& potential, double lambda, const OracleConfig& config) {
  require_real(potential, "default_q_max");
  return choose_q_max(potential, lambda, wkb_series(potential, lambda), config);
}

OracleSolution recessive_solution(const PolynomialPotential& potential, double lambda,
                                  std::span<const double> q_grid, const OracleConfig& config) {
  require_real(potential, "recessive_solution");
  const auto series = wkb_series(potential, lambda);
  OracleSolution out;
  out.lambda = lambda;
  out.q_max = choose_q_max(potential, lambda, series, config);
  for (double q : q_grid)
    if (q > out.q_max) out.q_max = q;
  auto it = start(potential, lambda, out.q_max, series, false, config);
  std::vector<std::size_t> order(q_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return q_grid[a] > q_grid[b]; });
  out.samples.resize(q_grid.size());
  for (std::size_t idx : order) {
    it.run_to(q_grid[idx]);
    out.samples[idx] = it.sample();
  }
  for (const auto& s : out.samples)
    if (!std::isfinite(s.log_scale))
      throw Error(ErrorKind::Overflow, "recessive_solution", "solution scale not representable");
  return out;
}

BoundaryData boundary_data(const PolynomialPotential& potential, double lambda, const OracleConfig& config) {
  require_real(potential, "boundary_data");
  const auto series = wkb_series(potential, lambda);
  BoundaryData out;
  out.q_max = choose_q_max(potential, lambda, series, config);
  auto it = start(potential, lambda, out.q_max, series, true, config);
  it.run_to(0.0);
  out.at_zero = it.sample();
  out.angle = it.angle;
  out.green_dirichlet = it.x[3];
  out.green_neumann = it.x[3] - it.x[2] / (it.x[0] * it.x[1]);
  return out;
}

namespace {

double prufer_angle(const PolynomialPotential& V, double E, const OracleConfig& config) {
  const auto series = wkb_series(V, -E);
  auto it = start(V, -E, choose_q_max(V, -E, series, config), series, false, config);
  it.run_to(0.0);
  return it.angle;
}

}  // namespace

std::vector<double> shoot_levels(const PolynomialPotential& potential, Parity parity, int count,
                                 const OracleConfig& config) {
  require_real(potential, "shoot_spectrum");
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "shoot_spectrum", "count must be >= 1");
  if (potential.degree() < 2) throw Error(ErrorKind::InvalidArgument, "shoot_spectrum", "degree must be >= 2");
  std::optional<TailModel> tail;
  if (potential.degree() >= 3) tail = bs_coefficients(potential, parity);
  std::vector<double> levels(count);
  parallel_for(count, [&](int i) {
    const int k = 2 * i + parity_offset(parity);
    // eigenvalue <=> angle(E) = pi (1 - k) / 2; angle decreases with E
    const double goal = 0.5 * pi * (1.0 - k);
    auto F = [&](double E) { return prufer_angle(potential, E, config) - goal; };
    double seed, width;
    if (tail) {
      auto invert = [&](int kk) {
        try {
          return invert_counting(*tail, kk).real();
        } catch (const Error&) {
          return invert_counting(*tail, kk, CountingTerms::Positive).real();
        }
      };
      seed = invert(k);
      const double up = invert(k + 2);
      width = std::max(0.1, 0.25 * (up - seed));
    } else {
      // N = 2: q^2 + v q, levels near 2k + 1
      seed = 2.0 * k + 1.0 - 0.25 * std::norm(potential.coeff(1));
      width = 0.5;
    }
    double lo = seed - width, hi = seed + width;
    double flo = F(lo), fhi = F(hi);
    double grow = width;
    int guard = 0;
    while (flo < 0.0) {
      grow *= config.bracket_expansion;
      lo -= grow;
      flo = F(lo);
      if (++guard > 200) throw Error(ErrorKind::BracketFailure, "shoot_spectrum", "no lower bracket at k = " + std::to_string(k));
    }
    grow = width;
    while (fhi > 0.0) {
      grow *= config.bracket_expansion;
      hi += grow;
      fhi = F(hi);
      if (++guard > 400) throw Error(ErrorKind::BracketFailure, "shoot_spectrum", "no upper bracket at k = " + std::to_string(k));
    }
    boost::uintmax_t iters = 200;
    const auto tol = [](double a, double b) { return std::abs(a - b) <= 2e-15 * std::max(1.0, std::abs(a)); };
    auto [a, b] = boost::math::tools::toms748_solve(F, lo, hi, flo, fhi, tol, iters);
    if (std::abs(b - a) > 1e-10 * std::max(1.0, std::abs(a))) throw Error(ErrorKind::BracketFailure, "shoot_spectrum", "root polish failed at k = " + std::to_string(k));
    levels[i] = 0.5 * (a + b);
  });
  return levels;
}

SpectrumModel shoot_spectrum(const PolynomialPotential& potential, Parity parity, int count,
                             const OracleConfig& config) {
  const auto levels = shoot_levels(potential, parity, std::max(count, 4), config);
  std::vector<cplx> E(levels.begin(), levels.end());
  return make_spectrum(potential, parity, std::move(E));
}

TraceCheck trace_formula_check(const PolynomialPotential& potential, double lambda, Parity parity,
                               const OracleConfig& config, int levels) {
  if (potential.degree() <= 2) throw Error(ErrorKind::InvalidArgument, "trace_formula_check", "requires N > 2");
  TraceCheck out;
  const double h = 1e-5;
  auto log_boundary = [&](double lam) {
    const auto b = boundary_data(potential, lam, config);
    const auto& s = b.at_zero;
    return parity == Parity::Odd ? std::log(std::abs(s.psi)) + s.log_scale
                                 : std::log(std::abs(s.dpsi)) + s.log_scale;
  };
  out.lhs = (log_boundary(lambda + h) - log_boundary(lambda - h)) / (2.0 * h);
  const auto b = boundary_data(potential, lambda, config);
  out.green = parity == Parity::Odd ? b.green_dirichlet : b.green_neumann;
  out.rhs = zeta_s1(shoot_spectrum(potential, parity, levels, config), lambda).real();
  return out;
}

}  // namespace exactwkb
