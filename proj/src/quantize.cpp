#include "exactwkb/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "exactwkb/parallel.hpp"

namespace exactwkb {

void FixedPointConfig::validate() const {
  const char* where = "FixedPointConfig";
  if (K < 4) throw Error(ErrorKind::InvalidArgument, where, "K must be at least 4");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, where, "tol must be positive");
  if (max_outer < 1) throw Error(ErrorKind::InvalidArgument, where, "max_outer must be positive");
  if (!(damping > 0.0 && damping <= 1.0))
    throw Error(ErrorKind::InvalidArgument, where, "damping must lie in (0, 1]");
  if (!(newton_tol > 0.0) || newton_max < 1)
    throw Error(ErrorKind::InvalidArgument, where, "bad Newton settings");
}

namespace {

double shift_term(int N, Parity parity) {
  return parity_sign(parity) * (N - 2.0) / (2.0 * (N + 2.0));
}

double relative_change(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Local sector spacing step / n'(E) from the tail.
double local_spacing(const TailModel& tail, cplx E) {
  const cplx d = counting(tail, E, 1, CountingTerms::Positive);
  const double s = tail.step / std::max(std::abs(d), 1e-300);
  return std::isfinite(s) ? s : 1.0;
}

// Sweeps stalled: the error ratio has sat above 0.98 for ten sweeps running, or twenty
// sweeps failed to halve the best error of the twenty before.
bool stalled(const std::vector<double>& hist) {
  constexpr int window = 10;
  const int n = static_cast<int>(hist.size());
  if (n <= window) return false;
  bool flat = true;
  for (int i = n - window; i < n; ++i)
    if (!(hist[i] > 0.98 * hist[i - 1])) flat = false;
  if (flat) return true;
  if (n < 40) return false;
  const double recent = *std::min_element(hist.end() - 20, hist.end());
  const double before = *std::min_element(hist.end() - 40, hist.end() - 20);
  return recent > 0.5 * before;
}

using Eval = std::function<std::pair<cplx, cplx>(cplx)>;  // (F, dF/dE)

struct NewtonResult {
  cplx E;
  double residual;
  bool converged;
};

// Damped Newton with steps capped at `cap` and a few halvings when |F| grows.
NewtonResult newton(const Eval& f, cplx E, double cap, const FixedPointConfig& cfg, bool real_line) {
  auto [F, dF] = f(E);
  for (int it = 0; it < cfg.newton_max; ++it) {
    cplx step = F / dF;
    if (real_line) step = step.real();
    if (!std::isfinite(std::abs(step))) return {E, std::abs(F), false};
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    cplx trial = E - step;
    auto next = f(trial);
    for (int h = 0; h < 6 && std::abs(next.first) > std::abs(F); ++h) {
      step *= 0.5;
      trial = E - step;
      next = f(trial);
    }
    E = trial;
    F = next.first;
    dF = next.second;
    if (std::abs(step) <= cfg.newton_tol * std::max(1.0, std::abs(E))) return {E, std::abs(F), true};
  }
  return {E, std::abs(F), false};
}

std::vector<cplx> seeds(const TailModel& tail, int K) {
  std::vector<cplx> out(K);
  for (int i = 0; i < K; ++i) {
    const int k = tail.first_index() + tail.step * i;
    try {
      out[i] = invert_counting(tail, k);
    } catch (const Error&) {
      out[i] = invert_counting(tail, k, CountingTerms::Positive);
    }
  }
  return out;
}

}  // namespace

SpectrumModel solve_homogeneous(int degree, Parity parity, const FixedPointConfig& cfg, SolveReport* report) {
  cfg.validate();
  if (degree < 3) throw Error(ErrorKind::InvalidArgument, "solve_homogeneous", "requires N >= 3");
  const auto V = PolynomialPotential::homogeneous(degree);
  const double phi = 4.0 * pi / (degree + 2.0);
  const cplx rot = -std::exp(-I * phi);
  const double shift = shift_term(degree, parity);

  TailModel tail = bs_coefficients(V, parity);
  SpectrumModel model(parity, seeds(tail, cfg.K), tail, V);

  SolveReport rep;
  rep.damping_used = 1.0;
  for (int sweep = 1; sweep <= cfg.max_outer; ++sweep) {
    const auto& old = model.eigenvalues();
    std::vector<cplx> next(cfg.K);
    std::vector<double> resid(cfg.K);
    parallel_for(cfg.K, [&](int i) {
      const double target = model.index(i) + 0.5 + shift;
      Eval f = [&](cplx E) {
        const cplx lam = rot * E.real();
        const double g = 2.0 / pi * log_det(model, lam).value.imag() - target;
        const double dg = 2.0 / pi * (rot * zeta_s1(model, lam)).imag();
        return std::pair<cplx, cplx>(g, dg);
      };
      const double cap = 0.5 * local_spacing(tail, old[i]);
      auto r = newton(f, old[i].real(), cap, cfg, true);
      next[i] = r.E.real();
      resid[i] = r.residual;
    });

    double err = 0.0;
    for (int i = 0; i < cfg.K; ++i) {
      if (!std::isfinite(next[i].real()))
        throw Error(ErrorKind::DivergentSector, "solve_homogeneous", "non-finite level");
      err = std::max(err, relative_change(next[i], old[i]));
    }
    model = model.with_eigenvalues(std::move(next));
    rep.sweeps = sweep;
    rep.error_history.push_back(err);
    rep.max_residual = *std::max_element(resid.begin(), resid.end());
    if (err < cfg.tol) {
      if (report) *report = rep;
      return model;
    }
    if (stalled(rep.error_history))
      throw Error(ErrorKind::NotContracting, "solve_homogeneous", "error ratio above 0.98 for 10 sweeps");
  }
  if (report) *report = rep;
  throw Error(ErrorKind::NotConverged, "solve_homogeneous",
              "no convergence in " + std::to_string(cfg.max_outer) + " sweeps");
}

namespace {

struct System {
  PolynomialPotential potential;
  Parity parity;
  int L;
  double phi;
  cplx beta;
  double shift;
};

System make_system(const PolynomialPotential& V, Parity parity, bool all_conjugates = false) {
  const auto params = derive_parameters(V);
  const int L = all_conjugates ? V.degree() + 2 : params.L;
  return {V, parity, L, params.phi, beta_minus_one(V), shift_term(V.degree(), parity)};
}

int wrap(int ell, int L) { return ((ell % L) + L) % L; }

// F and dF/dE at level E of sector ell (spectral index k) given current sector models.
std::pair<cplx, cplx> evaluate(const System& sys, const std::vector<SpectrumModel>& sectors, int ell, int k,
                               cplx E) {
  const cplx up = -std::exp(-I * sys.phi), down = -std::exp(I * sys.phi);
  const auto& plus = sectors[wrap(ell + 1, sys.L)];
  const auto& minus = sectors[wrap(ell - 1, sys.L)];
  const cplx lp = up * E, lm = down * E;
  const double sgn = (ell % 2 == 0) ? 1.0 : -1.0;
  const cplx F = -I * (log_det(plus, lp).value - log_det(minus, lm).value) - sgn * sys.phi * sys.beta -
                 pi * (k + 0.5 + sys.shift);
  const cplx dF = -I * (up * zeta_s1(plus, lp) - down * zeta_s1(minus, lm));
  return {F, dF};
}

void symmetrize(std::vector<std::vector<cplx>>& levels, int L) {
  for (int ell = 0; ell < L; ++ell) {
    const int partner = wrap(-ell, L);
    if (partner < ell) continue;
    auto& a = levels[ell];
    auto& b = levels[partner];
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (partner == ell) {
        a[i] = a[i].real();
      } else {
        const cplx m = 0.5 * (a[i] + std::conj(b[i]));
        a[i] = m;
        b[i] = std::conj(m);
      }
    }
  }
}

struct Attempt {
  std::vector<SpectrumModel> sectors;
  SolveReport report;
};

bool retryable(const Error& e) {
  return e.kind() == ErrorKind::NotConverged || e.kind() == ErrorKind::NotContracting ||
         e.kind() == ErrorKind::DivergentSector;
}

using Levels = std::vector<std::vector<cplx>>;

Attempt coupled_newton(const System& sys, const FixedPointConfig& cfg, Levels levels, int max_iter,
                       bool best_effort = false);

Attempt run_sweeps(const System& sys, const FixedPointConfig& cfg, double damping,
                   const std::vector<std::vector<cplx>>* initial = nullptr) {
  const auto& V = sys.potential;
  const int L = sys.L, K = cfg.K;
  const bool real = V.is_real();

  std::vector<SpectrumModel> sectors;
  std::vector<TailModel> tails;
  std::vector<std::vector<cplx>> levels(L);
  for (int ell = 0; ell < L; ++ell) {
    const auto Vl = conjugate(V, ell).first;
    tails.push_back(bs_coefficients(Vl, sys.parity));
    levels[ell] = initial ? (*initial)[ell] : seeds(tails.back(), K);
  }
  if (real) symmetrize(levels, L);
  for (int ell = 0; ell < L; ++ell) {
    sectors.emplace_back(sys.parity, levels[ell], tails[ell], conjugate(V, ell).first);
  }

  Attempt out;
  out.report.damping_used = damping;
  const int n = L * K;
  double handoff = 1e-2;
  for (int sweep = 1; sweep <= cfg.max_outer; ++sweep) {
    std::vector<std::vector<cplx>> next(L, std::vector<cplx>(K));
    std::vector<double> resid(n);
    parallel_for(n, [&](int idx) {
      const int ell = idx / K, i = idx % K;
      const int k = sectors[ell].index(i);
      const cplx E0 = levels[ell][i];
      const bool real_line = real && wrap(-ell, L) == ell;
      Eval f = [&](cplx E) { return evaluate(sys, sectors, ell, k, E); };
      const double cap = 0.5 * local_spacing(tails[ell], E0);
      auto r = newton(f, E0, cap, cfg, real_line);
      next[ell][i] = r.E;
      resid[idx] = r.residual;
    });

    double err = 0.0;
    for (int ell = 0; ell < L; ++ell) {
      for (int i = 0; i < K; ++i) {
        const cplx E = next[ell][i];
        if (!std::isfinite(E.real()) || !std::isfinite(E.imag()))
          throw Error(ErrorKind::DivergentSector, "solve_general",
                      "sector " + std::to_string(ell) + " produced a non-finite level");
        // a level may not jump past the stored range of its sector in one sweep
        const double bound = 4.0 * std::abs(sectors[ell].level(K));
        if (std::abs(E) > bound)
          throw Error(ErrorKind::DivergentSector, "solve_general",
                      "sector " + std::to_string(ell) + " left its trust bracket");
        next[ell][i] = (1.0 - damping) * levels[ell][i] + damping * E;
      }
    }
    if (real) symmetrize(next, L);
    for (int ell = 0; ell < L; ++ell)
      for (int i = 0; i < K; ++i) err = std::max(err, relative_change(next[ell][i], levels[ell][i]));

    levels = std::move(next);
    for (int ell = 0; ell < L; ++ell) sectors[ell] = sectors[ell].with_eigenvalues(levels[ell]);
    out.report.sweeps = sweep;
    out.report.error_history.push_back(err);
    if (err < cfg.tol) {
      out.sectors = std::move(sectors);
      return out;
    }
    // slow linear tail: once inside the basin, finish with the coupled Newton
    if (err < handoff) {
      try {
        auto fin = coupled_newton(sys, cfg, levels, 10);
        out.sectors = std::move(fin.sectors);
        out.report.method = "jacobi+newton";
        out.report.sweeps += fin.report.sweeps;
        for (double e : fin.report.error_history) out.report.error_history.push_back(e);
        return out;
      } catch (const Error& e) {
        if (!retryable(e)) throw;
        handoff *= 0.1;
      }
    }
    if (stalled(out.report.error_history))
      throw Error(ErrorKind::NotContracting, "solve_general", "error ratio above 0.98 for 10 sweeps");
  }
  throw Error(ErrorKind::NotConverged, "solve_general",
              "no convergence in " + std::to_string(cfg.max_outer) + " sweeps");
}

}  // namespace

namespace {

std::vector<SpectrumModel> build_sectors(const System& sys, const Levels& levels) {
  std::vector<SpectrumModel> out;
  for (int ell = 0; ell < sys.L; ++ell) {
    const auto Vl = conjugate(sys.potential, ell).first;
    out.emplace_back(sys.parity, levels[ell], bs_coefficients(Vl, sys.parity), Vl);
  }
  return out;
}

double max_abs(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Newton on the whole coupled system. Stored levels enter log D explicitly, so
// d log D^[m](lambda) / dE_j^[m] = 1 / (E_j^[m] + lambda).
Attempt coupled_newton(const System& sys, const FixedPointConfig& cfg, Levels levels, int max_iter,
                       bool best_effort) {
  const int L = sys.L, K = static_cast<int>(levels[0].size()), n = L * K;
  const bool real = sys.potential.is_real();
  const cplx up = -std::exp(-I * sys.phi), down = -std::exp(I * sys.phi);
  if (real) symmetrize(levels, L);
  auto sectors = build_sectors(sys, levels);

  auto residuals = [&](const std::vector<SpectrumModel>& sec) {
    Eigen::VectorXcd F(n);
    parallel_for(n, [&](int r) {
      const int ell = r / K, i = r % K;
      F(r) = evaluate(sys, sec, ell, sec[ell].index(i), sec[ell].level(i)).first;
    });
    return F;
  };

  Attempt out;
  out.report.damping_used = 1.0;
  Eigen::VectorXcd F = residuals(sectors);
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
    parallel_for(n, [&](int r) {
      const int ell = r / K, i = r % K;
      const cplx E = levels[ell][i];
      J(r, r) = evaluate(sys, sectors, ell, sectors[ell].index(i), E).second;
      const int p = wrap(ell + 1, L), m = wrap(ell - 1, L);
      for (int j = 0; j < K; ++j) {
        J(r, p * K + j) += -I / (levels[p][j] + up * E);
        J(r, m * K + j) += I / (levels[m][j] + down * E);
      }
    });
    Eigen::VectorXcd dx = J.partialPivLu().solve(-F);
    if (!dx.allFinite()) throw Error(ErrorKind::DivergentSector, "solve_general", "singular Jacobian");

    double scale = 1.0;
    for (int r = 0; r < n; ++r) {
      const int ell = r / K, i = r % K;
      const double cap = 0.5 * local_spacing(sectors[ell].tail(), levels[ell][i]);
      if (std::abs(dx(r)) > cap) scale = std::min(scale, cap / std::abs(dx(r)));
    }
    const double f0 = F.norm();
    bool accepted = false;
    Levels trial;
    std::vector<SpectrumModel> trial_sectors;
    Eigen::VectorXcd Ft;
    for (int h = 0; h < 12 && !accepted; ++h, scale *= 0.5) {
      trial = levels;
      for (int r = 0; r < n; ++r) trial[r / K][r % K] += scale * dx(r);
      if (real) symmetrize(trial, L);
      try {
        trial_sectors = sectors;
        for (int ell = 0; ell < L; ++ell) trial_sectors[ell] = sectors[ell].with_eigenvalues(trial[ell]);
        Ft = residuals(trial_sectors);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PoleAtLambda) throw;
        continue;
      }
      accepted = Ft.allFinite() && Ft.norm() < (1.0 - 1e-4 * scale) * f0;
    }
    if (!accepted) {
      // stuck at the evaluation noise floor (levels next to a zero of a neighbouring determinant)
      if (best_effort || (it > 1 && out.report.error_history.back() < cfg.tol && max_abs(F) < 100.0 * cfg.tol)) {
        out.sectors = std::move(sectors);
        return out;
      }
      throw Error(ErrorKind::NotConverged, "solve_general", "coupled Newton line search failed");
    }

    double err = 0.0;
    for (int ell = 0; ell < L; ++ell)
      for (int i = 0; i < K; ++i) err = std::max(err, relative_change(trial[ell][i], levels[ell][i]));
    levels = std::move(trial);
    sectors = std::move(trial_sectors);
    F = std::move(Ft);
    out.report.sweeps = it;
    out.report.error_history.push_back(err);
    if (err < cfg.tol && max_abs(F) < 10.0 * cfg.tol) {
      out.sectors = std::move(sectors);
      return out;
    }
  }
  if (best_effort) {
    out.sectors = std::move(sectors);
    return out;
  }
  throw Error(ErrorKind::NotConverged, "solve_general", "coupled Newton did not converge");
}

// Predictor-corrector tracking of a converged level set from path(0) to path(1).
Attempt track(const std::function<System(double)>& path, Levels levels, const FixedPointConfig& cfg) {
  FixedPointConfig step_cfg = cfg;
  step_cfg.tol = std::max(cfg.tol, 1e-8);
  Levels prev = levels;
  double t = 0.0, t_prev = 0.0, dt = 0.1;
  int steps = 0, iterations = 0;
  Attempt att;
  while (t < 1.0) {
    const double t1 = std::min(1.0, t + dt);
    Levels guess = levels;
    if (t > 0.0) {  // secant predictor
      const double w = (t1 - t) / (t - t_prev);
      for (std::size_t ell = 0; ell < guess.size(); ++ell)
        for (std::size_t i = 0; i < guess[ell].size(); ++i) guess[ell][i] += w * (levels[ell][i] - prev[ell][i]);
    }
    try {
      att = coupled_newton(path(t1), t1 == 1.0 ? cfg : step_cfg, guess, 30);
      iterations += att.report.sweeps;
      prev = std::move(levels);
      levels.clear();
      for (const auto& s : att.sectors) levels.push_back(s.eigenvalues());
      t_prev = t;
      t = t1;
      ++steps;
      if (att.report.sweeps <= 6) dt = std::min(0.25, 1.5 * dt);
    } catch (const Error& e) {
      if (!retryable(e) && e.kind() != ErrorKind::InvalidArgument) throw;
      dt *= 0.5;
      if (dt < 1.0 / 1024)
        throw Error(ErrorKind::NotConverged, "continuation", "path tracking stalled at t = " + std::to_string(t));
    }
  }
  att.report.sweeps = iterations;
  att.report.method = "continuation";
  att.report.continuation_steps = steps;
  return att;
}

CompoundSpectrum finish(const PolynomialPotential& V, Parity parity, Attempt att) {
  CompoundSpectrum out;
  out.parity = parity;
  out.potential = V;
  out.sectors = std::move(att.sectors);
  out.report = std::move(att.report);
  double worst = 0.0;
  for (int ell = 0; ell < out.L(); ++ell)
    for (int i = 0; i < out.sectors[ell].size(); ++i)
      worst = std::max(worst, std::abs(quantization_residual(out, ell, i)));
  out.report.max_residual = worst;
  return out;
}

}  // namespace

CompoundSpectrum continue_spectrum(const CompoundSpectrum& start, const PotentialPath& path,
                                   const FixedPointConfig& cfg) {
  cfg.validate();
  const PolynomialPotential target = path(1.0);
  if (target.degree() != start.potential.degree())
    throw Error(ErrorKind::InvalidArgument, "continue_spectrum", "path changes the degree");
  const int L = start.L();
  auto sys_at = [&](double t) {
    System sys = make_system(path(t), start.parity);
    sys.L = L;
    return sys;
  };
  Levels levels;
  for (const auto& sec : start.sectors) levels.push_back(sec.eigenvalues());
  return finish(target, start.parity, track(sys_at, std::move(levels), cfg));
}

CompoundSpectrum solve_general(const PolynomialPotential& V, Parity parity, const FixedPointConfig& cfg) {
  cfg.validate();
  if (V.degree() < 3) throw Error(ErrorKind::InvalidArgument, "solve_general", "requires N >= 3");
  const System sys = make_system(V, parity, cfg.all_conjugates);

  Attempt att;
  try {
    try {
      att = run_sweeps(sys, cfg, cfg.damping);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DivergentSector) throw;
      att = run_sweeps(sys, cfg, 0.5 * cfg.damping);  // one retry
    }
    // the sweeps stop on step size; a few coupled Newton steps pin the fixed point itself
    try {
      FixedPointConfig polish = cfg;
      polish.tol = std::min(cfg.tol, 1e-13);
      Levels levels;
      for (const auto& sec : att.sectors) levels.push_back(sec.eigenvalues());
      auto refined = coupled_newton(sys, polish, std::move(levels), 3, true);
      att.sectors = std::move(refined.sectors);
    } catch (const Error&) {
    }
  } catch (const Error& e) {
    // asymptotic seeds can sit in the wrong basin for the low complex-sector levels; track
    // the solution instead from q^N, where every conjugate sector is the pure power spectrum
    if (!retryable(e) || !cfg.homotopy_fallback) throw;
    const auto homogeneous = solve_homogeneous(V.degree(), parity, cfg);
    const auto& V0 = V;
    auto sys_at = [&](double t) {
      std::vector<cplx> c = V0.coeffs();
      for (auto& x : c) x *= t;
      System s = make_system(PolynomialPotential(V0.degree(), c), parity);
      s.L = sys.L;
      return s;
    };
    att = track(sys_at, Levels(sys.L, homogeneous.eigenvalues()), cfg);
  }
  return finish(V, parity, std::move(att));
}

cplx quantization_residual(const CompoundSpectrum& c, int ell, int i) {
  System sys = make_system(c.potential, c.parity);
  sys.L = c.L();
  const auto& s = c.sectors.at(ell);
  return evaluate(sys, c.sectors, ell, s.index(i), s.level(i)).first;
}

double wronskian_residual(const CompoundSpectrum& plus, const CompoundSpectrum& minus, cplx lambda) {
  if (plus.parity != Parity::Even || minus.parity != Parity::Odd)
    throw Error(ErrorKind::InvalidArgument, "wronskian_residual", "expects (even, odd) spectra");
  if (plus.L() < 2 || minus.L() < 2)
    throw Error(ErrorKind::InvalidArgument, "wronskian_residual", "needs the first conjugate sector");
  const System sys = make_system(plus.potential, Parity::Even);
  const cplx rot = std::exp(-I * sys.phi);
  const cplx Dp = std::exp(log_det(plus.sectors[0], lambda).value);
  const cplx Dm = std::exp(log_det(minus.sectors[0], lambda).value);
  const cplx D1p = std::exp(log_det(plus.sectors[1], rot * lambda).value);
  const cplx D1m = std::exp(log_det(minus.sectors[1], rot * lambda).value);
  const cplx lhs = std::exp(I * sys.phi / 4.0) * D1p * Dm - std::exp(-I * sys.phi / 4.0) * Dp * D1m;
  const cplx rhs = 2.0 * I * std::exp(I * sys.phi * sys.beta / 2.0);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

}  // namespace exactwkb
