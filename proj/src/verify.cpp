#include "exactwkb/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "exactwkb/classical.hpp"
#include "exactwkb/oracle.hpp"
#include "exactwkb/wavefunction.hpp"

namespace exactwkb {

namespace {

PolynomialPotential quartic(double v2) {
  const std::vector<double> c = {0.0, v2, 0.0};
  return PolynomialPotential::real(4, c);
}

CheckResult start(int id, const char* name, double tolerance) {
  CheckResult r;
  r.id = id;
  r.name = name;
  r.tolerance = tolerance;
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// solved quartics are reused between checks
class Cache {
 public:
  explicit Cache(FixedPointConfig cfg) : cfg_(cfg) {}
  const CompoundSpectrum& get(double v2, Parity p) {
    const auto key = std::make_pair(v2, parity_offset(p));
    auto it = store_.find(key);
    if (it == store_.end()) it = store_.emplace(key, solve_general(quartic(v2), p, cfg_)).first;
    return it->second;
  }
  const FixedPointConfig& config() const { return cfg_; }

 private:
  FixedPointConfig cfg_;
  std::map<std::pair<double, int>, CompoundSpectrum> store_;
};

CheckResult ground_state(Cache& cache) {
  auto r = start(1, "double-well ground state", 5e-5);
  const auto t0 = std::chrono::steady_clock::now();
  double E0 = HUGE_VAL;
  for (auto p : {Parity::Even, Parity::Odd}) E0 = std::min(E0, cache.get(-5.0, p).sectors[0].level(0).real());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.value = std::abs(E0 + 3.41014);
  r.passed = r.value < r.tolerance && secs < 60.0;
  r.detail = fmt("E0 = %.10f, solve %.1f s (limit 60 s)", E0, secs);
  return r;
}

CheckResult overlay(Cache& cache) {
  auto r = start(2, "wavefunction overlay on [-1.5, 1.5]", 1e-3);
  const auto V = quartic(-5.0);
  const double E0 = shoot_levels(V, Parity::Even, 1)[0];
  std::vector<double> grid;
  for (int i = -6; i <= 6; ++i) grid.push_back(0.25 * i);
  const auto pts = profile(V, E0, grid, cache.config());
  const auto ref = recessive_solution(V, -E0, grid);
  int bad = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!pts[i].converged) {
      ++bad;
      continue;
    }
    const double o = ref.samples[i].psi_value();
    r.value = std::max(r.value, std::abs(pts[i].psi - o) / std::abs(o));
  }
  r.passed = bad == 0 && r.value < r.tolerance;
  r.detail = fmt("%.0f of 13 points converged", 13.0 - bad);
  return r;
}

CheckResult homogeneous(Cache& cache) {
  auto r = start(3, "pure-quartic spectrum and contraction", 1e-6);
  double worst_ratio = 0.0;
  for (auto p : {Parity::Even, Parity::Odd}) {
    SolveReport rep;
    const auto S = solve_homogeneous(4, p, cache.config(), &rep);
    const auto ref = shoot_levels(quartic(0.0), p, 8);
    for (int i = 0; i < 8; ++i) r.value = std::max(r.value, rel(S.level(i).real(), ref[i]));
    const auto& h = rep.error_history;
    for (std::size_t s = 2; s + 1 < h.size(); ++s)
      if (h[s] > 0.0) worst_ratio = std::max(worst_ratio, h[s + 1] / h[s]);
  }
  r.passed = r.value < r.tolerance && worst_ratio < 0.9;
  r.detail = fmt("max error ratio after sweep 3: %.3f (limit 0.9)", worst_ratio);
  return r;
}

CheckResult actions() {
  auto r = start(4, "closed-form actions", 1e-9);
  double hom = 0.0, branch = 0.0, reg = 0.0;
  for (double lam : {0.5, 1.0, 10.0})
    hom = std::max(hom, std::abs(homogeneous_action(4, lam).real() - quartic_action(0.0, lam)));
  for (double lam : {0.25, 1.0, 4.0}) {
    const double v = 2.0 * std::sqrt(lam);
    branch = std::max(branch, std::abs(quartic_action(v, lam, QuarticBranch::LargeV) -
                                       quartic_action(v, lam, QuarticBranch::SmallV)));
  }
  for (auto [v, lam] : {std::pair{10.0, 1.0}, std::pair{1.0, 4.0}})
    reg = std::max(reg, std::abs(regularized_action(quartic(v), lam, 0.0).value - cplx(quartic_action(v, lam))));
  r.value = hom;
  r.passed = hom < 1e-9 && branch < 1e-10 && reg < 1e-8;
  r.detail = fmt("branch mismatch %.2e (limit 1e-10), ", branch) + fmt("regularized vs closed %.2e (limit 1e-8)", reg);
  return r;
}

CheckResult wronskian(Cache& cache) {
  auto r = start(5, "Wronskian functional relation", 1e-6);
  for (double v : {-10.0, 0.0, 10.0}) {
    const auto& plus = cache.get(v, Parity::Even);
    const auto& minus = cache.get(v, Parity::Odd);
    for (cplx lam : {cplx(1.0), cplx(5.0), cplx(10.0, 3.0)})
      r.value = std::max(r.value, wronskian_residual(plus, minus, lam));
  }
  r.passed = r.value < r.tolerance;
  r.detail = "v2 in {-10, 0, 10}, lambda in {1, 5, 10+3i}";
  return r;
}

CheckResult traces() {
  auto r = start(6, "trace formulas", 1e-6);
  for (auto [v, lam] : {std::pair{0.0, 1.0}, std::pair{-5.0, 5.0}})
    for (auto p : {Parity::Even, Parity::Odd}) {
      const auto t = trace_formula_check(quartic(v), lam, p);
      r.value = std::max({r.value, std::abs(t.lhs - t.rhs), std::abs(t.green - t.rhs)});
    }
  r.passed = r.value < r.tolerance;
  r.detail = "spectral sum and Green kernel against d/dlambda log psi(0)";
  return r;
}

CheckResult canonicity(Cache& cache) {
  auto r = start(7, "canonical normalization", 1e-3);
  const auto S = solve_homogeneous(4, Parity::Odd, cache.config());
  std::vector<double> grid, shifted;
  for (int i = 0; i < 24; ++i) grid.push_back(1e3 * std::pow(100.0, i / 23.0));
  r.value = canonical_residual(S, grid);
  for (double lam : grid) shifted.push_back(log_det(S, lam).value.real() + 0.5);
  const double c = canonical_fit(S.tail(), grid, shifted).constant;
  const double recovered = std::abs(c - 0.5) / 0.5;
  r.passed = r.value < r.tolerance && recovered < 0.02;
  r.detail = fmt("injected 0.5 recovered as %.6f (%.2e relative, limit 0.02)", c, recovered);
  return r;
}

CheckResult derivative(Cache& cache) {
  auto r = start(8, "d/dlambda log D against zeta(1)", 1e-7);
  const auto S = solve_homogeneous(4, Parity::Odd, cache.config());
  const double h = 1e-4;
  for (double lam : {0.5, 1.0, 3.0, 10.0, 40.0}) {
    const cplx fd = (log_det(S, lam + h).value - log_det(S, lam - h).value) / (2.0 * h);
    r.value = std::max(r.value, std::abs(fd - zeta_s1(S, lam)));
  }
  r.passed = r.value < r.tolerance;
  r.detail = "central difference h = 1e-4 at lambda in {0.5, 1, 3, 10, 40}";
  return r;
}

CheckResult compound(Cache& cache) {
  auto r = start(9, "compound spectra v2 = -10, 0, 10", 1e-5);
  double sym = 0.0;
  bool shape = true;
  for (double v : {-10.0, 0.0, 10.0}) {
    const auto& c = cache.get(v, Parity::Odd);
    shape = shape && c.L() == 3;
    for (int l = 1; l < c.L(); ++l)
      for (int i = 0; i < c.sectors[l].size(); ++i)
        sym = std::max(sym, std::abs(c.sectors[c.L() - l].level(i) - std::conj(c.sectors[l].level(i))));
    const auto ref = shoot_levels(quartic(v), Parity::Odd, 6);
    for (int i = 0; i < 6; ++i) r.value = std::max(r.value, rel(c.sectors[0].level(i).real(), ref[i]));
  }
  const double sym_tol = 10.0 * cache.config().tol;
  r.passed = shape && sym < sym_tol && r.value < r.tolerance;
  r.detail = std::string(shape ? "3 sectors each, " : "wrong sector count, ") +
             fmt("conjugation asymmetry %.2e (limit %.0e)", sym, sym_tol);
  return r;
}

}  // namespace

int check_count() { return 9; }

std::vector<CheckResult> run_checks(const std::vector<int>& ids, const FixedPointConfig& config) {
  config.validate();
  Cache cache(config);
  const std::map<int, std::function<CheckResult()>> battery = {
      {1, [&] { return ground_state(cache); }}, {2, [&] { return overlay(cache); }},
      {3, [&] { return homogeneous(cache); }},  {4, [] { return actions(); }},
      {5, [&] { return wronskian(cache); }},    {6, [] { return traces(); }},
      {7, [&] { return canonicity(cache); }},   {8, [&] { return derivative(cache); }},
      {9, [&] { return compound(cache); }},
  };
  std::vector<int> todo = ids;
  if (todo.empty())
    for (int i = 1; i <= check_count(); ++i) todo.push_back(i);
  std::vector<CheckResult> out;
  for (int id : todo) {
    const auto it = battery.find(id);
    if (it == battery.end()) throw Error(ErrorKind::InvalidArgument, "run_checks", "unknown check " + std::to_string(id));
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = it->second();
    } catch (const Error& e) {
      r.id = id;
      r.name = "check " + std::to_string(id);
      r.value = HUGE_VAL;
      r.passed = false;
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(r);
  }
  return out;
}

}  // namespace exactwkb
