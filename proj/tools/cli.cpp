#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "exactwkb/classical.hpp"
#include "exactwkb/oracle.hpp"
#include "exactwkb/records.hpp"
#include "exactwkb/verify.hpp"
#include "exactwkb/wavefunction.hpp"
#include "json.hpp"

namespace exactwkb::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNotConverged = 3;

struct Options {
  int degree = 4;
  std::vector<double> coeffs;  // v_1..v_{N-1}; empty means all zero
  std::string parity = "even";
  FixedPointConfig solver;
  OracleConfig oracle;
  std::optional<double> q_max;
  std::string out;
  std::string summary;

  std::string lambdas = "0:10:1";
  double q = 0.0;
  std::optional<double> energy;
  std::string grid;
  std::vector<double> v2 = {-10.0, 0.0, 10.0};
  std::vector<int> criteria;
};

// a:b:step or a comma list
std::vector<double> parse_grid(const std::string& text, const char* what) {
  std::vector<double> out;
  auto bad = [&] { return Error(ErrorKind::InvalidArgument, "cli", std::string("cannot parse ") + what + " '" + text + "'"); };
  try {
    if (text.find(':') != std::string::npos) {
      std::stringstream ss(text);
      std::string a, b, s;
      if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, s)) throw bad();
      const double lo = std::stod(a), hi = std::stod(b), step = std::stod(s);
      if (!(step > 0.0) || !(hi >= lo)) throw bad();
      const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
      if (n > 1000000) throw bad();
      for (long i = 0; i < n; ++i) out.push_back(lo + step * static_cast<double>(i));
    } else {
      std::stringstream ss(text);
      std::string cell;
      while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (out.empty()) throw bad();
  return out;
}

PolynomialPotential potential_from(const Options& o) {
  if (o.degree < 1) throw Error(ErrorKind::InvalidArgument, "cli", "degree must be >= 1");
  std::vector<double> c = o.coeffs;
  if (c.empty()) c.assign(o.degree - 1, 0.0);
  if (static_cast<int>(c.size()) != o.degree - 1)
    throw Error(ErrorKind::InvalidArgument, "cli",
                "--coeffs needs " + std::to_string(o.degree - 1) + " values v1..v" + std::to_string(o.degree - 1));
  return PolynomialPotential::real(o.degree, c);
}

Parity parity_from(const std::string& s) { return s == "odd" ? Parity::Odd : Parity::Even; }

std::string potential_text(const PolynomialPotential& V) {
  std::ostringstream os;
  os << "q^" << V.degree();
  for (int j = 1; j < V.degree(); ++j) {
    const double c = V.coeff(j).real();
    if (c == 0.0) continue;
    os << (c < 0 ? " - " : " + ") << std::abs(c);
    const int p = V.degree() - j;
    os << (p == 1 ? " q" : " q^" + std::to_string(p));
  }
  return os.str();
}

json potential_json(const PolynomialPotential& V) {
  json c = json::array();
  for (const auto& v : V.coeffs()) c.push_back(v.real());
  return {{"degree", V.degree()}, {"coeffs", c}, {"text", potential_text(V)}};
}

json config_json(const Options& o) {
  return {{"K", o.solver.K},
          {"tol", o.solver.tol},
          {"max_outer", o.solver.max_outer},
          {"damping", o.solver.damping},
          {"newton_tol", o.solver.newton_tol},
          {"newton_max", o.solver.newton_max},
          {"oracle_rel_tol", o.oracle.rel_tol},
          {"oracle_abs_tol", o.oracle.abs_tol},
          {"q_max", o.q_max ? json(*o.q_max) : json(nullptr)}};
}

json report_json(const SolveReport& r) {
  return {{"method", r.method},
          {"sweeps", r.sweeps},
          {"continuation_steps", r.continuation_steps},
          {"final_error", r.error_history.empty() ? 0.0 : r.error_history.back()},
          {"max_residual", r.max_residual},
          {"damping", r.damping_used}};
}

void write_summary(const std::string& path, json summary) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cli", "cannot open " + path);
  os << summary.dump(2) << '\n';
}

RecordTable spectrum_records(const CompoundSpectrum& c, bool with_residual) {
  RecordTable t;
  t.columns = {"ell", "k", "re_E", "im_E"};
  if (with_residual) t.columns.push_back("residual");
  for (int ell = 0; ell < c.L(); ++ell) {
    const auto& S = c.sectors[ell];
    for (int i = 0; i < S.size(); ++i) {
      std::vector<double> row = {double(ell), double(S.index(i)), S.level(i).real(), S.level(i).imag()};
      if (with_residual) row.push_back(std::abs(quantization_residual(c, ell, i)));
      t.add(row);
    }
  }
  return t;
}

struct Run {
  Options o;
  json summary;
  std::string out_default;
};

int do_spectrum(Run& r) {
  const auto V = potential_from(r.o);
  const auto c = solve_general(V, parity_from(r.o.parity), r.o.solver);
  auto t = spectrum_records(c, true);
  t.notes = {"potential: " + potential_text(V), std::string("parity: ") + r.o.parity};
  write_records(r.o.out, t);
  r.summary["results"] = {{"sectors", c.L()}, {"levels_per_sector", c.sectors[0].size()},
                          {"ground", c.sectors[0].level(0).real()}, {"solver", report_json(c.report)}};
  return kOk;
}

int do_determinant(Run& r) {
  const auto V = potential_from(r.o);
  const auto grid = parse_grid(r.o.lambdas, "--lambda");
  const auto c = solve_general(V, parity_from(r.o.parity), r.o.solver);
  RecordTable t;
  t.columns = {"lambda", "re_logD", "im_logD"};
  t.notes = {"potential: " + potential_text(V), std::string("parity: ") + r.o.parity};
  for (double lam : grid) {
    const cplx v = log_det(c.sectors[0], lam).value;
    t.add({lam, v.real(), v.imag()});
  }
  write_records(r.o.out, t);
  r.summary["results"] = {{"points", grid.size()}, {"solver", report_json(c.report)}};
  return kOk;
}

// closed form where one exists: q^4 + v q^2 with v >= 0 at q = 0, or any pure power
double closed_action(const PolynomialPotential& V, double lam, double q) {
  if (q != 0.0 || lam < 0.0) return std::nan("");
  bool pure = true;
  for (const auto& c : V.coeffs()) pure = pure && c == cplx(0.0);
  if (pure) return homogeneous_action(V.degree(), lam).real();
  if (V.degree() == 4 && V.is_even() && V.coeff(2).real() >= 0.0) return quartic_action(V.coeff(2).real(), lam);
  return std::nan("");
}

int do_actions(Run& r) {
  const auto V = potential_from(r.o);
  const auto grid = parse_grid(r.o.lambdas, "--lambda");
  RecordTable t;
  t.columns = {"lambda", "q", "re_action", "im_action", "closed_form"};
  t.notes = {"potential: " + potential_text(V)};
  for (double lam : grid) {
    const cplx a = regularized_action(V, lam, r.o.q).value;
    t.add({lam, r.o.q, a.real(), a.imag(), closed_action(V, lam, r.o.q)});
  }
  write_records(r.o.out, t);
  r.summary["results"] = {{"points", grid.size()}};
  return kOk;
}

RecordTable wavefunction_records(const std::vector<WavefunctionSample>& pts) {
  RecordTable t;
  t.columns = {"q", "re_psi", "im_psi", "re_dpsi", "im_dpsi", "converged", "residual"};
  for (const auto& p : pts)
    t.add({p.q, p.psi.real(), p.psi.imag(), p.dpsi.real(), p.dpsi.imag(), p.converged ? 1.0 : 0.0, p.residual});
  return t;
}

json flagged_json(const std::vector<WavefunctionSample>& pts) {
  json bad = json::array();
  for (const auto& p : pts)
    if (!p.converged) bad.push_back({{"q", p.q}, {"diagnostic", p.diagnostic}});
  return bad;
}

int do_wavefunction(Run& r) {
  if (!r.o.energy) throw Error(ErrorKind::InvalidArgument, "cli", "--energy is required");
  if (r.o.grid.empty()) throw Error(ErrorKind::InvalidArgument, "cli", "--grid is required");
  const auto V = potential_from(r.o);
  const auto grid = parse_grid(r.o.grid, "--grid");
  const auto pts = profile(V, *r.o.energy, grid, r.o.solver);
  auto t = wavefunction_records(pts);
  t.notes = {"potential: " + potential_text(V), "energy: " + std::to_string(*r.o.energy)};
  write_records(r.o.out, t);
  const auto bad = flagged_json(pts);
  r.summary["results"] = {{"points", pts.size()}, {"unconverged", bad}};
  return bad.empty() ? kOk : kNotConverged;
}

int do_verify(Run& r) {
  const auto results = run_checks(r.o.criteria, r.o.solver);
  RecordTable t;
  t.columns = {"check", "value", "tolerance", "passed"};
  json rows = json::array();
  bool all = true;
  std::printf("%-6s %-40s %-6s %12s %10s %9s\n", "check", "name", "result", "value", "tolerance", "seconds");
  for (const auto& c : results) {
    t.add({double(c.id), c.value, c.tolerance, c.passed ? 1.0 : 0.0});
    std::printf("%-6d %-40s %-6s %12.3e %10.0e %9.1f\n", c.id, c.name.c_str(), c.passed ? "pass" : "FAIL", c.value,
                c.tolerance, c.seconds);
    rows.push_back({{"check", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"seconds", c.seconds}});
    all = all && c.passed;
  }
  write_records(r.o.out, t);
  r.summary["results"] = rows;
  return all ? kOk : kNotConverged;
}

std::string figure1_name(const std::string& prefix, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "_v2_%g.csv", v);
  return prefix + buf;
}

int do_figure1(Run& r) {
  json files = json::array();
  for (double v : r.o.v2) {
    const std::vector<double> c = {0.0, v, 0.0};
    const auto V = PolynomialPotential::real(4, c);
    const auto cs = solve_general(V, Parity::Odd, r.o.solver);
    auto t = spectrum_records(cs, false);
    t.notes = {"potential: " + potential_text(V), "parity: odd"};
    const auto path = figure1_name(r.o.out, v);
    write_records(path, t);
    files.push_back({{"v2", v}, {"file", path}, {"sectors", cs.L()}, {"solver", report_json(cs.report)}});
  }
  r.summary["results"] = files;
  return kOk;
}

int do_figure2(Run& r) {
  const std::vector<double> c = {0.0, -5.0, 0.0};
  const auto V = PolynomialPotential::real(4, c);
  const auto plus = solve_general(V, Parity::Even, r.o.solver);
  const double E0 = plus.sectors[0].level(0).real();
  const auto grid = parse_grid(r.o.grid.empty() ? "-1.5:1.5:0.25" : r.o.grid, "--grid");

  std::vector<double> fine;
  const double lo = grid.front() - 1.0, hi = grid.back() + 1.0;
  for (int i = 0; lo + 0.01 * i <= hi + 1e-12; ++i) fine.push_back(lo + 0.01 * i);
  const auto curve = recessive_solution(V, -E0, fine, r.o.oracle);
  RecordTable oc;
  oc.columns = {"q", "psi", "dpsi"};
  oc.notes = {"potential: " + potential_text(V), "energy: " + std::to_string(E0), "oracle: canonical recessive solution"};
  for (const auto& s : curve.samples) oc.add({s.q, s.psi_value(), s.dpsi_value()});
  write_records(r.o.out + "_oracle.csv", oc);

  const auto pts = profile(V, E0, grid, r.o.solver);
  auto pt = wavefunction_records(pts);
  pt.notes = {"potential: " + potential_text(V), "energy: " + std::to_string(E0), "exact-WKB points"};
  write_records(r.o.out + "_points.csv", pt);

  const auto ref = recessive_solution(V, -E0, grid, r.o.oracle);
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i].converged)
      worst = std::max(worst, std::abs(pts[i].psi - ref.samples[i].psi_value()) / std::abs(ref.samples[i].psi_value()));
  const auto bad = flagged_json(pts);
  r.summary["results"] = {{"E0", E0},
                          {"files", {r.o.out + "_oracle.csv", r.o.out + "_points.csv"}},
                          {"max_relative_deviation", worst},
                          {"unconverged", bad}};
  return bad.empty() ? kOk : kNotConverged;
}

int code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::TurningPointOnPath:
    case ErrorKind::TurningPoint:
    case ErrorKind::PoleAtLambda:
      return kInvalid;
    default:
      return kNotConverged;
  }
}

}  // namespace

int run(int argc, char** argv) {
  Run r;
  Options& o = r.o;
  CLI::App app{"Exact-WKB spectra, determinants and wavefunctions for V(q) = q^N + v1 q^(N-1) + ... + v_(N-1) q"};
  app.set_config("--config", "", "Flat key=value file; subcommand options go under [subcommand] or subcommand.key");
  app.require_subcommand(1);

  app.add_option("--degree", o.degree, "Degree N")->capture_default_str();
  app.add_option("--coeffs", o.coeffs, "Comma list v1,...,v_(N-1) (default all zero)")->delimiter(',');
  app.add_option("--parity", o.parity, "Half-line sector: even (Neumann) or odd (Dirichlet)")
      ->check(CLI::IsMember({"even", "odd"}))
      ->capture_default_str();
  app.add_option("--levels", o.solver.K, "Stored levels per sector")->capture_default_str();
  app.add_option("--tol", o.solver.tol, "Relative sweep tolerance")->capture_default_str();
  app.add_option("--max-iter", o.solver.max_outer, "Maximum outer sweeps")->capture_default_str();
  app.add_option("--damping", o.solver.damping, "Weight of the new iterate")->capture_default_str();
  app.add_option("--newton-tol", o.solver.newton_tol)->capture_default_str();
  app.add_option("--newton-max", o.solver.newton_max)->capture_default_str();
  app.add_option("--oracle-rel-tol", o.oracle.rel_tol)->capture_default_str();
  app.add_option("--oracle-abs-tol", o.oracle.abs_tol)->capture_default_str();
  app.add_option("--q-max", o.q_max, "Oracle start point (default: turning point + 6 decay lengths)");
  app.add_option("--out", o.out, "Record file (figure1/figure2: file prefix)");
  app.add_option("--summary", o.summary, "Run summary (default: <out>.summary.json)");

  auto* spectrum = app.add_subcommand("spectrum", "Compound spectrum: records ell, k, Re E, Im E, residual");
  auto* determinant = app.add_subcommand("determinant", "log D of sector 0: records lambda, Re log D, Im log D");
  determinant->add_option("--lambda", o.lambdas, "a:b:step or comma list")->capture_default_str();
  auto* actions = app.add_subcommand("actions", "Regularized actions: records lambda, q, Re, Im, closed form");
  actions->add_option("--lambda", o.lambdas, "a:b:step or comma list")->capture_default_str();
  actions->add_option("--q", o.q, "Lower end of the half-line")->capture_default_str();
  auto* wave = app.add_subcommand("wavefunction", "psi and psi' from determinants on a q grid");
  wave->add_option("--energy", o.energy, "Energy E")->required();
  wave->add_option("--grid", o.grid, "a:b:step or comma list")->required();
  auto* verify = app.add_subcommand("verify", "Cross-check battery against the oracle and closed forms");
  verify->add_option("--criteria", o.criteria, "Comma list of check ids (default all)")->delimiter(',');
  auto* fig1 = app.add_subcommand("figure1", "Compound spectra of q^4 + v2 q^2, odd parity, one file per v2");
  fig1->add_option("--v2", o.v2, "Comma list of v2")->delimiter(',');
  auto* fig2 = app.add_subcommand("figure2", "Oracle curve and exact-WKB points for q^4 - 5 q^2 at E0");
  fig2->add_option("--grid", o.grid, "Exact-WKB grid (default -1.5:1.5:0.25)");
  for (auto* s : {spectrum, determinant, actions, wave, verify, fig1, fig2}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (o.out.empty()) o.out = (name == "figure1" || name == "figure2") ? name : name + ".csv";
  if (o.summary.empty()) o.summary = o.out + ".summary.json";
  o.oracle.q_max = o.q_max;

  const std::map<std::string, int (*)(Run&)> table = {
      {"spectrum", do_spectrum}, {"determinant", do_determinant}, {"actions", do_actions},
      {"wavefunction", do_wavefunction}, {"verify", do_verify}, {"figure1", do_figure1}, {"figure2", do_figure2}};

  const auto t0 = std::chrono::steady_clock::now();
  int status = kOk;
  r.summary["subcommand"] = name;
  try {
    o.solver.validate();
    if (!(o.oracle.rel_tol > 0.0 && o.oracle.abs_tol > 0.0))
      throw Error(ErrorKind::InvalidArgument, "cli", "oracle tolerances must be positive");
    if (name != "figure1" && name != "figure2") r.summary["potential"] = potential_json(potential_from(o));
    r.summary["config"] = config_json(o);
    status = table.at(name)(r);
  } catch (const Error& e) {
    std::cerr << "exactwkb " << name << ": " << e.what() << '\n';
    status = code_for(e);
    r.summary["error"] = e.what();
  }
  r.summary["exit_status"] = status;
  r.summary["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_summary(o.summary, r.summary);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    if (status == kOk) status = kInvalid;
  }
  return status;
}

}  // namespace exactwkb::cli
