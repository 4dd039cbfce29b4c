#include "exactwkb/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace exactwkb {

namespace {

constexpr double kWronskianGate = 1e-6;

bool retryable(const Error& e) {
  return e.kind() == ErrorKind::NotConverged || e.kind() == ErrorKind::NotContracting ||
         e.kind() == ErrorKind::DivergentSector;
}

// Spectra of V on [0, inf) with every conjugate sector; the start of the translation path.
struct Anchors {
  const PolynomialPotential& V;
  FixedPointConfig cfg;
  std::optional<CompoundSpectrum> plus, minus;

  const CompoundSpectrum& get(Parity p) {
    auto& slot = p == Parity::Even ? plus : minus;
    if (!slot) slot = solve_general(V, p, cfg);
    return *slot;
  }
};

CompoundSpectrum translated(const PolynomialPotential& V, double q, Parity parity, Anchors& anchors) {
  const auto shifted = translate(V, cplx(q)).first;
  FixedPointConfig direct = anchors.cfg;
  direct.homotopy_fallback = false;
  try {
    return solve_general(shifted, parity, direct);
  } catch (const Error& e) {
    if (!retryable(e) || q == 0.0) throw;
  }
  // slide the base point out from 0
  auto path = [&](double t) { return translate(V, cplx(t * q)).first; };
  return continue_spectrum(anchors.get(parity), path, anchors.cfg);
}

WavefunctionSample point(const PolynomialPotential& V, double E, double q, Anchors& anchors) {
  WavefunctionSample out;
  out.q = q;
  const cplx lambda = -E + V(cplx(q));
  try {
    const auto plus = translated(V, q, Parity::Even, anchors);
    const auto minus = translated(V, q, Parity::Odd, anchors);
    out.psi = std::exp(log_det(minus.sectors[0], lambda).value);
    out.dpsi = -std::exp(log_det(plus.sectors[0], lambda).value);
    out.residual = wronskian_residual(plus, minus, lambda);
    out.converged = std::isfinite(out.residual) && out.residual < kWronskianGate;
    if (!out.converged) out.diagnostic = "Wronskian residual above gate";
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw;
    out.diagnostic = e.what();
  }
  return out;
}

FixedPointConfig full_set(FixedPointConfig cfg) {
  cfg.all_conjugates = true;  // the translate is not even, except at q = 0
  return cfg;
}

}  // namespace

WavefunctionSample eigenfunction_point(const PolynomialPotential& V, double E, double q,
                                       const FixedPointConfig& config) {
  if (V.degree() < 3) throw Error(ErrorKind::InvalidArgument, "eigenfunction_point", "requires N >= 3");
  Anchors anchors{V, full_set(config), {}, {}};
  return point(V, E, q, anchors);
}

std::vector<WavefunctionSample> profile(const PolynomialPotential& V, double E, std::span<const double> q_grid,
                                        const FixedPointConfig& config) {
  if (V.degree() < 3) throw Error(ErrorKind::InvalidArgument, "profile", "requires N >= 3");
  if (!std::is_sorted(q_grid.begin(), q_grid.end()))
    throw Error(ErrorKind::InvalidArgument, "profile", "grid must be sorted");
  // the q = 0 anchors are shared; every point is still solved on its own
  Anchors anchors{V, full_set(config), {}, {}};
  std::vector<WavefunctionSample> out;
  out.reserve(q_grid.size());
  for (double q : q_grid) {
    try {
      out.push_back(point(V, E, q, anchors));
    } catch (const Error& e) {
      WavefunctionSample bad;
      bad.q = q;
      bad.diagnostic = e.what();
      out.push_back(bad);
    }
  }
  return out;
}

}  // namespace exactwkb
