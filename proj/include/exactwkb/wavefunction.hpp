#pragma once

#include <span>
#include <string>
#include <vector>

#include "exactwkb/quantize.hpp"

namespace exactwkb {

struct WavefunctionSample {
  double q = 0.0;
  cplx psi{std::nan(""), 0.0};
  cplx dpsi{std::nan(""), 0.0};
  bool converged = false;
  double residual = std::nan("");  // Wronskian residual of the translated determinants
  std::string diagnostic;
};

// psi(q) = D_q^-(lambda), psi'(q) = -D_q^+(lambda) at lambda = -E, from the spectra of the
// potential translated to q. Canonical (WKB) normalization, not unit norm.
WavefunctionSample eigenfunction_point(const PolynomialPotential& potential, double E, double q,
                                       const FixedPointConfig& config = {});

// Independent points; failures are flagged per point.
std::vector<WavefunctionSample> profile(const PolynomialPotential& potential, double E,
                                        std::span<const double> q_grid, const FixedPointConfig& config = {});

}  // namespace exactwkb
