#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exactwkb/determinant.hpp"

namespace exactwkb {

struct OracleConfig {
  std::optional<double> q_max;  // default: outer turning point + 6 decay lengths, pushed out until
                                // the neglected WKB orders are below ~1e-14
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double bracket_expansion = 1.5;
};

// psi = mantissa * exp(log_scale); the scale keeps solutions spanning hundreds of decades finite.
struct OracleSample {
  double q = 0.0;
  double psi = 0.0;
  double dpsi = 0.0;
  double log_scale = 0.0;

  double psi_value() const;
  double dpsi_value() const;
  double log_abs_psi() const;
};

struct OracleSolution {
  std::vector<OracleSample> samples;
  double lambda = 0.0;
  std::string normalization = "canonical-WKB";
  double q_max = 0.0;
};

double default_q_max(const PolynomialPotential& potential, double lambda, const OracleConfig& config = {});

// Canonically normalized recessive solution of -psi'' + (V + lambda) psi = 0 on a real grid.
OracleSolution recessive_solution(const PolynomialPotential& potential, double lambda,
                                  std::span<const double> q_grid, const OracleConfig& config = {});

// Data at q = 0 together with the unwrapped Pruefer angle atan2(psi, psi') and the Green traces
// int_0^inf G(q, q) dq for both boundary conditions.
struct BoundaryData {
  OracleSample at_zero;
  double angle = 0.0;
  double green_dirichlet = 0.0;
  double green_neumann = 0.0;
  double q_max = 0.0;
};
BoundaryData boundary_data(const PolynomialPotential& potential, double lambda, const OracleConfig& config = {});

// Lowest `count` half-line levels of the sector (Neumann = even, Dirichlet = odd at q = 0).
std::vector<double> shoot_levels(const PolynomialPotential& potential, Parity parity, int count,
                                 const OracleConfig& config = {});
SpectrumModel shoot_spectrum(const PolynomialPotential& potential, Parity parity, int count,
                             const OracleConfig& config = {});

struct TraceCheck {
  double lhs = 0.0;    // d/dlambda log psi(0) (Dirichlet) or log(-psi'(0)) (Neumann)
  double rhs = 0.0;    // zeta_s1 of the shot spectrum
  double green = 0.0;  // int_0^inf G(q, q) dq
};
TraceCheck trace_formula_check(const PolynomialPotential& potential, double lambda, Parity parity,
                               const OracleConfig& config = {}, int levels = 48);

}  // namespace exactwkb
