#pragma once

#include <functional>
#include <string>
#include <vector>

#include "exactwkb/determinant.hpp"

namespace exactwkb {

struct FixedPointConfig {
  int K = 48;              // levels per sector
  double tol = 1e-10;      // relative sweep-to-sweep change
  int max_outer = 200;
  double damping = 0.5;    // weight of the new iterate
  double newton_tol = 1e-12;
  int newton_max = 30;
  bool all_conjugates = false;    // use L = N + 2 sectors even when V is even
  bool homotopy_fallback = true;  // track from q^N when sweeps from asymptotic seeds fail

  void validate() const;
};

struct SolveReport {
  int sweeps = 0;
  std::vector<double> error_history;  // max relative change per sweep
  double max_residual = 0.0;          // max |quantization residual| at exit
  double damping_used = 0.0;
  std::string method = "jacobi";      // or "continuation" when sweeps from seeds fail
  int continuation_steps = 0;
};

// Real contraction map for V = q^N: (2/pi) Im log D(-e^{-i phi} E''_k) = k + 1/2 +- (N-2)/(2(N+2)).
SpectrumModel solve_homogeneous(int degree, Parity parity, const FixedPointConfig& config = {},
                                SolveReport* report = nullptr);

// The L conjugate sectors of one parity; sectors[l] holds the levels of V^[l].
struct CompoundSpectrum {
  Parity parity = Parity::Even;
  PolynomialPotential potential = PolynomialPotential::homogeneous(4);
  std::vector<SpectrumModel> sectors;
  SolveReport report;

  int L() const { return static_cast<int>(sectors.size()); }
};

// Jacobi sweeps over all (l, k) of
//   -i [log D^[l+1](-e^{-i phi} E) - log D^[l-1](-e^{+i phi} E)] - (-1)^l phi beta_{-1} = pi (k + 1/2 +- (N-2)/(2(N+2))).
CompoundSpectrum solve_general(const PolynomialPotential& potential, Parity parity,
                               const FixedPointConfig& config = {});

using PotentialPath = std::function<PolynomialPotential(double)>;

// Tracks the fixed point of `start` (which must solve path(0)) along path(t), t in [0, 1],
// by predictor-corrector steps on the coupled system.
CompoundSpectrum continue_spectrum(const CompoundSpectrum& start, const PotentialPath& path,
                                   const FixedPointConfig& config = {});

// Left side minus right side of the system above at level i of sector l.
cplx quantization_residual(const CompoundSpectrum& compound, int ell, int i);

// |LHS - RHS| / |RHS| of the determinant functional relation at lambda.
double wronskian_residual(const CompoundSpectrum& plus, const CompoundSpectrum& minus, cplx lambda);

}  // namespace exactwkb
