#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "exactwkb/common.hpp"

namespace exactwkb {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point rule, cached per n.
const GaussLegendreRule& gauss_legendre(int n);

// Adaptive Gauss-Legendre panels: each panel compares n and 2n point rules and
// bisects until the difference is below tolerance.
cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                        double rel_tol = 1e-14, double abs_tol = 1e-15, int max_depth = 40);

double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-14, double abs_tol = 1e-15, int max_depth = 40);

// Complete elliptic integrals with modulus k (not parameter m = k^2), by the AGM.
double elliptic_k(double k);
double elliptic_e(double k);

}  // namespace exactwkb
