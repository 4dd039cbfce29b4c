#pragma once

#include <cmath>
#include <vector>

#include "exactwkb/potential.hpp"

inline exactwkb::PolynomialPotential quartic(double v2) {
  const std::vector<double> c = {0.0, v2, 0.0};
  return exactwkb::PolynomialPotential::real(4, c);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// reference levels frozen from the shooting oracle (rel_tol 1e-12); q^4 rows agree with
// published high-precision values to 3e-13
namespace frozen {
inline constexpr double quartic_even[] = {1.0603620904839, 7.4556979379869, 16.2618260188513, 26.5284711836851};
inline constexpr double quartic_odd[] = {3.7996730298012, 11.6447455113788, 21.2383729182376, 32.0985977109715};
inline constexpr double double_well_E0 = -3.4101427612405;  // q^4 - 5 q^2
inline constexpr double double_well_psi0 = 1.542640141602;   // canonical psi(0) at E0
inline constexpr double double_well_psi08 = 3.175295910449;  // canonical psi(0.8) at E0
inline constexpr double plus10_odd[] = {9.8341133073121, 23.7730188181121, 38.5633546062287};
inline constexpr double minus10_odd[] = {-20.6335468844062, -12.3756737207065, -4.9648702736156};
}  // namespace frozen
