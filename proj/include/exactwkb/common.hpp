#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace exactwkb {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Half-line boundary sector: Neumann spectra carry even k, Dirichlet odd k.
enum class Parity { Even, Odd };

inline int parity_offset(Parity p) { return p == Parity::Even ? 0 : 1; }
inline double parity_sign(Parity p) { return p == Parity::Even ? 1.0 : -1.0; }
inline const char* parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }

enum class ErrorKind {
  InvalidArgument,
  TurningPointOnPath,
  TurningPoint,
  NotConverged,
  NoRoot,
  PoleAtLambda,
  IllConditioned,
  NotContracting,
  DivergentSector,
  BracketFailure,
  Overflow,
};

const char* error_kind_name(ErrorKind kind);

// All numerical failures carry the module/operation context they came from.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + error_kind_name(kind) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace exactwkb
