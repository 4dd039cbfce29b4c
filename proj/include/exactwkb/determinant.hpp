#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exactwkb/asymptotics.hpp"

namespace exactwkb {

namespace detail {
struct LevelCache;
}

// One parity sector: stored levels E_k (k = first, first + step, ...) continued by the
// asymptotic levels of its tail model.
class SpectrumModel {
 public:
  SpectrumModel(Parity parity, std::vector<cplx> eigenvalues, TailModel tail,
                std::optional<PolynomialPotential> potential = std::nullopt);

  Parity parity() const { return parity_; }
  const std::vector<cplx>& eigenvalues() const { return eigenvalues_; }
  const TailModel& tail() const { return tail_; }
  const std::optional<PolynomialPotential>& potential() const { return potential_; }
  int size() const { return static_cast<int>(eigenvalues_.size()); }
  int step() const { return tail_.step; }
  // Spectral index k of the i-th level of the sector.
  int index(int i) const { return tail_.first_index() + tail_.step * i; }

  // i-th level: stored when i < size(), asymptotic otherwise.
  cplx level(int i) const;
  cplx asymptotic_level(int i) const;

  // Same sector and tail with new stored levels; shares the asymptotic level cache.
  SpectrumModel with_eigenvalues(std::vector<cplx> eigenvalues) const;

 private:
  Parity parity_;
  std::vector<cplx> eigenvalues_;
  TailModel tail_;
  std::optional<PolynomialPotential> potential_;
  std::shared_ptr<detail::LevelCache> cache_;
};

SpectrumModel make_spectrum(const PolynomialPotential& potential, Parity parity, std::vector<cplx> eigenvalues,
                            const TailOptions& options = {});

struct LogDeterminant {
  cplx value;
  std::string branch_convention = "radial";
};

// log(E + lambda) continued from lambda = infinity * e^{i arg lambda} along the ray; principal
// whenever E > 0.
cplx radial_log(cplx E, cplx lambda);

LogDeterminant log_det(const SpectrumModel& spectrum, cplx lambda);

// sum_k (E_k + lambda)^{-s} for s = 1, 2.
cplx zeta(const SpectrumModel& spectrum, cplx lambda, int s);
inline cplx zeta_s1(const SpectrumModel& spectrum, cplx lambda) { return zeta(spectrum, lambda, 1); }

struct CanonicalFit {
  std::vector<double> exponents;  // power columns; 0 means log lambda
  std::vector<double> coeffs;     // matches exponents, then the constant last
  double constant = 0.0;
  double condition = 0.0;
};

// Least squares of values(lambda) against <lambda^alpha> for alpha in the tail exponent grid,
// a few negative powers, log lambda and a constant.
CanonicalFit canonical_fit(const TailModel& tail, std::span<const double> lambda_grid,
                           std::span<const double> values);
double canonical_residual(const SpectrumModel& spectrum, std::span<const double> lambda_grid);

}  // namespace exactwkb
