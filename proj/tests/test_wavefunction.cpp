#include "doctest.h"
#include "exactwkb/oracle.hpp"
#include "exactwkb/wavefunction.hpp"
#include "helpers.hpp"

using namespace exactwkb;

TEST_CASE("ground state of the double well at q = 0 and q = 0.8") {
  const auto V = quartic(-5.0);
  const double E = frozen::double_well_E0;
  const auto s0 = eigenfunction_point(V, E, 0.0);
  REQUIRE(s0.converged);
  CHECK(std::abs(s0.psi - frozen::double_well_psi0) < 1e-3 * frozen::double_well_psi0);
  CHECK(std::abs(s0.psi.imag()) < 1e-8);
  // Neumann determinant vanishes at an even eigenvalue
  CHECK(std::abs(s0.dpsi) < 1e-6);

  const auto s8 = eigenfunction_point(V, E, 0.8);
  REQUIRE(s8.converged);
  CHECK(std::abs(s8.psi - frozen::double_well_psi08) < 1e-3 * frozen::double_well_psi08);
}

TEST_CASE("parity symmetry and derivative consistency") {
  const auto V = quartic(-5.0);
  const double E = frozen::double_well_E0;
  const double h = 1e-2;
  const std::vector<double> grid = {-0.51, -0.5, -0.49, 0.49, 0.5, 0.51};
  const auto pts = profile(V, E, grid);
  for (const auto& p : pts) REQUIRE(p.converged);
  CHECK(std::abs(pts[1].psi - pts[4].psi) < 1e-6 * std::abs(pts[4].psi));
  CHECK(std::abs(pts[1].dpsi + pts[4].dpsi) < 1e-6 * std::abs(pts[4].dpsi));
  const cplx fd = (pts[5].psi - pts[3].psi) / (2 * h);
  CHECK(std::abs(fd - pts[4].dpsi) < 1e-3 * std::abs(pts[4].dpsi));
  // -psi'' + (V - E) psi = 0 on the stencil
  const cplx d2 = (pts[5].psi - 2.0 * pts[4].psi + pts[3].psi) / (h * h);
  CHECK(std::abs(d2 - (V(0.5) - E) * pts[4].psi) < 1e-3 * std::abs(d2));
}

TEST_CASE("profile flags, never aborts") {
  const auto V = quartic(-5.0);
  const std::vector<double> unsorted = {0.5, 0.0};
  CHECK_THROWS_AS(profile(V, frozen::double_well_E0, unsorted), Error);
  const std::vector<double> grid = {0.25, 3.0};
  const auto pts = profile(V, frozen::double_well_E0, grid);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].converged);
  // beyond the instability radius: either honestly flagged or correct
  if (pts[1].converged) {
    const auto ref = recessive_solution(V, -frozen::double_well_E0, std::vector<double>{3.0});
    CHECK(std::abs(pts[1].psi - ref.samples[0].psi_value()) < 1e-3 * ref.samples[0].psi_value());
  } else {
    CHECK_FALSE(pts[1].diagnostic.empty());
    CHECK(std::isnan(pts[1].psi.real()));
  }
}
