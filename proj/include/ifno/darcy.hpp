#pragma once

#include <cstdint>
#include <vector>

#include "ifno/grid.hpp"

namespace ifno {

inline constexpr double kDarcyLow = 3.0;
inline constexpr double kDarcyHigh = 12.0;

/// One coefficient/flow pair on an n x n node grid (boundary nodes included).
struct DarcySample {
  ScalarGrid a;
  ScalarGrid u;
};

/// Zero-mean Gaussian random field with spectral density proportional to
/// (4*pi^2*kappa^2 + tau^2)^(-alpha), drawn by seeded spectral sampling.
ScalarGrid sample_grf(std::uint64_t seed, int n, double tau = 3.0, double alpha = 2.0);

/// Two-valued diffusivity: a_high where w >= 0, a_low elsewhere.
ScalarGrid threshold_coefficient(const ScalarGrid& w, double a_low = kDarcyLow,
                                 double a_high = kDarcyHigh);

/// Solve -div(a grad u) = f on the unit square with homogeneous Dirichlet
/// boundary, 5-point finite differences with harmonic-mean face diffusivities,
/// by conjugate gradients to relative residual < tol. Boundary values of the
/// result are exactly zero.
ScalarGrid solve_darcy(const ScalarGrid& a, const ScalarGrid& f, double tol = 1e-8);

/// Samples i = 0..count-1 drawn with seeds seed0 + i, constant forcing f = 1.
std::vector<DarcySample> generate_dataset(int count, std::uint64_t seed0, int n);

}  // namespace ifno
