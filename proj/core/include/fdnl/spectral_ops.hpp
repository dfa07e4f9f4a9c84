#pragma once

#include "fdnl/torus.hpp"

namespace fdnl {

// (-Delta)^gamma as the diagonal multiplier lambda_k^gamma, gamma >= 0.
// gamma = 0 is the identity (0^0 := 1); gamma > 0 annihilates k = 0.
SpectralField frac_laplacian(const SpectralField& u, double gamma);

// Box projection: zeroes modes with |k|_inf > cutoff.
SpectralField project(const SpectralField& u, int cutoff);

// Free propagator exp(-i t (-Delta)^alpha): u_k -> exp(-i t lambda^alpha) u_k.
SpectralField propagator(const SpectralField& u, double t, double alpha);

// ||u||_{H^s}^2 = sum (1 + lambda^s) |u_k|^2, s >= 0.
double sobolev_norm(const SpectralField& u, double s);
// Homogeneous seminorm sum lambda^s |u_k|^2 (square root).
double hs_seminorm(const SpectralField& u, double s);
// Real L^2 pairing Re sum u_k conj(v_k).
double l2_inner(const SpectralField& u, const SpectralField& v);
double l2_norm(const SpectralField& u);

// P_N(2 beta u exp(beta |u|^2)) evaluated pseudospectrally on the
// oversampled grid of u.spec. Throws RuntimeError when beta |u|^2
// exceeds the exp() range anywhere on the grid.
SpectralField nonlinearity(const SpectralField& u, double beta);
// Same pipeline without the 2 beta prefactor: P_N(u exp(beta |u|^2)).
SpectralField exp_weighted_field(const SpectralField& u, double beta);

// Oversampled-grid quadratures of the exponential observables, with the
// same grid as `nonlinearity` so discrete energy identities close:
//   integral exp(beta |u|^2) dx
double exp_integral(const SpectralField& u, double beta);
//   integral |u|^2 exp(beta |u|^2) dx
double mass_weighted_exp_integral(const SpectralField& u, double beta);
//   integral (1 + |u|^2) exp(beta |u|^2) dx
double one_plus_mass_weighted_exp_integral(const SpectralField& u, double beta);

// Quadrature of an arbitrary grid function: cell_volume * sum of the
// real parts.
double grid_integral(const GridField& g);

// All exponential-weight quadratures in one grid pass:
//   exp_int = integral e^{beta|u|^2},  m1_exp = integral |u| e^{beta|u|^2},
//   m2_exp  = integral |u|^2 e^{beta|u|^2}.
struct ExpMoments {
  double exp_int = 0.0;
  double m1_exp = 0.0;
  double m2_exp = 0.0;
};
ExpMoments exp_moments(const SpectralField& u, double beta);

}  // namespace fdnl
