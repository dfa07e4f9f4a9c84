#pragma once

#include "fdnl/torus.hpp"

namespace fdnl {

// Synthesis u(x_j) = sum_k u_k e_k(x_j) with the L^2-orthonormal basis
// e_k = (2pi)^{-d/2} exp(i k.x), onto the oversampled grid of u.spec.
GridField to_grid(const SpectralField& u);

// Analysis onto the box |k|_inf <= cutoff (cutoff <= g.spec.N required):
// u_k = (2pi)^{d/2} n^{-d} sum_j g_j exp(-i k.x_j). For band-limited g
// this inverts to_grid exactly; otherwise it projects with the aliasing
// the grid resolution implies. The returned field keeps g.spec (its N),
// with modes beyond `cutoff` zeroed, so analysis-then-synthesis
// round-trips stay within one spec.
SpectralField to_coeffs(const GridField& g, int cutoff);

// Full unnormalized DFT of the grid (all n^d frequencies in
// [-n/2, n/2)^d), used where the complete spectral content of a grid
// function is needed (e.g. seminorms of exponentials). Frequencies are
// returned in FFT layout; helpers below decode them.
std::vector<cplx> grid_dft(const GridField& g);
// Squared |k|^2 eigenvalue of FFT-layout bin `idx` for grid side n.
double grid_bin_eigenvalue(const TorusSpec& spec, std::size_t idx);

}  // namespace fdnl
