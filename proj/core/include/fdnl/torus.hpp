#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace fdnl {

using cplx = std::complex<double>;

// Wavevector with integer components; only the first d entries are used.
inline constexpr int kMaxDim = 4;
using Wave = std::array<int, kMaxDim>;

// Flat torus [0, 2pi)^d with the spectral box |k|_inf <= N and a
// pseudospectral grid oversampled q times per axis (rounded up to a
// 2^a 3^b 5^c 7^e composite so transforms stay fast).
struct TorusSpec {
  int d = 2;
  int N = 8;
  int q = 4;

  void validate() const;  // throws ConfigError on violation

  int side() const { return 2 * N + 1; }
  std::size_t mode_count() const;
  int grid_side() const;        // per-axis sample count n
  std::size_t grid_count() const;  // n^d
  double cell_volume() const;   // (2pi/n)^d quadrature weight
  double volume() const;        // (2pi)^d

  bool operator==(const TorusSpec&) const = default;
};

// Smallest n >= m whose prime factors are all in {2, 3, 5, 7}.
int next_fast_size(int m);

// Lexicographic mode order: axis values -N..N, first axis slowest.
std::size_t mode_index(const TorusSpec& spec, const Wave& k);
Wave mode_wave(const TorusSpec& spec, std::size_t idx);

// |k|^2 for the index' wavevector.
double eigenvalue(const TorusSpec& spec, const Wave& k);
double eigenvalue_at(const TorusSpec& spec, std::size_t idx);

// lambda^s with the multiplier convention 0^0 := 1 (s = 0 is the
// identity weight on every mode; s > 0 annihilates lambda = 0).
double eig_pow(double lambda, double s);

// Coefficient field on the spectral box, lexicographic mode order.
struct SpectralField {
  TorusSpec spec;
  std::vector<cplx> c;

  static SpectralField zero(const TorusSpec& spec);
  // Unit coefficient on wavevector k, all others zero.
  static SpectralField basis(const TorusSpec& spec, const Wave& k, cplx amp = 1.0);

  cplx& at(const Wave& k);
  const cplx& at(const Wave& k) const;
  bool finite() const;  // no NaN/Inf anywhere
};

// Complex samples on the oversampled grid, row-major with the first axis
// slowest; sample j corresponds to x_j = 2pi j / n per axis.
struct GridField {
  TorusSpec spec;
  std::vector<cplx> v;

  static GridField zero(const TorusSpec& spec);
};

// In-place linear algebra helpers (value semantics elsewhere).
void axpy(SpectralField& y, cplx a, const SpectralField& x);  // y += a*x
SpectralField scaled(const SpectralField& u, cplx a);
SpectralField added(const SpectralField& u, const SpectralField& v);
SpectralField subtracted(const SpectralField& u, const SpectralField& v);

}  // namespace fdnl
