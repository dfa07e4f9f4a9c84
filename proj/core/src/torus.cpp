#include "fdnl/torus.hpp"

#include <cmath>

#include "fdnl/util.hpp"

namespace fdnl {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void TorusSpec::validate() const {
  if (d < 1 || d > kMaxDim)
    throw ConfigError("torus: d must be in [1, " + std::to_string(kMaxDim) + "]");
  if (N < 1) throw ConfigError("torus: N must be >= 1");
  if (q < 1) throw ConfigError("torus: oversampling q must be >= 1");
  // Analysis of a band-limited field is exact only when n > 2N.
  if (grid_side() <= 2 * N) throw ConfigError("torus: grid does not resolve the box");
}

std::size_t TorusSpec::mode_count() const {
  std::size_t m = 1;
  for (int a = 0; a < d; ++a) m *= (std::size_t)side();
  return m;
}

int TorusSpec::grid_side() const { return next_fast_size(q * side()); }

std::size_t TorusSpec::grid_count() const {
  std::size_t m = 1;
  for (int a = 0; a < d; ++a) m *= (std::size_t)grid_side();
  return m;
}

double TorusSpec::cell_volume() const {
  double w = 1.0;
  for (int a = 0; a < d; ++a) w *= kTwoPi / grid_side();
  return w;
}

double TorusSpec::volume() const { return std::pow(kTwoPi, d); }

int next_fast_size(int m) {
  if (m < 1) return 1;
  for (int n = m;; ++n) {
    int r = n;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return n;
  }
}

std::size_t mode_index(const TorusSpec& spec, const Wave& k) {
  std::size_t idx = 0;
  for (int a = 0; a < spec.d; ++a) idx = idx * spec.side() + std::size_t(k[a] + spec.N);
  return idx;
}

Wave mode_wave(const TorusSpec& spec, std::size_t idx) {
  Wave k{};
  for (int a = spec.d - 1; a >= 0; --a) {
    k[a] = int(idx % spec.side()) - spec.N;
    idx /= spec.side();
  }
  return k;
}

double eigenvalue(const TorusSpec& spec, const Wave& k) {
  double lam = 0.0;
  for (int a = 0; a < spec.d; ++a) lam += double(k[a]) * double(k[a]);
  return lam;
}

double eigenvalue_at(const TorusSpec& spec, std::size_t idx) {
  return eigenvalue(spec, mode_wave(spec, idx));
}

double eig_pow(double lambda, double s) {
  if (s == 0.0) return 1.0;  // 0^0 := 1: gamma = 0 multipliers are the identity
  if (lambda == 0.0) return 0.0;
  return std::pow(lambda, s);
}

SpectralField SpectralField::zero(const TorusSpec& spec) {
  return SpectralField{spec, std::vector<cplx>(spec.mode_count(), cplx(0.0, 0.0))};
}

SpectralField SpectralField::basis(const TorusSpec& spec, const Wave& k, cplx amp) {
  SpectralField u = zero(spec);
  u.c[mode_index(spec, k)] = amp;
  return u;
}

cplx& SpectralField::at(const Wave& k) { return c[mode_index(spec, k)]; }
const cplx& SpectralField::at(const Wave& k) const { return c[mode_index(spec, k)]; }

bool SpectralField::finite() const {
  for (const cplx& z : c)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

GridField GridField::zero(const TorusSpec& spec) {
  return GridField{spec, std::vector<cplx>(spec.grid_count(), cplx(0.0, 0.0))};
}

void axpy(SpectralField& y, cplx a, const SpectralField& x) {
  if (y.spec != x.spec) throw RuntimeError("axpy: mismatched specs");
  for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] += a * x.c[i];
}

SpectralField scaled(const SpectralField& u, cplx a) {
  SpectralField v = u;
  for (auto& z : v.c) z *= a;
  return v;
}

SpectralField added(const SpectralField& u, const SpectralField& v) {
  SpectralField w = u;
  axpy(w, 1.0, v);
  return w;
}

SpectralField subtracted(const SpectralField& u, const SpectralField& v) {
  SpectralField w = u;
  axpy(w, -1.0, v);
  return w;
}

}  // namespace fdnl
