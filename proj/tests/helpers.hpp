#pragma once

// Shared helpers for the test suites: deterministic random fields, a
// naive O(modes * points) Fourier synthesis oracle, and a map-based
// exact convolution calculus used to cross-check the grid pipeline.

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fdnl/rng.hpp"
#include "fdnl/torus.hpp"

namespace testkit {

using fdnl::cplx;
using fdnl::SpectralField;
using fdnl::TorusSpec;
using fdnl::Wave;

// Random field with |coeff_k| ~ amplitude / (1 + |k|^2)^{decay/2},
// deterministic in (seed, index).
inline SpectralField random_field(const TorusSpec& spec, std::uint64_t seed,
                                  double amplitude = 0.5, double decay = 2.0) {
  fdnl::RngStream rng(seed, 0);
  SpectralField u = SpectralField::zero(spec);
  for (std::size_t i = 0; i < u.c.size(); ++i) {
    auto [g1, g2] = rng.normal_pair();
    const double w = amplitude * std::pow(1.0 + fdnl::eigenvalue_at(spec, i), -0.5 * decay);
    u.c[i] = cplx(g1, g2) * w;
  }
  return u;
}

inline double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.c.size(); ++i) m = std::max(m, std::abs(a.c[i] - b.c[i]));
  return m;
}

inline double max_abs_coeff(const SpectralField& a) {
  double m = 0.0;
  for (const auto& z : a.c) m = std::max(m, std::abs(z));
  return m;
}

// Direct synthesis u(x_j) = (2pi)^{-d/2} sum_k u_k exp(i k . x_j) on the
// oversampled grid, no FFT anywhere.
inline std::vector<cplx> naive_synthesis(const SpectralField& u) {
  const TorusSpec& spec = u.spec;
  const int n = spec.grid_side();
  const std::size_t total = spec.grid_count();
  const double scale = std::pow(2.0 * M_PI, -0.5 * spec.d);
  std::vector<cplx> out(total, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < total; ++j) {
    // decode row-major grid index, first axis slowest
    std::size_t rem = j;
    std::array<int, 4> g{0, 0, 0, 0};
    for (int a = spec.d - 1; a >= 0; --a) {
      g[(std::size_t)a] = (int)(rem % (std::size_t)n);
      rem /= (std::size_t)n;
    }
    cplx acc(0.0, 0.0);
    for (std::size_t m = 0; m < u.c.size(); ++m) {
      if (u.c[m] == cplx(0.0, 0.0)) continue;
      const Wave k = fdnl::mode_wave(spec, m);
      double phase = 0.0;
      for (int a = 0; a < spec.d; ++a)
        phase += k[(std::size_t)a] * (2.0 * M_PI * g[(std::size_t)a] / n);
      acc += u.c[m] * std::polar(1.0, phase);
    }
    out[j] = scale * acc;
  }
  return out;
}

// ---- exact coefficient calculus on sparse maps (no grid, no cutoff) ----

struct WaveLess {
  bool operator()(const Wave& a, const Wave& b) const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }
};
using CoeffMap = std::map<Wave, cplx, WaveLess>;

inline CoeffMap to_map(const SpectralField& u) {
  CoeffMap m;
  for (std::size_t i = 0; i < u.c.size(); ++i)
    if (u.c[i] != cplx(0.0, 0.0)) m[fdnl::mode_wave(u.spec, i)] = u.c[i];
  return m;
}

inline CoeffMap conj_map(const CoeffMap& a) {
  CoeffMap r;
  for (const auto& [k, v] : a) {
    Wave nk{0, 0, 0, 0};
    for (std::size_t i = 0; i < nk.size(); ++i) nk[i] = -k[i];
    r[nk] = std::conj(v);
  }
  return r;
}

// Pointwise product of the two fields in coefficient space:
// (uv)_q = (2pi)^{-d/2} sum_{k+m=q} u_k v_m.
inline CoeffMap product(const CoeffMap& a, const CoeffMap& b, int d) {
  const double scale = std::pow(2.0 * M_PI, -0.5 * d);
  CoeffMap r;
  for (const auto& [k, va] : a)
    for (const auto& [m, vb] : b) {
      Wave q{0, 0, 0, 0};
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = k[i] + m[i];
      r[q] += scale * va * vb;
    }
  return r;
}

// Truncated series for 2 beta u e^{beta |u|^2} =
//   2 beta sum_{p<=P} beta^p / p! (u ubar)^p u, exact convolutions.
inline CoeffMap series_nonlinearity(const SpectralField& u, double beta, int terms) {
  const int d = u.spec.d;
  const CoeffMap um = to_map(u);
  const CoeffMap mod2 = product(um, conj_map(um), d);  // |u|^2
  CoeffMap acc;                                        // sum of beta^p/p! |u|^{2p} u
  CoeffMap pow_term = um;                              // |u|^{2p} u at p = 0
  double fact = 1.0;
  for (int p = 0;; ++p) {
    const double coeff = std::pow(beta, p) / fact;
    for (const auto& [k, v] : pow_term) acc[k] += coeff * v;
    if (p == terms) break;
    pow_term = product(pow_term, mod2, d);
    fact *= (p + 1.0);
  }
  for (auto& [k, v] : acc) v *= 2.0 * beta;
  return acc;
}

// Restriction of a coefficient map to the field's box.
inline SpectralField map_to_field(const CoeffMap& m, const TorusSpec& spec) {
  SpectralField u = SpectralField::zero(spec);
  for (const auto& [k, v] : m) {
    bool inside = true;
    for (int a = 0; a < spec.d; ++a)
      if (std::abs(k[(std::size_t)a]) > spec.N) inside = false;
    for (int a = spec.d; a < (int)k.size(); ++a)
      if (k[(std::size_t)a] != 0) inside = false;
    if (inside) u.at(k) += v;
  }
  return u;
}

// Copy of u on a torus with a larger box (same d), other modes zero.
inline SpectralField embed(const SpectralField& u, const TorusSpec& big) {
  SpectralField v = SpectralField::zero(big);
  for (std::size_t i = 0; i < u.c.size(); ++i)
    if (u.c[i] != cplx(0.0, 0.0)) v.at(fdnl::mode_wave(u.spec, i)) = u.c[i];
  return v;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("fdnl_test_" + tag);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testkit
