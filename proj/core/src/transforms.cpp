#include "fdnl/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "fdnl/util.hpp"

namespace fdnl {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// One FFTW plan pair per (d, n), created once under a lock (plan
// creation is not thread-safe) and never destroyed. Execution goes
// through fftw_execute_dft on per-thread fftw_malloc'd scratch, which is
// thread-safe and keeps the alignment contract of the prototype buffers.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PlanPair& plan_for(int d, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, PlanPair>* cache =
      new std::map<std::pair<int, int>, PlanPair>();
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, n);
  auto it = cache->find(key);
  if (it != cache->end()) return it->second;

  std::size_t total = 1;
  int dims[kMaxDim];
  for (int a = 0; a < d; ++a) {
    dims[a] = n;
    total *= (std::size_t)n;
  }
  fftw_complex* in = fftw_alloc_complex(total);
  fftw_complex* out = fftw_alloc_complex(total);
  PlanPair p;
  p.fwd = fftw_plan_dft(d, dims, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft(d, dims, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (!p.fwd || !p.bwd) throw RuntimeError("fftw plan creation failed");
  return cache->emplace(key, p).first->second;
}

struct Scratch {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  std::size_t cap = 0;
  ~Scratch() {
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
  void ensure(std::size_t n) {
    if (cap >= n) return;
    if (in) fftw_free(in);
    if (out) fftw_free(out);
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    cap = n;
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

void run(fftw_plan plan, const cplx* src, cplx* dst, std::size_t total) {
  Scratch& s = scratch();
  s.ensure(total);
  std::memcpy(s.in, src, total * sizeof(cplx));
  fftw_execute_dft(plan, s.in, s.out);
  std::memcpy(dst, s.out, total * sizeof(cplx));
}

// FFT bin of integer frequency k (any sign): k mod n.
inline std::size_t bin_of(int k, int n) { return std::size_t(((k % n) + n) % n); }

// Flat FFT-layout index of the box wavevector k.
std::size_t grid_bin_index(const TorusSpec& spec, const Wave& k) {
  int n = spec.grid_side();
  std::size_t idx = 0;
  for (int a = 0; a < spec.d; ++a) idx = idx * (std::size_t)n + bin_of(k[a], n);
  return idx;
}

}  // namespace

GridField to_grid(const SpectralField& u) {
  const TorusSpec& spec = u.spec;
  const std::size_t total = spec.grid_count();
  const double scale = std::pow(kTwoPi, -0.5 * spec.d);

  std::vector<cplx> bins(total, cplx(0.0, 0.0));
  const std::size_t modes = spec.mode_count();
  for (std::size_t i = 0; i < modes; ++i) {
    if (u.c[i] == cplx(0.0, 0.0)) continue;
    bins[grid_bin_index(spec, mode_wave(spec, i))] = scale * u.c[i];
  }

  GridField g = GridField::zero(spec);
  run(plan_for(spec.d, spec.grid_side()).bwd, bins.data(), g.v.data(), total);
  return g;
}

SpectralField to_coeffs(const GridField& g, int cutoff) {
  const TorusSpec& spec = g.spec;
  if (cutoff < 0 || cutoff > spec.N)
    throw RuntimeError("to_coeffs: cutoff outside the field's box");
  const std::size_t total = spec.grid_count();
  std::vector<cplx> bins(total);
  run(plan_for(spec.d, spec.grid_side()).fwd, g.v.data(), bins.data(), total);

  const double scale = std::pow(kTwoPi, 0.5 * spec.d) / double(total);
  SpectralField u = SpectralField::zero(spec);
  const std::size_t modes = spec.mode_count();
  for (std::size_t i = 0; i < modes; ++i) {
    Wave k = mode_wave(spec, i);
    bool inside = true;
    for (int a = 0; a < spec.d; ++a)
      if (k[a] < -cutoff || k[a] > cutoff) inside = false;
    if (!inside) continue;
    u.c[i] = scale * bins[grid_bin_index(spec, k)];
  }
  return u;
}

std::vector<cplx> grid_dft(const GridField& g) {
  const std::size_t total = g.spec.grid_count();
  std::vector<cplx> bins(total);
  run(plan_for(g.spec.d, g.spec.grid_side()).fwd, g.v.data(), bins.data(), total);
  return bins;
}

double grid_bin_eigenvalue(const TorusSpec& spec, std::size_t idx) {
  int n = spec.grid_side();
  double lam = 0.0;
  for (int a = spec.d - 1; a >= 0; --a) {
    int f = int(idx % (std::size_t)n);
    idx /= (std::size_t)n;
    if (f > n / 2) f -= n;
    lam += double(f) * double(f);
  }
  return lam;
}

}  // namespace fdnl
