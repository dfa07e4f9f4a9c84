#include "fdnl/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "fdnl/spectral_ops.hpp"
#include "fdnl/transforms.hpp"
#include "fdnl/util.hpp"

namespace fdnl {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// H^s norm (or Hdot^s seminorm) of a grid function using its complete
// DFT content, the right measure for non-band-limited exponentials.
double grid_full_norm(const GridField& g, double s, bool homogeneous) {
  std::vector<cplx> bins = grid_dft(g);
  const double scale = std::pow(kTwoPi, 0.5 * g.spec.d) / double(bins.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    double lam = grid_bin_eigenvalue(g.spec, i);
    double w = eig_pow(lam, s) + (homogeneous ? 0.0 : 1.0);
    acc += w * std::norm(scale * bins[i]);
  }
  return std::sqrt(acc);
}

// Smallest C >= 0 with C * base * exp(C * rate) = target (increasing in
// C). Returns 0 for target <= 0.
double solve_growth_constant(double base, double rate, double target) {
  if (!(target > 0.0) || !(base > 0.0)) return 0.0;
  auto h = [&](double C) { return C * base * std::exp(C * rate); };
  double hi = 1.0;
  while (h(hi) < target) {
    hi *= 2.0;
    if (hi > 1e12) return hi;  // degenerate sample; callers treat as unstable
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void RandomFieldLaw::validate() const {
  if (cutoff < 1) throw ConfigError("field law: cutoff must be >= 1");
  if (!(decay > 0.0)) throw ConfigError("field law: decay must be > 0");
  if (!(amplitude >= 0.0)) throw ConfigError("field law: amplitude must be >= 0");
}

SpectralField sample_field(const RandomFieldLaw& law, const TorusSpec& torus,
                           std::uint64_t index) {
  law.validate();
  if (law.cutoff > torus.N)
    throw RuntimeError("sample_field: law cutoff exceeds the torus box");
  RngStream rng(law.seed, index);
  SpectralField u = SpectralField::zero(torus);
  const std::size_t modes = torus.mode_count();
  for (std::size_t i = 0; i < modes; ++i) {
    Wave k = mode_wave(torus, i);
    bool inside = true;
    for (int a = 0; a < torus.d; ++a)
      if (k[a] < -law.cutoff || k[a] > law.cutoff) inside = false;
    if (!inside) continue;
    double w = law.amplitude * std::pow(1.0 + eigenvalue(torus, k), -0.5 * law.decay);
    if (law.complex_valued) {
      auto [g1, g2] = rng.normal_pair();
      u.c[i] = w * cplx(g1, g2);
    } else {
      // Real fields: draw once per conjugate pair {k, -k}; the canonical
      // representative is the lexicographically positive one.
      Wave neg{};
      bool canonical = true, is_zero = true;
      for (int a = 0; a < torus.d; ++a) {
        neg[a] = -k[a];
        if (k[a] != 0) is_zero = false;
      }
      for (int a = 0; a < torus.d; ++a) {
        if (k[a] > 0) break;
        if (k[a] < 0) {
          canonical = false;
          break;
        }
      }
      if (is_zero) {
        u.c[i] = w * rng.normal();
      } else if (canonical) {
        auto [g1, g2] = rng.normal_pair();
        u.c[i] = w * cplx(g1, g2);
        u.c[mode_index(torus, neg)] = std::conj(u.c[i]);
      }
    }
  }
  return u;
}

LemsobReport check_lemsob(const RandomFieldLaw& law, const TorusSpec& torus,
                          double s, double beta, std::uint64_t trials) {
  if (trials < 2) throw RuntimeError("check_lemsob: need at least 2 trials");
  LemsobReport rep;
  rep.trials = trials;
  const double V = std::pow(kTwoPi, 0.5 * torus.d);  // ||1||_{H^s}

  for (std::uint64_t i = 0; i < trials; ++i) {
    SpectralField u = sample_field(law, torus, 2 * i);
    SpectralField v = sample_field(law, torus, 2 * i + 1);
    double nu = sobolev_norm(u, s), nv = sobolev_norm(v, s);

    GridField gu = to_grid(u), gv = to_grid(v);
    GridField e_u = gu, ue_u = gu, diff = gu;
    for (std::size_t j = 0; j < gu.v.size(); ++j) {
      double eu = std::exp(beta * std::norm(gu.v[j]));
      double ev = std::exp(beta * std::norm(gv.v[j]));
      e_u.v[j] = eu;
      ue_u.v[j] = gu.v[j] * eu;
      diff.v[j] = gu.v[j] * eu - gv.v[j] * ev;
    }

    double c1 = std::log(grid_full_norm(e_u, s, false) / V) / (beta * nu * nu);
    double c2 = solve_growth_constant(nu, beta * nu * nu, grid_full_norm(ue_u, s, false));
    double nd = sobolev_norm(subtracted(u, v), s);
    double c3 = nd > 1e-14
                    ? solve_growth_constant(nd, beta * (nu * nu + nv * nv),
                                            grid_full_norm(diff, s, false))
                    : 0.0;

    rep.C1 = std::max(rep.C1, c1);
    rep.C2 = std::max(rep.C2, c2);
    rep.C3 = std::max(rep.C3, c3);
    if (i < trials / 2) {
      rep.C1_half = std::max(rep.C1_half, c1);
      rep.C2_half = std::max(rep.C2_half, c2);
      rep.C3_half = std::max(rep.C3_half, c3);
    }
  }
  return rep;
}

CordobaResult check_cordoba(const SpectralField& f, double gamma) {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw RuntimeError("check_cordoba: gamma must be in (0, 1]");
  CordobaResult res;

  SpectralField w = exp_weighted_field(f, 1.0);  // P_N(f e^{|f|^2})
  res.lhs = l2_inner(w, frac_laplacian(f, gamma));

  GridField gf = to_grid(f);
  GridField h = gf;
  double max_im = 0.0;
  for (std::size_t j = 0; j < gf.v.size(); ++j) {
    max_im = std::max(max_im, std::abs(gf.v[j].imag()));
    h.v[j] = std::exp(0.5 * std::norm(gf.v[j]));
  }
  double semi = grid_full_norm(h, gamma, true);
  res.rhs = semi * semi;
  res.gap = res.lhs - res.rhs;

  if (gamma == 1.0 && max_im < 1e-12) {
    // Classical route: gap = integral |grad f|^2 (1 + f^2) e^{f^2}.
    std::vector<GridField> grads;
    for (int a = 0; a < f.spec.d; ++a) {
      SpectralField da = f;
      for (std::size_t i = 0; i < da.c.size(); ++i) {
        Wave k = mode_wave(f.spec, i);
        da.c[i] *= cplx(0.0, (double)k[a]);
      }
      grads.push_back(to_grid(da));
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < gf.v.size(); ++j) {
      double grad_sq = 0.0;
      for (const auto& gr : grads) grad_sq += std::norm(gr.v[j]);
      double fsq = std::norm(gf.v[j]);
      acc += grad_sq * (1.0 + fsq) * std::exp(fsq);
    }
    res.gap_by_parts = f.spec.cell_volume() * acc;
    res.has_by_parts = true;
  }
  return res;
}

double f_inverse(double b, double v) {
  if (!(b >= 0.0)) throw RuntimeError("f_inverse: b must be >= 0");
  if (v == 0.0) return 0.0;
  double sign = v > 0.0 ? 1.0 : -1.0;
  double y = std::abs(v);
  // Bracket: f(u) >= u, so the root lies in [0, min(y, safe guess)].
  double hi = std::min(y, b > 0.0 ? std::sqrt(std::log1p(y) / b) + 1.0 : y);
  auto fval = [&](double u) { return u * std::exp(b * u * u); };
  while (fval(hi) < y) hi *= 1.5;
  double lo = 0.0, u = std::min(y, hi);
  for (int it = 0; it < 100; ++it) {
    double fu = fval(u);
    if (fu > y)
      hi = u;
    else
      lo = u;
    double fp = (1.0 + 2.0 * b * u * u) * std::exp(b * u * u);
    double step = (fu - y) / fp;
    double next = u - step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // safeguard
    if (std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u))) {
      u = next;
      break;
    }
    u = next;
  }
  return sign * u;
}

PhiFunction phi_build(double b, double c_phi, double v_max, int table_size) {
  if (!(b >= 0.0)) throw ConfigError("phi_build: b must be >= 0");
  if (!(c_phi > 0.0)) throw ConfigError("phi_build: c must be > 0");
  if (!(v_max > 0.0)) throw ConfigError("phi_build: v_max must be > 0");
  if (table_size < 8) throw ConfigError("phi_build: table too small");
  PhiFunction phi;
  phi.b = b;
  phi.c_phi = c_phi;
  phi.v_max = v_max;
  phi.v_grid.resize(table_size);
  phi.phi_vals.resize(table_size);
  for (int i = 0; i < table_size; ++i) {
    double v = v_max * double(i) / double(table_size - 1);
    phi.v_grid[i] = v;
    phi.phi_vals[i] = c_phi * v * f_inverse(b, v);
  }
  return phi;
}

double phi_exact(const PhiFunction& phi, double v) {
  return phi.c_phi * v * f_inverse(phi.b, v);
}

double phi_eval(const PhiFunction& phi, double v) {
  if (v < 0.0 || v > phi.v_max * (1.0 + 1e-12))
    throw RuntimeError("phi_eval: v outside the tabulated range");
  v = std::min(v, phi.v_max);
  const std::size_t n = phi.v_grid.size();
  double x = v / phi.v_max * double(n - 1);
  std::size_t i = std::min((std::size_t)x, n - 2);
  double t = x - double(i);
  return (1.0 - t) * phi.phi_vals[i] + t * phi.phi_vals[i + 1];
}

double phi_star_eval(const PhiFunction& phi, double y) {
  // The interpolant is convex piecewise linear, so the conjugate's sup
  // is attained at a node; scan them all, then polish with golden
  // section across the two neighbouring cells.
  const std::size_t n = phi.v_grid.size();
  double best = -1e300;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double val = phi.v_grid[i] * y - phi.phi_vals[i];
    if (val > best) {
      best = val;
      best_i = i;
    }
  }
  double lo = phi.v_grid[best_i > 0 ? best_i - 1 : 0];
  double hi = phi.v_grid[std::min(best_i + 1, n - 1)];
  const double gr = 0.6180339887498949;
  double a = lo, c = hi;
  double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
  auto h = [&](double v) { return v * y - phi_eval(phi, v); };
  double h1 = h(x1), h2 = h(x2);
  for (int it = 0; it < 80 && c - a > 1e-14 * std::max(1.0, phi.v_max); ++it) {
    if (h1 < h2) {
      a = x1;
      x1 = x2;
      h1 = h2;
      x2 = a + gr * (c - a);
      h2 = h(x2);
    } else {
      c = x2;
      x2 = x1;
      h2 = h1;
      x1 = c - gr * (c - a);
      h1 = h(x1);
    }
  }
  return std::max(best, std::max(h1, h2));
}

}  // namespace fdnl
