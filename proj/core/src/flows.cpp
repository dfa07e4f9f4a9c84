#include "fdnl/flows.hpp"

#include <algorithm>
#include <cmath>

#include "fdnl/spectral_ops.hpp"
#include "fdnl/transforms.hpp"
#include "fdnl/util.hpp"

namespace fdnl {

namespace {

constexpr double kExpArgLimit = 700.0;

// Exact solution of the pointwise substep i u_t = 2 beta u e^{beta|u|^2}
// (|u| is conserved, so the exponent is constant along the substep).
// Rotates in place and reports the largest exponent seen.
double rotate_nonlinear(GridField& g, double beta, double dt) {
  double worst = 0.0;
  for (cplx& z : g.v) {
    double arg = beta * std::norm(z);
    if (arg > worst) worst = arg;
    double phase = -2.0 * beta * dt * std::exp(arg);
    z *= cplx(std::cos(phase), std::sin(phase));
  }
  return worst;
}

struct StepBookkeeping {
  double projected_total = 0.0;
  double projected_max = 0.0;
  void record(double lost) {
    projected_total += lost;
    projected_max = std::max(projected_max, lost);
  }
};

// One splitting step. Strang: half linear, full nonlinear, half linear.
// Lie: full linear then full nonlinear. The projection after the
// nonlinear substep is where mass can leave the box; the loss is the
// exact gap between the grid l2 mass (conserved by the rotation) and the
// retained coefficients.
SpectralField split_step(const SpectralField& u, const FlowConfig& cfg, double dt,
                         StepBookkeeping* book) {
  const bool strang = cfg.scheme != Scheme::lie;
  SpectralField v = propagator(u, strang ? 0.5 * dt : dt, cfg.alpha);
  double pre = 0.0;
  for (const cplx& z : v.c) pre += std::norm(z);
  GridField g = to_grid(v);
  double worst = rotate_nonlinear(g, cfg.beta, dt);
  if (!(worst <= kExpArgLimit))
    throw RuntimeError("nonlinear substep overflow: beta*|u|^2 = " + std::to_string(worst));
  v = to_coeffs(g, u.spec.N);
  double post = 0.0;
  for (const cplx& z : v.c) post += std::norm(z);
  if (book) book->record(std::max(0.0, pre - post));
  if (strang) v = propagator(v, 0.5 * dt, cfg.alpha);
  return v;
}

}  // namespace

Scheme scheme_from_string(const std::string& s) {
  if (s == "strang") return Scheme::strang;
  if (s == "lie") return Scheme::lie;
  if (s == "picard" || s == "picard-oracle") return Scheme::picard;
  throw ConfigError("flow: unknown scheme '" + s + "'");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::strang: return "strang";
    case Scheme::lie: return "lie";
    case Scheme::picard: return "picard";
  }
  return "?";
}

void FlowConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("flow: alpha must be > 0");
  if (!(beta > 0.0)) throw ConfigError("flow: beta must be > 0");
  if (!(s >= 0.0)) throw ConfigError("flow: s must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("flow: dt must be > 0");
  if (!(c0 > 0.0) || !(C0 > 0.0)) throw ConfigError("flow: c0, C0 must be > 0");
  if (picard_max_iters < 1) throw ConfigError("flow: picard_max_iters must be >= 1");
  if (!(picard_tol > 0.0)) throw ConfigError("flow: picard_tol must be > 0");
}

double mass(const SpectralField& u) {
  double acc = 0.0;
  for (const cplx& z : u.c) acc += std::norm(z);
  return 0.5 * acc;
}

double energy(const SpectralField& u, double alpha, double beta) {
  double h = hs_seminorm(u, alpha);
  return 0.5 * h * h + exp_integral(u, beta);
}

double local_existence_time(double s, double R, double beta, double c0, double C0) {
  (void)s;  // the radius R is already measured in H^s
  if (!(R >= 0.0)) throw RuntimeError("local_existence_time: R must be >= 0");
  double arg = C0 * beta * R * R;
  if (arg > kExpArgLimit) return 0.0;  // window underflows for huge data
  return c0 / (beta * std::exp(arg));
}

PicardResult picard_solve(const SpectralField& u0, double T, const FlowConfig& cfg) {
  cfg.validate();
  if (!(T > 0.0)) throw RuntimeError("picard_solve: T must be > 0");
  const double R = sobolev_norm(u0, cfg.s);
  const double window = local_existence_time(cfg.s, R, cfg.beta, cfg.c0, cfg.C0);
  if (T > window * (1.0 + 1e-12))
    throw RuntimeError("picard_solve: T = " + std::to_string(T) +
                       " exceeds the contraction window " + std::to_string(window));

  const int J = std::max(1, (int)std::ceil(T / cfg.dt - 1e-9));
  const double h = T / J;

  std::vector<double> times(J + 1);
  for (int j = 0; j <= J; ++j) times[j] = h * j;

  // Free-flight initial iterate.
  std::vector<SpectralField> cur(J + 1, SpectralField::zero(u0.spec));
  for (int j = 0; j <= J; ++j) cur[j] = propagator(u0, times[j], cfg.alpha);

  PicardResult res;
  res.distances.reserve(cfg.picard_max_iters);
  const double scale = std::max(1.0, R);
  int rising = 0;

  for (int m = 1; m <= cfg.picard_max_iters; ++m) {
    // Rotated integrand y_j = S(-t_j) NL(u_j); cumulative two-point
    // Gauss-Lobatto (trapezoid) keeps nodes on the sample grid at O(h^2).
    std::vector<SpectralField> next(J + 1, SpectralField::zero(u0.spec));
    SpectralField integral = SpectralField::zero(u0.spec);
    SpectralField y_prev = propagator(nonlinearity(cur[0], cfg.beta), -times[0], cfg.alpha);
    next[0] = u0;
    for (int j = 1; j <= J; ++j) {
      SpectralField y = propagator(nonlinearity(cur[j], cfg.beta), -times[j], cfg.alpha);
      axpy(integral, 0.5 * h, y_prev);
      axpy(integral, 0.5 * h, y);
      y_prev = y;
      SpectralField inner = u0;
      axpy(inner, cplx(0.0, -1.0), integral);
      next[j] = propagator(inner, times[j], cfg.alpha);
    }

    double dist = 0.0;
    for (int j = 0; j <= J; ++j)
      dist = std::max(dist, sobolev_norm(subtracted(next[j], cur[j]), cfg.s));
    res.distances.push_back(dist);
    res.iterations = m;
    if (res.distances.size() >= 2) {
      double prev = res.distances[res.distances.size() - 2];
      if (prev > 1e-13 * scale && dist > 1e-13 * scale)
        res.worst_ratio = std::max(res.worst_ratio, dist / prev);
      rising = dist > prev ? rising + 1 : 0;
    }
    cur.swap(next);
    if (dist <= cfg.picard_tol * scale) break;
    if (rising >= 2 && dist > 1e3 * cfg.picard_tol * scale)
      throw RuntimeError("picard_solve: iterates stopped contracting, ratio = " +
                         std::to_string(res.worst_ratio));
    if (m == cfg.picard_max_iters)
      throw RuntimeError("picard_solve: no convergence in " +
                         std::to_string(cfg.picard_max_iters) +
                         " iterations, last gap = " + std::to_string(dist));
  }

  res.traj.times = std::move(times);
  res.traj.fields = std::move(cur);
  return res;
}

void evolve_observe(const SpectralField& u0, double t_final, const FlowConfig& cfg,
                    int store_stride,
                    const std::function<void(double, const SpectralField&)>& observe,
                    Trajectory* stats) {
  cfg.validate();
  if (store_stride < 1) throw RuntimeError("evolve: store_stride must be >= 1");
  StepBookkeeping book;

  if (cfg.scheme == Scheme::picard && t_final < 0.0)
    throw RuntimeError("evolve: picard oracle scheme is forward-only");

  observe(0.0, u0);
  if (t_final == 0.0) return;

  const double span = std::abs(t_final);
  const long steps = std::max(1L, (long)std::ceil(span / cfg.dt - 1e-9));
  const double dt = t_final / (double)steps;

  if (cfg.scheme == Scheme::picard) {
    // Chain contraction windows; window lengths are multiples of dt so
    // observation times stay on the uniform grid.
    SpectralField u = u0;
    long done = 0;
    while (done < steps) {
      double R = sobolev_norm(u, cfg.s);
      double window = local_existence_time(cfg.s, R, cfg.beta, cfg.c0, cfg.C0);
      long w_steps = std::min<long>(steps - done, (long)std::floor(window / dt));
      if (w_steps < 1)
        throw RuntimeError("evolve: dt exceeds the contraction window at t = " +
                           std::to_string(done * dt));
      FlowConfig sub = cfg;
      sub.dt = dt;
      PicardResult pr = picard_solve(u, w_steps * dt, sub);
      for (long j = 1; j <= w_steps; ++j) {
        long global = done + j;
        if (global % store_stride == 0 || global == steps)
          observe(global * dt, pr.traj.fields[(std::size_t)j]);
      }
      u = pr.traj.fields.back();
      done += w_steps;
    }
    return;
  }

  SpectralField u = u0;
  for (long step = 1; step <= steps; ++step) {
    u = split_step(u, cfg, dt, &book);
    if (!u.finite())
      throw RuntimeError("evolve: non-finite state at t = " + std::to_string(step * dt));
    if (step % store_stride == 0 || step == steps) observe(step * dt, u);
  }
  if (stats) {
    stats->projected_mass_total = book.projected_total;
    stats->projected_mass_max_step = book.projected_max;
  }
}

Trajectory evolve(const SpectralField& u0, double t_final, const FlowConfig& cfg,
                  int store_stride) {
  Trajectory traj;
  evolve_observe(
      u0, t_final, cfg, store_stride,
      [&](double t, const SpectralField& u) {
        traj.times.push_back(t);
        traj.fields.push_back(u);
      },
      &traj);
  return traj;
}

std::optional<int> growth_delay(const Trajectory& traj, double r,
                                const std::function<double(double)>& envelope,
                                int i_max) {
  std::vector<double> norms(traj.fields.size());
  for (std::size_t j = 0; j < traj.fields.size(); ++j)
    norms[j] = sobolev_norm(traj.fields[j], r);
  for (int i = 0; i <= i_max; ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < norms.size() && ok; ++j) {
      double bound = 2.0 * envelope(1.0 + i + std::log1p(std::abs(traj.times[j])));
      if (norms[j] > bound) ok = false;
    }
    if (ok) return i;
  }
  return std::nullopt;
}

}  // namespace fdnl
