#include "fdnl/spectral_ops.hpp"

#include <cmath>

#include "fdnl/transforms.hpp"
#include "fdnl/util.hpp"

namespace fdnl {

namespace {

// exp() overflows past ~709.78; anything close is a runaway field, not a
// quadrature to trust.
constexpr double kExpArgLimit = 700.0;

void check_exp_range(double beta_usq_max) {
  if (!(beta_usq_max <= kExpArgLimit))
    throw RuntimeError("nonlinearity overflow: beta*|u|^2 reached " +
                       std::to_string(beta_usq_max));
}

}  // namespace

SpectralField frac_laplacian(const SpectralField& u, double gamma) {
  if (gamma < 0.0) throw RuntimeError("frac_laplacian: gamma must be >= 0");
  SpectralField v = u;
  const std::size_t modes = u.spec.mode_count();
  for (std::size_t i = 0; i < modes; ++i)
    v.c[i] *= eig_pow(eigenvalue_at(u.spec, i), gamma);
  return v;
}

SpectralField project(const SpectralField& u, int cutoff) {
  if (cutoff < 0) throw RuntimeError("project: cutoff must be >= 0");
  SpectralField v = u;
  const std::size_t modes = u.spec.mode_count();
  for (std::size_t i = 0; i < modes; ++i) {
    Wave k = mode_wave(u.spec, i);
    for (int a = 0; a < u.spec.d; ++a)
      if (k[a] < -cutoff || k[a] > cutoff) {
        v.c[i] = 0.0;
        break;
      }
  }
  return v;
}

SpectralField propagator(const SpectralField& u, double t, double alpha) {
  SpectralField v = u;
  const std::size_t modes = u.spec.mode_count();
  for (std::size_t i = 0; i < modes; ++i) {
    double lam = eigenvalue_at(u.spec, i);
    double phase = -t * eig_pow(lam, alpha);
    v.c[i] *= cplx(std::cos(phase), std::sin(phase));
  }
  return v;
}

double sobolev_norm(const SpectralField& u, double s) {
  if (s < 0.0) throw RuntimeError("sobolev_norm: s must be >= 0");
  double acc = 0.0;
  const std::size_t modes = u.spec.mode_count();
  for (std::size_t i = 0; i < modes; ++i)
    acc += (1.0 + eig_pow(eigenvalue_at(u.spec, i), s)) * std::norm(u.c[i]);
  return std::sqrt(acc);
}

double hs_seminorm(const SpectralField& u, double s) {
  if (s < 0.0) throw RuntimeError("hs_seminorm: s must be >= 0");
  double acc = 0.0;
  const std::size_t modes = u.spec.mode_count();
  for (std::size_t i = 0; i < modes; ++i)
    acc += eig_pow(eigenvalue_at(u.spec, i), s) * std::norm(u.c[i]);
  return std::sqrt(acc);
}

double l2_inner(const SpectralField& u, const SpectralField& v) {
  if (u.spec != v.spec) throw RuntimeError("l2_inner: mismatched specs");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.c.size(); ++i)
    acc += u.c[i].real() * v.c[i].real() + u.c[i].imag() * v.c[i].imag();
  return acc;
}

double l2_norm(const SpectralField& u) {
  double acc = 0.0;
  for (const cplx& z : u.c) acc += std::norm(z);
  return std::sqrt(acc);
}

SpectralField exp_weighted_field(const SpectralField& u, double beta) {
  GridField g = to_grid(u);
  double worst = 0.0;
  for (cplx& z : g.v) {
    double arg = beta * std::norm(z);
    if (arg > worst) worst = arg;
    z *= std::exp(arg);
  }
  check_exp_range(worst);
  return to_coeffs(g, u.spec.N);
}

SpectralField nonlinearity(const SpectralField& u, double beta) {
  SpectralField w = exp_weighted_field(u, beta);
  for (cplx& z : w.c) z *= 2.0 * beta;
  return w;
}

double exp_integral(const SpectralField& u, double beta) {
  GridField g = to_grid(u);
  double acc = 0.0, worst = 0.0;
  for (const cplx& z : g.v) {
    double arg = beta * std::norm(z);
    if (arg > worst) worst = arg;
    acc += std::exp(arg);
  }
  check_exp_range(worst);
  return u.spec.cell_volume() * acc;
}

double mass_weighted_exp_integral(const SpectralField& u, double beta) {
  GridField g = to_grid(u);
  double acc = 0.0, worst = 0.0;
  for (const cplx& z : g.v) {
    double m = std::norm(z);
    double arg = beta * m;
    if (arg > worst) worst = arg;
    acc += m * std::exp(arg);
  }
  check_exp_range(worst);
  return u.spec.cell_volume() * acc;
}

double one_plus_mass_weighted_exp_integral(const SpectralField& u, double beta) {
  GridField g = to_grid(u);
  double acc = 0.0, worst = 0.0;
  for (const cplx& z : g.v) {
    double m = std::norm(z);
    double arg = beta * m;
    if (arg > worst) worst = arg;
    acc += (1.0 + m) * std::exp(arg);
  }
  check_exp_range(worst);
  return u.spec.cell_volume() * acc;
}

double grid_integral(const GridField& g) {
  double acc = 0.0;
  for (const cplx& z : g.v) acc += z.real();
  return g.spec.cell_volume() * acc;
}

ExpMoments exp_moments(const SpectralField& u, double beta) {
  GridField g = to_grid(u);
  ExpMoments m;
  double worst = 0.0;
  for (const cplx& z : g.v) {
    double sq = std::norm(z);
    double arg = beta * sq;
    if (arg > worst) worst = arg;
    double e = std::exp(arg);
    m.exp_int += e;
    m.m1_exp += std::sqrt(sq) * e;
    m.m2_exp += sq * e;
  }
  check_exp_range(worst);
  double w = u.spec.cell_volume();
  m.exp_int *= w;
  m.m1_exp *= w;
  m.m2_exp *= w;
  return m;
}

}  // namespace fdnl
