#include "fdnl/dissipation.hpp"

#include <cmath>

#include "fdnl/spectral_ops.hpp"
#include "fdnl/util.hpp"

namespace fdnl {

namespace {
// Past this exponent G itself overflows; g_tilde switches to its exact
// log-space asymptote (the dropped log1p correction is e^{-G}).
constexpr double kLogSwitch = 600.0;
}  // namespace

DissipatorKind dissipator_kind_from_string(const std::string& s) {
  if (s == "strong") return DissipatorKind::strong;
  if (s == "weak") return DissipatorKind::weak;
  throw ConfigError("dissipator: unknown kind '" + s + "'");
}

std::string to_string(DissipatorKind k) {
  return k == DissipatorKind::strong ? "strong" : "weak";
}

void DissipatorSpec::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("dissipator: alpha must be > 0");
  if (!(beta > 0.0)) throw ConfigError("dissipator: beta must be > 0");
  if (!(s > alpha)) throw ConfigError("dissipator: s must exceed alpha");
  if (!(g_c > 0.0)) throw ConfigError("dissipator: g_c must be > 0");
  if (!(g_lambda > 0.0)) throw ConfigError("dissipator: g_lambda must be > 0");
}

double g(const DissipatorSpec& spec, double rho) {
  if (!(rho >= 0.0)) throw RuntimeError("g: rho must be >= 0");
  return spec.g_c * rho * rho * std::exp(spec.g_lambda * spec.beta * rho * rho);
}

double g_tilde(const DissipatorSpec& spec, double rho) {
  if (!(rho >= 0.0)) throw RuntimeError("g_tilde: rho must be >= 0");
  if (rho == 0.0) return 0.0;
  double arg = spec.g_lambda * spec.beta * rho * rho;
  if (arg > kLogSwitch) return std::log(spec.g_c) + 2.0 * std::log(rho) + arg;
  return std::log1p(g(spec, rho));
}

double g_tilde_inv(const DissipatorSpec& spec, double z) {
  if (!(z >= 0.0)) throw RuntimeError("g_tilde_inv: z must be >= 0");
  if (z == 0.0) return 0.0;
  double hi = 1.0;
  while (g_tilde(spec, hi) < z) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
    if (g_tilde(spec, mid) < z)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

SpectralField apply(const DissipatorSpec& spec, const SpectralField& u) {
  SpectralField v = frac_laplacian(u, spec.s - spec.alpha);
  if (spec.kind == DissipatorKind::strong) {
    double G = g(spec, sobolev_norm(u, spec.s));
    axpy(v, G, u);
  } else {
    axpy(v, 1.0, u);
    axpy(v, 1.0, exp_weighted_field(u, spec.beta));
  }
  return v;
}

double mcal(const DissipatorSpec& spec, const SpectralField& u) {
  double hsa = hs_seminorm(u, spec.s - spec.alpha);
  if (spec.kind == DissipatorKind::strong) {
    double l2 = l2_norm(u);
    return hsa * hsa + g(spec, sobolev_norm(u, spec.s)) * l2 * l2;
  }
  double l2 = l2_norm(u);
  return mass_weighted_exp_integral(u, spec.beta) + hsa * hsa + l2 * l2;
}

double ecal(const DissipatorSpec& spec, const SpectralField& u) {
  double hs = hs_seminorm(u, spec.s);
  double ha = hs_seminorm(u, spec.alpha);
  if (spec.kind == DissipatorKind::strong) {
    SpectralField w = exp_weighted_field(u, spec.beta);
    double G = g(spec, sobolev_norm(u, spec.s));
    double cross = l2_inner(w, frac_laplacian(u, spec.s - spec.alpha));
    double m2e = mass_weighted_exp_integral(u, spec.beta);
    return hs * hs + 2.0 * spec.beta * cross + G * (ha * ha + 2.0 * spec.beta * m2e);
  }
  SpectralField w = exp_weighted_field(u, spec.beta);
  double wl2 = l2_norm(w);
  double cross_a = l2_inner(w, frac_laplacian(u, spec.alpha));
  double cross_sa = l2_inner(w, frac_laplacian(u, spec.s - spec.alpha));
  double m2e = mass_weighted_exp_integral(u, spec.beta);
  return cross_a + 2.0 * spec.beta * wl2 * wl2 + hs * hs + ha * ha +
         2.0 * spec.beta * (cross_sa + m2e);
}

double weak_coercivity_gap(const DissipatorSpec& spec, const SpectralField& u) {
  if (spec.kind != DissipatorKind::weak)
    throw RuntimeError("weak_coercivity_gap: spec must be weak kind");
  SpectralField w = exp_weighted_field(u, spec.beta);
  double ha = hs_seminorm(u, spec.alpha);
  double cross_a = l2_inner(w, frac_laplacian(u, spec.alpha));
  double cross_sa = l2_inner(w, frac_laplacian(u, spec.s - spec.alpha));
  double m2e = mass_weighted_exp_integral(u, spec.beta);
  return cross_a + ha * ha + 2.0 * spec.beta * (cross_sa + m2e);
}

double strong_coercivity_gap(const DissipatorSpec& spec, const SpectralField& u,
                             double c, double C) {
  if (spec.kind != DissipatorKind::strong)
    throw RuntimeError("strong_coercivity_gap: spec must be strong kind");
  double hs = sobolev_norm(u, spec.s);
  return ecal(spec, u) + C - c * hs * hs;
}

}  // namespace fdnl
