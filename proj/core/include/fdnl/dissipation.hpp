#pragma once

#include <string>

#include "fdnl/torus.hpp"

namespace fdnl {

enum class DissipatorKind { strong, weak };

DissipatorKind dissipator_kind_from_string(const std::string& s);
std::string to_string(DissipatorKind k);

// Damping operators L(u) paired with the flow:
//   strong: (-Delta)^{s-alpha} u + G(||u||_{H^s}) u,  G(rho) = c rho^2 exp(Lambda beta rho^2)
//   weak:   P_N(u exp(beta|u|^2)) + [(-Delta)^{s-alpha} + 1] u
struct DissipatorSpec {
  DissipatorKind kind = DissipatorKind::strong;
  double alpha = 1.0;
  double beta = 0.5;
  double s = 2.0;     // requires s > alpha; weak kind flags s > alpha + 1
  double g_c = 1.0;
  double g_lambda = 8.0;

  void validate() const;
  bool weak_range_ok() const { return s <= alpha + 1.0; }
};

// G and its log-lift; g_tilde works in log space so it stays finite far
// beyond the exp() overflow point of G itself.
double g(const DissipatorSpec& spec, double rho);
double g_tilde(const DissipatorSpec& spec, double rho);       // log(1 + G(rho))
double g_tilde_inv(const DissipatorSpec& spec, double z);     // bisection, |err| <= 1e-12

SpectralField apply(const DissipatorSpec& spec, const SpectralField& u);

// Dissipation functionals: mcal = M'(u; L(u)), ecal = E'(u; L(u)),
// in the closed forms the pairing produces (all quadratures share the
// oversampled grid of u).
double mcal(const DissipatorSpec& spec, const SpectralField& u);
double ecal(const DissipatorSpec& spec, const SpectralField& u);

// Coercivity gaps (values >= 0 up to aliasing when the exponent
// restrictions hold):
//   weak:   ecal - 2 beta ||P_N(u e^{beta|u|^2})||^2 - ||u||_{Hdot^s}^2
//   strong: ecal + C - c ||u||_{H^s}^2  with caller-fitted (c, C)
double weak_coercivity_gap(const DissipatorSpec& spec, const SpectralField& u);
double strong_coercivity_gap(const DissipatorSpec& spec, const SpectralField& u,
                             double c, double C);

}  // namespace fdnl
