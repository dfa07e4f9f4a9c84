#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fdnl/report.hpp"
#include "fdnl/sde.hpp"

namespace fdnl {

// Empirical measure: thinned draws from damped-driven paths, uniform
// weights, with provenance enough to regenerate bit-identically.
struct MeasureSample {
  TorusSpec torus;
  std::vector<SpectralField> draws;
  std::vector<std::uint32_t> path_of;  // which path produced each draw
  std::uint64_t paths = 0;
  double horizon = 0.0;
  double burn_in = 0.0;  // fraction of the horizon discarded
  double sigma = 0.0;
  std::uint64_t master_seed = 0;
  std::string config_hash;
};

struct BkParams {
  double horizon = 200.0;
  int thin_stride = 100;      // keep every thin_stride-th step
  double burn_in_frac = 0.0;  // 0 reproduces the plain time-average construction
  std::uint64_t paths = 4;
  unsigned threads = 1;
};

// Time-averaged sampling of the damped-driven dynamics started at u0 = 0.
MeasureSample bk_sample(const SdeConfig& cfg, const BkParams& params);

// <mcal> over the draws vs the symbolic target A^0_N / 2. Standard error
// from per-path means when paths >= 2, batch means otherwise.
// extra_allowance widens the 3 SE budget (dt-bias measured by a pilot).
ObservableReport check_stationary_mass(const MeasureSample& ms, const SdeConfig& cfg,
                                       double extra_allowance = 0.0);

// <ecal> and its ratio to A^alpha_N + A^{(d-1)/2}_N (1 + A^0_N); the
// ratio is the stability observable sweeps compare.
ObservableReport check_stationary_energy(const MeasureSample& ms, const SdeConfig& cfg);

// Pushes every draw through the Hamiltonian flow for time t and compares
// observable means before/after. Conserved observables (mass, energy)
// are checked pathwise against integrator tolerance; H^r moments get a
// paired-difference 3 SE criterion. Returns one report per observable:
// "mass", "energy", then "hr_moment_<r>" for each r.
std::vector<ObservableReport> invariance_test(const MeasureSample& ms,
                                              const FlowConfig& flow, double t,
                                              const std::vector<double>& r_list,
                                              unsigned threads = 1);

// For each draw, the smallest i such that the trajectory over [0, horizon]
// stays below the envelope 2 gtilde_inv(1 + i + log(1 + t)) in H^r at all
// sampled times (empty when i_max fails). dt_override > 0 replaces
// flow.dt for these long runs.
std::vector<std::optional<int>> growth_delays(const MeasureSample& ms,
                                              const FlowConfig& flow,
                                              const DissipatorSpec& diss, double r,
                                              double horizon, double dt_override,
                                              int sample_stride, int i_max,
                                              unsigned threads = 1);

// Fraction of draws whose delay exceeds i (the complement of the growth
// set), computed from precomputed delays.
double growth_set_fraction(const std::vector<std::optional<int>>& delays, int i);

struct PathNormReport {
  double T = 0.0;
  double x_norm_sq = 0.0;       // int ||u||_{H^s}^2 + ||du/dt||_{dual}^2 dt
  double kinetic_part = 0.0;    // int ||u||_{H^s}^2 dt
  double dual_part = 0.0;       // int ||du/dt||_{dual}^2 dt
  double l1l1 = 0.0;            // int int |u| e^{beta|u|^2} dx dt
  double x_ratio = 0.0;         // x_norm_sq / T
  double l1l1_ratio = 0.0;      // l1l1 / T
};

// Path-space norms of a stored trajectory on [0, T]. The time derivative
// comes from the equation's right-hand side; the sum-space norm of
// du/dt uses the two-term witness (dispersive part measured in
// Hdot^{s-alpha}, projected nonlinearity in L^2).
PathNormReport path_norm_report(const Trajectory& traj, double T, double alpha,
                                double beta, double s);

// Tail fraction mu(||u||_{H^s} > K) with an across-path standard error.
ObservableReport large_data_tail(const MeasureSample& ms, double s, double K);

}  // namespace fdnl
