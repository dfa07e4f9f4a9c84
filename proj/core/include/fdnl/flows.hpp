#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdnl/torus.hpp"

namespace fdnl {

enum class Scheme { strang, lie, picard };

Scheme scheme_from_string(const std::string& s);
std::string to_string(Scheme s);

// Hamiltonian flow parameters: i du/dt = (-Delta)^alpha u + 2 beta u exp(beta|u|^2).
struct FlowConfig {
  double alpha = 1.0;   // > 0
  double beta = 0.5;    // > 0
  double s = 2.0;       // regularity index used for well-posedness radii
  double dt = 1e-3;     // > 0
  Scheme scheme = Scheme::strang;
  // Local-existence constants T(s,R) = c0 / (beta exp(C0 beta R^2)).
  double c0 = 0.1;
  double C0 = 2.0;
  int picard_max_iters = 64;
  double picard_tol = 1e-12;

  void validate() const;
};

// Conserved functionals of the flow.
double mass(const SpectralField& u);
double energy(const SpectralField& u, double alpha, double beta);

// Guaranteed contraction window for data with ||u0||_{H^s} <= R.
double local_existence_time(double s, double R, double beta, double c0 = 0.1,
                            double C0 = 2.0);

struct Trajectory {
  std::vector<double> times;          // uniform grid including t = 0
  std::vector<SpectralField> fields;  // state at each stored time
  // Provenance for reports.
  std::string config_hash;
  std::uint64_t seed = 0;
  // Mass moved out of the box by the per-step projection, accumulated.
  double projected_mass_total = 0.0;
  double projected_mass_max_step = 0.0;
};

struct PicardResult {
  Trajectory traj;
  int iterations = 0;
  std::vector<double> distances;  // sup-in-time H^s gap per iteration
  double worst_ratio = 0.0;       // max consecutive distance ratio seen
};

// Fixed-point Duhamel iteration on [0, T], T within the local window.
// Sample grid spacing = cfg.dt (last step shortened to land on T).
// Throws RuntimeError when iterates stop contracting, reporting the
// observed ratio in the message.
PicardResult picard_solve(const SpectralField& u0, double T, const FlowConfig& cfg);

// Time integrator (Strang by default; Scheme::lie gives the first-order
// splitting, Scheme::picard chains contraction windows as an oracle).
// Stores every store_stride-th step plus the final state. Throws
// RuntimeError naming the first time a non-finite value appears.
Trajectory evolve(const SpectralField& u0, double t_final, const FlowConfig& cfg,
                  int store_stride = 1);

// Streaming variant: calls observe(t, u) at t = 0, every store_stride-th
// step, and t_final, without retaining fields. `stats` (optional)
// receives the projection bookkeeping.
void evolve_observe(const SpectralField& u0, double t_final, const FlowConfig& cfg,
                    int store_stride,
                    const std::function<void(double, const SpectralField&)>& observe,
                    Trajectory* stats = nullptr);

// Smallest i >= 0 such that ||u(t)||_{H^r} <= 2 envelope(1 + i + log(1+|t|))
// at every stored time; empty when no i <= i_max works.
std::optional<int> growth_delay(const Trajectory& traj, double r,
                                const std::function<double(double)>& envelope,
                                int i_max = 64);

}  // namespace fdnl
