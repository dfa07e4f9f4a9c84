#pragma once

#include <filesystem>

#include <json.hpp>

#include "fdnl/measure.hpp"
#include "fdnl/oracles.hpp"
#include "fdnl/sde.hpp"

namespace fdnl {

using ordered_json = nlohmann::ordered_json;

// Experiment document with sections torus, flow, dissipator, noise, run,
// report, plus the optional per-command sections sweep and verify.
// Unknown sections or keys are rejected (ConfigError). Precedence:
// command-line flags > config file > defaults.
struct ExperimentConfig {
  // torus
  int d = 2, N = 8, q = 4;
  // flow
  double alpha = 1.0, beta = 0.5, s = 2.0, dt = 1e-3;
  Scheme scheme = Scheme::strang;
  double c0 = 0.1, C0 = 2.0;
  int picard_max_iters = 64;
  double picard_tol = 1e-12;
  // dissipator
  DissipatorKind kind = DissipatorKind::strong;
  double g_c = 1.0, g_lambda = 8.0;
  // noise
  double p = 2.0, sigma = 0.1;
  int scale_n = 1;
  // run
  double horizon = 200.0;
  std::uint64_t ensemble = 4;
  std::uint64_t seed = 12345;
  int thinning = 100;
  double burn_in = 0.0;
  unsigned threads = 1;
  // report
  std::vector<double> r_list{1.5};
  std::string output_dir = "out";
  int checkpoint_stride = 0;  // 0 = terminal checkpoints only
  // sweep (optional section)
  std::string sweep_axis = "sigma";  // sigma | n_modes | scale_n
  std::vector<double> sweep_values{};
  // verify (optional section)
  std::uint64_t verify_trials = 500;
  std::uint64_t cordoba_trials = 100;
  std::vector<double> gammas{0.25, 0.5, 0.75, 1.0};
  double field_amplitude = 0.7;
  double field_decay = 0.0;  // 0 = derive d/2 + s + 1
  double phi_b = 0.5, phi_c = 1.0;

  static ExperimentConfig from_json(const ordered_json& j);
  static ExperimentConfig from_file(const std::filesystem::path& p);
  ordered_json to_json() const;
  // SHA-256 of the canonical serialization.
  std::string hash() const;
  void validate() const;

  TorusSpec torus() const;
  FlowConfig flow() const;
  DissipatorSpec dissipator() const;
  NoiseSpec noise() const;
  SdeConfig sde() const;
  RandomFieldLaw field_law() const;
};

ordered_json to_json(const ObservableReport& r);
ordered_json to_json(const PathNormReport& r);

}  // namespace fdnl
