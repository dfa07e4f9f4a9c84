// Command-line driver for the spectral simulation laboratory.
//
// Subcommands: evolve, sde, stationary, sweep, growth, verify.
// Every run writes its artifacts atomically into --out together with a
// manifest.json that embeds the fully resolved configuration and the
// SHA-256 of each output, so any manifest can be replayed bit-identically
// by passing it back through --config.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error, 3 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdnl/checkpoint.hpp"
#include "fdnl/config.hpp"
#include "fdnl/dissipation.hpp"
#include "fdnl/flows.hpp"
#include "fdnl/measure.hpp"
#include "fdnl/oracles.hpp"
#include "fdnl/sde.hpp"
#include "fdnl/spectral_ops.hpp"
#include "fdnl/util.hpp"

namespace fs = std::filesystem;
using fdnl::ExperimentConfig;
using fdnl::fmt17;
using fdnl::ordered_json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<int> scale_n;
  std::optional<double> horizon;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path,
                  "JSON configuration (a manifest.json works too)");
  cmd->add_option("--out", f.out_dir, "output directory (default: config report.output_dir)");
  cmd->add_option("--seed", f.seed, "master seed override");
  cmd->add_option("--threads", f.threads, "worker thread override");
  cmd->add_option("--scale-n", f.scale_n, "noise channel-count scaling override");
  cmd->add_option("--horizon", f.horizon, "time horizon override");
}

ExperimentConfig resolve_config(const CommonFlags& f) {
  ExperimentConfig cfg = f.config_path.empty()
                             ? ExperimentConfig{}
                             : ExperimentConfig::from_file(f.config_path);
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (f.scale_n) cfg.scale_n = *f.scale_n;
  if (f.horizon) cfg.horizon = *f.horizon;
  if (!f.out_dir.empty()) cfg.output_dir = f.out_dir;
  cfg.validate();
  return cfg;
}

fdnl::SpectralField initial_field(const ExperimentConfig& cfg, const std::string& init_path) {
  if (init_path.empty()) return fdnl::SpectralField::zero(cfg.torus());
  fdnl::SpectralField u = fdnl::load_field(init_path, cfg.q);
  if (u.spec.d != cfg.d || u.spec.N != cfg.N)
    throw fdnl::ConfigError("initial checkpoint has d=" + std::to_string(u.spec.d) +
                            ", N=" + std::to_string(u.spec.N) + " but the config says d=" +
                            std::to_string(cfg.d) + ", N=" + std::to_string(cfg.N));
  return u;
}

// Writes every (name, bytes) pair atomically into dir, then a manifest
// describing the run and hashing each artifact.
void emit_outputs(const fs::path& dir, const std::string& command,
                  const ExperimentConfig& cfg,
                  const std::vector<std::pair<std::string, std::string>>& files,
                  const ordered_json& notes) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw fdnl::IoError("cannot create output directory " + dir.string());
  ordered_json outputs = ordered_json::object();
  for (const auto& [name, bytes] : files) {
    fdnl::atomic_write_file(dir / name, bytes);
    outputs[name] = fdnl::sha256_hex(bytes);
  }
  ordered_json manifest;
  manifest["format"] = "fdnl-manifest/1";
  manifest["command"] = command;
  manifest["config"] = cfg.to_json();
  manifest["config_hash"] = cfg.hash();
  manifest["outputs"] = outputs;
  manifest["notes"] = notes;
  fdnl::atomic_write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

double find_note(const fdnl::ObservableReport& r, const std::string& key) {
  for (const auto& [k, v] : r.extra)
    if (k == key) return v;
  throw fdnl::RuntimeError("report '" + r.name + "' lacks note '" + key + "'");
}

void print_report(const fdnl::ObservableReport& r) {
  std::cout << "  " << r.name << ": " << fmt17(r.estimate) << " +/- " << fmt17(r.std_error);
  if (r.target) std::cout << " (target " << fmt17(*r.target) << ")";
  if (r.pass) std::cout << (*r.pass ? " [ok]" : " [VIOLATED]");
  std::cout << "\n";
}

fdnl::BkParams bk_params(const ExperimentConfig& cfg) {
  fdnl::BkParams bp;
  bp.horizon = cfg.horizon;
  bp.thin_stride = cfg.thinning;
  bp.burn_in_frac = cfg.burn_in;
  bp.paths = cfg.ensemble;
  bp.threads = cfg.threads;
  return bp;
}

// ---------------------------------------------------------------- evolve

int cmd_evolve(const CommonFlags& flags, const std::string& init_path) {
  ExperimentConfig cfg = resolve_config(flags);
  const fdnl::SpectralField u0 = initial_field(cfg, init_path);
  const fdnl::FlowConfig flow = cfg.flow();

  std::ostringstream csv;
  csv << "t,mass,energy";
  for (double r : cfg.r_list) csv << ",h_" << fmt17(r);
  csv << "\n";

  std::vector<std::pair<std::string, std::string>> files;
  fdnl::SpectralField last = u0;
  long rows = 0, snapshots = 0;
  fdnl::Trajectory stats;
  fdnl::evolve_observe(u0, cfg.horizon, flow, cfg.thinning,
                       [&](double t, const fdnl::SpectralField& u) {
                         csv << fmt17(t) << ',' << fmt17(fdnl::mass(u)) << ','
                             << fmt17(fdnl::energy(u, flow.alpha, flow.beta));
                         for (double r : cfg.r_list)
                           csv << ',' << fmt17(fdnl::sobolev_norm(u, r));
                         csv << "\n";
                         if (cfg.checkpoint_stride > 0 && rows % cfg.checkpoint_stride == 0) {
                           files.emplace_back("state_" + std::to_string(snapshots) + ".ckpt",
                                              fdnl::encode_field(u));
                           ++snapshots;
                         }
                         last = u;
                         ++rows;
                       },
                       &stats);

  files.emplace_back("trajectory.csv", csv.str());
  files.emplace_back("final.ckpt", fdnl::encode_field(last));
  ordered_json notes;
  notes["rows"] = rows;
  notes["projected_mass_total"] = stats.projected_mass_total;
  notes["projected_mass_max_step"] = stats.projected_mass_max_step;
  emit_outputs(cfg.output_dir, "evolve", cfg, files, notes);
  std::cout << "evolve: t_final=" << fmt17(cfg.horizon) << " rows=" << rows
            << " final_mass=" << fmt17(fdnl::mass(last)) << " -> " << cfg.output_dir << "\n";
  return 0;
}

// ------------------------------------------------------------------- sde

int cmd_sde(const CommonFlags& flags, const std::string& init_path, bool linear_only) {
  ExperimentConfig cfg = resolve_config(flags);
  fdnl::SdeConfig sc = cfg.sde();
  sc.linear_only = linear_only;
  const fdnl::SpectralField u0 = initial_field(cfg, init_path);
  const fdnl::DissipatorSpec diss = cfg.dissipator();

  const std::size_t n = (std::size_t)cfg.ensemble;
  std::vector<fdnl::SpectralField> finals(n, fdnl::SpectralField::zero(sc.torus));
  fdnl::parallel_for(n, cfg.threads, [&](std::size_t i) {
    fdnl::SpectralField last = u0;
    fdnl::run_sde_path(sc, u0, cfg.horizon, (std::uint64_t)i,
                       [&](std::uint64_t, double, const fdnl::SpectralField& u) { last = u; });
    finals[i] = last;
  });

  std::ostringstream csv;
  csv << "path,mass,h_s,mcal,ecal\n";
  std::vector<std::pair<std::string, std::string>> files;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = finals[i];
    csv << i << ',' << fmt17(fdnl::mass(u)) << ',' << fmt17(fdnl::sobolev_norm(u, cfg.s))
        << ',' << fmt17(fdnl::mcal(diss, u)) << ',' << fmt17(fdnl::ecal(diss, u)) << "\n";
    files.emplace_back("path_" + std::to_string(i) + ".ckpt", fdnl::encode_field(u));
  }
  files.emplace_back("ensemble.csv", csv.str());
  ordered_json notes;
  notes["paths"] = n;
  notes["linear_only"] = linear_only;
  notes["A0"] = fdnl::A_s(sc.torus, sc.noise, 0.0);
  emit_outputs(cfg.output_dir, "sde", cfg, files, notes);
  std::cout << "sde: paths=" << n << " horizon=" << fmt17(cfg.horizon) << " -> "
            << cfg.output_dir << "\n";
  return 0;
}

// ------------------------------------------------------------ stationary

int cmd_stationary(const CommonFlags& flags, double inv_time) {
  ExperimentConfig cfg = resolve_config(flags);
  const fdnl::SdeConfig sc = cfg.sde();
  const fdnl::MeasureSample ms = fdnl::bk_sample(sc, bk_params(cfg));

  std::vector<fdnl::ObservableReport> reports;
  reports.push_back(fdnl::check_stationary_mass(ms, sc));
  reports.push_back(fdnl::check_stationary_energy(ms, sc));
  if (inv_time > 0.0) {
    auto inv = fdnl::invariance_test(ms, cfg.flow(), inv_time, cfg.r_list, cfg.threads);
    reports.insert(reports.end(), inv.begin(), inv.end());
  }

  ordered_json doc;
  doc["draws"] = ms.draws.size();
  doc["reports"] = ordered_json::array();
  for (const auto& r : reports) doc["reports"].push_back(fdnl::to_json(r));

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("stationary.json", doc.dump(2) + "\n");
  ordered_json notes;
  notes["draws"] = ms.draws.size();
  notes["invariance_time"] = inv_time;
  emit_outputs(cfg.output_dir, "stationary", cfg, files, notes);

  std::cout << "stationary: draws=" << ms.draws.size() << "\n";
  for (const auto& r : reports) print_report(r);
  bool ok = true;
  for (const auto& r : reports)
    if (r.pass && !*r.pass) ok = false;
  if (!ok) throw fdnl::RuntimeError("stationary: at least one check failed");
  return 0;
}

// ----------------------------------------------------------------- sweep

int cmd_sweep(const CommonFlags& flags) {
  ExperimentConfig base = resolve_config(flags);
  if (base.sweep_values.empty())
    throw fdnl::ConfigError("sweep: the config must list sweep.values");

  std::ostringstream csv;
  csv << "axis,value,mcal_mean,mcal_se,mcal_target,ecal_mean,ecal_se,"
         "energy_scale,energy_ratio\n";
  for (double v : base.sweep_values) {
    ExperimentConfig cfg = base;
    if (base.sweep_axis == "sigma") {
      cfg.sigma = v;
    } else if (base.sweep_axis == "n_modes") {
      cfg.N = (int)std::llround(v);
    } else {
      cfg.scale_n = (int)std::llround(v);
    }
    cfg.validate();
    const fdnl::SdeConfig sc = cfg.sde();
    const fdnl::MeasureSample ms = fdnl::bk_sample(sc, bk_params(cfg));
    const auto m = fdnl::check_stationary_mass(ms, sc);
    const auto e = fdnl::check_stationary_energy(ms, sc);
    csv << base.sweep_axis << ',' << fmt17(v) << ',' << fmt17(m.estimate) << ','
        << fmt17(m.std_error) << ',' << fmt17(m.target.value_or(0.0)) << ','
        << fmt17(e.estimate) << ',' << fmt17(e.std_error) << ','
        << fmt17(find_note(e, "bound_scale")) << ',' << fmt17(find_note(e, "ratio"))
        << "\n";
    std::cout << "sweep " << base.sweep_axis << "=" << fmt17(v) << ": mcal="
              << fmt17(m.estimate) << " target=" << fmt17(m.target.value_or(0.0))
              << " ratio=" << fmt17(find_note(e, "ratio")) << "\n";
  }

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("sweep.csv", csv.str());
  ordered_json notes;
  notes["axis"] = base.sweep_axis;
  notes["points"] = base.sweep_values.size();
  emit_outputs(base.output_dir, "sweep", base, files, notes);
  return 0;
}

// ---------------------------------------------------------------- growth

int cmd_growth(const CommonFlags& flags, double r_opt, int i_max, double dt_override,
               int sample_stride, double g_horizon) {
  ExperimentConfig cfg = resolve_config(flags);
  const fdnl::SdeConfig sc = cfg.sde();
  const fdnl::MeasureSample ms = fdnl::bk_sample(sc, bk_params(cfg));
  const double r = r_opt > 0.0 ? r_opt : cfg.s;
  const double horizon = g_horizon > 0.0 ? g_horizon : cfg.horizon;

  const auto delays = fdnl::growth_delays(ms, cfg.flow(), cfg.dissipator(), r, horizon,
                                          dt_override, sample_stride, i_max, cfg.threads);
  std::size_t escapes = 0;
  for (const auto& d : delays)
    if (!d) ++escapes;

  std::ostringstream csv;
  csv << "i,fraction_exceeding\n";
  for (int i = 0; i <= i_max; ++i) {
    double f = fdnl::growth_set_fraction(delays, i);
    csv << i << ',' << fmt17(f) << "\n";
    std::cout << "growth i=" << i << ": fraction_exceeding=" << fmt17(f) << "\n";
  }

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("growth.csv", csv.str());
  ordered_json notes;
  notes["draws"] = delays.size();
  notes["escapes"] = escapes;
  notes["r"] = r;
  notes["flow_horizon"] = horizon;
  notes["dt_override"] = dt_override;
  emit_outputs(cfg.output_dir, "growth", cfg, files, notes);
  return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const CommonFlags& flags) {
  ExperimentConfig cfg = resolve_config(flags);
  const fdnl::TorusSpec torus = cfg.torus();
  ordered_json doc;

  // Product/composition estimates behind the local theory.
  const fdnl::RandomFieldLaw law = cfg.field_law();
  const fdnl::LemsobReport lr =
      fdnl::check_lemsob(law, torus, cfg.s, cfg.beta, cfg.verify_trials);
  doc["lemsob"] = {{"trials", lr.trials},       {"C1", lr.C1},
                   {"C2", lr.C2},               {"C3", lr.C3},
                   {"C1_half", lr.C1_half},     {"C2_half", lr.C2_half},
                   {"C3_half", lr.C3_half}};
  std::cout << "lemsob: C1=" << fmt17(lr.C1) << " C2=" << fmt17(lr.C2)
            << " C3=" << fmt17(lr.C3) << " (trials=" << lr.trials << ")\n";

  // Sign of <f e^{|f|^2}, (-Delta)^gamma f> against the squared seminorm
  // of e^{|f|^2 / 2}, over real random fields.
  fdnl::RandomFieldLaw real_law = law;
  real_law.complex_valued = false;
  doc["cordoba"] = ordered_json::array();
  for (double gmm : cfg.gammas) {
    double min_gap = 0.0, mean_gap = 0.0, max_route_diff = 0.0;
    bool first = true;
    for (std::uint64_t j = 0; j < cfg.cordoba_trials; ++j) {
      fdnl::SpectralField f = fdnl::sample_field(real_law, torus, j);
      const fdnl::CordobaResult cr = fdnl::check_cordoba(f, gmm);
      if (first || cr.gap < min_gap) min_gap = cr.gap;
      first = false;
      mean_gap += cr.gap / (double)cfg.cordoba_trials;
      if (cr.has_by_parts)
        max_route_diff = std::max(max_route_diff, std::abs(cr.gap - cr.gap_by_parts));
    }
    doc["cordoba"].push_back({{"gamma", gmm},
                              {"min_gap", min_gap},
                              {"mean_gap", mean_gap},
                              {"max_route_diff", max_route_diff}});
    std::cout << "cordoba gamma=" << fmt17(gmm) << ": min_gap=" << fmt17(min_gap)
              << " mean_gap=" << fmt17(mean_gap) << "\n";
  }

  // Young pairing for the convex gauge built from v -> c v f^{-1}(v).
  const double v_max = 10.0;
  const fdnl::PhiFunction phi = fdnl::phi_build(cfg.phi_b, cfg.phi_c, v_max);
  double worst_young = 0.0, min_second_diff = 0.0;
  const int grid = 50;
  for (int a = 0; a <= grid; ++a) {
    const double x = v_max * a / grid;
    for (int b = 0; b <= grid; ++b) {
      const double y = v_max * b / grid;
      worst_young = std::max(worst_young,
                             x * y - fdnl::phi_eval(phi, x) - fdnl::phi_star_eval(phi, y));
    }
  }
  for (std::size_t i = 1; i + 1 < phi.v_grid.size(); ++i) {
    const double second =
        phi.phi_vals[i + 1] - 2.0 * phi.phi_vals[i] + phi.phi_vals[i - 1];
    min_second_diff = std::min(min_second_diff, second);
  }
  doc["phi"] = {{"b", cfg.phi_b},
                {"c", cfg.phi_c},
                {"v_max", v_max},
                {"young_max_violation", worst_young},
                {"convexity_min_second_diff", min_second_diff}};
  std::cout << "phi: young_max_violation=" << fmt17(worst_young) << "\n";

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("verify.json", doc.dump(2) + "\n");
  ordered_json notes;
  notes["trials"] = cfg.verify_trials;
  notes["cordoba_trials"] = cfg.cordoba_trials;
  emit_outputs(cfg.output_dir, "verify", cfg, files, notes);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fdnl: spectral Galerkin laboratory for a fractional dispersive flow "
      "with exponential nonlinearity, its damped-driven stochastic variants, "
      "and the invariant-measure diagnostics built on them"};
  app.require_subcommand(1);

  CommonFlags evolve_flags, sde_flags, stat_flags, sweep_flags, growth_flags, verify_flags;
  std::string evolve_init, sde_init;
  bool sde_linear_only = false;
  double inv_time = 0.1;
  double growth_r = 0.0, growth_dt = 0.01, growth_horizon = 0.0;
  int growth_imax = 8, growth_stride = 10;

  CLI::App* c_evolve = app.add_subcommand("evolve", "deterministic flow; trajectory.csv");
  add_common(c_evolve, evolve_flags);
  c_evolve->add_option("--init", evolve_init, "initial state checkpoint (default: zero field)");

  CLI::App* c_sde = app.add_subcommand("sde", "damped-driven ensemble; per-path checkpoints");
  add_common(c_sde, sde_flags);
  c_sde->add_option("--init", sde_init, "initial state checkpoint (default: zero field)");
  c_sde->add_flag("--linear-only", sde_linear_only, "drop the drift nonlinearity (diagnostic)");

  CLI::App* c_stat = app.add_subcommand("stationary",
                                        "time-averaged sampling; stationarity checks");
  add_common(c_stat, stat_flags);
  c_stat->add_option("--inv-time", inv_time, "flow time for the invariance test (0 skips)");

  CLI::App* c_sweep = app.add_subcommand("sweep", "repeat stationary over sweep.values");
  add_common(c_sweep, sweep_flags);

  CLI::App* c_growth = app.add_subcommand("growth", "growth-delay census over the sample");
  add_common(c_growth, growth_flags);
  c_growth->add_option("--r", growth_r, "Sobolev index tracked (default: flow s)");
  c_growth->add_option("--i-max", growth_imax, "largest delay index tried");
  c_growth->add_option("--dt-override", growth_dt, "coarser dt for the long flow runs");
  c_growth->add_option("--sample-stride", growth_stride, "steps between envelope checks");
  c_growth->add_option("--flow-horizon", growth_horizon,
                       "length of each deterministic run (default: run horizon)");

  CLI::App* c_verify = app.add_subcommand("verify", "inequality oracles; verify.json");
  add_common(c_verify, verify_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_evolve->parsed()) return cmd_evolve(evolve_flags, evolve_init);
    if (c_sde->parsed()) return cmd_sde(sde_flags, sde_init, sde_linear_only);
    if (c_stat->parsed()) return cmd_stationary(stat_flags, inv_time);
    if (c_sweep->parsed()) return cmd_sweep(sweep_flags);
    if (c_growth->parsed())
      return cmd_growth(growth_flags, growth_r, growth_imax, growth_dt, growth_stride,
                        growth_horizon);
    if (c_verify->parsed()) return cmd_verify(verify_flags);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const fdnl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const fdnl::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const fdnl::RuntimeError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
