#include "fdnl/config.hpp"

#include <set>

#include "fdnl/util.hpp"

namespace fdnl {

namespace {

void check_keys(const ordered_json& j, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("config: section '" + section + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() + "' in section '" + section + "'");
}

template <typename T>
T get_or(const ordered_json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config: key '" + key + "' has the wrong type");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const ordered_json& doc) {
  // A manifest embeds the resolved config under "config"; accept both
  // shapes so replaying a manifest needs no editing.
  const ordered_json& j = doc.contains("config") ? doc.at("config") : doc;

  static const std::set<std::string> sections = {"torus", "flow", "dissipator",
                                                 "noise", "run",  "report",
                                                 "sweep", "verify"};
  if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!sections.count(it.key()))
      throw ConfigError("config: unknown section '" + it.key() + "'");

  ExperimentConfig c;
  if (j.contains("torus")) {
    const auto& t = j.at("torus");
    check_keys(t, "torus", {"d", "N", "q"});
    c.d = get_or(t, "d", c.d);
    c.N = get_or(t, "N", c.N);
    c.q = get_or(t, "q", c.q);
  }
  if (j.contains("flow")) {
    const auto& f = j.at("flow");
    check_keys(f, "flow",
               {"alpha", "beta", "s", "dt", "scheme", "c0", "C0",
                "picard_max_iters", "picard_tol"});
    c.alpha = get_or(f, "alpha", c.alpha);
    c.beta = get_or(f, "beta", c.beta);
    c.s = get_or(f, "s", c.s);
    c.dt = get_or(f, "dt", c.dt);
    c.scheme = scheme_from_string(get_or<std::string>(f, "scheme", to_string(c.scheme)));
    c.c0 = get_or(f, "c0", c.c0);
    c.C0 = get_or(f, "C0", c.C0);
    c.picard_max_iters = get_or(f, "picard_max_iters", c.picard_max_iters);
    c.picard_tol = get_or(f, "picard_tol", c.picard_tol);
  }
  if (j.contains("dissipator")) {
    const auto& d = j.at("dissipator");
    check_keys(d, "dissipator", {"kind", "g_c", "g_lambda"});
    c.kind = dissipator_kind_from_string(get_or<std::string>(d, "kind", to_string(c.kind)));
    c.g_c = get_or(d, "g_c", c.g_c);
    c.g_lambda = get_or(d, "g_lambda", c.g_lambda);
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    check_keys(n, "noise", {"p", "sigma", "scale_n"});
    c.p = get_or(n, "p", c.p);
    c.sigma = get_or(n, "sigma", c.sigma);
    c.scale_n = get_or(n, "scale_n", c.scale_n);
  }
  if (j.contains("run")) {
    const auto& r = j.at("run");
    check_keys(r, "run",
               {"horizon", "ensemble", "seed", "thinning", "burn_in", "threads"});
    c.horizon = get_or(r, "horizon", c.horizon);
    c.ensemble = get_or(r, "ensemble", c.ensemble);
    c.seed = get_or(r, "seed", c.seed);
    c.thinning = get_or(r, "thinning", c.thinning);
    c.burn_in = get_or(r, "burn_in", c.burn_in);
    c.threads = get_or(r, "threads", c.threads);
  }
  if (j.contains("report")) {
    const auto& r = j.at("report");
    check_keys(r, "report", {"r_list", "output_dir", "checkpoint_stride"});
    c.r_list = get_or(r, "r_list", c.r_list);
    c.output_dir = get_or(r, "output_dir", c.output_dir);
    c.checkpoint_stride = get_or(r, "checkpoint_stride", c.checkpoint_stride);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    check_keys(s, "sweep", {"axis", "values"});
    c.sweep_axis = get_or(s, "axis", c.sweep_axis);
    c.sweep_values = get_or(s, "values", c.sweep_values);
  }
  if (j.contains("verify")) {
    const auto& v = j.at("verify");
    check_keys(v, "verify",
               {"trials", "cordoba_trials", "gammas", "field_amplitude",
                "field_decay", "phi_b", "phi_c"});
    c.verify_trials = get_or(v, "trials", c.verify_trials);
    c.cordoba_trials = get_or(v, "cordoba_trials", c.cordoba_trials);
    c.gammas = get_or(v, "gammas", c.gammas);
    c.field_amplitude = get_or(v, "field_amplitude", c.field_amplitude);
    c.field_decay = get_or(v, "field_decay", c.field_decay);
    c.phi_b = get_or(v, "phi_b", c.phi_b);
    c.phi_c = get_or(v, "phi_c", c.phi_c);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& p) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(p));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: cannot parse " + p.string() + ": " + e.what());
  }
  return from_json(j);
}

ordered_json ExperimentConfig::to_json() const {
  ordered_json j;
  j["torus"] = {{"d", d}, {"N", N}, {"q", q}};
  j["flow"] = {{"alpha", alpha},
               {"beta", beta},
               {"s", s},
               {"dt", dt},
               {"scheme", to_string(scheme)},
               {"c0", c0},
               {"C0", C0},
               {"picard_max_iters", picard_max_iters},
               {"picard_tol", picard_tol}};
  j["dissipator"] = {{"kind", to_string(kind)}, {"g_c", g_c}, {"g_lambda", g_lambda}};
  j["noise"] = {{"p", p}, {"sigma", sigma}, {"scale_n", scale_n}};
  j["run"] = {{"horizon", horizon}, {"ensemble", ensemble},   {"seed", seed},
              {"thinning", thinning}, {"burn_in", burn_in}, {"threads", threads}};
  j["report"] = {{"r_list", r_list},
                 {"output_dir", output_dir},
                 {"checkpoint_stride", checkpoint_stride}};
  j["sweep"] = {{"axis", sweep_axis}, {"values", sweep_values}};
  j["verify"] = {{"trials", verify_trials},
                 {"cordoba_trials", cordoba_trials},
                 {"gammas", gammas},
                 {"field_amplitude", field_amplitude},
                 {"field_decay", field_decay},
                 {"phi_b", phi_b},
                 {"phi_c", phi_c}};
  return j;
}

std::string ExperimentConfig::hash() const { return sha256_hex(to_json().dump()); }

void ExperimentConfig::validate() const {
  torus().validate();
  flow().validate();
  dissipator().validate();
  if (!(sigma >= 0.0)) throw ConfigError("noise: sigma must be >= 0");
  if (scale_n < 1) throw ConfigError("noise: scale_n must be >= 1");
  if (!(horizon > 0.0)) throw ConfigError("run: horizon must be > 0");
  if (ensemble < 1) throw ConfigError("run: ensemble must be >= 1");
  if (thinning < 1) throw ConfigError("run: thinning must be >= 1");
  if (burn_in < 0.0 || burn_in >= 1.0) throw ConfigError("run: burn_in must be in [0, 1)");
  if (threads < 1) throw ConfigError("run: threads must be >= 1");
  for (double r : r_list)
    if (!(r >= 0.0)) throw ConfigError("report: r_list entries must be >= 0");
  if (output_dir.empty()) throw ConfigError("report: output_dir must not be empty");
  if (checkpoint_stride < 0) throw ConfigError("report: checkpoint_stride must be >= 0");
  if (sweep_axis != "sigma" && sweep_axis != "n_modes" && sweep_axis != "scale_n")
    throw ConfigError("sweep: axis must be sigma, n_modes or scale_n");
  if (verify_trials < 2) throw ConfigError("verify: trials must be >= 2");
  if (cordoba_trials < 1) throw ConfigError("verify: cordoba_trials must be >= 1");
  for (double gmm : gammas)
    if (!(gmm > 0.0) || gmm > 1.25)
      throw ConfigError("verify: gammas must lie in (0, 1.25]");
  if (!(field_amplitude > 0.0)) throw ConfigError("verify: field_amplitude must be > 0");
  if (field_decay < 0.0) throw ConfigError("verify: field_decay must be >= 0");
  if (!(phi_b >= 0.0) || !(phi_c > 0.0)) throw ConfigError("verify: phi parameters invalid");
}

TorusSpec ExperimentConfig::torus() const { return TorusSpec{d, N, q}; }

FlowConfig ExperimentConfig::flow() const {
  FlowConfig f;
  f.alpha = alpha;
  f.beta = beta;
  f.s = s;
  f.dt = dt;
  f.scheme = scheme;
  f.c0 = c0;
  f.C0 = C0;
  f.picard_max_iters = picard_max_iters;
  f.picard_tol = picard_tol;
  return f;
}

DissipatorSpec ExperimentConfig::dissipator() const {
  DissipatorSpec ds;
  ds.kind = kind;
  ds.alpha = alpha;
  ds.beta = beta;
  ds.s = s;
  ds.g_c = g_c;
  ds.g_lambda = g_lambda;
  return ds;
}

NoiseSpec ExperimentConfig::noise() const {
  return make_default_noise(torus(), p, sigma, scale_n);
}

SdeConfig ExperimentConfig::sde() const {
  SdeConfig sc;
  sc.torus = torus();
  sc.flow = flow();
  sc.diss = dissipator();
  sc.noise = noise();
  sc.master_seed = seed;
  return sc;
}

RandomFieldLaw ExperimentConfig::field_law() const {
  RandomFieldLaw law;
  law.cutoff = N;
  law.decay = field_decay > 0.0 ? field_decay : 0.5 * d + s + 1.0;
  law.amplitude = field_amplitude;
  law.complex_valued = true;
  law.seed = seed;
  return law;
}

ordered_json to_json(const ObservableReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["estimate"] = r.estimate;
  j["std_error"] = r.std_error;
  j["samples"] = r.samples;
  if (r.target) j["target"] = *r.target;
  if (r.tolerance) j["tolerance"] = *r.tolerance;
  j["one_sided"] = r.one_sided;
  if (r.pass) j["pass"] = *r.pass;
  ordered_json extra = ordered_json::object();
  for (const auto& [k, v] : r.extra) extra[k] = v;
  j["extra"] = extra;
  return j;
}

ordered_json to_json(const PathNormReport& r) {
  ordered_json j;
  j["T"] = r.T;
  j["x_norm_sq"] = r.x_norm_sq;
  j["kinetic_part"] = r.kinetic_part;
  j["dual_part"] = r.dual_part;
  j["l1l1"] = r.l1l1;
  j["x_ratio"] = r.x_ratio;
  j["l1l1_ratio"] = r.l1l1_ratio;
  return j;
}

}  // namespace fdnl
