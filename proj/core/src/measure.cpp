#include "fdnl/measure.hpp"

#include <algorithm>
#include <cmath>

#include "fdnl/spectral_ops.hpp"
#include "fdnl/util.hpp"

namespace fdnl {

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe flat_reduce(const std::vector<double>& xs) {
  MeanSe r;
  if (xs.empty()) return r;
  for (double x : xs) r.mean += x;
  r.mean /= (double)xs.size();
  if (xs.size() > 1) {
    double var = 0.0;
    for (double x : xs) var += (x - r.mean) * (x - r.mean);
    var /= double(xs.size() - 1);
    r.se = std::sqrt(var / (double)xs.size());
  }
  return r;
}

// Across-path means when several paths exist (independent replicas),
// batch means on a single autocorrelated path otherwise.
MeanSe grouped_reduce(const std::vector<double>& xs,
                      const std::vector<std::uint32_t>& path_of, std::uint64_t paths) {
  if (xs.empty()) return {};
  if (paths >= 2) {
    std::vector<double> sum(paths, 0.0);
    std::vector<std::size_t> cnt(paths, 0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sum[path_of[i]] += xs[i];
      ++cnt[path_of[i]];
    }
    std::vector<double> means;
    for (std::size_t p = 0; p < paths; ++p)
      if (cnt[p] > 0) means.push_back(sum[p] / (double)cnt[p]);
    MeanSe r = flat_reduce(means);
    return r;
  }
  std::size_t blocks = std::min<std::size_t>(16, xs.size());
  std::vector<double> bm(blocks, 0.0);
  std::vector<std::size_t> bc(blocks, 0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t b = i * blocks / xs.size();
    bm[b] += xs[i];
    ++bc[b];
  }
  for (std::size_t b = 0; b < blocks; ++b) bm[b] /= std::max<std::size_t>(1, bc[b]);
  return flat_reduce(bm);
}

}  // namespace

MeasureSample bk_sample(const SdeConfig& cfg, const BkParams& params) {
  cfg.validate();
  if (!(params.horizon > 0.0)) throw ConfigError("bk_sample: horizon must be > 0");
  if (params.thin_stride < 1) throw ConfigError("bk_sample: thin_stride must be >= 1");
  if (params.paths < 1) throw ConfigError("bk_sample: paths must be >= 1");
  if (params.burn_in_frac < 0.0 || params.burn_in_frac >= 1.0)
    throw ConfigError("bk_sample: burn_in_frac must be in [0, 1)");

  const long steps = std::max(1L, (long)std::ceil(params.horizon / cfg.flow.dt - 1e-9));
  const long burn = (long)std::floor(params.burn_in_frac * steps);
  const SpectralField u0 = SpectralField::zero(cfg.torus);

  std::vector<std::vector<SpectralField>> per_path(params.paths);
  parallel_for(params.paths, params.threads, [&](std::size_t p) {
    auto& bucket = per_path[p];
    run_sde_path(cfg, u0, params.horizon, (std::uint64_t)p,
                 [&](std::uint64_t step, double, const SpectralField& u) {
                   if ((long)step > burn &&
                       ((long)step - burn) % params.thin_stride == 0)
                     bucket.push_back(u);
                 });
  });

  MeasureSample ms;
  ms.torus = cfg.torus;
  ms.paths = params.paths;
  ms.horizon = params.horizon;
  ms.burn_in = params.burn_in_frac;
  ms.sigma = cfg.noise.sigma;
  ms.master_seed = cfg.master_seed;
  for (std::size_t p = 0; p < per_path.size(); ++p)
    for (auto& u : per_path[p]) {
      ms.draws.push_back(std::move(u));
      ms.path_of.push_back((std::uint32_t)p);
    }
  if (ms.draws.empty()) throw RuntimeError("bk_sample: thinning produced no draws");
  return ms;
}

ObservableReport check_stationary_mass(const MeasureSample& ms, const SdeConfig& cfg,
                                       double extra_allowance) {
  std::vector<double> xs(ms.draws.size());
  for (std::size_t i = 0; i < ms.draws.size(); ++i) xs[i] = mcal(cfg.diss, ms.draws[i]);
  MeanSe r = grouped_reduce(xs, ms.path_of, ms.paths);
  ObservableReport rep;
  rep.name = "stationary_mass_dissipation";
  rep.estimate = r.mean;
  rep.std_error = r.se;
  rep.samples = ms.draws.size();
  rep.target = 0.5 * A_s(cfg.torus, cfg.noise, 0.0);
  rep.tolerance = 3.0 * r.se + extra_allowance;
  rep.note("dt_bias_allowance", extra_allowance);
  rep.judge();
  return rep;
}

ObservableReport check_stationary_energy(const MeasureSample& ms, const SdeConfig& cfg) {
  std::vector<double> xs(ms.draws.size());
  for (std::size_t i = 0; i < ms.draws.size(); ++i) xs[i] = ecal(cfg.diss, ms.draws[i]);
  MeanSe r = grouped_reduce(xs, ms.path_of, ms.paths);
  const int d = cfg.torus.d;
  double denom = A_s(cfg.torus, cfg.noise, cfg.flow.alpha) +
                 A_s(cfg.torus, cfg.noise, 0.5 * (d - 1)) *
                     (1.0 + A_s(cfg.torus, cfg.noise, 0.0));
  ObservableReport rep;
  rep.name = "stationary_energy_dissipation";
  rep.estimate = r.mean;
  rep.std_error = r.se;
  rep.samples = ms.draws.size();
  rep.note("bound_scale", denom);
  rep.note("ratio", denom > 0.0 ? r.mean / denom : 0.0);
  return rep;
}

std::vector<ObservableReport> invariance_test(const MeasureSample& ms,
                                              const FlowConfig& flow, double t,
                                              const std::vector<double>& r_list,
                                              unsigned threads) {
  const std::size_t n = ms.draws.size();
  if (n == 0) throw RuntimeError("invariance_test: empty sample");

  struct Row {
    double mass_rel = 0.0;
    double energy_rel = 0.0;
    std::vector<double> pre, post;
  };
  std::vector<Row> rows(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const SpectralField& u = ms.draws[i];
    SpectralField v = u;
    evolve_observe(u, t, flow, 1 << 30,
                   [&](double, const SpectralField& w) { v = w; });
    Row& row = rows[i];
    double m0 = mass(u), m1 = mass(v);
    double e0 = energy(u, flow.alpha, flow.beta), e1 = energy(v, flow.alpha, flow.beta);
    row.mass_rel = std::abs(m1 - m0) / std::max(1e-300, std::abs(m0));
    row.energy_rel = std::abs(e1 - e0) / std::max(1e-300, std::abs(e0));
    for (double r : r_list) {
      double a = sobolev_norm(u, r), b = sobolev_norm(v, r);
      row.pre.push_back(a * a);
      row.post.push_back(b * b);
    }
  });

  std::vector<ObservableReport> out;

  ObservableReport rm;
  rm.name = "invariance_mass_pathwise";
  for (const Row& row : rows) rm.estimate = std::max(rm.estimate, row.mass_rel);
  rm.samples = n;
  rm.target = 0.0;
  rm.tolerance = 1e-8;
  rm.judge();
  out.push_back(rm);

  ObservableReport re;
  re.name = "invariance_energy_pathwise";
  for (const Row& row : rows) re.estimate = std::max(re.estimate, row.energy_rel);
  re.samples = n;
  re.target = 0.0;
  re.tolerance = 1e-5;
  re.judge();
  out.push_back(re);

  for (std::size_t j = 0; j < r_list.size(); ++j) {
    std::vector<double> pre(n), post(n);
    for (std::size_t i = 0; i < n; ++i) {
      pre[i] = rows[i].pre[j];
      post[i] = rows[i].post[j];
    }
    MeanSe mp = grouped_reduce(pre, ms.path_of, ms.paths);
    MeanSe mq = grouped_reduce(post, ms.path_of, ms.paths);
    ObservableReport rr;
    rr.name = "invariance_hr_moment_" + fmt17(r_list[j]);
    rr.estimate = mq.mean - mp.mean;
    rr.std_error = std::sqrt(mp.se * mp.se + mq.se * mq.se);
    rr.samples = n;
    rr.target = 0.0;
    rr.tolerance = 3.0 * rr.std_error;
    rr.note("pre_mean", mp.mean);
    rr.note("post_mean", mq.mean);
    rr.judge();
    out.push_back(rr);
  }
  return out;
}

std::vector<std::optional<int>> growth_delays(const MeasureSample& ms,
                                              const FlowConfig& flow,
                                              const DissipatorSpec& diss, double r,
                                              double horizon, double dt_override,
                                              int sample_stride, int i_max,
                                              unsigned threads) {
  const std::size_t n = ms.draws.size();
  std::vector<std::optional<int>> delays(n);
  FlowConfig f = flow;
  if (dt_override > 0.0) f.dt = dt_override;

  parallel_for(n, threads, [&](std::size_t i) {
    int needed = 0;
    bool escaped = false;
    try {
      evolve_observe(ms.draws[i], horizon, f, sample_stride,
                     [&](double t, const SpectralField& u) {
                       if (escaped) return;
                       double half = 0.5 * sobolev_norm(u, r);
                       // envelope = 2 gtilde_inv(1+i+log(1+t)); invert by
                       // monotonicity: i >= gtilde(norm/2) - 1 - log(1+t).
                       double req = g_tilde(diss, half) - 1.0 - std::log1p(std::abs(t));
                       int ri = (int)std::ceil(req - 1e-12);
                       if (ri > needed) needed = ri;
                       if (needed > i_max) escaped = true;
                     });
    } catch (const RuntimeError&) {
      escaped = true;  // blow-up counts as escaping every growth set
    }
    if (escaped)
      delays[i] = std::nullopt;
    else
      delays[i] = std::max(0, needed);
  });
  return delays;
}

double growth_set_fraction(const std::vector<std::optional<int>>& delays, int i) {
  if (delays.empty()) return 0.0;
  std::size_t out = 0;
  for (const auto& d : delays)
    if (!d.has_value() || *d > i) ++out;
  return double(out) / double(delays.size());
}

PathNormReport path_norm_report(const Trajectory& traj, double T, double alpha,
                                double beta, double s) {
  if (traj.times.size() < 2) throw RuntimeError("path_norm_report: need >= 2 samples");
  PathNormReport rep;
  rep.T = T;
  double prev_k = 0.0, prev_d = 0.0, prev_l = 0.0, prev_t = 0.0;
  bool first = true;
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    double t = traj.times[j];
    if (t > T + 1e-12) break;
    const SpectralField& u = traj.fields[j];
    double k = sobolev_norm(u, s);
    k *= k;
    // Witness split of du/dt = -i(-Delta)^alpha u - i P_N(2 beta u e^{beta|u|^2}):
    // dispersive part in Hdot^{s-alpha} (= ||u||_{Hdot^{s+alpha}}),
    // nonlinearity in L^2.
    double disp = hs_seminorm(u, s + alpha);
    double nl = 2.0 * beta * l2_norm(exp_weighted_field(u, beta));
    double dual = (disp + nl) * (disp + nl);
    double l1 = exp_moments(u, beta).m1_exp;
    if (!first) {
      double h = t - prev_t;
      rep.kinetic_part += 0.5 * h * (prev_k + k);
      rep.dual_part += 0.5 * h * (prev_d + dual);
      rep.l1l1 += 0.5 * h * (prev_l + l1);
    }
    prev_k = k;
    prev_d = dual;
    prev_l = l1;
    prev_t = t;
    first = false;
  }
  rep.x_norm_sq = rep.kinetic_part + rep.dual_part;
  rep.x_ratio = rep.x_norm_sq / T;
  rep.l1l1_ratio = rep.l1l1 / T;
  return rep;
}

ObservableReport large_data_tail(const MeasureSample& ms, double s, double K) {
  std::vector<double> ind(ms.draws.size());
  std::vector<double> norms(ms.draws.size());
  for (std::size_t i = 0; i < ms.draws.size(); ++i) {
    norms[i] = sobolev_norm(ms.draws[i], s);
    ind[i] = norms[i] > K ? 1.0 : 0.0;
  }
  MeanSe r = grouped_reduce(ind, ms.path_of, ms.paths);
  std::nth_element(norms.begin(), norms.begin() + norms.size() / 2, norms.end());
  ObservableReport rep;
  rep.name = "large_data_tail";
  rep.estimate = r.mean;
  rep.std_error = r.se;
  rep.samples = ms.draws.size();
  rep.note("threshold", K);
  rep.note("median_norm", norms[norms.size() / 2]);
  return rep;
}

}  // namespace fdnl
