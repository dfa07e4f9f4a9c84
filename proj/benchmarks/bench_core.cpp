#include <benchmark/benchmark.h>

#include "fdnl/dissipation.hpp"
#include "fdnl/flows.hpp"
#include "fdnl/oracles.hpp"
#include "fdnl/sde.hpp"
#include "fdnl/spectral_ops.hpp"
#include "fdnl/transforms.hpp"

namespace {

fdnl::SpectralField make_state(int d, int N) {
  fdnl::RandomFieldLaw law;
  law.cutoff = N;
  law.decay = 4.0;
  law.amplitude = 0.5;
  return fdnl::sample_field(law, fdnl::TorusSpec{d, N, 4}, 0);
}

void bm_roundtrip(benchmark::State& state) {
  const auto u = make_state(2, (int)state.range(0));
  for (auto _ : state) {
    auto g = fdnl::to_grid(u);
    auto back = fdnl::to_coeffs(g, u.spec.N);
    benchmark::DoNotOptimize(back.c.data());
  }
}
BENCHMARK(bm_roundtrip)->Arg(4)->Arg(8)->Arg(16);

void bm_nonlinearity(benchmark::State& state) {
  const auto u = make_state(2, (int)state.range(0));
  for (auto _ : state) {
    auto w = fdnl::nonlinearity(u, 0.5);
    benchmark::DoNotOptimize(w.c.data());
  }
}
BENCHMARK(bm_nonlinearity)->Arg(4)->Arg(8)->Arg(16);

void bm_split_step(benchmark::State& state) {
  fdnl::FlowConfig cfg;
  cfg.dt = 1e-3;
  auto u = make_state(2, (int)state.range(0));
  for (auto _ : state) {
    fdnl::evolve_observe(u, cfg.dt, cfg, 1, [](double, const fdnl::SpectralField&) {});
  }
}
BENCHMARK(bm_split_step)->Arg(4)->Arg(8);

void bm_sde_step(benchmark::State& state) {
  fdnl::SdeConfig cfg;
  cfg.torus = fdnl::TorusSpec{2, (int)state.range(0), 4};
  cfg.noise = fdnl::make_default_noise(cfg.torus, 2.0, 0.1);
  cfg.validate();
  fdnl::RngStream rng(1, 0);
  auto u = make_state(2, (int)state.range(0));
  for (auto _ : state) {
    u = fdnl::sde_step(u, cfg, 1e-3, rng);
    benchmark::DoNotOptimize(u.c.data());
  }
}
BENCHMARK(bm_sde_step)->Arg(4)->Arg(8);

void bm_gtilde_inv(benchmark::State& state) {
  fdnl::DissipatorSpec diss;
  double z = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fdnl::g_tilde_inv(diss, z));
    z = z < 1e6 ? z * 1.5 : 1.0;
  }
}
BENCHMARK(bm_gtilde_inv);

}  // namespace

BENCHMARK_MAIN();
