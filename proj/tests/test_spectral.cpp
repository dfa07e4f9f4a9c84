#include <doctest.h>

#include <cstring>
#include <fstream>

#include "fdnl/checkpoint.hpp"
#include "fdnl/spectral_ops.hpp"
#include "fdnl/transforms.hpp"
#include "fdnl/util.hpp"
#include "helpers.hpp"

using namespace fdnl;
using testkit::max_coeff_diff;
using testkit::random_field;

TEST_CASE("mode indexing is lexicographic and involutive") {
  TorusSpec spec{2, 3, 4};
  CHECK(spec.side() == 7);
  CHECK(spec.mode_count() == 49);
  // first and last wavevectors in lexicographic order, first axis slowest
  CHECK(mode_wave(spec, 0) == Wave{-3, -3, 0, 0});
  CHECK(mode_wave(spec, 48) == Wave{3, 3, 0, 0});
  CHECK(mode_wave(spec, 1) == Wave{-3, -2, 0, 0});
  for (std::size_t i = 0; i < spec.mode_count(); ++i)
    CHECK(mode_index(spec, mode_wave(spec, i)) == i);

  TorusSpec s3{3, 2, 4};
  CHECK(s3.mode_count() == 125);
  for (std::size_t i = 0; i < s3.mode_count(); i += 7)
    CHECK(mode_index(s3, mode_wave(s3, i)) == i);
}

TEST_CASE("eigenvalues and the multiplier convention") {
  TorusSpec spec{2, 4, 4};
  CHECK(eigenvalue(spec, Wave{1, -2, 0, 0}) == 5.0);
  CHECK(eigenvalue(spec, Wave{0, 0, 0, 0}) == 0.0);
  CHECK(eig_pow(0.0, 0.0) == 1.0);   // 0^0 := 1 (identity multiplier keeps k = 0)
  CHECK(eig_pow(0.0, 0.5) == 0.0);
  CHECK(eig_pow(2.0, 1.5) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-15));
  CHECK(eig_pow(5.0, 0.0) == 1.0);
}

TEST_CASE("next_fast_size returns the least 2^a 3^b 5^c 7^e >= m") {
  CHECK(next_fast_size(1) == 1);
  CHECK(next_fast_size(7) == 7);
  CHECK(next_fast_size(11) == 12);
  CHECK(next_fast_size(13) == 14);
  CHECK(next_fast_size(37) == 40);
  CHECK(next_fast_size(121) == 125);
  CHECK(next_fast_size(36) == 36);
}

TEST_CASE("transform round trip is exact to rounding") {
  for (int d : {1, 2, 3}) {
    TorusSpec spec{d, d == 3 ? 3 : 5, 4};
    SpectralField u = random_field(spec, 42 + (std::uint64_t)d);
    SpectralField back = to_coeffs(to_grid(u), spec.N);
    CHECK(max_coeff_diff(u, back) < 1e-12);
  }
}

TEST_CASE("fft path agrees with naive Fourier synthesis") {
  for (int d : {1, 2}) {
    TorusSpec spec{d, d == 1 ? 8 : 2, 4};
    SpectralField u = random_field(spec, 7);
    GridField g = to_grid(u);
    auto direct = testkit::naive_synthesis(u);
    double err = 0.0;
    for (std::size_t j = 0; j < direct.size(); ++j)
      err = std::max(err, std::abs(direct[j] - g.v[j]));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("basis functions have constant modulus and unit L2 norm") {
  TorusSpec spec{2, 4, 4};
  SpectralField e = SpectralField::basis(spec, Wave{2, -1, 0, 0});
  GridField g = to_grid(e);
  const double want = std::pow(2.0 * M_PI, -1.0);  // (2pi)^{-d/2}, d = 2
  for (const auto& z : g.v) CHECK(std::abs(z) == doctest::Approx(want).epsilon(1e-12));
  CHECK(g.v[0].real() == doctest::Approx(want).epsilon(1e-12));  // e^{ik.0} = 1
  CHECK(g.v[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(l2_norm(e) == 1.0);
}

TEST_CASE("Parseval: grid quadrature of |u|^2 equals the coefficient sum") {
  TorusSpec spec{2, 5, 4};
  SpectralField u = random_field(spec, 3);
  GridField g = to_grid(u);
  double quad = 0.0;
  for (const auto& z : g.v) quad += std::norm(z);
  quad *= spec.cell_volume();
  double coeff = 0.0;
  for (const auto& z : u.c) coeff += std::norm(z);
  CHECK(quad == doctest::Approx(coeff).epsilon(1e-13));
}

TEST_CASE("projection zeroes exactly the out-of-box modes") {
  TorusSpec spec{2, 4, 4};
  SpectralField u = random_field(spec, 11);
  SpectralField pu = project(u, 2);
  for (std::size_t i = 0; i < u.c.size(); ++i) {
    Wave k = mode_wave(spec, i);
    bool in = std::abs(k[0]) <= 2 && std::abs(k[1]) <= 2;
    CHECK(pu.c[i] == (in ? u.c[i] : cplx(0.0, 0.0)));
  }
  // reading the grid back with a smaller cutoff is the same projection
  SpectralField truncated = to_coeffs(to_grid(u), 2);
  CHECK(max_coeff_diff(truncated, pu) < 1e-12);
}

TEST_CASE("propagator: per-mode phase, unitarity, group law") {
  TorusSpec spec{2, 4, 4};
  const double alpha = 0.7, t = 0.37;
  SpectralField e = SpectralField::basis(spec, Wave{1, -2, 0, 0}, {0.4, -1.1});
  SpectralField pe = propagator(e, t, alpha);
  const cplx want = cplx(0.4, -1.1) * std::polar(1.0, -t * std::pow(5.0, alpha));
  CHECK(std::abs(pe.at(Wave{1, -2, 0, 0}) - want) < 1e-14);

  SpectralField u = random_field(spec, 5);
  SpectralField v = propagator(u, t, alpha);
  for (std::size_t i = 0; i < u.c.size(); ++i)
    CHECK(std::abs(v.c[i]) == doctest::Approx(std::abs(u.c[i])).epsilon(1e-14));
  CHECK(sobolev_norm(v, 1.3) == doctest::Approx(sobolev_norm(u, 1.3)).epsilon(1e-13));

  SpectralField w1 = propagator(propagator(u, 0.2, alpha), 0.3, alpha);
  SpectralField w2 = propagator(u, 0.5, alpha);
  CHECK(max_coeff_diff(w1, w2) < 1e-13);
  CHECK(max_coeff_diff(propagator(v, -t, alpha), u) < 1e-13);
  CHECK(max_coeff_diff(propagator(u, 0.0, alpha), u) == 0.0);
}

TEST_CASE("fractional laplacian: multiplier oracle and semigroup law") {
  TorusSpec spec{2, 4, 4};
  SpectralField u = random_field(spec, 9);
  const double gamma = 0.6;
  SpectralField v = frac_laplacian(u, gamma);
  for (std::size_t i = 0; i < u.c.size(); ++i) {
    const double lam = eigenvalue_at(spec, i);
    const cplx want = u.c[i] * eig_pow(lam, gamma);
    CHECK(std::abs(v.c[i] - want) < 1e-14);
  }
  // gamma = 0 is the identity, including at k = 0
  CHECK(max_coeff_diff(frac_laplacian(u, 0.0), u) == 0.0);
  // exponent additivity
  SpectralField two_step = frac_laplacian(frac_laplacian(u, 0.4), 0.8);
  SpectralField one_step = frac_laplacian(u, 1.2);
  CHECK(max_coeff_diff(two_step, one_step) < 1e-12);
}

TEST_CASE("Sobolev norms: closed-form examples") {
  TorusSpec spec{2, 4, 4};
  SpectralField e11 = SpectralField::basis(spec, Wave{1, 1, 0, 0});
  CHECK(sobolev_norm(e11, 2.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(hs_seminorm(e11, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  SpectralField c0 = SpectralField::basis(spec, Wave{0, 0, 0, 0}, 3.0);
  for (double s : {0.5, 1.0, 2.0, 3.7}) {
    CHECK(sobolev_norm(c0, s) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(hs_seminorm(c0, s) == 0.0);
  }
  // s = 0 weight is 1 + lambda^0 = 2 for every mode (0^0 := 1)
  SpectralField u = random_field(spec, 13);
  CHECK(sobolev_norm(u, 0.0) ==
        doctest::Approx(std::sqrt(2.0) * l2_norm(u)).epsilon(1e-14));
  CHECK(hs_seminorm(u, 0.0) == doctest::Approx(l2_norm(u)).epsilon(1e-14));
}

TEST_CASE("real pairing is symmetric and consistent with the norm") {
  TorusSpec spec{2, 3, 4};
  SpectralField u = random_field(spec, 17), v = random_field(spec, 18);
  CHECK(l2_inner(u, v) == doctest::Approx(l2_inner(v, u)).epsilon(1e-14));
  CHECK(l2_inner(u, u) == doctest::Approx(l2_norm(u) * l2_norm(u)).epsilon(1e-14));
  // i u is L2-orthogonal to u under the real pairing
  CHECK(std::abs(l2_inner(scaled(u, cplx(0.0, 1.0)), u)) < 1e-14 * l2_inner(u, u));
}

TEST_CASE("nonlinearity matches the exact convolution power series") {
  const double beta = 0.5;
  SUBCASE("one dimension, three modes") {
    TorusSpec spec{1, 4, 4};
    SpectralField u = SpectralField::zero(spec);
    u.at(Wave{1, 0, 0, 0}) = cplx(0.31, -0.12);
    u.at(Wave{-2, 0, 0, 0}) = cplx(-0.05, 0.22);
    u.at(Wave{0, 0, 0, 0}) = cplx(0.17, 0.08);
    SpectralField got = nonlinearity(u, beta);
    SpectralField want =
        testkit::map_to_field(testkit::series_nonlinearity(u, beta, 24), spec);
    CHECK(max_coeff_diff(got, want) < 1e-12);
  }
  SUBCASE("two dimensions, two modes") {
    TorusSpec spec{2, 3, 4};
    SpectralField u = SpectralField::zero(spec);
    u.at(Wave{1, -1, 0, 0}) = cplx(0.4, 0.1);
    u.at(Wave{0, 2, 0, 0}) = cplx(-0.2, 0.3);
    SpectralField got = nonlinearity(u, beta);
    SpectralField want =
        testkit::map_to_field(testkit::series_nonlinearity(u, beta, 24), spec);
    CHECK(max_coeff_diff(got, want) < 1e-12);
  }
  SUBCASE("exp-weighted field is the same pipeline without the prefactor") {
    TorusSpec spec{2, 3, 4};
    SpectralField u = random_field(spec, 23, 0.3);
    SpectralField a = nonlinearity(u, beta);
    SpectralField b = scaled(exp_weighted_field(u, beta), 2.0 * beta);
    CHECK(max_coeff_diff(a, b) < 1e-14);
  }
}

TEST_CASE("nonlinearity is gauge covariant and mass-conserving") {
  TorusSpec spec{2, 4, 4};
  SpectralField u = random_field(spec, 29, 0.6);
  const double beta = 0.5;
  const cplx phase = std::polar(1.0, 1.234);
  SpectralField a = nonlinearity(scaled(u, phase), beta);
  SpectralField b = scaled(nonlinearity(u, beta), phase);
  CHECK(max_coeff_diff(a, b) < 1e-13);
  // Im sum W_k conj(u_k) = 0: the nonlinear rotation moves no mass
  SpectralField w = nonlinearity(u, beta);
  const double antisym = l2_inner(scaled(w, cplx(0.0, -1.0)), u);
  CHECK(std::abs(antisym) < 1e-13 * (1.0 + l2_norm(w) * l2_norm(u)));
}

TEST_CASE("exponential quadratures: constants and closed forms") {
  TorusSpec spec{2, 4, 4};
  const double beta = 0.5;
  const double vol = spec.volume();
  SpectralField z = SpectralField::zero(spec);
  CHECK(exp_integral(z, beta) == doctest::Approx(vol).epsilon(1e-14));
  CHECK(mass_weighted_exp_integral(z, beta) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(one_plus_mass_weighted_exp_integral(z, beta) == doctest::Approx(vol).epsilon(1e-14));

  // constant field: value v = amp (2pi)^{-d/2} everywhere
  const cplx amp(1.1, -0.4);
  SpectralField cst = SpectralField::basis(spec, Wave{0, 0, 0, 0}, amp);
  const double v2 = std::norm(amp) / vol;
  CHECK(exp_integral(cst, beta) == doctest::Approx(vol * std::exp(beta * v2)).epsilon(1e-13));
  CHECK(mass_weighted_exp_integral(cst, beta) ==
        doctest::Approx(vol * v2 * std::exp(beta * v2)).epsilon(1e-13));

  SpectralField u = random_field(spec, 31);
  ExpMoments m = exp_moments(u, beta);
  CHECK(m.exp_int == doctest::Approx(exp_integral(u, beta)).epsilon(1e-14));
  CHECK(m.m2_exp == doctest::Approx(mass_weighted_exp_integral(u, beta)).epsilon(1e-14));
  CHECK(m.exp_int + m.m2_exp ==
        doctest::Approx(one_plus_mass_weighted_exp_integral(u, beta)).epsilon(1e-14));
  CHECK(m.m1_exp > 0.0);
  CHECK(m.m1_exp * m.m1_exp <= m.exp_int * m.m2_exp * (1.0 + 1e-13));  // Cauchy-Schwarz
}

TEST_CASE("exp range guard throws instead of overflowing") {
  TorusSpec spec{1, 1, 4};
  SpectralField u = SpectralField::basis(spec, Wave{0, 0, 0, 0}, 1e3);
  CHECK_THROWS_AS((void)nonlinearity(u, 1.0), RuntimeError);
  CHECK_THROWS_AS((void)exp_integral(u, 1.0), RuntimeError);
}

TEST_CASE("full-grid dft localizes basis fields in the right bin") {
  TorusSpec spec{2, 2, 4};
  const Wave k{1, -2, 0, 0};
  GridField g = to_grid(SpectralField::basis(spec, k));
  std::vector<cplx> hat = grid_dft(g);
  const int n = spec.grid_side();
  const std::size_t total = spec.grid_count();
  const double expect = (double)total * std::pow(2.0 * M_PI, -1.0);
  const std::size_t bin =
      (std::size_t)(((k[0] % n) + n) % n) * (std::size_t)n + (std::size_t)(((k[1] % n) + n) % n);
  CHECK(std::abs(hat[bin] - cplx(expect, 0.0)) < 1e-9);
  double rest = 0.0;
  for (std::size_t j = 0; j < hat.size(); ++j)
    if (j != bin) rest = std::max(rest, std::abs(hat[j]));
  CHECK(rest < 1e-9);
  // frequency -> eigenvalue folding: bins above n/2 alias to negatives
  CHECK(grid_bin_eigenvalue(spec, bin) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("checkpoint round trip and frozen byte layout") {
  TorusSpec spec{2, 3, 4};
  SpectralField u = random_field(spec, 37);
  auto dir = testkit::temp_dir("ckpt");
  auto path = dir / "state.ckpt";
  save_field(path, u);
  SpectralField v = load_field(path, spec.q);
  CHECK(v.spec.d == spec.d);
  CHECK(v.spec.N == spec.N);
  CHECK(max_coeff_diff(u, v) == 0.0);  // bitwise

  // byte layout, reconstructed independently
  TorusSpec tiny{1, 1, 4};
  SpectralField w = SpectralField::zero(tiny);
  w.at(Wave{-1, 0, 0, 0}) = cplx(1.5, -2.5);
  w.at(Wave{0, 0, 0, 0}) = cplx(0.25, 0.0);
  w.at(Wave{1, 0, 0, 0}) = cplx(-3.0, 1e-3);
  std::string bytes = encode_field(w);
  std::string want = "FDNL";
  auto push_u32 = [&](std::uint32_t x) {
    char b[4];
    std::memcpy(b, &x, 4);
    want.append(b, 4);
  };
  push_u32(1);  // version
  push_u32(1);  // d
  push_u32(1);  // N
  for (double x : {1.5, -2.5, 0.25, 0.0, -3.0, 1e-3}) {
    char b[8];
    std::memcpy(b, &x, 8);
    want.append(b, 8);
  }
  CHECK(bytes == want);

  // corrupted magic is an IoError
  std::string bad = bytes;
  bad[0] = 'X';
  auto bad_path = dir / "bad.ckpt";
  atomic_write_file(bad_path, bad);
  CHECK_THROWS_AS((void)load_field(bad_path, 4), IoError);
}

TEST_CASE("grid quadrature of a product matches the coefficient pairing") {
  // integral u conj(v) = sum_k u_k conj(v_k): the grid is unaliased for
  // quadratic quantities by construction (oversampling q >= 2).
  TorusSpec spec{2, 4, 4};
  SpectralField u = random_field(spec, 41), v = random_field(spec, 43);
  GridField gu = to_grid(u), gv = to_grid(v);
  cplx quad(0.0, 0.0);
  for (std::size_t j = 0; j < gu.v.size(); ++j) quad += gu.v[j] * std::conj(gv.v[j]);
  quad *= spec.cell_volume();
  cplx coeff(0.0, 0.0);
  for (std::size_t i = 0; i < u.c.size(); ++i) coeff += u.c[i] * std::conj(v.c[i]);
  CHECK(std::abs(quad - coeff) < 1e-13);
  CHECK(l2_inner(u, v) == doctest::Approx(coeff.real()).epsilon(1e-13));
}
