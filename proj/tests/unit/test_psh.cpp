#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "ccl/errors.hpp"
#include "ccl/psh.hpp"

using namespace ccl;

namespace {

using Z = std::vector<cplx>;

std::vector<CircleProbe> random_probes(int n, double half, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-half, half), t(0.0, kTwoPi), r(0.05, 0.5);
  std::vector<CircleProbe> out;
  for (int i = 0; i < n; ++i) out.push_back({{cplx(u(rng), u(rng))}, {std::polar(1.0, t(rng))}, r(rng)});
  return out;
}

}  // namespace

TEST_CASE("Theta values") {
  CHECK(theta_eval(0.7, 0.0) == 0.0);
  CHECK(theta_eval(1.0, cplx(0, 1)) == doctest::Approx(std::log(std::sinh(1.0))).epsilon(1e-14));
  CHECK(theta_eval(1.0, cplx(0, 1)) == doctest::Approx(0.161440).epsilon(1e-6));
  CHECK(theta_eval(1.0, std::numbers::pi) == kThetaClamp);
  CHECK_THROWS_AS(theta_eval(0.0, 1.0), DomainError);
  const Z ii{cplx(0, 1), cplx(0, 1)};
  CHECK(phi_eval(1.0, ii) == doctest::Approx(0.322879).epsilon(1e-6));
  CHECK(phi_eval(2.0, Z{0.0, 0.0}) == 0.0);
}

TEST_CASE("Theta is nonnegative on the imaginary axis and below |y| - a log+(|x|/a)") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = std::exp2(-10.0 + 20.0 * u(rng));
    const cplx z = std::polar(100.0 * u(rng), kTwoPi * u(rng));
    CHECK(theta_eval(a, cplx(0, z.imag())) >= -1e-9);
    CHECK(theta_eval(a, z) <= std::abs(z.imag()) - a * log_plus(std::abs(z.real()) / a) + 1e-9);
  }
}

TEST_CASE("Phi is harmonic away from the zeros of sine") {
  auto phi = [](std::span<const cplx> z) { return phi_eval(1.0, z); };
  std::vector<CircleProbe> probes;
  for (const auto& p : random_probes(50, 1.0, 1)) probes.push_back({{p.z0[0] + cplx(0, 2.0)}, p.w, p.r});
  CHECK(std::abs(psh_check(phi, probes).max_deficiency) <= 1e-8);
}

TEST_CASE("submean check flags concavity") {
  const auto probes = random_probes(20, 3.0, 2);
  CHECK(std::abs(psh_check([](std::span<const cplx> z) { return 2.0 * z[0].real() - z[0].imag(); }, probes)
                     .max_deficiency) < 1e-12);
  CHECK(psh_check([](std::span<const cplx> z) { return -std::norm(z[0]); }, probes).max_deficiency > 0.0);
}

TEST_CASE("sigma surrogate at a probe") {
  SigmaConfig cfg;
  cfg.probes = {{cplx(std::numbers::e, 0.0)}};
  const SigmaSurrogate s = sigma_R_build(Cone::origin(1), 10.0, cfg);
  CHECK(s(Z{std::numbers::e}) >= 1.0 - 1e-12);
  CHECK_THROWS_AS(sigma_R_build(Cone::origin(1), 0.0), DomainError);
}

TEST_CASE("sigma surrogate bounds on random points") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Cone& U : {Cone::full(1), Cone::origin(1), Cone::rays1d(false, true)}) {
    const double R = 3.0;
    std::vector<Z> zs;
    SigmaConfig cfg;
    for (int i = 0; i < 200; ++i) {
      zs.push_back({cplx(3 * R * u(rng), R * u(rng))});
      cfg.probes.push_back({zs.back()[0].real()});
    }
    const SigmaSurrogate s = sigma_R_build(U, R, cfg);
    for (const Z& z : zs) {
      const std::vector<double> x{z[0].real()};
      CHECK(s(z) <= std::abs(z[0].imag()) + std::min(R, cone_distance(U, x)) + 1e-9);
      if (cone_distance(U, x) == 0.0 && std::abs(x[0]) <= R) CHECK(s(Z{x[0]}) >= -1e-12);
    }
  }
}

TEST_CASE("gaussian seed and its envelope") {
  const Profile sq = Profile::power(2.0, 2.0);
  const EntireSeed seed = gaussian_seed();
  CHECK(verify_seed(seed, sq, sq, seed_samples()).ok());
  CHECK(zero_order_at_origin(seed) == 0);

  EntireSeed shifted = seed;
  shifted.phi = [](cplx z) { return z * std::exp(-z * z); };
  shifted.log_modulus = nullptr;
  CHECK(zero_order_at_origin(shifted) == 1);

  const SeedEnvelope env = seed_envelope_build(seed, sq, sq, 1, SeedVariant::general);
  CHECK(env.H() == 0.0);
  CHECK(env(Z{2.0}) >= -16.0 - 1e-12);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    const Z z{cplx(u(rng), u(rng))};
    CHECK(env(z) >= env.lower_bound(z) - 1e-8);
    CHECK(env(z) <= env.upper_bound(z) + 1e-8);
  }

  EntireSeed bad = seed;
  bad.phi = [](cplx z) { return std::exp(z * z); };
  bad.log_modulus = nullptr;
  CHECK_THROWS_AS(seed_envelope_build(bad, sq, sq, 1, SeedVariant::general), PreconditionError);
}

TEST_CASE("rho_R constants") {
  const WeightSpec w = canonical_weight(Cone::rays1d(false, true), 1, 1);
  const RhoBuild rb = rho_R_build(w, gaussian_seed(), 1.0);
  CHECK(rb.A2 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rb.B2 == doctest::Approx(5.0 + 2.0 * std::numbers::e).epsilon(1e-15));
  CHECK(rb.B2 == doctest::Approx(10.4366).epsilon(1e-5));

  WeightSpec concave = w;
  concave.alpha = Profile::power(1.0, 1.0, 0.0, false);
  CHECK(rho_A2(concave) == concave.A);
}

TEST_CASE("rho_R satisfies its bounds and the submean property") {
  const WeightSpec w = canonical_weight(Cone::rays1d(false, true), 1, 1);
  std::vector<Z> zs;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 300; ++i) zs.push_back({cplx(u(rng), u(rng))});
  RhoConfig cfg;
  cfg.seed.probes = zs;
  const RhoBuild rb = rho_R_build(w, gaussian_seed(), 2.0, cfg);
  const RhoBoundsReport br = check_rho_bounds(*rb.rho, zs);
  CHECK(br.ok(1e-8));
  CHECK(psh_check([&](std::span<const cplx> z) { return (*rb.rho)(z); }, random_probes(50, 3.0, 4))
            .max_deficiency <= 1e-6);

  const GlobalEnvelope single = envelope_global({rb.rho});
  for (const auto& z : zs) CHECK(single(z) == (*rb.rho)(z));
}
