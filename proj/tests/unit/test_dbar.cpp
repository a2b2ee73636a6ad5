#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ccl/dbar.hpp"
#include "ccl/decompose.hpp"
#include "ccl/errors.hpp"
#include "ccl/psh.hpp"
#include "ccl/weights.hpp"

using namespace ccl;

namespace {

SampledField disk(const GridSpec& g) {
  return SampledField::sample(g, [](std::span<const double> q) {
    return cplx(q[0] * q[0] + q[1] * q[1] <= 1.0 ? 1.0 : 0.0);
  });
}

double disk_error(const SampledField& psi) {
  const GridPoints pts = make_grid(psi.grid());
  const double h = psi.grid().step(0);
  double err = 0.0;
  for (std::size_t p = 0; p < pts.spec.size(); ++p) {
    const cplx z(pts.point(p)[0], pts.point(p)[1]);
    if (std::abs(std::abs(z) - 1.0) < 2.0 * h) continue;
    const cplx exact = std::abs(z) <= 1.0 ? std::conj(z) : 1.0 / z;
    err = std::max(err, std::abs(psi[p] - exact));
  }
  return err;
}

std::vector<double> rho_samples(const GridSpec& g, const RhoBuild& rb) {
  return sample_real(g, [&](std::span<const cplx> z) { return 2.0 * (*rb.rho)(z); });
}

RhoBuild full_line_rho() { return rho_R_build(canonical_weight(Cone::full(1), 1, 1), gaussian_seed(), 1.0); }

}  // namespace

TEST_CASE("Cauchy transform of the disk indicator") {
  const GridSpec g = cube_grid(2, 2.0, 128);
  const SampledField eta = disk(g);
  const SampledField conv = cauchy_solve(eta, CauchyMethod::convolution);
  CHECK(disk_error(conv) <= 0.02 * 2.0);
  const SampledField direct = cauchy_solve(eta, CauchyMethod::direct);
  double diff = 0.0;
  for (std::size_t i = 0; i < conv.size(); ++i) diff = std::max(diff, std::abs(conv[i] - direct[i]));
  CHECK(diff < 1e-3);
}

TEST_CASE("Cauchy transform inverts dbar on compactly supported data") {
  // u = chi e^z with chi the mollified cutoff; the transform of dbar u is u itself.
  const Mollifier m(1);
  const GridSpec g = cube_grid(2, 3.0, 161);
  auto u = [&](std::span<const double> q) {
    const cplx z(q[0], q[1]);
    return cutoff(m, z) * std::exp(z);
  };
  const SampledField eta = SampledField::sample(g, [&](std::span<const double> q) {
    const cplx z(q[0], q[1]);
    return dbar_cutoff(m, z) * std::exp(z);
  });
  const SampledField psi = cauchy_solve(eta);
  const SampledField exact = SampledField::sample(g, u);
  double err = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) err = std::max(err, std::abs(psi[i] - exact[i]));
  CHECK(err < 0.02 * exact.max_abs());
}

TEST_CASE("Cauchy residual decreases under refinement") {
  auto residual = [](std::size_t n) {
    const GridSpec g = cube_grid(2, 2.0, n);
    const SampledField eta = disk(g);
    const double h = g.step(0);
    return dbar_residual(cauchy_solve(eta), eta, 0, [&](std::span<const double> q) {
      return std::abs(std::hypot(q[0], q[1]) - 1.0) < 2.0 * h;
    });
  };
  CHECK(residual(65) > residual(129));
}

TEST_CASE("zero data gives zero solutions") {
  const GridSpec g = cube_grid(2, 2.0, 33);
  const SampledField zero(g, std::vector<cplx>(g.size()));
  CHECK(cauchy_solve(zero).max_abs() == 0.0);
  const std::vector<double> rho(g.size(), 0.0);
  const WeightedSolveResult r = weighted_min_solve(zero, rho);
  CHECK(r.psi.max_abs() == 0.0);
  const HormanderResult h = hormander_check(zero, zero, rho);
  CHECK(h.lhs == 0.0);
  CHECK(h.rhs == 0.0);
  CHECK(h.pass);
}

TEST_CASE("data touching the box edge is rejected") {
  const GridSpec g = cube_grid(2, 1.0, 33);
  CHECK_THROWS_AS(cauchy_solve(disk(g)), PreconditionError);
  CHECK_THROWS_AS(cauchy_solve(SampledField(cube_grid(4, 1.0, 5), std::vector<cplx>(625))), DomainError);
}

TEST_CASE("weighted minimizer beats the Cauchy solution and obeys the estimate") {
  const RhoBuild rb = full_line_rho();
  const GridSpec g = cube_grid(2, 2.0, 65);
  const SampledField eta = disk(g);
  const auto rho = rho_samples(g, rb);
  const WeightedSolveResult r = weighted_min_solve(eta, rho);
  CHECK(r.converged);
  CHECK(r.diagnostics.back().residual <= 1e-8);
  CHECK(r.diagnostics.back().objective <= weighted_objective(cauchy_solve(eta), rho, r.rho_min));
  const HormanderResult h = hormander_check(r.psi, eta, rho);
  CHECK(h.pass);
  CHECK(h.lhs <= 1.1 * h.rhs);

  // Adding a large entire function keeps dbar but breaks the estimate.
  std::vector<cplx> big(r.psi.values());
  for (auto& v : big) v += 1e6;
  CHECK_FALSE(hormander_check(SampledField(g, big), eta, rho).pass);
}

TEST_CASE("weighted objective is stable under refinement") {
  const RhoBuild rb = full_line_rho();
  auto objective = [&](std::size_t n) {
    const GridSpec g = cube_grid(2, 2.0, n);
    const auto rho = rho_samples(g, rb);
    const WeightedSolveResult r = weighted_min_solve(disk(g), rho);
    return r.diagnostics.back().objective * std::exp(-r.rho_min);
  };
  const double coarse = objective(65), fine = objective(129);
  CHECK(std::abs(fine - coarse) <= 0.05 * coarse);
}
