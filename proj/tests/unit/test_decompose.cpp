#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ccl/decompose.hpp"
#include "ccl/errors.hpp"

using namespace ccl;

namespace {

const Cone kNeg = Cone::rays1d(true, false);
const Cone kPos = Cone::rays1d(false, true);

SplitConfig small_split() {
  SplitConfig c;
  c.box = PlaneBox{2.2, 2.2, 45, 45};
  c.samples = 200;
  return c;
}

}  // namespace

TEST_CASE("mollifier") {
  const Mollifier m(1);
  CHECK(m.mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m(1.0) == 0.0);
  CHECK(m(-1.5) == 0.0);
  CHECK(m(0.0) == doctest::Approx(m.c() * std::exp(-1.0)));
  CHECK(m.integral(-1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.integral(-1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(Mollifier(2).mass() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("partition of unity on the line") {
  const Partition p = build_partition(kNeg, kPos);
  CHECK(p.g1(-2.0) == 1.0);
  CHECK(p.g1(2.0) == 0.0);
  CHECK(p.g1(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double h = 1e-5;
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(p.g1(x) + p.g2(x) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(p.g1(x) >= 0.0);
    CHECK(p.g1(x) <= 1.0);
    CHECK(p.dbar_g1(x) == doctest::Approx(-0.5 * p.mollifier()(x)).epsilon(1e-14));
    const double fd = 0.5 * (p.g1(x + h) - p.g1(x - h)) / (2.0 * h);
    CHECK(std::abs(p.dbar_g1(x) - fd) < 1e-7);
  }
  const Partition q = build_partition(Cone::full(1), Cone::origin(1));
  CHECK(q.g1(0.3) == 1.0);
  CHECK(q.dbar_g1(0.3) == 0.0);
}

TEST_CASE("partition preconditions") {
  CHECK_THROWS_AS(build_partition(kPos, kPos), PreconditionError);
  CHECK_THROWS_AS(build_partition(kPos, Cone::origin(1)), PreconditionError);
  CHECK_THROWS_AS(build_partition(Cone::ray2d(0.0), Cone::ray2d(kPi).complement()), DomainError);
}

TEST_CASE("cutoff profile") {
  const Mollifier m(1);
  CHECK(cutoff(m, cplx(0.6, 0.7)) == 1.0);
  CHECK(cutoff(m, cplx(1.5, 1.5)) == 0.0);
  const double h = 1e-5;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int i = 0; i < 200; ++i) {
    const cplx z(u(rng), u(rng));
    const cplx fd = 0.5 * ((cutoff(m, z + h) - cutoff(m, z - h)) +
                           cplx(0, 1) * (cutoff(m, z + cplx(0, h)) - cutoff(m, z - cplx(0, h)))) /
                    (2.0 * h);
    CHECK(std::abs(dbar_cutoff(m, z) - fd) < 1e-6);
  }
  CHECK(cutoff_sup_dbar_sq(m) > 0.0);
}

TEST_CASE("zero input splits into zeros") {
  SplitConfig c = small_split();
  c.certify_input = false;
  const SplitResult r = lemma7_split(TestFunction::zero(1), Cone::origin(1), kPos, kNeg,
                                     canonical_weight(Cone::origin(1), 2, 2), gaussian_seed(), c);
  CHECK(r.f1.max_abs() == 0.0);
  CHECK(r.f2.max_abs() == 0.0);
  CHECK(r.report.reconstruction_error == 0.0);
}

TEST_CASE("opposite rays") {
  const SplitResult r = theorem2_split(TestFunction::gaussian(1), kPos, kNeg,
                                       canonical_weight(Cone::origin(1), 2, 2), gaussian_seed(), small_split());
  const SplitReport& q = r.report;
  // W = {0} leaves V = R and U_nu = closure(V_nu).
  CHECK(q.U.is_origin());
  CHECK(q.U1 == q.V1.closure());
  CHECK(q.U2 == q.V2.closure());
  CHECK(q.theta == 1.0);
  CHECK(q.reconstruction_error <= 1e-6);
  CHECK(q.eta_support_ok);
  CHECK(q.eta_extent <= 1.0);
  CHECK(std::isfinite(q.norm_f1));
  CHECK(std::isfinite(q.norm_f2));
  CHECK(q.aaa1_excess <= 1e-12);
  CHECK(q.hormander.pass);
  CHECK(q.converged);
}

TEST_CASE("identical cones still reconstruct") {
  const SplitResult r = theorem2_split(TestFunction::gaussian(1), kPos, kPos, canonical_weight(kPos, 2, 2),
                                       gaussian_seed(), small_split());
  CHECK(r.report.U1 == r.report.U2);
  CHECK(r.report.reconstruction_error <= 1e-6);
}

TEST_CASE("intersecting closures are rejected") {
  CHECK_THROWS_AS(lemma7_split(TestFunction::gaussian(1), Cone::origin(1), kPos, kPos,
                               canonical_weight(Cone::origin(1), 2, 2), gaussian_seed(), small_split()),
                  PreconditionError);
}

TEST_CASE("density with zero input and with an inactive cutoff") {
  DensityConfig c;
  c.box = PlaneBox{6.0, 2.2, 121, 45};
  c.ns = {2};
  c.certify_input = false;
  const WeightSpec w = canonical_weight(kPos, 2, 2);
  const DensityResult z = density_approximate(TestFunction::zero(1), w, kPos, gaussian_seed(), c);
  REQUIRE(z.steps.size() == 1);
  CHECK(z.steps[0].error == 0.0);

  // chi(z/10) = 1 on the whole box: no correction and no tail.
  c.ns = {10};
  c.certify_input = true;
  const DensityResult far = density_approximate(TestFunction::gaussian(1), w, kPos, gaussian_seed(), c);
  CHECK(far.steps[0].correction == 0.0);
  CHECK(far.steps[0].tail == 0.0);
  CHECK(far.steps[0].error == 0.0);
}

TEST_CASE("density errors decrease") {
  DensityConfig c;
  c.box = PlaneBox{9.0, 2.2, 181, 45};
  c.ns = {1, 2, 4};
  const DensityResult r =
      density_approximate(TestFunction::gaussian(1), canonical_weight(kPos, 2, 2), kPos, gaussian_seed(), c);
  CHECK(r.decreasing());
  for (const auto& s : r.steps) CHECK(s.hormander.pass);
}
