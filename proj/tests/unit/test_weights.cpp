#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "ccl/errors.hpp"
#include "ccl/weights.hpp"

using namespace ccl;

namespace {

double rho1(const WeightSpec& w, cplx z) {
  const std::vector<cplx> v{z};
  return rho_eval(w, v);
}

}  // namespace

TEST_CASE("weight values by substitution") {
  CHECK(rho1(canonical_weight(Cone::full(1), 1, 1), cplx(3, 4)) == doctest::Approx(7.0));
  CHECK(rho1(canonical_weight(Cone::full(1), 1, 1), 0.0) == 0.0);
  CHECK(rho1(canonical_weight(Cone::origin(1), 1, 1), 2.0) == doctest::Approx(0.0));
  // -(1/2)^2 + (2*3)^2 + (2*1)^2 with U the positive ray and x = -1.
  CHECK(rho1(canonical_weight(Cone::rays1d(false, true), 2, 2), cplx(-1, 3)) == doctest::Approx(-0.25 + 36 + 4));
}

TEST_CASE("weight decreases in A and increases in B") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5, 5), s(0.5, 3);
  const Cone U = Cone::rays1d(false, true);
  for (int i = 0; i < 500; ++i) {
    const cplx z(u(rng), u(rng));
    const double a = s(rng), b = s(rng);
    CHECK(rho1(canonical_weight(U, a, b), z) <= rho1(canonical_weight(U, a + 1, b + 1), z) + 1e-12);
  }
}

TEST_CASE("sup norm of the gaussian cancels the weight") {
  const WeightSpec w = canonical_weight(Cone::full(1), 1, 1);
  const NormResult r = sup_norm(TestFunction::gaussian(1), w);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sup_norm(TestFunction::gaussian(1, 1.0, 5.0), w).value == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(sup_norm(TestFunction::zero(1), w).value == 0.0);
}

TEST_CASE("l2 norm against a separable gaussian integral") {
  // |e^{-z^2}|^2 e^{-2 rho} = exp(-3x^2/2 - 6y^2) for A = B = 2, whose integral is pi/3.
  const WeightSpec w = canonical_weight(Cone::full(1), 2, 2);
  const NormResult r = l2_norm(TestFunction::gaussian(1), w);
  CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi / 3)).epsilon(1e-6));
  CHECK(l2_norm(TestFunction::zero(1), w).value == 0.0);
}

TEST_CASE("growing integrands are reported as infinite") {
  // A = 1, B = 1/2 leaves exp(3 y^2 / 2) in the integrand.
  CHECK_THROWS_AS(l2_norm(TestFunction::gaussian(1), canonical_weight(Cone::full(1), 1, 0.5)), NumericalError);
}

TEST_CASE("gap inequality") {
  const WeightSpec w = canonical_weight(Cone::full(1), 1, 1);
  // (3/4)t^2 - t >= -1/3 so sigma = 1, C = 1 is comfortably valid.
  CHECK(check_gap(w, 2, 2, 1.0, 1.0, 1.0).empty());
  const GapResult g = verify_gap(w, 2, 2);
  CHECK(g.ok());
  CHECK(g.tau == 1.0);
  CHECK(g.sigma > 0.0);
  CHECK(verify_gap(canonical_weight(Cone::origin(1), 1, 1), 2, 2).ok());
  CHECK_THROWS_AS(verify_gap(w, 1, 2), PreconditionError);
  CHECK_THROWS_AS(verify_gap(w, 2, 1), PreconditionError);
  // An impossible constant is flagged.
  CHECK_FALSE(check_gap(w, 2, 2, 10.0, 1.0, 0.0).empty());
}

TEST_CASE("shift constant stays under the analytic bound") {
  const WeightSpec w = canonical_weight(Cone::full(1), 1, 1);
  // alpha(1) + 2 beta(2) = 1 + 8.
  CHECK(shift_bound(w, 2, 2, 1) == doctest::Approx(9.0));
  const ShiftResult s = verify_shift(w, 2, 2, 1, BoxGrid{10, 101});
  CHECK(s.ok());
  CHECK(s.C <= s.analytic_bound);
  CHECK(verify_shift(w, 2, 2, 1, BoxGrid{10, 101}, 1).C == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("test functions") {
  const TestFunction f = TestFunction::gaussian(1, 2.0, 3.0);
  const std::vector<cplx> z{cplx(0.3, -0.2)};
  CHECK(std::abs(f(z) - 3.0 * std::exp(-2.0 * z[0] * z[0])) < 1e-14);
  CHECK(f.log_abs(z) == doctest::Approx(std::log(std::abs(f(z)))));
  const std::vector<cplx> shift{cplx(1, 1)};
  const std::vector<cplx> zs{z[0] + shift[0]};
  CHECK(std::abs(f.translated(shift)(z) - f(zs)) < 1e-14);
  CHECK(TestFunction::zero(2).is_zero());
}

TEST_CASE("spec hashing is stable") {
  const WeightSpec w = canonical_weight(Cone::rays1d(false, true), 1, 2);
  CHECK(spec_hash(w) == spec_hash(weight_from_yaml(weight_to_yaml(w))));
  CHECK(spec_hash(w) != spec_hash(w.with(1, 3)));
  CHECK(spec_hash(w).size() == 16);
}
