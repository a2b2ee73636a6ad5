#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ccl/cones.hpp"
#include "ccl/errors.hpp"

using namespace ccl;

namespace {

// Brute-force uniform distance from x to the ray t*d, t in [0, tmax].
double ray_oracle(const std::vector<double>& x, const std::vector<double>& d, double tmax = 50.0) {
  double best = 1e300;
  for (int i = 0; i <= 200000; ++i) {
    const double t = tmax * i / 200000.0;
    best = std::min(best, std::max(std::abs(x[0] - t * d[0]), std::abs(x[1] - t * d[1])));
  }
  return best;
}

}  // namespace

TEST_CASE("membership") {
  const std::vector<double> x{1.0, 0.0};
  CHECK(cone_membership(Cone::full(2), x));
  CHECK_FALSE(cone_membership(Cone::origin(2), x));
  CHECK(cone_membership(Cone::ray2d(0.0), std::vector<double>{5.0, 0.0}));
  CHECK(cone_membership(Cone::rays1d(false, true), std::vector<double>{3.0}));
  CHECK_FALSE(cone_membership(Cone::rays1d(false, true), std::vector<double>{-3.0}));
}

TEST_CASE("uniform distance to simple cones") {
  CHECK(cone_distance(Cone::full(2), std::vector<double>{3.0, -4.0}) == 0.0);
  CHECK(cone_distance(Cone::origin(2), std::vector<double>{3.0, -4.0}) == 4.0);
  CHECK(cone_distance(Cone::ray2d(0.0), std::vector<double>{-2.0, 1.0}) == doctest::Approx(2.0));
  CHECK(cone_distance(Cone::rays1d(false, true), std::vector<double>{-2.5}) == 2.5);
}

TEST_CASE("distance to a ray matches a brute-force scan") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0), a(0.0, kTwoPi);
  for (int i = 0; i < 40; ++i) {
    const double t = a(rng);
    const std::vector<double> x{u(rng), u(rng)}, d{std::cos(t), std::sin(t)};
    CHECK(cone_distance(Cone::ray2d(t), x) == doctest::Approx(ray_oracle(x, d)).epsilon(1e-4));
  }
}

TEST_CASE("distance is homogeneous and 1-Lipschitz") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0), s(0.0, 5.0);
  const Cone U = Cone::arcs2d({Arc{0.3, 1.2}, Arc{3.5, 0.4}});
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> x{u(rng), u(rng)}, y{u(rng), u(rng)};
    const double t = s(rng);
    const std::vector<double> tx{t * x[0], t * x[1]}, diff{x[0] - y[0], x[1] - y[1]};
    CHECK(cone_distance(U, tx) == doctest::Approx(t * cone_distance(U, x)).epsilon(1e-12).scale(1.0));
    CHECK(std::abs(cone_distance(U, x) - cone_distance(U, y)) <= sup_norm(diff) + 1e-12);
  }
}

TEST_CASE("conic neighborhoods") {
  CHECK(conic_neighborhood(Cone::origin(2), 0.3) == Cone::origin(2));
  const Cone n = conic_neighborhood(Cone::ray2d(0.0), kPi / 8);
  REQUIRE(n.arcs().size() == 1);
  CHECK(n.arcs()[0].len == doctest::Approx(kPi / 4));
  CHECK_FALSE(n.arcs()[0].lo_closed);
  CHECK(n.has_open_projection());
  CHECK(cone_membership(n, std::vector<double>{1.0, std::tan(kPi / 8) * 0.99}));
  CHECK_FALSE(cone_membership(n, std::vector<double>{1.0, std::tan(kPi / 8) * 1.01}));
  CHECK(conic_neighborhood(Cone::full(2), 0.1).is_full());
}

TEST_CASE("separation constants") {
  CHECK(separation_constant(Cone::ray2d(0.0), Cone::ray2d(kPi / 2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(separation_constant(Cone::ray2d(0.0), Cone::origin(2)) == 1.0);
  CHECK(separation_constant(Cone::rays1d(false, true), Cone::rays1d(true, false)) == 1.0);
  CHECK_THROWS_AS(separation_constant(Cone::ray2d(0.0), Cone::ray2d(0.0)), PreconditionError);

  // Narrow angle: an oracle sweep over unit vectors of K2.
  const double phi = 0.4;
  const double theta = separation_constant(Cone::ray2d(0.0), Cone::ray2d(phi));
  const std::vector<double> x{std::cos(phi), std::sin(phi)};
  const double n = sup_norm(x);
  CHECK(theta == doctest::Approx(ray_oracle({x[0] / n, x[1] / n}, {1.0, 0.0})).epsilon(1e-4));
}

TEST_CASE("separated cones obey the distance lower bound") {
  const Cone k1 = Cone::arcs2d({Arc{0.0, 1.0}});
  const Cone k2 = Cone::arcs2d({Arc{2.0, 1.5}});
  const double theta = separation_constant(k1, k2);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> a(2.0, 3.5), r(0.01, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = a(rng), s = r(rng);
    const std::vector<double> x{s * std::cos(t), s * std::sin(t)};
    CHECK(cone_distance(k1, x) >= theta * sup_norm(x) - 1e-12);
  }
}

TEST_CASE("split neighborhoods have closures meeting inside W") {
  const NeighborhoodSplit s = split_neighborhoods(Cone::ray2d(0.0), Cone::ray2d(kPi), Cone::origin(2));
  CHECK(s.v1.has_open_projection());
  CHECK(s.v2.has_open_projection());
  CHECK(Cone::ray2d(0.0).subset_of(s.v1));
  CHECK(Cone::ray2d(kPi).subset_of(s.v2));
  CHECK(s.v1.closure().intersect(s.v2.closure()).is_origin());

  const Cone k = Cone::arcs2d({Arc{0.0, 0.5}});
  const Cone w = conic_neighborhood(k, 0.2);
  const NeighborhoodSplit same = split_neighborhoods(k, k, w);
  CHECK(same.v1 == same.v2);
  CHECK(same.v1.closure().subset_of(w));

  CHECK_THROWS_AS(split_neighborhoods(Cone::ray2d(0.0), Cone::ray2d(0.0), Cone::origin(2)),
                  PreconditionError);
}

TEST_CASE("cone algebra") {
  const Cone pos = Cone::rays1d(false, true), neg = Cone::rays1d(true, false);
  CHECK(pos.unite(neg).is_full());
  CHECK(pos.intersect(neg).is_origin());
  CHECK(pos.complement() == Cone::rays1d(true, false).unite(Cone::origin(1)));
  CHECK(Cone::origin(1).complement().is_full());
  const Cone q = Cone::arcs2d({Arc{0.0, kPi / 2}});
  CHECK(q.complement().complement().closure() == q);
  CHECK(parse_cone(serialize_cone(q)) == q);
  CHECK_THROWS_AS(cone_distance(q, std::vector<double>{1.0}), DimensionMismatch);
}
