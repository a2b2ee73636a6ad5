// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ccl/cli.hpp"
#include "ccl/cones.hpp"
#include "ccl/dbar.hpp"
#include "ccl/decompose.hpp"
#include "ccl/psh.hpp"
#include "ccl/weights.hpp"

using namespace ccl;
namespace fs = std::filesystem;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
using Z = std::vector<cplx>;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double kmax_im(std::span<const cplx> z) {
  double m = 0.0;
  for (auto v : z) m = std::max(m, std::abs(v.imag()));
  return m;
}

std::vector<double> re(std::span<const cplx> z) {
  std::vector<double> x;
  for (auto v : z) x.push_back(v.real());
  return x;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome theta_bounds() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double lower = kNegInf, upper = kNegInf;
  for (int i = 0; i < 10000; ++i) {
    const double a = std::exp2(-10.0 + 20.0 * u(rng));
    const cplx z = std::polar(100.0 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
    lower = std::max(lower, -theta_eval(a, cplx(0.0, z.imag())));
    upper = std::max(upper, theta_eval(a, z) - (std::abs(z.imag()) - a * log_plus(std::abs(z.real()) / a)));
  }
  const double worst = std::max(lower, upper);
  return {worst <= 1e-9, "worst excess " + num(worst) + " (tol 1e-9)"};
}

Outcome sigma_bounds() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<Cone> cones{Cone::origin(1), Cone::rays1d(false, true),
                                Cone::arcs2d({Arc{0.0, 0.5 * std::numbers::pi}})};
  double worst = kNegInf;
  for (const Cone& U : cones) {
    const int k = U.dim();
    for (double R : {1.0, 10.0}) {
      SigmaConfig cfg;
      std::vector<Z> zs;
      for (int i = 0; i < 1000; ++i) {
        Z probe(k), z(k);
        for (int j = 0; j < k; ++j) {
          probe[j] = R * u(rng);
          z[j] = cplx(2.0 * R * u(rng), R * u(rng));
        }
        cfg.probes.push_back(probe);
        zs.push_back(z);
      }
      const SigmaSurrogate s = sigma_R_build(U, R, cfg);
      auto upper = [&](const Z& z) {
        const double v = s(z), ky = k * kmax_im(z);
        worst = std::max({worst, v - (ky + R), v - (ky + cone_distance(U, re(z)))});
      };
      for (const auto& z : zs) upper(z);
      for (const auto& p : cfg.probes) {
        upper(p);
        auto x = re(p);
        for (double& v : x) v /= std::numbers::e;
        worst = std::max(worst, cone_distance(U, x) - s(p));
      }
    }
  }
  return {worst <= 1e-8, "worst excess " + num(worst) + " over 3 cones x 2 radii (tol 1e-8)"};
}

std::vector<Z> disk_samples(int n, double radius, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Z> zs;
  for (int i = 0; i < n; ++i)
    zs.push_back({std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng))});
  return zs;
}

Outcome seed_sandwich() {
  const Profile sq = Profile::power(2.0, 2.0);
  const auto zs = disk_samples(1000, 5.0, 3);
  SeedConfig cfg;
  cfg.probes = zs;
  const SeedEnvelope env = seed_envelope_build(gaussian_seed(), sq, sq, 1, SeedVariant::general, cfg);
  double worst = kNegInf;
  for (const auto& z : zs) {
    const double v = env(z);
    worst = std::max({worst, env.lower_bound(z) - v, v - env.upper_bound(z)});
  }
  return {worst <= 1e-8 && env.H() == 0.0, "H = " + num(env.H()) + ", worst excess " + num(worst) + " (tol 1e-8)"};
}

Outcome rho_constants() {
  const WeightSpec w = canonical_weight(Cone::rays1d(false, true), 1.0, 1.0);
  const double b2 = 5.0 + 2.0 * std::numbers::e;
  bool ok = true;
  double worst = kNegInf, A2 = 0.0, B2 = 0.0;
  for (double R : {1.0, 10.0}) {
    RhoConfig cfg;
    cfg.seed.probes = disk_samples(1000, 5.0, 4);
    const RhoBuild rb = rho_R_build(w, gaussian_seed(), R, cfg);
    const RhoBoundsReport br = check_rho_bounds(*rb.rho, cfg.seed.probes);
    A2 = rb.A2;
    B2 = rb.B2;
    ok = ok && rb.A2 == 2.0 && std::abs(rb.B2 - b2) <= 1e-12 * b2;
    worst = std::max({worst, br.upper_full, br.upper_cone, br.lower});
  }
  return {ok && worst <= 1e-8,
          "A' = " + num(A2) + ", B' = " + std::to_string(B2) + ", worst bound excess " + num(worst)};
}

Outcome gap() {
  bool ok = true;
  std::string detail;
  for (const auto& [label, U] : {std::pair{"U = R", Cone::full(1)}, std::pair{"U = {0}", Cone::origin(1)}}) {
    const GapResult g = verify_gap(canonical_weight(U, 1, 1), 2, 2, BoxGrid{10.0, 201});
    ok = ok && g.ok() && g.tau == 1.0 && g.sigma > 0.0;
    detail += std::string(detail.empty() ? "" : "; ") + label + ": sigma " + num(g.sigma) + ", C " + num(g.C);
  }
  return {ok, detail};
}

Outcome shift() {
  bool ok = true;
  std::string detail;
  for (const auto& [label, U] : {std::pair{"U = R", Cone::full(1)}, std::pair{"U = {0}", Cone::origin(1)}}) {
    const ShiftResult s = verify_shift(canonical_weight(U, 1, 1), 2, 2, 1.0, BoxGrid{10.0, 201});
    ok = ok && s.C <= s.analytic_bound;
    detail += std::string(detail.empty() ? "" : "; ") + label + ": C " + num(s.C) + " <= " + num(s.analytic_bound);
  }
  return {ok, detail};
}

Outcome cauchy() {
  const GridSpec g = cube_grid(2, 2.0, 256);
  const SampledField eta = SampledField::sample(
      g, [](std::span<const double> q) { return cplx(q[0] * q[0] + q[1] * q[1] <= 1.0 ? 1.0 : 0.0); });
  const SampledField psi = cauchy_solve(eta);
  const GridPoints pts = make_grid(g);
  const double h = g.step(0);
  auto near = [&](std::span<const double> q) { return std::abs(std::hypot(q[0], q[1]) - 1.0) < 2.0 * h; };
  double err = 0.0, scale = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (near(pts.point(p))) continue;
    const cplx z(pts.point(p)[0], pts.point(p)[1]);
    const cplx exact = std::abs(z) <= 1.0 ? std::conj(z) : 1.0 / z;
    err = std::max(err, std::abs(psi[p] - exact));
    scale = std::max(scale, std::abs(exact));
  }
  const double rel = err / scale;
  const double res = dbar_residual(psi, eta, 0, near) / eta.max_abs();
  return {rel <= 0.02 && res <= 0.05, "max error " + num(rel) + " (tol 0.02), residual " + num(res) + " (tol 0.05)"};
}

Outcome hormander_scenarios() {
  const fs::path out = fs::temp_directory_path() / "ccl_acceptance";
  fs::remove_all(out);
  RunOptions opt;
  opt.out_dir = out;
  bool ok = true;
  int seen = 0;
  double worst = 0.0;
  for (const char* name : {"dbar", "decompose", "density"}) {
    const YAML::Node cfg = load_config((fs::path(CCL_SOURCE_DIR) / "scenarios" / (std::string(name) + ".yaml")).string());
    const PipelineReport rep = run_pipeline(name, cfg, opt);
    for (const auto& c : rep.checks) {
      if (c.name.find("hormander_ratio") == std::string::npos) continue;
      ++seen;
      worst = std::max(worst, c.value);
      ok = ok && c.value <= 1.1;
    }
  }
  return {ok && seen > 0, std::to_string(seen) + " solves, worst lhs/(k^2 rhs) " + num(worst) + " (tol 1.1)"};
}

Outcome decomposition() {
  const SplitResult r = theorem2_split(TestFunction::gaussian(1), Cone::rays1d(false, true),
                                       Cone::rays1d(true, false), canonical_weight(Cone::origin(1), 2, 2),
                                       gaussian_seed());
  const SplitReport& q = r.report;
  const bool ok = q.reconstruction_error <= 1e-6 && std::isfinite(q.norm_f1) && std::isfinite(q.norm_f2) &&
                  q.eta_support_ok && q.eta_extent <= 1.0;
  return {ok, "reconstruction " + num(q.reconstruction_error) + " (tol 1e-6), norms " + num(q.norm_f1) + ", " +
                  num(q.norm_f2) + " in A' = " + num(q.A2) + ", B' = " + num(q.B2) + ", eta extent " +
                  num(q.eta_extent)};
}

Outcome density() {
  const DensityResult r = density_approximate(TestFunction::gaussian(1),
                                              canonical_weight(Cone::rays1d(false, true), 2, 2),
                                              Cone::rays1d(false, true), gaussian_seed());
  std::string errs;
  for (const auto& s : r.steps) errs += (errs.empty() ? "" : ", ") + num(s.error);
  const double ratio = r.steps.back().error / r.steps.front().error;
  return {r.decreasing() && ratio <= 0.1, "errors " + errs + ", final/first " + num(ratio) + " (tol 0.1)"};
}

Outcome cones() {
  const Cone k1 = Cone::ray2d(0.0), k2 = Cone::ray2d(0.5 * std::numbers::pi);
  const double theta = separation_constant(k1, k2);

  // delta_K1(x) >= theta |x| on random points of a wider K2.
  const Cone wide = Cone::arcs2d({Arc{1.0, 2.5}});
  const double tw = separation_constant(k1, wide);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> a(1.0, 3.5), r(1e-3, 10.0);
  double worst = kNegInf;
  for (int i = 0; i < 1000; ++i) {
    const double t = a(rng), s = r(rng);
    const std::vector<double> x{s * std::cos(t), s * std::sin(t)};
    worst = std::max(worst, tw * sup_norm(x) - cone_distance(k1, x));
  }

  const NeighborhoodSplit split = split_neighborhoods(k1, k2, Cone::origin(2));
  const bool disjoint = split.v1.closure().intersect(split.v2.closure()).is_origin() && k1.subset_of(split.v1) &&
                        k2.subset_of(split.v2);
  return {std::abs(theta - 1.0) <= 1e-12 && worst <= 1e-12 && disjoint,
          "theta " + num(theta) + ", worst bound excess " + num(worst) + ", closures disjoint: " +
              (disjoint ? "yes" : "no")};
}

struct Criterion {
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"Theta_a bounds", 1.0, theta_bounds},
      {"sigma_R bounds", 10.0, sigma_bounds},
      {"seed envelope sandwich", 0.0, seed_sandwich},
      {"rho_R constants and bounds", 30.0, rho_constants},
      {"weight gap", 0.0, gap},
      {"weight shift", 0.0, shift},
      {"Cauchy transform of the disk", 30.0, cauchy},
      {"Hormander estimate on shipped scenarios", 0.0, hormander_scenarios},
      {"decomposition along opposite rays", 120.0, decomposition},
      {"density approximation", 120.0, density},
      {"cone geometry", 0.0, cones},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && dt >= c.time_limit) {
      o.pass = false;
      o.detail += ", over time limit " + num(c.time_limit) + " s";
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
