#include "ccl/cli.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <random>

#include "ccl/cones.hpp"
#include "ccl/dbar.hpp"
#include "ccl/decompose.hpp"
#include "ccl/errors.hpp"
#include "ccl/profiles.hpp"
#include "ccl/psh.hpp"
#include "ccl/report.hpp"
#include "ccl/weights.hpp"

namespace ccl {

namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEuler = 2.718281828459045235360287;

struct Ctx {
  fs::path dir;
  std::uint64_t seed = 1;
  std::size_t budget = kDefaultGridBudget;
  std::vector<std::string> header() const { return {"seed=" + std::to_string(seed)}; }
};

template <class T>
T get(const YAML::Node& n, const char* key, T def) {
  if (!n || !n.IsMap() || !n[key]) return def;
  try {
    return n[key].as<T>();
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("config: bad value for '") + key + "'");
  }
}

YAML::Node sub(const YAML::Node& n, const char* key) {
  if (n && n.IsMap() && n[key] && !n[key].IsNull()) return n[key];
  return YAML::Node(YAML::NodeType::Undefined);
}

Cone cone_or(const YAML::Node& n, const char* key, const Cone& def) {
  const YAML::Node c = sub(n, key);
  return c ? cone_from_yaml(c) : def;
}

Profile profile_or(const YAML::Node& cfg, const char* key) {
  const YAML::Node p = sub(sub(cfg, "profiles"), key);
  return p ? profile_from_yaml(p) : Profile::power(2.0, 2.0, 0.0, true);
}

WeightSpec weight_of(const YAML::Node& cfg, const Cone& def_cone, double def_a, double def_b) {
  const YAML::Node w = sub(cfg, "weight");
  return WeightSpec{cone_or(w, "cone", def_cone), get(w, "A", def_a), get(w, "B", def_b),
                    profile_or(cfg, "alpha"), profile_or(cfg, "beta")};
}

TestFunction test_function_of(const YAML::Node& n) {
  const double rate = get(n, "rate", 1.0);
  const double scale = get(n, "scale", 1.0);
  if (get(n, "zero", false)) return TestFunction::zero(1);
  const YAML::Node terms = sub(n, "terms");
  if (!terms) return TestFunction::gaussian(1, rate, scale);
  std::vector<TestFunction::Term> ts;
  for (const auto& t : terms) {
    if (!t.IsSequence() || t.size() != 3) throw ParseError("config: a term is [power, re, im]");
    ts.push_back({{t[0].as<int>()}, scale * cplx(t[1].as<double>(), t[2].as<double>())});
  }
  return TestFunction(1, std::move(ts), rate, {0.0});
}

PlaneBox box_of(const YAML::Node& n, PlaneBox def, std::size_t budget) {
  def.half_x = get(n, "half_x", def.half_x);
  def.half_y = get(n, "half_y", def.half_y);
  def.nx = get(n, "nx", def.nx);
  def.ny = get(n, "ny", def.ny);
  def.budget = budget;
  return def;
}

void check_le(PipelineReport& r, const std::string& name, double v, double thr) {
  r.checks.push_back({name, v, thr, "<=", v <= thr});
}
void check_ge(PipelineReport& r, const std::string& name, double v, double thr) {
  r.checks.push_back({name, v, thr, ">=", v >= thr});
}
void check_finite(PipelineReport& r, const std::string& name, double v) {
  r.checks.push_back({name, v, kInf, "<", std::isfinite(v)});
}
void check_true(PipelineReport& r, const std::string& name, bool b) {
  r.checks.push_back({name, b ? 1.0 : 0.0, 1.0, "==", b});
}

double uniform_abs_im(std::span<const cplx> z) {
  double m = 0.0;
  for (auto v : z) m = std::max(m, std::abs(v.imag()));
  return m;
}

std::vector<double> real_parts(std::span<const cplx> z) {
  std::vector<double> x;
  for (auto v : z) x.push_back(v.real());
  return x;
}

/// A point of `c` with uniform norm r (the origin when c = {0}).
std::vector<double> point_in_cone(const Cone& c, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = c.dim();
  if (k == 1) {
    std::vector<double> signs;
    if (c.is_full() || c.has_negative()) signs.push_back(-1.0);
    if (c.is_full() || c.has_positive()) signs.push_back(1.0);
    if (signs.empty()) return {0.0};
    return {r * signs[static_cast<std::size_t>(u(rng) * signs.size()) % signs.size()]};
  }
  std::vector<double> d;
  if (k == 2) {
    double t;
    if (c.is_full()) {
      t = kTwoPi * u(rng);
    } else if (c.arcs().empty()) {
      return {0.0, 0.0};
    } else {
      const auto& arcs = c.arcs();
      const Arc& a = arcs[static_cast<std::size_t>(u(rng) * arcs.size()) % arcs.size()];
      t = a.lo + u(rng) * a.len;
    }
    d = {std::cos(t), std::sin(t)};
  } else {
    if (c.directions().empty()) return std::vector<double>(k, 0.0);
    d = c.directions()[static_cast<std::size_t>(u(rng) * c.directions().size()) %
                       c.directions().size()];
  }
  const double n = sup_norm(d);
  for (double& v : d) v *= r / n;
  return d;
}

// ------------------------------------------------------------------ pipelines

PipelineReport run_profiles(const YAML::Node& cfg, const Ctx& ctx) {
  PipelineReport rep{"verify-profiles", ctx.seed, {}};
  const YAML::Node p = sub(cfg, "verify-profiles");
  const Profile alpha = profile_or(cfg, "alpha"), beta = profile_or(cfg, "beta");
  const double smax = get(p, "max", 50.0);
  const std::size_t n = get<std::size_t>(p, "points", 2001);
  if (!(smax > 0.0) || n < 3) throw DomainError("verify-profiles: need max > 0 and points >= 3");
  std::vector<double> s(n);
  CsvTable values({"s", "alpha", "beta"});
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = smax * static_cast<double>(i) / static_cast<double>(n - 1);
    values.add_numbers({s[i], alpha(s[i]), beta(s[i])});
  }
  const ProfileReport pr = verify_profile(alpha, beta, s);
  CsvTable viol({"profile", "condition", "location", "magnitude"});
  for (const auto& v : pr.violations) viol.add({v.profile, v.condition, fmt(v.location), fmt(v.magnitude)});
  values.write(ctx.dir / "profiles.csv", ctx.header());
  viol.write(ctx.dir / "violations.csv", ctx.header());
  check_le(rep, "profiles.violations", static_cast<double>(pr.violations.size()), 0.0);
  return rep;
}

PipelineReport run_cone(const YAML::Node& cfg, const Ctx& ctx) {
  PipelineReport rep{"cone", ctx.seed, {}};
  const YAML::Node c = sub(cfg, "cone");
  const Cone k1 = cone_or(c, "K1", Cone::ray2d(0.0));
  const Cone k2 = cone_or(c, "K2", Cone::ray2d(0.5 * kPi));
  const Cone w = cone_or(c, "W", Cone::origin(k1.dim()));
  const std::size_t samples = get<std::size_t>(c, "samples", 1000);
  if (k2.dim() != k1.dim() || w.dim() != k1.dim()) throw DimensionMismatch("cone: dimensions differ");

  const double theta = separation_constant(k1, k2);
  if (const YAML::Node e = sub(c, "expected_theta"))
    check_le(rep, "cone.theta_error", std::abs(theta - e.as<double>()), 1e-12);

  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> radius(1e-3, 10.0);
  double worst = -kInf;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = radius(rng);
    const auto x = point_in_cone(k2, r, rng);
    if (sup_norm(x) == 0.0) continue;
    worst = std::max(worst, (theta * sup_norm(x) - cone_distance(k1, x)) / sup_norm(x));
  }
  if (worst == -kInf) worst = 0.0;
  check_le(rep, "cone.separation_excess", worst, 1e-12);

  const NeighborhoodSplit split = split_neighborhoods(k1, k2, w);
  check_true(rep, "cone.K1_in_V1", k1.subset_of(split.v1));
  check_true(rep, "cone.K2_in_V2", k2.subset_of(split.v2));
  check_true(rep, "cone.V_open", split.v1.has_open_projection() && split.v2.has_open_projection());
  check_true(rep, "cone.closures_meet_inside_W",
             split.v1.closure().intersect(split.v2.closure()).subset_of(w));

  CsvTable summary({"quantity", "value"});
  summary.add({"theta", fmt(theta)});
  summary.add({"margin", fmt(split.margin)});
  summary.write(ctx.dir / "cone.csv", ctx.header());
  CsvTable bounds({"cone", "angle"});
  if (k1.dim() == 2) {
    for (double a : split.v1.boundary_angles()) bounds.add({"V1", fmt(a)});
    for (double a : split.v2.boundary_angles()) bounds.add({"V2", fmt(a)});
  }
  bounds.write(ctx.dir / "boundary.csv", ctx.header());
  return rep;
}

PipelineReport run_psh(const YAML::Node& cfg, const Ctx& ctx) {
  PipelineReport rep{"psh", ctx.seed, {}};
  const YAML::Node p = sub(cfg, "psh");
  const WeightSpec w = weight_of(cfg, Cone::rays1d(false, true), 1.0, 1.0);
  const std::size_t n = get<std::size_t>(p, "samples", 1000);
  const double radius = get(p, "radius", 5.0);
  const auto Rs = get(p, "R", std::vector<double>{1.0, 10.0});
  const double tol = get(p, "tolerance", 1e-8);
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // Theta_a bounds.
  double pl3 = -kInf, pl4 = -kInf;
  for (std::size_t i = 0; i < 10 * n; ++i) {
    const double a = std::exp2(-10.0 + 20.0 * u(rng));
    const cplx z = std::polar(100.0 * std::sqrt(u(rng)), kTwoPi * u(rng));
    pl3 = std::max(pl3, -theta_eval(a, cplx(0.0, z.imag())));
    pl4 = std::max(pl4, theta_eval(a, z) - (std::abs(z.imag()) - a * log_plus(std::abs(z.real()) / a)));
  }
  check_le(rep, "psh.theta_imaginary_axis", pl3, 1e-9);
  check_le(rep, "psh.theta_upper", pl4, 1e-9);

  // sigma_R bounds on configured cones.
  std::vector<Cone> cones;
  if (const YAML::Node cs = sub(p, "sigma_cones")) {
    for (const auto& c : cs) cones.push_back(cone_from_yaml(c));
  } else {
    cones = {Cone::origin(1), Cone::rays1d(false, true), Cone::arcs2d({Arc{0.0, 0.5 * kPi}})};
  }
  for (std::size_t ci = 0; ci < cones.size(); ++ci) {
    const Cone& U = cones[ci];
    const int k = U.dim();
    for (double R : Rs) {
      SigmaConfig sc;
      std::vector<std::vector<cplx>> zs;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<cplx> probe(k), z(k);
        for (int j = 0; j < k; ++j) {
          probe[j] = cplx(R * (2.0 * u(rng) - 1.0), 0.0);
          z[j] = cplx(2.0 * R * (2.0 * u(rng) - 1.0), R * (2.0 * u(rng) - 1.0));
        }
        sc.probes.push_back(probe);
        zs.push_back(z);
      }
      const SigmaSurrogate s = sigma_R_build(U, R, sc);
      double up_r = -kInf, up_d = -kInf, low = -kInf;
      auto upper = [&](const std::vector<cplx>& z) {
        const double v = s(z);
        const double ky = k * uniform_abs_im(z);
        up_r = std::max(up_r, v - (ky + R));
        up_d = std::max(up_d, v - (ky + cone_distance(U, real_parts(z))));
      };
      for (const auto& z : zs) upper(z);
      for (const auto& z : sc.probes) {
        upper(z);
        auto x = real_parts(z);
        for (double& v : x) v /= kEuler;
        low = std::max(low, cone_distance(U, x) - s(z));
      }
      const std::string tag = "psh.sigma[" + std::to_string(ci) + ",R=" + fmt(R) + "]";
      check_le(rep, tag + ".upper_R", up_r, tol);
      check_le(rep, tag + ".upper_distance", up_d, tol);
      check_le(rep, tag + ".lower_probe", low, tol);
    }
  }

  // Seed envelope sandwich.
  const EntireSeed seed = gaussian_seed();
  std::vector<std::vector<cplx>> zs;
  for (std::size_t i = 0; i < n; ++i) zs.push_back({std::polar(radius * std::sqrt(u(rng)), kTwoPi * u(rng))});
  SeedConfig seed_cfg;
  seed_cfg.probes = zs;
  const SeedEnvelope env = seed_envelope_build(seed, w.alpha, w.beta, 1, SeedVariant::general, seed_cfg);
  double lo = -kInf, hi = -kInf;
  for (const auto& z : zs) {
    const double v = env(z);
    lo = std::max(lo, env.lower_bound(z) - v);
    hi = std::max(hi, v - env.upper_bound(z));
  }
  check_le(rep, "psh.seed_lower", lo, tol);
  check_le(rep, "psh.seed_upper", hi, tol);
  check_le(rep, "psh.seed_H", std::abs(env.H()), 0.0);

  // Composite rho_R.
  const double k = w.k();
  const double a2 = w.alpha.is_concave() ? w.A : 2.0 * w.A;
  const double b2 = (2.0 * kEuler * k + 1.0) * w.B + 4.0 * k * seed.A0 * seed.B0 / w.A;
  CsvTable rho_tab({"R", "A_prime", "B_prime", "H", "empirical_H", "D"});
  std::shared_ptr<const RhoRSurrogate> first;
  std::vector<std::vector<double>> series;
  for (double R : Rs) {
    RhoConfig rc;
    rc.seed.probes = zs;
    for (int i = 0; i <= 100; ++i) rc.seed.probes.push_back({cplx(R * i / 100.0, 0.0)});
    const RhoBuild rb = rho_R_build(w, seed, R, rc);
    const RhoBoundsReport br = check_rho_bounds(*rb.rho, rc.seed.probes);
    const std::string tag = "psh.rho[R=" + fmt(R) + "]";
    check_le(rep, tag + ".A_prime_error", std::abs(rb.A2 - a2), 1e-12 * a2);
    check_le(rep, tag + ".B_prime_error", std::abs(rb.B2 - b2), 1e-12 * b2);
    check_le(rep, tag + ".upper_full", br.upper_full, tol);
    check_le(rep, tag + ".upper_cone", br.upper_cone, tol);
    check_le(rep, tag + ".lower", br.lower, tol);
    rho_tab.add_numbers({R, rb.A2, rb.B2, rb.H, br.empirical_H, rb.D});
    if (!first) {
      first = rb.rho;
      const WeightSpec wide = w.with(rb.A2, rb.B2);
      for (int i = 0; i <= 100; ++i) {
        const std::vector<cplx> z{cplx(R * i / 100.0, 0.0)};
        const double v = (*rb.rho)(z);
        series.push_back({R * i / 100.0, v - (rho_eval(w, z) - rb.H), rho_eval(wide, z) - v});
      }
    }
  }
  rho_tab.write(ctx.dir / "rho.csv", ctx.header());
  CsvTable bounds({"abs_x", "lower_gap", "upper_gap"});
  for (const auto& row : series) bounds.add_numbers(row);
  bounds.write(ctx.dir / "psh_bounds.csv", ctx.header());

  // Submean property of rho_R on random circles.
  std::vector<CircleProbe> probes;
  for (int i = 0; i < 100; ++i) {
    const double t = kTwoPi * u(rng);
    probes.push_back({{cplx(6.0 * u(rng) - 3.0, 6.0 * u(rng) - 3.0)},
                      {cplx(std::cos(t), std::sin(t))},
                      0.05 + 0.45 * u(rng)});
  }
  const PshCheck pc = psh_check([&](std::span<const cplx> z) { return (*first)(z); }, probes);
  check_le(rep, "psh.submean_deficiency", pc.max_deficiency, 1e-6);

  // Weight gap and shift constants.
  const YAML::Node g = sub(p, "gap");
  const double ga = get(g, "A_prime", 2.0 * w.A), gb = get(g, "B_prime", 2.0 * w.B);
  const BoxGrid box{get(g, "half", 10.0), get<std::size_t>(g, "points", 201)};
  std::vector<Cone> gap_cones{Cone::full(1), Cone::origin(1)};
  if (const YAML::Node cs = sub(g, "cones")) {
    gap_cones.clear();
    for (const auto& c : cs) gap_cones.push_back(cone_from_yaml(c));
  }
  CsvTable gap_tab({"cone", "sigma", "tau", "C", "offgrid_excess", "shift_C", "shift_bound"});
  for (std::size_t ci = 0; ci < gap_cones.size(); ++ci) {
    const WeightSpec wg = w.over(gap_cones[ci]);
    const GapResult gr = verify_gap(wg, ga, gb, box);
    const ShiftResult sr = verify_shift(wg, ga, gb, get(g, "R", 1.0), box);
    const std::string tag = "psh.gap[" + std::to_string(ci) + "]";
    check_le(rep, tag + ".violations", static_cast<double>(gr.violations.size()), 0.0);
    check_ge(rep, tag + ".sigma", gr.sigma, 0.0);
    check_le(rep, tag + ".shift_C", sr.C, sr.analytic_bound);
    gap_tab.add({serialize_cone(gap_cones[ci]), fmt(gr.sigma), fmt(gr.tau), fmt(gr.C),
                 fmt(gr.offgrid_excess), fmt(sr.C), fmt(sr.analytic_bound)});
  }
  gap_tab.write(ctx.dir / "gap.csv", ctx.header());
  return rep;
}

PipelineReport run_dbar(const YAML::Node& cfg, const Ctx& ctx) {
  PipelineReport rep{"dbar", ctx.seed, {}};
  const YAML::Node d = sub(cfg, "dbar");
  const double half = get(d, "half", 2.0);
  const std::size_t n = get<std::size_t>(d, "points", 256);
  const std::size_t ns = get<std::size_t>(d, "solve_points", 97);
  const double r0 = get(d, "radius", 1.0);
  const double R = get(d, "R", 1.0);
  const std::string method = get<std::string>(d, "method", "convolution");
  if (method != "convolution" && method != "direct") throw ParseError("dbar: method is convolution or direct");
  const CauchyMethod cm = method == "direct" ? CauchyMethod::direct : CauchyMethod::convolution;

  auto disk = [&](const GridSpec& g) {
    return SampledField::sample(g, [&](std::span<const double> q) {
      return cplx(q[0] * q[0] + q[1] * q[1] <= r0 * r0 ? 1.0 : 0.0);
    }, "disk indicator");
  };

  const GridSpec grid = cube_grid(2, half, n, ctx.budget);
  const SampledField eta = disk(grid);
  const SampledField psi = cauchy_solve(eta, cm);
  const GridPoints pts = make_grid(grid);
  const double h = grid.step(0);
  auto near_circle = [&](std::span<const double> q) { return std::abs(std::hypot(q[0], q[1]) - r0) < 2.0 * h; };
  double err = 0.0, scale = 0.0;
  CsvTable profile({"x", "re_psi", "exact"});
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto q = pts.point(p);
    if (near_circle(q)) continue;
    const cplx z(q[0], q[1]);
    const cplx exact = std::abs(z) <= r0 ? std::conj(z) : r0 * r0 / z;
    err = std::max(err, std::abs(psi[p] - exact));
    scale = std::max(scale, std::abs(exact));
    if (grid.unravel(p)[1] == n / 2) profile.add_numbers({q[0], psi[p].real(), exact.real()});
  }
  profile.write(ctx.dir / "cauchy_profile.csv", ctx.header());
  check_le(rep, "dbar.cauchy_rel_error", scale > 0.0 ? err / scale : err, 0.02);
  check_le(rep, "dbar.cauchy_residual", dbar_residual(psi, eta, 0, near_circle) / eta.max_abs(), 0.05);
  write_field_binary((ctx.dir / "psi_cauchy.bin").string(), psi);

  const WeightSpec w = weight_of(cfg, Cone::full(1), 1.0, 1.0);
  const RhoBuild rb = rho_R_build(w, gaussian_seed(), R);
  const GridSpec sg = cube_grid(2, half, ns, ctx.budget);
  const SampledField seta = disk(sg);
  const auto rho = sample_real(sg, [&](std::span<const cplx> z) { return 2.0 * (*rb.rho)(z); });
  const WeightedSolveResult sol = weighted_min_solve(seta, rho);
  CsvTable solver({"iteration", "objective", "residual"});
  bool monotone = true;
  for (std::size_t i = 0; i < sol.diagnostics.size(); ++i) {
    const auto& s = sol.diagnostics[i];
    solver.add({std::to_string(s.iteration), fmt(s.objective), fmt(s.residual)});
    if (i > 0 && s.objective > sol.diagnostics[i - 1].objective * (1.0 + 1e-9)) monotone = false;
  }
  solver.write(ctx.dir / "solver.csv", ctx.header());
  write_field_binary((ctx.dir / "psi_min.bin").string(), sol.psi);

  const double cauchy_obj = weighted_objective(cauchy_solve(seta, cm), rho, sol.rho_min);
  const HormanderResult hc = hormander_check(sol.psi, seta, rho, 1);
  check_le(rep, "dbar.solver_residual", sol.diagnostics.back().residual, 1e-8);
  check_true(rep, "dbar.objective_monotone", monotone);
  check_le(rep, "dbar.minimal_vs_cauchy", sol.diagnostics.back().objective, cauchy_obj);
  check_le(rep, "dbar.hormander_ratio", hc.rhs > 0.0 ? hc.lhs / hc.rhs : 0.0, 1.1);
  return rep;
}

PipelineReport run_decompose(const YAML::Node& cfg, const Ctx& ctx) {
  PipelineReport rep{"decompose", ctx.seed, {}};
  const YAML::Node d = sub(cfg, "decompose");
  const Cone k1 = cone_or(d, "K1", Cone::rays1d(false, true));
  const Cone k2 = cone_or(d, "K2", Cone::rays1d(true, false));
  const WeightSpec w = weight_of(cfg, Cone::origin(1), 2.0, 2.0);
  SplitConfig sc;
  sc.box = box_of(sub(d, "box"), sc.box, ctx.budget);
  sc.R = get(d, "R", sc.R);
  sc.seed = ctx.seed;
  sc.samples = get(d, "samples", sc.samples);
  const TestFunction f = test_function_of(sub(d, "f"));
  const SplitResult r = theorem2_split(f, k1, k2, w, gaussian_seed(), sc);
  const SplitReport& q = r.report;

  CsvTable tab({"quantity", "value"});
  for (const auto& [name, v] :
       std::vector<std::pair<std::string, double>>{{"theta", q.theta},
                                                   {"B_tilde", q.B_tilde},
                                                   {"A_prime", q.A2},
                                                   {"B_prime", q.B2},
                                                   {"D", q.D},
                                                   {"H", q.H},
                                                   {"input_norm", q.input_norm},
                                                   {"reconstruction_error", q.reconstruction_error},
                                                   {"norm_f1", q.norm_f1},
                                                   {"norm_f2", q.norm_f2},
                                                   {"eta_extent", q.eta_extent},
                                                   {"aaa1_excess", q.aaa1_excess},
                                                   {"aaa2_C", q.aaa2_C},
                                                   {"hormander_lhs", q.hormander.lhs},
                                                   {"hormander_rhs", q.hormander.rhs}})
    tab.add({name, fmt(v)});
  tab.add({"U1", serialize_cone(q.U1)});
  tab.add({"U2", serialize_cone(q.U2)});
  tab.add({"W1", serialize_cone(q.W1)});
  tab.add({"W2", serialize_cone(q.W2)});
  tab.write(ctx.dir / "report.csv", ctx.header());
  CsvTable solver({"iteration", "objective", "residual"});
  for (const auto& s : q.diagnostics) solver.add({std::to_string(s.iteration), fmt(s.objective), fmt(s.residual)});
  solver.write(ctx.dir / "solver.csv", ctx.header());
  write_field_binary((ctx.dir / "f1.bin").string(), r.f1);
  write_field_binary((ctx.dir / "f2.bin").string(), r.f2);

  check_le(rep, "decompose.reconstruction", q.reconstruction_error, 1e-6);
  check_true(rep, "decompose.eta_support", q.eta_support_ok);
  check_le(rep, "decompose.eta_extent", q.eta_extent, 1.0);
  check_finite(rep, "decompose.norm_f1", q.norm_f1);
  check_finite(rep, "decompose.norm_f2", q.norm_f2);
  check_le(rep, "decompose.aaa1_excess", q.aaa1_excess, 1e-12);
  check_finite(rep, "decompose.aaa2_C", q.aaa2_C);
  check_le(rep, "decompose.solver_residual", q.diagnostics.back().residual, 1e-8);
  check_le(rep, "decompose.hormander_ratio", q.hormander.rhs > 0.0 ? q.hormander.lhs / q.hormander.rhs : 0.0,
           1.1);
  return rep;
}

PipelineReport run_density(const YAML::Node& cfg, const Ctx& ctx) {
  PipelineReport rep{"density", ctx.seed, {}};
  const YAML::Node d = sub(cfg, "density");
  const WeightSpec w = weight_of(cfg, Cone::rays1d(false, true), 2.0, 2.0);
  const Cone W = cone_or(d, "W", w.U);
  DensityConfig dc;
  dc.box = box_of(sub(d, "box"), dc.box, ctx.budget);
  dc.ns = get(d, "n", dc.ns);
  const TestFunction f = test_function_of(sub(d, "f"));
  const DensityResult r = density_approximate(f, w, W, gaussian_seed(), dc);

  CsvTable series({"n", "error"});
  CsvTable detail({"n", "error", "tail", "correction", "hormander_lhs", "hormander_rhs"});
  for (const auto& s : r.steps) {
    series.add_numbers({static_cast<double>(s.n), s.error});
    detail.add_numbers({static_cast<double>(s.n), s.error, s.tail, s.correction, s.hormander.lhs, s.hormander.rhs});
    const std::string tag = "density[n=" + std::to_string(s.n) + "]";
    check_le(rep, tag + ".hormander_ratio", s.hormander.rhs > 0.0 ? s.hormander.lhs / s.hormander.rhs : 0.0, 1.1);
    check_true(rep, tag + ".converged", s.converged);
  }
  series.write(ctx.dir / "density.csv", ctx.header());
  detail.write(ctx.dir / "density_detail.csv", ctx.header());
  check_true(rep, "density.strictly_decreasing", r.decreasing());
  if (!r.steps.empty() && r.steps.front().error > 0.0)
    check_le(rep, "density.final_over_first", r.steps.back().error / r.steps.front().error, 0.1);
  return rep;
}

}  // namespace

bool PipelineReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
}

const std::vector<std::string>& pipeline_names() {
  static const std::vector<std::string> names{"verify-profiles", "cone", "psh", "dbar", "decompose", "density"};
  return names;
}

YAML::Node load_config(const std::string& path) {
  try {
    YAML::Node n = YAML::LoadFile(path);
    if (n.IsNull()) return YAML::Node(YAML::NodeType::Map);
    if (!n.IsMap()) throw ParseError("config: top level must be a mapping: " + path);
    return n;
  } catch (const YAML::BadFile&) {
    throw ParseError("config: cannot read " + path);
  } catch (const YAML::Exception& e) {
    throw ParseError("config: " + path + ": " + e.what());
  }
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ParseError("--set expects KEY=VALUE, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ParseError("--set " + key + ": " + e.what());
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    parts.push_back(key.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  YAML::Node cur = root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (parts[i].empty()) throw ParseError("--set: empty key component in '" + key + "'");
    if (cur[parts[i]] && !cur[parts[i]].IsMap()) throw ParseError("--set: '" + parts[i] + "' is not a mapping");
    YAML::Node next = cur[parts[i]];
    if (!next.IsDefined() || next.IsNull()) {
      cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
      next = cur[parts[i]];
    }
    cur.reset(next);
  }
  cur[parts.back()] = value;
}

fs::path default_out_dir() {
  const char* env = std::getenv("CCL_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path("ccl-out");
}

PipelineReport run_pipeline(const std::string& name, const YAML::Node& config, const RunOptions& opt) {
  Ctx ctx;
  ctx.dir = (opt.out_dir.empty() ? default_out_dir() : opt.out_dir) / name;
  ctx.seed = opt.seed ? *opt.seed : get<std::uint64_t>(config, "seed", 1);
  ctx.budget = opt.grid_budget;
  fs::create_directories(ctx.dir);
  PipelineReport rep;
  if (name == "verify-profiles") rep = run_profiles(config, ctx);
  else if (name == "cone") rep = run_cone(config, ctx);
  else if (name == "psh") rep = run_psh(config, ctx);
  else if (name == "dbar") rep = run_dbar(config, ctx);
  else if (name == "decompose") rep = run_decompose(config, ctx);
  else if (name == "density") rep = run_density(config, ctx);
  else throw ParseError("unknown pipeline '" + name + "'");
  emit_report(rep, ctx.dir);
  return rep;
}

void emit_report(const PipelineReport& report, const fs::path& dir) {
  CsvTable t({"check", "value", "relation", "threshold", "pass"});
  for (const auto& c : report.checks)
    t.add({c.name, fmt(c.value), c.relation, fmt(c.threshold), c.pass ? "1" : "0"});
  t.write(dir / "checks.csv", {"pipeline=" + report.pipeline, "seed=" + std::to_string(report.seed)});
}

int run_scenario(const std::string& subcommand, const std::string& config_path, const RunOptions& opt,
                 std::ostream& log) {
  try {
    YAML::Node cfg = config_path.empty() ? YAML::Node(YAML::NodeType::Map) : load_config(config_path);
    for (const auto& o : opt.overrides) apply_override(cfg, o);
    std::vector<std::string> names;
    if (subcommand == "all") {
      names = pipeline_names();
    } else {
      if (std::find(pipeline_names().begin(), pipeline_names().end(), subcommand) == pipeline_names().end())
        throw ParseError("unknown subcommand '" + subcommand + "'");
      const std::string named = get<std::string>(cfg, "pipeline", subcommand);
      if (named != subcommand)
        throw ParseError("config names pipeline '" + named + "' but subcommand is '" + subcommand + "'");
      names = {subcommand};
    }
    int code = kExitOk;
    for (const auto& name : names) {
      const PipelineReport rep = run_pipeline(name, cfg, opt);
      for (const auto& c : rep.checks)
        log << (c.pass ? "PASS " : "FAIL ") << c.name << " " << fmt(c.value) << " " << c.relation << " "
            << fmt(c.threshold) << "\n";
      log << name << ": " << (rep.ok() ? "ok" : "FAILED") << "\n";
      if (!rep.ok()) code = kExitCheckFailed;
    }
    return code;
  } catch (const ParseError& e) {
    log << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const YAML::Exception& e) {
    log << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const PreconditionError& e) {
    log << "precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const DomainError& e) {
    log << "precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const DimensionMismatch& e) {
    log << "precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const BudgetError& e) {
    log << "precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace ccl
