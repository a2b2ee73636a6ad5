#include "ccl/decompose.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "ccl/errors.hpp"

namespace ccl {

namespace {

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

double sphere_area(int k) {
  return 2.0 * std::pow(kPi, 0.5 * k) / boost::math::tgamma(0.5 * k);
}

double radial_mass(int k, bool independent) {
  auto f = [k](double r) { return std::pow(r, k - 1) * bump(r * r); };
  double v;
  if (independent) {
    boost::math::quadrature::tanh_sinh<double> ts;
    v = ts.integrate(f, 0.0, 1.0);
  } else {
    v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 10, 1e-13);
  }
  return sphere_area(k) * v;
}

void require_line(int k, const char* who) {
  if (k != 1) throw DomainError(std::string(who) + ": pipelines run at k = 1 only");
}

double x_of(std::span<const double> p) { return p[0]; }

double dist1(const Cone& c, double x) {
  const double v[1] = {x};
  return cone_distance(c, v);
}

bool member1(const Cone& c, double x) {
  const double v[1] = {x};
  return cone_membership(c, v);
}

double field_max_diff(const SampledField& a, const SampledField& b, const SampledField& c) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) m = std::max(m, std::abs(a[p] - b[p] - c[p]));
  return m;
}

}  // namespace

// ------------------------------------------------------------ mollifier

Mollifier::Mollifier(int k) : k_(k) {
  if (k < 1) throw DomainError("Mollifier: dimension must be positive");
  const double mass = k == 1 ? boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                   [](double t) { return bump(t * t); }, -1.0, 1.0, 10, 1e-13)
                             : radial_mass(k, false);
  c_ = 1.0 / mass;
}

double Mollifier::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != k_) throw DimensionMismatch("Mollifier: point dimension");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return c_ * bump(r2);
}

double Mollifier::operator()(double x) const { return c_ * bump(x * x); }

double Mollifier::mass() const {
  if (k_ == 1) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return c_ * ts.integrate([](double t) { return bump(t * t); }, -1.0, 1.0);
  }
  return c_ * radial_mass(k_, true);
}

double Mollifier::integral(double lo, double hi) const {
  if (k_ != 1) throw DomainError("Mollifier::integral: k = 1 only");
  lo = std::max(lo, -1.0);
  hi = std::min(hi, 1.0);
  if (!(lo < hi)) return 0.0;
  return c_ * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                  [](double t) { return bump(t * t); }, lo, hi, 10, 1e-13);
}

// ------------------------------------------------------------ partition

Partition::Partition(Cone w1, Cone w2, Mollifier m)
    : w1_(std::move(w1)), w2_(std::move(w2)), m_(m) {}

double Partition::g(const Cone& w, double x) const {
  if (w.is_full()) return 1.0;
  if (w.has_negative() && !w.has_positive()) return std::clamp(m_.integral(x, 1.0), 0.0, 1.0);
  if (w.has_positive() && !w.has_negative()) return std::clamp(m_.integral(-1.0, x), 0.0, 1.0);
  return 0.0;
}

double Partition::g1(double x) const { return g(w1_, x); }
double Partition::g2(double x) const { return g(w2_, x); }

double Partition::dbar_g1(double x) const {
  if (w1_.is_full() || w1_.is_origin()) return 0.0;
  const double g0 = m_(x);
  return w1_.has_negative() ? -0.5 * g0 : 0.5 * g0;
}

Partition build_partition(const Cone& W1, const Cone& W2, const Mollifier& m) {
  require_line(W1.dim(), "build_partition");
  if (W2.dim() != 1 || m.k() != 1) throw DimensionMismatch("build_partition: dimensions differ");
  if (!W1.unite(W2).is_full()) throw PreconditionError("build_partition: W1 u W2 must be R^k");
  if (!W1.intersect(W2).is_origin()) throw PreconditionError("build_partition: W1 n W2 must be {0}");
  return Partition(W1, W2, m);
}

GridSpec PlaneBox::spec() const {
  GridSpec g{{-half_x, -half_y}, {half_x, half_y}, {nx, ny}, budget};
  g.validate();
  return g;
}

// ------------------------------------------------------------ splitting

SplitResult lemma7_split(const TestFunction& f, const Cone& U, const Cone& U1, const Cone& U2,
                         const WeightSpec& w, const EntireSeed& seed, const SplitConfig& cfg) {
  require_line(f.k(), "lemma7_split");
  if (U.dim() != 1 || U1.dim() != 1 || U2.dim() != 1 || w.k() != 1)
    throw DimensionMismatch("lemma7_split: cone dimensions differ");
  if (!(w.A > 0.0) || !(w.B > 0.0)) throw PreconditionError("lemma7_split: A and B must be positive");
  const Cone c1 = U1.closure(), c2 = U2.closure();
  if (!c1.intersect(c2).is_origin())
    throw PreconditionError("lemma7_split: closures of U1 and U2 must meet only at 0");

  SplitReport rep;
  rep.U = U;
  rep.U1 = U1;
  rep.U2 = U2;
  const WeightSpec wu = w.over(U);
  if (cfg.certify_input && !f.is_zero()) {
    try {
      rep.input_norm = l2_norm(f, wu).value;
    } catch (const NumericalError& e) {
      throw PreconditionError(std::string("lemma7_split: f is not certified in H(U): ") + e.what());
    }
  }

  const Cone zero = Cone::origin(1);
  const NeighborhoodSplit vs = split_neighborhoods(c1, c2, zero);
  rep.V1 = vs.v1;
  rep.V2 = vs.v2;
  rep.W2 = split_neighborhoods(vs.v1.closure(), vs.v2.closure(), zero).v1;
  rep.W1 = rep.W2.complement();
  const Partition part = build_partition(rep.W1, rep.W2);

  rep.theta = std::min(separation_constant(c1, vs.v1.complement()),
                       separation_constant(c2, vs.v2.complement()));
  rep.B_tilde = w.B / rep.theta;

  const Cone all = U.unite(U1).unite(U2);
  const RhoBuild rb = rho_R_build(w.over(all).with(w.A, rep.B_tilde), seed, cfg.R, cfg.rho);
  rep.A2 = rb.A2;
  rep.B2 = rb.B2;
  rep.D = rb.D;
  rep.H = rb.H;

  const GridSpec grid = cfg.box.spec();
  const GridPoints pts = make_grid(grid);
  std::vector<cplx> fv(grid.size()), t1(grid.size()), t2(grid.size()), ev(grid.size());
  std::vector<double> rho2(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto z = to_complex(pts.point(p));
    const double x = x_of(pts.point(p));
    fv[p] = f(z);
    t1[p] = fv[p] * part.g1(x);
    t2[p] = fv[p] * part.g2(x);
    ev[p] = fv[p] * part.dbar_g1(x);
    rho2[p] = 2.0 * (*rb.rho)(z);
    if (ev[p] != cplx{}) {
      rep.eta_extent = std::max(rep.eta_extent, std::abs(x));
      if (dist1(rep.W1, x) > 1.0 || dist1(rep.W2, x) > 1.0) rep.eta_support_ok = false;
    }
  }

  const SampledField ff(grid, fv, "f");
  SampledField eta(grid, std::move(ev), "eta = f dbar g1");
  WeightedSolveResult sol = weighted_min_solve(eta, rho2, cfg.solver);
  rep.diagnostics = sol.diagnostics;
  rep.converged = sol.converged;

  std::vector<cplx> f1v(grid.size()), f2v(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    f1v[p] = t1[p] - sol.psi[p];
    f2v[p] = t2[p] + sol.psi[p];
  }
  SampledField f1(grid, std::move(f1v), "f1"), f2(grid, std::move(f2v), "f2");

  const double fmax = ff.max_abs();
  const double diff = field_max_diff(ff, f1, f2);
  rep.reconstruction_error = fmax > 0.0 ? diff / fmax : diff;
  rep.norm_f1 = weighted_l2_field(f1, w.over(U.unite(U1)).with(rep.A2, rep.B2));
  rep.norm_f2 = weighted_l2_field(f2, w.over(U.unite(U2)).with(rep.A2, rep.B2));
  rep.hormander = hormander_check(sol.psi, eta, rho2, 1);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dist(-cfg.sample_half, cfg.sample_half);
  rep.aaa1_excess = -1e300;
  rep.aaa2_C = -1e300;
  const Cone Us[2] = {U1, U2}, Vs[2] = {rep.V1, rep.V2}, Ws[2] = {rep.W1, rep.W2};
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const double x = dist(rng);
    for (int nu = 0; nu < 2; ++nu) {
      const Cone un = U.unite(Us[nu]);
      if (!member1(Vs[nu], x))
        rep.aaa1_excess = std::max(rep.aaa1_excess, dist1(U, rep.theta * x) - dist1(un, x));
      if (dist1(Ws[nu], x) <= 1.0)
        rep.aaa2_C = std::max(rep.aaa2_C, dist1(U, x) - dist1(un, x / rep.theta));
    }
  }
  if (rep.aaa1_excess == -1e300) rep.aaa1_excess = 0.0;
  if (rep.aaa2_C == -1e300) rep.aaa2_C = 0.0;

  return SplitResult{std::move(f1), std::move(f2), std::move(eta), std::move(sol.psi),
                     std::move(rep)};
}

SplitResult theorem2_split(const TestFunction& f, const Cone& K1, const Cone& K2,
                           const WeightSpec& w, const EntireSeed& seed, const SplitConfig& cfg) {
  require_line(f.k(), "theorem2_split");
  const Cone& W = w.U;
  if (K1.dim() != 1 || K2.dim() != 1 || W.dim() != 1)
    throw DimensionMismatch("theorem2_split: cone dimensions differ");
  if (!K1.is_closed() || !K2.is_closed()) throw PreconditionError("theorem2_split: K1, K2 must be closed");
  if (!K1.intersect(K2).subset_of(W) || !W.has_open_projection())
    throw PreconditionError("theorem2_split: W must be a conic neighborhood of K1 n K2");
  const NeighborhoodSplit vs = split_neighborhoods(K1, K2, W);
  const Cone V = W.complement();
  const Cone U1 = vs.v1.closure().intersect(V);
  const Cone U2 = vs.v2.closure().intersect(V);
  return lemma7_split(f, W, U1, U2, w, seed, cfg);
}

// ------------------------------------------------------------ density

double cutoff(const Mollifier& m, cplx z) {
  const double r = std::abs(z);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return m.integral(2.0 * r - 3.0, 1.0);
}

cplx dbar_cutoff(const Mollifier& m, cplx z) {
  const double r = std::abs(z);
  if (r <= 1.0 || r >= 2.0) return 0.0;
  const double ds = -2.0 * m(2.0 * r - 3.0);
  return ds * z / (2.0 * r);
}

double cutoff_sup_dbar_sq(const Mollifier& m, std::size_t samples) {
  double best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = 1.0 + static_cast<double>(i) / static_cast<double>(samples - 1);
    best = std::max(best, std::norm(dbar_cutoff(m, cplx(r, 0.0))));
  }
  return best;
}

bool DensityResult::decreasing() const {
  for (std::size_t i = 1; i < steps.size(); ++i)
    if (!(steps[i].error < steps[i - 1].error)) return false;
  return true;
}

DensityResult density_approximate(const TestFunction& f, const WeightSpec& w, const Cone& W,
                                  const EntireSeed& seed, const DensityConfig& cfg) {
  require_line(f.k(), "density_approximate");
  if (w.k() != 1 || W.dim() != 1) throw DimensionMismatch("density_approximate: cone dimensions differ");
  if (!w.U.subset_of(W) || !W.has_open_projection())
    throw PreconditionError("density_approximate: W must be a conic neighborhood of U");
  if (cfg.certify_input && !f.is_zero()) {
    try {
      l2_norm(f, w.over(W));
    } catch (const NumericalError& e) {
      throw PreconditionError(std::string("density_approximate: f is not certified in H(W): ") +
                              e.what());
    }
  }
  for (int n : cfg.ns)
    if (n < 1) throw DomainError("density_approximate: n must be a positive integer");

  const Mollifier m(1);
  DensityResult out;
  out.W = W;
  out.a = cutoff_sup_dbar_sq(m);
  out.A2 = rho_A2(w);
  out.B2 = rho_B2(w, seed);
  const WeightSpec werr = w.over(W).with(out.A2, out.B2);

  const GridSpec grid = cfg.box.spec();
  const GridPoints pts = make_grid(grid);
  std::vector<cplx> fv(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) fv[p] = f(to_complex(pts.point(p)));

  for (int n : cfg.ns) {
    DensityStep step;
    step.n = n;
    step.R = 2.0 * n;
    const RhoBuild rb = rho_R_build(w, seed, step.R, cfg.rho);
    std::vector<cplx> ev(grid.size()), tail(grid.size()), kept(grid.size());
    std::vector<double> rho2(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const auto z = to_complex(pts.point(p));
      const cplx zn = z[0] / static_cast<double>(n);
      const double chi = cutoff(m, zn);
      kept[p] = fv[p] * chi;
      tail[p] = fv[p] - kept[p];
      ev[p] = fv[p] * dbar_cutoff(m, zn) / static_cast<double>(n);
      rho2[p] = 2.0 * (*rb.rho)(z);
    }
    const SampledField eta(grid, std::move(ev), "eta_n");
    const WeightedSolveResult sol = weighted_min_solve(eta, rho2, cfg.solver);
    std::vector<cplx> fn(grid.size()), err(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
      fn[p] = kept[p] - sol.psi[p];
      err[p] = fv[p] - fn[p];
    }
    step.error = weighted_l2_field(SampledField(grid, std::move(err)), werr);
    step.tail = weighted_l2_field(SampledField(grid, std::move(tail)), werr);
    step.correction = weighted_l2_field(sol.psi, werr);
    step.hormander = hormander_check(sol.psi, eta, rho2, 1);
    step.converged = sol.converged;
    out.steps.push_back(step);
    out.approximants.emplace_back(grid, std::move(fn), "f_n");
  }
  return out;
}

}  // namespace ccl
