#include "ccl/weights.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccl/errors.hpp"
#include "ccl/report.hpp"

namespace ccl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> default_profile_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 400; ++i) g.push_back(0.05 * i);
  for (double s = 25.0; s <= 1e6; s *= 1.25) g.push_back(s);
  return g;
}

// Uniform norms of the real and imaginary parts.
void split_norms(std::span<const cplx> z, std::vector<double>& x, double& nx, double& ny) {
  x.resize(z.size());
  nx = ny = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    x[j] = z[j].real();
    nx = std::max(nx, std::abs(z[j].real()));
    ny = std::max(ny, std::abs(z[j].imag()));
  }
}

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double e : v) m = std::max(m, e);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double e : v) s += std::exp(e - m);
  return m + std::log(s);
}

bool on_boundary(const GridSpec& g, std::size_t n) {
  for (std::size_t a = g.axes(); a-- > 0;) {
    const std::size_t i = n % g.counts[a];
    n /= g.counts[a];
    if (i == 0 || i + 1 == g.counts[a]) return true;
  }
  return false;
}

double log_weighted(const TestFunction& f, const WeightSpec& w, std::span<const double> coords) {
  const auto z = to_complex(coords);
  const double lf = f.log_abs(z);
  if (lf == kNegInf) return kNegInf;
  return lf - rho_eval(w, z);
}

struct Scan {
  double max = kNegInf;
  double boundary_max = kNegInf;
  std::vector<double> argmax;
};

Scan scan_box(const TestFunction& f, const WeightSpec& w, double half, std::size_t n,
              std::size_t budget) {
  const GridPoints pts = make_grid(cube_grid(2 * f.k(), half, n, budget));
  Scan s;
  for (std::size_t p = 0; p < pts.spec.size(); ++p) {
    const double v = log_weighted(f, w, pts.point(p));
    if (v > s.max) {
      s.max = v;
      s.argmax.assign(pts.point(p).begin(), pts.point(p).end());
    }
    if (on_boundary(pts.spec, p)) s.boundary_max = std::max(s.boundary_max, v);
  }
  return s;
}

struct Box {
  double half = 0.0;
  Scan scan;
  std::string certificate;
};

// Doubles the box until the boundary decays or the max stops growing.
Box certify_box(const TestFunction& f, const WeightSpec& w, const NormOptions& opt, std::size_t n,
                bool allow_plateau) {
  const double log_ratio = std::log(opt.decay_ratio);
  double half = opt.initial_half;
  double prev = kNegInf;
  for (int d = 0; d <= opt.max_doublings; ++d, half *= 2.0) {
    Scan s = scan_box(f, w, half, n, opt.budget);
    if (s.boundary_max <= s.max + log_ratio) return {half, std::move(s), "decay"};
    if (allow_plateau && d > 0 && s.max <= prev + 1e-9 * std::max(1.0, std::abs(prev)))
      return {half, std::move(s), "plateau"};
    prev = s.max;
  }
  throw NumericalError("norm possibly infinite: the weighted modulus does not decay at the box "
                       "boundary (half width " + fmt(half / 2.0) + ")");
}

std::size_t default_resolution(int k, bool l2) {
  if (l2) return k == 1 ? 240 : 20;
  return k == 1 ? 201 : 31;
}

}  // namespace

void WeightSpec::validate() const {
  if (!(A > 0.0) || !(B > 0.0)) throw DomainError("weight: A and B must be positive");
  const auto grid = default_profile_grid();
  const ProfileReport r = verify_profile(alpha, beta, grid);
  if (!r.ok()) {
    const auto& v = r.violations.front();
    throw PreconditionError("weight: profile " + v.profile + " fails " + v.condition + " at s = " +
                            fmt(v.location));
  }
}

WeightSpec WeightSpec::with(double a, double b) const {
  WeightSpec w = *this;
  w.A = a;
  w.B = b;
  return w;
}

WeightSpec WeightSpec::over(const Cone& cone) const {
  WeightSpec w = *this;
  w.U = cone;
  return w;
}

WeightSpec canonical_weight(const Cone& U, double A, double B) {
  return WeightSpec{U, A, B, Profile::power(2.0, 2.0), Profile::power(2.0, 2.0)};
}

double rho_eval(const WeightSpec& w, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != w.k())
    throw DimensionMismatch("rho_eval: point dimension " + std::to_string(z.size()) +
                            " differs from cone dimension " + std::to_string(w.k()));
  std::vector<double> x;
  double nx, ny;
  split_norms(z, x, nx, ny);
  const double delta = cone_distance(w.U, x);
  return -w.alpha(nx / w.A) + w.beta(w.B * ny) + w.beta(w.B * delta);
}

TestFunction::TestFunction(int k, std::vector<Term> terms, double rate, std::vector<cplx> center)
    : k_(k), terms_(std::move(terms)), rate_(rate), center_(std::move(center)) {
  if (k < 1) throw DomainError("test function: k must be >= 1");
  if (!(rate > 0.0)) throw DomainError("test function: gaussian rate must be positive");
  if (static_cast<int>(center_.size()) != k)
    throw DimensionMismatch("test function: center dimension");
  for (const Term& t : terms_) {
    if (static_cast<int>(t.powers.size()) != k)
      throw DimensionMismatch("test function: multi-index dimension");
    for (int p : t.powers)
      if (p < 0) throw DomainError("test function: negative exponent");
  }
}

TestFunction TestFunction::gaussian(int k, double rate, cplx scale) {
  return TestFunction(k, {Term{std::vector<int>(k, 0), scale}}, rate, std::vector<cplx>(k));
}

TestFunction TestFunction::zero(int k) { return gaussian(k, 1.0, 0.0); }

bool TestFunction::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coef == 0.0; });
}

cplx TestFunction::poly(std::span<const cplx> w) const {
  cplx sum = 0.0;
  for (const Term& t : terms_) {
    cplx m = t.coef;
    for (int j = 0; j < k_; ++j)
      for (int p = 0; p < t.powers[j]; ++p) m *= w[j];
    sum += m;
  }
  return sum;
}

cplx TestFunction::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != k_) throw DimensionMismatch("test function: point dimension");
  std::vector<cplx> w(k_);
  cplx q = 0.0;
  for (int j = 0; j < k_; ++j) {
    w[j] = z[j] - center_[j];
    q += w[j] * w[j];
  }
  return poly(w) * std::exp(-rate_ * q);
}

double TestFunction::log_abs(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != k_) throw DimensionMismatch("test function: point dimension");
  std::vector<cplx> w(k_);
  double q = 0.0;
  for (int j = 0; j < k_; ++j) {
    w[j] = z[j] - center_[j];
    q += (w[j] * w[j]).real();
  }
  const double p = std::abs(poly(w));
  if (p == 0.0) return kNegInf;
  return std::log(p) - rate_ * q;
}

TestFunction TestFunction::translated(std::span<const cplx> zeta) const {
  if (static_cast<int>(zeta.size()) != k_) throw DimensionMismatch("test function: shift dimension");
  std::vector<cplx> c = center_;
  for (int j = 0; j < k_; ++j) c[j] -= zeta[j];
  return TestFunction(k_, terms_, rate_, std::move(c));
}

TestFunction TestFunction::scaled(cplx s) const {
  auto terms = terms_;
  for (Term& t : terms) t.coef *= s;
  return TestFunction(k_, std::move(terms), rate_, center_);
}

NormResult sup_norm(const TestFunction& f, const WeightSpec& w, const NormOptions& opt) {
  if (f.k() != w.k()) throw DimensionMismatch("sup_norm: function and weight dimensions differ");
  NormResult r;
  if (f.is_zero()) {
    r.certificate = "zero";
    r.maximizer.assign(f.k(), 0.0);
    return r;
  }
  const std::size_t n = opt.resolution ? opt.resolution : default_resolution(f.k(), false);
  const Box box = certify_box(f, w, opt, n, true);

  // Pattern search from the best grid point.
  std::vector<double> x = box.scan.argmax;
  double best = box.scan.max;
  double step = 2.0 * box.half / static_cast<double>(n - 1);
  for (int it = 0; it < opt.refine_steps; ++it) {
    bool moved = false;
    for (std::size_t a = 0; a < x.size(); ++a) {
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> trial = x;
        trial[a] += sgn * step;
        const double v = log_weighted(f, w, trial);
        if (v > best) {
          best = v;
          x = std::move(trial);
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  r.value = std::exp(best);
  r.error = r.value - std::exp(box.scan.max);
  r.maximizer = to_complex(x);
  r.half_width = box.half;
  r.certificate = box.certificate;
  return r;
}

NormResult l2_norm(const TestFunction& f, const WeightSpec& w, const NormOptions& opt) {
  if (f.k() != w.k()) throw DimensionMismatch("l2_norm: function and weight dimensions differ");
  NormResult r;
  r.maximizer.assign(f.k(), 0.0);
  if (f.is_zero()) {
    r.certificate = "zero";
    return r;
  }
  const Box box = certify_box(f, w, opt, default_resolution(f.k(), false), false);
  const std::size_t cells = opt.resolution ? opt.resolution : default_resolution(f.k(), true);
  const std::size_t axes = 2 * static_cast<std::size_t>(f.k());

  auto midpoint = [&](std::size_t m) {
    const double h = 2.0 * box.half / static_cast<double>(m);
    GridSpec g;
    g.lower.assign(axes, -box.half + 0.5 * h);
    g.upper.assign(axes, box.half - 0.5 * h);
    g.counts.assign(axes, m);
    g.budget = opt.budget;
    const GridPoints pts = make_grid(g);
    std::vector<double> terms(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) terms[p] = 2.0 * log_weighted(f, w, pts.point(p));
    return std::exp(0.5 * (log_sum_exp(terms) + static_cast<double>(axes) * std::log(h)));
  };
  const double coarse = midpoint(cells);
  const double fine = midpoint(2 * cells);
  r.value = fine;
  r.error = std::abs(fine - coarse) / 3.0;
  r.half_width = box.half;
  r.certificate = box.certificate;
  return r;
}

double weighted_l2_field(const SampledField& f, const WeightSpec& w) {
  const GridSpec& g = f.grid();
  if (g.axes() != 2 * static_cast<std::size_t>(w.k()))
    throw DimensionMismatch("weighted_l2_field: grid and weight dimensions differ");
  const GridPoints pts = make_grid(g);
  std::vector<double> terms;
  terms.reserve(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double a = std::abs(f[p]);
    if (a == 0.0) continue;
    terms.push_back(2.0 * (std::log(a) - rho_eval(w, to_complex(pts.point(p)))));
  }
  double log_cell = 0.0;
  for (std::size_t a = 0; a < g.axes(); ++a) log_cell += std::log(g.step(a));
  const double lse = log_sum_exp(terms);
  if (lse == kNegInf) return 0.0;
  return std::exp(0.5 * (lse + log_cell));
}

namespace {

void require_larger(const WeightSpec& w, double A2, double B2) {
  if (!(A2 > w.A) || !(B2 > w.B))
    throw PreconditionError("gap: need A' > A and B' > B (got A=" + fmt(w.A) + ", A'=" + fmt(A2) +
                            ", B=" + fmt(w.B) + ", B'=" + fmt(B2) + ")");
}

double gap_norm(std::span<const double> coords) {
  double m = 0.0;
  for (double c : coords) m = std::max(m, std::abs(c));
  return m;
}

GridSpec box_spec(const WeightSpec& w, const BoxGrid& grid) {
  return cube_grid(2 * static_cast<std::size_t>(w.k()), grid.half, grid.n);
}

GridSpec offset_spec(const WeightSpec& w, const BoxGrid& grid) {
  const double h = 2.0 * grid.half / static_cast<double>(grid.n - 1);
  return cube_grid(2 * static_cast<std::size_t>(w.k()), grid.half - 0.5 * h, grid.n - 1);
}

}  // namespace

GapResult verify_gap(const WeightSpec& w, double A2, double B2, const BoxGrid& grid) {
  require_larger(w, A2, B2);
  const WeightSpec wide = w.with(A2, B2);
  GapResult res;
  res.tau = std::min(1.0, w.alpha.kappa());

  const GridPoints pts = make_grid(box_spec(w, grid));
  std::vector<double> gap(pts.spec.size()), norm(pts.spec.size());
  for (std::size_t p = 0; p < gap.size(); ++p) {
    const auto z = to_complex(pts.point(p));
    gap[p] = rho_eval(wide, z) - rho_eval(w, z);
    norm[p] = gap_norm(pts.point(p));
  }

  // sigma: half the smallest growth rate seen on the outer half of the box.
  double rate = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t p = 0; p < gap.size(); ++p) {
    if (norm[p] < 0.5 * grid.half) continue;
    const double r = gap[p] / std::pow(norm[p], res.tau);
    if (r < rate) {
      rate = r;
      worst = p;
    }
  }
  if (!(rate > 0.0)) {
    res.violations.push_back({to_complex(pts.point(worst)), -gap[worst]});
    return res;
  }
  res.sigma = 0.5 * rate;
  for (std::size_t p = 0; p < gap.size(); ++p)
    res.C = std::max(res.C, res.sigma * std::pow(norm[p], res.tau) - gap[p]);
  res.violations = check_gap(w, A2, B2, res.sigma, res.tau, res.C, grid);

  const GridPoints mid = make_grid(offset_spec(w, grid));
  for (std::size_t p = 0; p < mid.spec.size(); ++p) {
    const auto z = to_complex(mid.point(p));
    const double g = rho_eval(wide, z) - rho_eval(w, z);
    const double excess = res.sigma * std::pow(gap_norm(mid.point(p)), res.tau) - res.C - g;
    res.offgrid_excess = std::max(res.offgrid_excess, excess);
  }
  return res;
}

std::vector<GapViolation> check_gap(const WeightSpec& w, double A2, double B2, double sigma,
                                    double tau, double C, const BoxGrid& grid) {
  require_larger(w, A2, B2);
  const WeightSpec wide = w.with(A2, B2);
  const GridPoints pts = make_grid(box_spec(w, grid));
  std::vector<GapViolation> out;
  for (std::size_t p = 0; p < pts.spec.size(); ++p) {
    const auto z = to_complex(pts.point(p));
    const double g = rho_eval(wide, z) - rho_eval(w, z);
    const double deficit = sigma * std::pow(gap_norm(pts.point(p)), tau) - C - g;
    if (deficit > 1e-9 * std::max(1.0, std::abs(g))) out.push_back({z, deficit});
  }
  return out;
}

double shift_bound(const WeightSpec& w, double A2, double B2, double R) {
  require_larger(w, A2, B2);
  return w.alpha(R / (A2 - w.A)) + 2.0 * w.beta(R * w.B * B2 / (B2 - w.B));
}

ShiftResult verify_shift(const WeightSpec& w, double A2, double B2, double R, const BoxGrid& grid,
                         std::size_t zeta_points) {
  require_larger(w, A2, B2);
  if (!(R >= 0.0)) throw DomainError("verify_shift: R must be nonnegative");
  const WeightSpec wide = w.with(A2, B2);
  ShiftResult res;
  res.analytic_bound = shift_bound(w, A2, B2, R);
  if (R == 0.0) return res;
  const std::size_t axes = 2 * static_cast<std::size_t>(w.k());
  const GridPoints pts = make_grid(box_spec(w, grid));
  // A single shift point means zeta = 0 alone.
  GridPoints shifts;
  if (zeta_points <= 1) {
    shifts.spec = GridSpec{std::vector<double>(axes, 0.0), std::vector<double>(axes, 0.0),
                           std::vector<std::size_t>(axes, 1)};
    shifts.coords.assign(axes, 0.0);
  } else {
    shifts = make_grid(cube_grid(axes, R, zeta_points));
  }

  std::vector<double> moved(axes);
  std::vector<GapViolation> worst(1);
  for (std::size_t p = 0; p < pts.spec.size(); ++p) {
    const auto pt = pts.point(p);
    const double base = rho_eval(wide, to_complex(pt));
    for (std::size_t s = 0; s < shifts.spec.size(); ++s) {
      const auto sh = shifts.point(s);
      for (std::size_t a = 0; a < axes; ++a) moved[a] = pt[a] + sh[a];
      const double d = rho_eval(w, to_complex(moved)) - base;
      if (d > res.C) {
        res.C = d;
        worst[0] = {to_complex(pt), d};
      }
    }
  }
  if (res.C > res.analytic_bound * (1.0 + 1e-12) + 1e-12) {
    worst[0].deficit = res.C - res.analytic_bound;
    res.violations = worst;
  }
  return res;
}

YAML::Node weight_to_yaml(const WeightSpec& w) {
  YAML::Node n;
  n["cone"] = cone_to_yaml(w.U);
  n["A"] = w.A;
  n["B"] = w.B;
  n["alpha"] = profile_to_yaml(w.alpha);
  n["beta"] = profile_to_yaml(w.beta);
  return n;
}

WeightSpec weight_from_yaml(const YAML::Node& node) {
  try {
    if (!node || !node.IsMap()) throw ParseError("weight: expected a mapping");
    for (const char* key : {"cone", "A", "B", "alpha", "beta"})
      if (!node[key]) throw ParseError(std::string("weight: missing '") + key + "'");
    WeightSpec w{cone_from_yaml(node["cone"]), node["A"].as<double>(), node["B"].as<double>(),
                 profile_from_yaml(node["alpha"]), profile_from_yaml(node["beta"])};
    if (!(w.A > 0.0) || !(w.B > 0.0)) throw ParseError("weight: A and B must be positive");
    return w;
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("weight: ") + e.what());
  }
}

std::string serialize_weight(const WeightSpec& w) {
  YAML::Emitter out;
  out << weight_to_yaml(w);
  return out.c_str();
}

std::string spec_hash(const WeightSpec& w) { return hex64(fnv1a(serialize_weight(w))); }

std::string norm_csv_row(const WeightSpec& w, const std::string& kind, const NormResult& r) {
  std::string where;
  for (std::size_t j = 0; j < r.maximizer.size(); ++j) {
    if (j) where += ' ';
    where += fmt(r.maximizer[j].real()) + ' ' + fmt(r.maximizer[j].imag());
  }
  return spec_hash(w) + ',' + kind + ',' + fmt(r.value) + ',' + fmt(r.error) + ',' + where;
}

}  // namespace ccl
