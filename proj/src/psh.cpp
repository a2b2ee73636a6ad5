#include "ccl/psh.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ccl/errors.hpp"
#include "ccl/report.hpp"

namespace ccl {

namespace {

constexpr double kE = 2.718281828459045235360287;

double uniform_re(std::span<const cplx> z) {
  double m = 0.0;
  for (const cplx& v : z) m = std::max(m, std::abs(v.real()));
  return m;
}

double uniform_im(std::span<const cplx> z) {
  double m = 0.0;
  for (const cplx& v : z) m = std::max(m, std::abs(v.imag()));
  return m;
}

std::vector<double> real_parts(std::span<const cplx> z) {
  std::vector<double> x(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j].real();
  return x;
}

// log|sin w|, or -inf at zeros.
double log_abs_sin(double u, double v) {
  const double av = std::abs(v);
  if (av < 1.0) {
    const double s = std::sin(u);
    const double sh = std::sinh(v);
    const double m2 = s * s + sh * sh;
    return m2 > 0.0 ? 0.5 * std::log(m2) : -std::numeric_limits<double>::infinity();
  }
  // |sin w|^2 = e^{2|v|}/4 (1 - 2 e^{-2|v|} cos 2u + e^{-4|v|})
  const double e2 = std::exp(-2.0 * av);
  return av - std::log(2.0) + 0.5 * std::log1p(-2.0 * e2 * std::cos(2.0 * u) + e2 * e2);
}

std::vector<std::vector<double>> cube_points(int dim, double half, std::size_t per_axis) {
  std::vector<std::vector<double>> out;
  if (per_axis < 2) {
    out.emplace_back(dim, 0.0);
    return out;
  }
  const GridPoints g = make_grid(cube_grid(dim, half, per_axis));
  for (std::size_t n = 0; n < g.spec.size(); ++n)
    out.emplace_back(g.point(n).begin(), g.point(n).end());
  return out;
}

double beta_plus(const Profile& beta, double t) { return t > 0.0 ? beta(t) : 0.0; }

YAML::Node complex_list(std::span<const cplx> z) {
  YAML::Node n(YAML::NodeType::Sequence);
  for (const cplx& v : z) {
    YAML::Node pair;
    pair.push_back(v.real());
    pair.push_back(v.imag());
    pair.SetStyle(YAML::EmitterStyle::Flow);
    n.push_back(pair);
  }
  return n;
}

}  // namespace

double log_plus(double r) { return r > 1.0 ? std::log(r) : 0.0; }

double theta_eval(double a, cplx z) {
  if (!(a > 0.0)) throw DomainError("theta_eval: a must be positive");
  const cplx w = z / a;
  if (std::abs(w) < 1e-2) {
    // log(sin w / w) = -w^2/6 - w^4/180 - w^6/2835 - ...
    const cplx w2 = w * w;
    return a * (w2 * (-1.0 / 6.0 + w2 * (-1.0 / 180.0 + w2 * (-1.0 / 2835.0)))).real();
  }
  // Zeros of sine up to the rounding of the argument.
  const double tiny = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(w);
  if (std::abs(w.imag()) <= tiny && std::abs(std::remainder(w.real(), kPi)) <= tiny) return kThetaClamp;
  const double ls = log_abs_sin(w.real(), w.imag());
  if (!std::isfinite(ls)) return kThetaClamp;
  return std::max(kThetaClamp, a * (ls - std::log(std::abs(w))));
}

double phi_eval(double a, std::span<const cplx> z) {
  double s = 0.0;
  for (const cplx& v : z) s += theta_eval(a, v);
  return s;
}

std::string PshSurrogate::serialize() const {
  YAML::Emitter out;
  out << to_yaml();
  return out.c_str();
}

// ---------------------------------------------------------------- sigma_R

SigmaSurrogate::SigmaSurrogate(Cone U, double R, std::vector<SigmaCandidate> candidates)
    : U_(std::move(U)), R_(R), cands_(std::move(candidates)) {
  if (cands_.empty()) throw DomainError("sigma surrogate: empty candidate set");
}

double SigmaSurrogate::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != k()) throw DimensionMismatch("sigma surrogate: dimension");
  double best = -std::numeric_limits<double>::infinity();
  std::vector<cplx> shifted(z.size());
  for (const SigmaCandidate& c : cands_) {
    for (std::size_t j = 0; j < z.size(); ++j) shifted[j] = z[j] - c.xi[j];
    best = std::max(best, phi_eval(c.a, shifted) + c.term);
  }
  return best;
}

YAML::Node SigmaSurrogate::to_yaml() const {
  YAML::Node n;
  n["kind"] = kind();
  n["R"] = R_;
  n["cone"] = cone_to_yaml(U_);
  for (const auto& c : cands_) {
    YAML::Node e;
    e["a"] = c.a;
    e["xi"] = c.xi;
    e["xi"].SetStyle(YAML::EmitterStyle::Flow);
    e["term"] = c.term;
    e.SetStyle(YAML::EmitterStyle::Flow);
    n["candidates"].push_back(e);
  }
  return n;
}

SigmaSurrogate sigma_R_build(const Cone& U, double R, const SigmaConfig& cfg) {
  if (!(R > 0.0)) throw DomainError("sigma_R_build: R must be positive");
  if (cfg.a_count < 1 || !(cfg.a_min > 0.0) || !(cfg.a_max >= cfg.a_min))
    throw DomainError("sigma_R_build: bad a grid");
  const int k = U.dim();
  std::vector<double> as;
  for (int i = 0; i < cfg.a_count; ++i) {
    const double t = cfg.a_count == 1 ? 0.0 : static_cast<double>(i) / (cfg.a_count - 1);
    as.push_back(cfg.a_min * std::pow(cfg.a_max / cfg.a_min, t));
  }
  const std::size_t per_axis = cfg.xi_per_axis ? cfg.xi_per_axis : (k == 1 ? 21 : 11);

  std::set<std::vector<double>> seen;
  std::vector<SigmaCandidate> cands;
  auto add = [&](double a, std::vector<double> xi, double term) {
    std::vector<double> key = xi;
    key.push_back(a);
    if (!seen.insert(key).second) return;
    cands.push_back({a, std::move(xi), term});
  };
  for (const auto& xi : cube_points(k, R, per_axis)) {
    const double delta = cone_distance(U, xi);
    for (double a : as) add(a, xi, a * log_plus(delta / a));
  }
  // The witness pair of the lower bound for each probe.
  for (const auto& z : cfg.probes) {
    if (static_cast<int>(z.size()) != k) throw DimensionMismatch("sigma_R_build: probe dimension");
    if (uniform_re(z) > R) continue;
    auto xi = real_parts(z);
    const double delta = cone_distance(U, xi);
    if (delta > 0.0) {
      const double a0 = delta / kE;
      add(a0, std::move(xi), a0 * log_plus(delta / a0));
    } else {
      add(1.0, std::move(xi), 0.0);
    }
  }
  return SigmaSurrogate(U, R, std::move(cands));
}

// ---------------------------------------------------------------- seeds

double EntireSeed::log_abs(cplx z) const {
  if (log_modulus) return log_modulus(z);
  const double m = std::abs(phi(z));
  return m > 0.0 ? std::log(m) : -std::numeric_limits<double>::infinity();
}

EntireSeed gaussian_seed() {
  EntireSeed s;
  s.phi = [](cplx z) { return std::exp(-z * z); };
  s.log_modulus = [](cplx z) { return -(z * z).real(); };
  s.A0 = 1.0;
  s.B0 = 1.0;
  s.name = "exp(-z^2)";
  return s;
}

SeedCheck verify_seed(const EntireSeed& seed, const Profile& alpha, const Profile& beta,
                      std::span<const cplx> samples) {
  SeedCheck out;
  out.worst_excess = -std::numeric_limits<double>::infinity();
  for (const cplx& z : samples) {
    const double bound = beta(seed.B0 * std::abs(z.imag())) - alpha(std::abs(z.real()) / seed.A0);
    const double excess = seed.log_abs(z) - bound;
    if (excess > out.worst_excess) {
      out.worst_excess = excess;
      out.where = z;
    }
  }
  return out;
}

std::vector<cplx> seed_samples(double radius, int rings, int spokes) {
  std::vector<cplx> out{0.0};
  for (int r = 1; r <= rings; ++r)
    for (int s = 0; s < spokes; ++s)
      out.push_back(std::polar(radius * r / rings, 2.0 * M_PI * (s + 0.5 * (r % 2)) / spokes));
  return out;
}

int zero_order_at_origin(const EntireSeed& seed, double radius) {
  const int m = 512;
  double turn = 0.0;
  double prev = std::arg(seed.phi(radius));
  for (int i = 1; i <= m; ++i) {
    const double cur = std::arg(seed.phi(std::polar(radius, 2.0 * M_PI * i / m)));
    double d = cur - prev;
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    turn += d;
    prev = cur;
  }
  const int n = static_cast<int>(std::lround(turn / (2.0 * M_PI)));
  if (n < 0) throw PreconditionError("seed: phi has a pole inside the winding circle");
  return n;
}

EntireSeed normalize_seed(const EntireSeed& seed, const Profile& alpha, const Profile& beta,
                          std::span<const cplx> samples) {
  const int n = zero_order_at_origin(seed);
  // phi(z)/z^n at 0 is the n-th Taylor coefficient (Cauchy integral).
  const double r = 1e-2;
  cplx a_n = 0.0;
  const int m = 256;
  for (int i = 0; i < m; ++i) {
    const cplx z = std::polar(r, 2.0 * M_PI * i / m);
    a_n += seed.phi(z) / std::pow(z, n);
  }
  a_n /= static_cast<double>(m);
  if (std::abs(a_n) == 0.0) throw PreconditionError("seed: phi vanishes identically near 0");

  EntireSeed base = seed;
  base.log_modulus = nullptr;
  auto raw = [seed, n, a_n](cplx z) -> cplx {
    if (std::abs(z) < 1e-8) return a_n;
    return seed.phi(z) / std::pow(z, n);
  };
  double log_c = 0.0;
  for (const cplx& z : samples) {
    const double bound = beta(seed.B0 * std::abs(z.imag())) - alpha(std::abs(z.real()) / seed.A0);
    const double m_abs = std::abs(raw(z));
    if (m_abs > 0.0) log_c = std::min(log_c, bound - std::log(m_abs));
  }
  const double C = std::exp(log_c);
  EntireSeed out;
  out.A0 = seed.A0;
  out.B0 = seed.B0;
  out.name = seed.name + " normalized (n=" + std::to_string(n) + ")";
  out.phi = [raw, C](cplx z) { return C * raw(z); };
  if (seed.log_modulus) {
    auto lm = seed.log_modulus;
    out.log_modulus = [lm, raw, n, log_c](cplx z) {
      if (std::abs(z) < 1e-8) return log_c + std::log(std::abs(raw(z)));
      return log_c + lm(z) - n * std::log(std::abs(z));
    };
  }
  return out;
}

SeedEnvelope::SeedEnvelope(EntireSeed seed, Profile alpha, Profile beta, int k, SeedScales scales,
                           std::vector<std::vector<cplx>> zetas)
    : seed_(std::move(seed)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      k_(k),
      scales_(scales),
      zetas_(std::move(zetas)) {
  if (zetas_.empty()) throw DomainError("seed envelope: empty candidate set");
  const double l0 = seed_.log_abs(0.0);
  if (!std::isfinite(l0)) throw PreconditionError("seed envelope: phi(0) = 0; normalize the seed");
  H_ = -k_ * l0;
  terms_.reserve(zetas_.size());
  for (const auto& z : zetas_) {
    if (static_cast<int>(z.size()) != k_) throw DimensionMismatch("seed envelope: candidate dimension");
    terms_.push_back(-alpha_(scales_.p * uniform_re(z)) - k_ * beta_(scales_.q * uniform_im(z)));
  }
}

double SeedEnvelope::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != k_) throw DimensionMismatch("seed envelope: dimension");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < zetas_.size(); ++c) {
    double v = terms_[c];
    for (int j = 0; j < k_; ++j) v += seed_.log_abs(scales_.c * (z[j] - zetas_[c][j]));
    best = std::max(best, v);
  }
  return best;
}

double SeedEnvelope::lower_bound(std::span<const cplx> z) const {
  return -alpha_(scales_.p * uniform_re(z)) - k_ * beta_(scales_.q * uniform_im(z)) - H_;
}

double SeedEnvelope::upper_bound(std::span<const cplx> z) const {
  return k_ * beta_(scales_.q * uniform_im(z)) - alpha_(scales_.p_up * uniform_re(z));
}

YAML::Node SeedEnvelope::to_yaml() const {
  YAML::Node n;
  n["kind"] = kind();
  n["seed"] = seed_.name;
  n["A0"] = seed_.A0;
  n["B0"] = seed_.B0;
  n["k"] = k_;
  n["H"] = H_;
  n["scales"]["c"] = scales_.c;
  n["scales"]["p"] = scales_.p;
  n["scales"]["q"] = scales_.q;
  n["scales"]["p_up"] = scales_.p_up;
  n["alpha"] = profile_to_yaml(alpha_);
  n["beta"] = profile_to_yaml(beta_);
  for (std::size_t c = 0; c < zetas_.size(); ++c) {
    YAML::Node e;
    e["zeta"] = complex_list(zetas_[c]);
    e["term"] = terms_[c];
    e.SetStyle(YAML::EmitterStyle::Flow);
    n["candidates"].push_back(e);
  }
  return n;
}

namespace {

std::vector<std::vector<cplx>> seed_candidates(int k, const SeedConfig& cfg) {
  const std::size_t per_axis = cfg.per_axis ? cfg.per_axis : (k == 1 ? 25 : 9);
  std::vector<std::vector<cplx>> out;
  for (const auto& p : cube_points(2 * k, cfg.half, per_axis)) out.push_back(to_complex(p));
  for (const auto& z : cfg.probes) {
    if (static_cast<int>(z.size()) != k) throw DimensionMismatch("seed envelope: probe dimension");
    out.push_back(z);
  }
  return out;
}

void require_seed(const EntireSeed& seed, const Profile& alpha, const Profile& beta) {
  const auto samples = seed_samples();
  const SeedCheck chk = verify_seed(seed, alpha, beta, samples);
  if (!chk.ok())
    throw PreconditionError("seed: growth bound violated by " + fmt(chk.worst_excess) + " at z = " +
                            fmt(chk.where.real()) + (chk.where.imag() < 0 ? "" : "+") +
                            fmt(chk.where.imag()) + "i");
}

}  // namespace

SeedEnvelope seed_envelope_build(const EntireSeed& seed, const Profile& alpha, const Profile& beta,
                                 int k, SeedVariant variant, const SeedConfig& cfg) {
  if (k < 1) throw DomainError("seed envelope: k must be >= 1");
  if (variant == SeedVariant::concave_alpha && !alpha.is_concave())
    throw PreconditionError("seed envelope: concave variant needs a concave alpha");
  const Profile a = alpha.normalized();
  const Profile b = beta.normalized();
  require_seed(seed, a, b);
  SeedScales s;
  if (variant == SeedVariant::general) {
    s = {2.0, 2.0 / seed.A0, 4.0 * seed.B0, 1.0 / seed.A0};
  } else {
    s = {1.0, 1.0 / seed.A0, 2.0 * seed.B0, 1.0 / seed.A0};
  }
  return SeedEnvelope(seed, a, b, k, s, seed_candidates(k, cfg));
}

// ---------------------------------------------------------------- rho_R

RhoRSurrogate::RhoRSurrogate(WeightSpec w, SigmaSurrogate sigma, SeedEnvelope seed, double D,
                             double A2, double B2)
    : w_(std::move(w)), sigma_(std::move(sigma)), seed_(std::move(seed)), D_(D), A2_(A2), B2_(B2) {}

double RhoRSurrogate::operator()(std::span<const cplx> z) const {
  const double ny = uniform_im(z);
  const double first = beta_plus(w_.beta, w_.B * kE * sigma_(z));
  return first + seed_(z) + k() * w_.beta(D_ * ny) + w_.beta(w_.B * ny);
}

YAML::Node RhoRSurrogate::to_yaml() const {
  YAML::Node n;
  n["kind"] = kind();
  n["weight"] = weight_to_yaml(w_);
  n["R"] = R();
  n["D"] = D_;
  n["A_prime"] = A2_;
  n["B_prime"] = B2_;
  n["H"] = H();
  n["sigma"] = sigma_.to_yaml();
  n["seed_envelope"] = seed_.to_yaml();
  return n;
}

double rho_A2(const WeightSpec& w) { return w.alpha.is_concave() ? w.A : 2.0 * w.A; }

double rho_B2(const WeightSpec& w, const EntireSeed& seed) {
  const double k = w.k();
  return (2.0 * kE * k + 1.0) * w.B + 4.0 * k * seed.A0 * seed.B0 / w.A;
}

RhoBuild rho_R_build(const WeightSpec& w0, const EntireSeed& seed, double R, const RhoConfig& cfg) {
  if (!(R > 0.0)) throw DomainError("rho_R_build: R must be positive");
  if (!(w0.A > 0.0) || !(w0.B > 0.0)) throw DomainError("rho_R_build: A and B must be positive");
  WeightSpec w = w0;
  w.alpha = w0.alpha.normalized();
  w.beta = w0.beta.normalized();
  require_seed(seed, w.alpha, w.beta);

  const int k = w.k();
  const bool concave = w.alpha.is_concave();
  const double D = 2.0 * seed.A0 * seed.B0 / w.A;
  const SeedScales s{seed.A0 / w.A, 1.0 / w.A, D, concave ? 1.0 / w.A : 1.0 / (2.0 * w.A)};

  SigmaConfig sc = cfg.sigma;
  if (sc.probes.empty()) sc.probes = cfg.seed.probes;
  SigmaSurrogate sigma = sigma_R_build(w.U, R, sc);
  SeedEnvelope env(seed, w.alpha, w.beta, k, s, seed_candidates(k, cfg.seed));

  RhoBuild out;
  out.A2 = rho_A2(w);
  out.B2 = rho_B2(w, seed);
  out.D = D;
  out.H = env.H();
  out.rho = std::make_shared<RhoRSurrogate>(w, std::move(sigma), std::move(env), D, out.A2, out.B2);
  return out;
}

RhoBoundsReport check_rho_bounds(const RhoRSurrogate& rho, std::span<const std::vector<cplx>> zs) {
  RhoBoundsReport r;
  const WeightSpec& w = rho.weight();
  const WeightSpec wide = w.with(rho.A2(), rho.B2());
  const WeightSpec full = wide.over(Cone::full(w.k()));
  const double shift = w.beta(2.0 * w.B * kE * rho.R());
  r.empirical_H = -std::numeric_limits<double>::infinity();
  for (const auto& z : zs) {
    const double v = rho(z);
    r.upper_full = std::max(r.upper_full, v - rho_eval(full, z) - shift);
    r.upper_cone = std::max(r.upper_cone, v - rho_eval(wide, z));
    if (uniform_re(z) <= rho.R()) {
      const double gap = rho_eval(w, z) - v;
      r.lower = std::max(r.lower, gap - rho.H());
      r.empirical_H = std::max(r.empirical_H, gap);
    }
  }
  return r;
}

// ---------------------------------------------------------------- envelope

GlobalEnvelope::GlobalEnvelope(std::vector<SurrogatePtr> members) : members_(std::move(members)) {
  if (members_.empty()) throw DomainError("envelope: need at least one member");
  for (const auto& m : members_)
    if (m->k() != members_.front()->k()) throw DimensionMismatch("envelope: member dimensions differ");
}

double GlobalEnvelope::operator()(std::span<const cplx> z) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& m : members_) best = std::max(best, (*m)(z));
  return best;
}

int GlobalEnvelope::k() const { return members_.front()->k(); }

YAML::Node GlobalEnvelope::to_yaml() const {
  YAML::Node n;
  n["kind"] = kind();
  for (const auto& m : members_) n["members"].push_back(m->to_yaml());
  return n;
}

GlobalEnvelope envelope_global(std::vector<SurrogatePtr> members) {
  return GlobalEnvelope(std::move(members));
}

PshCheck psh_check(const RealFn& u, std::span<const CircleProbe> probes, int n) {
  PshCheck out;
  out.max_deficiency = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto& p = probes[i];
    if (!(p.r > 0.0)) throw DomainError("psh_check: radius must be positive");
    const double d = u(p.z0) - circle_mean(u, p.z0, p.w, p.r, n);
    if (d > out.max_deficiency) {
      out.max_deficiency = d;
      out.worst = i;
    }
  }
  if (probes.empty()) out.max_deficiency = 0.0;
  return out;
}

}  // namespace ccl
