#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ccl/cones.hpp"
#include "ccl/numerics.hpp"
#include "ccl/profiles.hpp"
#include "ccl/weights.hpp"

namespace YAML {
class Node;
}

namespace ccl {

/// Floor used in place of -inf at zeros of sin.
inline constexpr double kThetaClamp = -1e12;

/// Theta_a(z) = a log|sin(z/a) / (z/a)|; 0 at z = 0.
double theta_eval(double a, cplx z);
/// Phi_a(z) = sum_j Theta_a(z_j).
double phi_eval(double a, std::span<const cplx> z);
double log_plus(double r);

/// A plurisubharmonic function given as a pointwise maximum over a finite
/// candidate family (or a composition that preserves plurisubharmonicity).
class PshSurrogate {
 public:
  virtual ~PshSurrogate() = default;
  virtual double operator()(std::span<const cplx> z) const = 0;
  virtual int k() const = 0;
  virtual std::string kind() const = 0;
  virtual YAML::Node to_yaml() const = 0;
  std::string serialize() const;
};

using SurrogatePtr = std::shared_ptr<const PshSurrogate>;

struct SigmaCandidate {
  double a = 1.0;
  std::vector<double> xi;
  double term = 0.0;  // a log+(delta_U(xi)/a), a certified lower bound of M_a(xi)
};

struct SigmaConfig {
  double a_min = 1.0 / 1024.0;
  double a_max = 1024.0;
  int a_count = 41;
  /// xi grid points per axis on [-R, R]^k; zero picks 21 (k = 1) or 11.
  std::size_t xi_per_axis = 0;
  /// Points z whose real parts become candidate centres with the witness
  /// a0 = delta_U(Re z)/e (a = 1 when the distance vanishes).
  std::vector<std::vector<cplx>> probes;
};

class SigmaSurrogate final : public PshSurrogate {
 public:
  SigmaSurrogate(Cone U, double R, std::vector<SigmaCandidate> candidates);
  double operator()(std::span<const cplx> z) const override;
  int k() const override { return U_.dim(); }
  std::string kind() const override { return "sigma_R"; }
  YAML::Node to_yaml() const override;

  const Cone& cone() const { return U_; }
  double R() const { return R_; }
  const std::vector<SigmaCandidate>& candidates() const { return cands_; }

 private:
  Cone U_;
  double R_;
  std::vector<SigmaCandidate> cands_;
};

SigmaSurrogate sigma_R_build(const Cone& U, double R, const SigmaConfig& cfg = {});

/// Entire function on C with the growth bound
/// |phi(x+iy)| <= exp(beta(B0 |y|) - alpha(|x|/A0)).
struct EntireSeed {
  std::function<cplx(cplx)> phi;
  /// Optional closed form of log|phi|; used for speed and to avoid underflow.
  std::function<double(cplx)> log_modulus;
  double A0 = 1.0;
  double B0 = 1.0;
  std::string name = "seed";

  double log_abs(cplx z) const;
};

/// phi(z) = exp(-z^2), A0 = B0 = 1.
EntireSeed gaussian_seed();

struct SeedCheck {
  double worst_excess = 0.0;  // max of log|phi| - (beta(B0|y|) - alpha(|x|/A0))
  cplx where = 0.0;
  bool ok(double tol = 1e-9) const { return worst_excess <= tol; }
};

SeedCheck verify_seed(const EntireSeed& seed, const Profile& alpha, const Profile& beta,
                      std::span<const cplx> samples);

/// Order of the zero of phi at the origin, by the winding number on a small circle.
int zero_order_at_origin(const EntireSeed& seed, double radius = 1e-3);

/// phi~(z) = C phi(z) / z^n with n the zero order at 0 and C <= 1 the largest
/// constant keeping the growth bound on the samples.
EntireSeed normalize_seed(const EntireSeed& seed, const Profile& alpha, const Profile& beta,
                          std::span<const cplx> samples);

/// Default sample cloud for seed validation: a polar grid with |z| <= radius.
std::vector<cplx> seed_samples(double radius = 8.0, int rings = 40, int spokes = 64);

enum class SeedVariant { general, concave_alpha };

/// Scalings of the seed envelope
///   max_zeta sum_j log|phi(c (z_j - zeta_j))| - alpha(p |xi|) - k beta(q |eta|),
/// whose certified bounds are
///   -alpha(p|x|) - k beta(q|y|) - H <= value <= k beta(q|y|) - alpha(p_up |x|).
struct SeedScales {
  double c = 2.0;
  double p = 2.0;
  double q = 4.0;
  double p_up = 1.0;
};

struct SeedConfig {
  /// Candidate translations on [-half, half]^{2k}, `per_axis` points each
  /// axis; zero picks 25 (k = 1) or 9.
  double half = 6.0;
  std::size_t per_axis = 0;
  std::vector<std::vector<cplx>> probes;
};

class SeedEnvelope final : public PshSurrogate {
 public:
  SeedEnvelope(EntireSeed seed, Profile alpha, Profile beta, int k, SeedScales scales,
               std::vector<std::vector<cplx>> zetas);
  double operator()(std::span<const cplx> z) const override;
  int k() const override { return k_; }
  std::string kind() const override { return "seed_envelope"; }
  YAML::Node to_yaml() const override;

  double H() const { return H_; }
  const SeedScales& scales() const { return scales_; }
  double lower_bound(std::span<const cplx> z) const;
  double upper_bound(std::span<const cplx> z) const;
  std::size_t candidate_count() const { return zetas_.size(); }

 private:
  EntireSeed seed_;
  Profile alpha_, beta_;
  int k_;
  SeedScales scales_;
  std::vector<std::vector<cplx>> zetas_;
  std::vector<double> terms_;
  double H_;
};

/// Envelope for a seed obeying the bound with its own A0, B0. Throws
/// PreconditionError when the seed bound fails on samples or phi(0) = 0.
SeedEnvelope seed_envelope_build(const EntireSeed& seed, const Profile& alpha, const Profile& beta,
                                 int k, SeedVariant variant, const SeedConfig& cfg = {});

struct RhoConfig {
  SigmaConfig sigma;
  SeedConfig seed;
};

/// rho_R = beta(B e sigma_R) + rho'' + k beta(D|y|) + beta(B|y|), with beta
/// extended by zero to negative arguments.
class RhoRSurrogate final : public PshSurrogate {
 public:
  RhoRSurrogate(WeightSpec w, SigmaSurrogate sigma, SeedEnvelope seed, double D, double A2,
                double B2);
  double operator()(std::span<const cplx> z) const override;
  int k() const override { return w_.k(); }
  std::string kind() const override { return "rho_R"; }
  YAML::Node to_yaml() const override;

  const WeightSpec& weight() const { return w_; }
  const SigmaSurrogate& sigma() const { return sigma_; }
  const SeedEnvelope& seed() const { return seed_; }
  double R() const { return sigma_.R(); }
  double D() const { return D_; }
  double A2() const { return A2_; }
  double B2() const { return B2_; }
  double H() const { return seed_.H(); }

 private:
  WeightSpec w_;
  SigmaSurrogate sigma_;
  SeedEnvelope seed_;
  double D_, A2_, B2_;
};

struct RhoBuild {
  std::shared_ptr<const RhoRSurrogate> rho;
  double A2 = 0.0;
  double B2 = 0.0;
  double H = 0.0;
  double D = 0.0;
};

/// A' = 2A (A when alpha is concave), B' = (2ek+1)B + 4k A0 B0 / A.
double rho_A2(const WeightSpec& w);
double rho_B2(const WeightSpec& w, const EntireSeed& seed);

RhoBuild rho_R_build(const WeightSpec& w, const EntireSeed& seed, double R,
                     const RhoConfig& cfg = {});

struct RhoBoundsReport {
  double upper_full = -1e300;  // max of rho_R - rho_{R^k,A',B'} - beta(2BeR)
  double upper_cone = -1e300;  // max of rho_R - rho_{U,A',B'}
  double lower = -1e300;       // max of rho_{U,A,B} - H - rho_R over |x| <= R
  double empirical_H = 0.0;    // max of rho_{U,A,B} - rho_R over |x| <= R
  bool ok(double tol) const { return upper_full <= tol && upper_cone <= tol && lower <= tol; }
};

RhoBoundsReport check_rho_bounds(const RhoRSurrogate& rho, std::span<const std::vector<cplx>> zs);

/// Pointwise maximum of members.
class GlobalEnvelope final : public PshSurrogate {
 public:
  explicit GlobalEnvelope(std::vector<SurrogatePtr> members);
  double operator()(std::span<const cplx> z) const override;
  int k() const override;
  std::string kind() const override { return "envelope"; }
  YAML::Node to_yaml() const override;
  const std::vector<SurrogatePtr>& members() const { return members_; }

 private:
  std::vector<SurrogatePtr> members_;
};

GlobalEnvelope envelope_global(std::vector<SurrogatePtr> members);

struct CircleProbe {
  std::vector<cplx> z0;
  std::vector<cplx> w;
  double r = 0.1;
};

struct PshCheck {
  double max_deficiency = 0.0;  // max of u(z0) - circle mean
  std::size_t worst = 0;
};

PshCheck psh_check(const RealFn& u, std::span<const CircleProbe> probes,
                   int n = kCircleDefaultPoints);

}  // namespace ccl
