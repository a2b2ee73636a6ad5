#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccl/cones.hpp"
#include "ccl/numerics.hpp"
#include "ccl/profiles.hpp"

namespace YAML {
class Node;
}

namespace ccl {

/// rho_{U,A,B}(x+iy) = -alpha(|x|/A) + beta(B|y|) + beta(B delta_U(x)).
struct WeightSpec {
  Cone U;
  double A = 1.0;
  double B = 1.0;
  Profile alpha;
  Profile beta;

  int k() const { return U.dim(); }
  /// Positive A and B; profiles admissible on a default grid.
  void validate() const;
  WeightSpec with(double a, double b) const;
  WeightSpec over(const Cone& cone) const;
};

/// The canonical instance alpha = beta = s^2, kappa = 2.
WeightSpec canonical_weight(const Cone& U, double A, double B);

double rho_eval(const WeightSpec& w, std::span<const cplx> z);

/// f(z) = p(z - c) exp(-rate sum_j (z_j - c_j)^2) with p a polynomial.
class TestFunction {
 public:
  struct Term {
    std::vector<int> powers;
    cplx coef;
  };

  TestFunction(int k, std::vector<Term> terms, double rate, std::vector<cplx> center);

  /// scale * exp(-rate sum z_j^2).
  static TestFunction gaussian(int k, double rate = 1.0, cplx scale = 1.0);
  static TestFunction zero(int k);

  cplx operator()(std::span<const cplx> z) const;
  /// log|f(z)|, -inf at zeros of the polynomial factor.
  double log_abs(std::span<const cplx> z) const;
  /// z -> f(z + zeta).
  TestFunction translated(std::span<const cplx> zeta) const;
  TestFunction scaled(cplx s) const;

  int k() const { return k_; }
  double rate() const { return rate_; }
  const std::vector<cplx>& center() const { return center_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const;

 private:
  cplx poly(std::span<const cplx> w) const;

  int k_;
  std::vector<Term> terms_;
  double rate_;
  std::vector<cplx> center_;
};

struct NormOptions {
  double initial_half = 4.0;
  /// Grid points per real axis for the sup scan; midpoint cells per axis for
  /// the coarse L2 pass (the fine pass doubles it). Zero picks a default by k.
  std::size_t resolution = 0;
  int refine_steps = 40;
  int max_doublings = 8;
  double decay_ratio = 1e-12;
  std::size_t budget = kDefaultGridBudget;
};

struct NormResult {
  double value = 0.0;
  double error = 0.0;
  std::vector<cplx> maximizer;
  double half_width = 0.0;
  /// "decay": boundary below decay_ratio of the max; "plateau": the max did
  /// not grow when the box doubled; "zero": f vanishes identically.
  std::string certificate;
};

/// Grid maximum of |f| e^{-rho} with local refinement (a lower estimate).
/// Throws NumericalError("norm possibly infinite") without a certificate.
NormResult sup_norm(const TestFunction& f, const WeightSpec& w, const NormOptions& opt = {});

/// [integral |f|^2 e^{-2 rho}]^{1/2} by the midpoint rule at two resolutions;
/// error is the Richardson estimate. Requires decay at the box boundary.
NormResult l2_norm(const TestFunction& f, const WeightSpec& w, const NormOptions& opt = {});

/// Midpoint L2 norm of samples against e^{-2 rho}: [sum |f|^2 e^{-2 rho} h^{2k}]^{1/2}.
double weighted_l2_field(const SampledField& f, const WeightSpec& w);

/// Box [-half, half]^{2k} sampled with n points per axis.
struct BoxGrid {
  double half = 10.0;
  std::size_t n = 201;
};

struct GapViolation {
  std::vector<cplx> z;
  double deficit = 0.0;
};

struct GapResult {
  double sigma = 0.0;
  double tau = 0.0;
  double C = 0.0;
  std::vector<GapViolation> violations;
  /// Largest amount by which the fitted inequality fails at cell midpoints
  /// (informational; the fit itself is on grid points).
  double offgrid_excess = 0.0;
  bool ok() const { return violations.empty(); }
};

/// Fits sigma, C for rho_{A',B'} - rho_{A,B} + C >= sigma |z|^tau with
/// tau = min(1, kappa) and |z| = max(|x|, |y|).
GapResult verify_gap(const WeightSpec& w, double A2, double B2, const BoxGrid& grid = {});

/// Checks the gap inequality with given constants.
std::vector<GapViolation> check_gap(const WeightSpec& w, double A2, double B2, double sigma,
                                    double tau, double C, const BoxGrid& grid = {});

struct ShiftResult {
  double C = 0.0;
  double analytic_bound = 0.0;
  std::vector<GapViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// alpha(R/(A'-A)) + 2 beta(R B B'/(B'-B)).
double shift_bound(const WeightSpec& w, double A2, double B2, double R);

/// Smallest C >= 0 with rho_{A,B}(z + zeta) <= rho_{A',B'}(z) + C over grid z
/// and zeta on a grid of [-R, R]^{2k} (zeta_points per axis).
ShiftResult verify_shift(const WeightSpec& w, double A2, double B2, double R,
                         const BoxGrid& grid = {}, std::size_t zeta_points = 5);

YAML::Node weight_to_yaml(const WeightSpec& w);
WeightSpec weight_from_yaml(const YAML::Node& node);
std::string serialize_weight(const WeightSpec& w);

/// FNV-1a of the serialized spec, as 16 hex digits.
std::string spec_hash(const WeightSpec& w);

inline constexpr const char* kNormCsvHeader = "spec_hash,kind,value,error,maximizer";
std::string norm_csv_row(const WeightSpec& w, const std::string& kind, const NormResult& r);

}  // namespace ccl
