#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccl/cones.hpp"
#include "ccl/dbar.hpp"
#include "ccl/numerics.hpp"
#include "ccl/psh.hpp"
#include "ccl/weights.hpp"

namespace ccl {

/// g0(x) = c exp(-1/(1 - |x|^2)) for |x| < 1 (Euclidean |x|), 0 otherwise,
/// with c fixed by unit mass.
class Mollifier {
 public:
  explicit Mollifier(int k = 1);

  int k() const { return k_; }
  double c() const { return c_; }
  double operator()(std::span<const double> x) const;
  double operator()(double x) const;
  /// Independent quadrature of the total mass (tanh-sinh, radial for k > 1).
  double mass() const;
  /// k = 1: integral of g0 over [lo, hi].
  double integral(double lo, double hi) const;

 private:
  int k_;
  double c_;
};

/// Smooth partition g1 + g2 = 1 with g_nu(x) = integral over W_nu of g0(x - xi).
/// Only k = 1 is supported; there each W_nu is {0}, a ray or the line.
class Partition {
 public:
  Partition(Cone w1, Cone w2, Mollifier m);

  double g1(double x) const;
  double g2(double x) const;
  /// dbar g1 = (1/2) d/dx g1, independent of y.
  double dbar_g1(double x) const;

  const Cone& w1() const { return w1_; }
  const Cone& w2() const { return w2_; }
  const Mollifier& mollifier() const { return m_; }

 private:
  double g(const Cone& w, double x) const;

  Cone w1_, w2_;
  Mollifier m_;
};

/// Checks W1 u W2 = R^k and W1 n W2 = {0} (PreconditionError otherwise) and
/// DomainError for k != 1.
Partition build_partition(const Cone& W1, const Cone& W2, const Mollifier& m = Mollifier(1));

struct PlaneBox {
  double half_x = 2.2;
  double half_y = 2.2;
  std::size_t nx = 111;
  std::size_t ny = 111;
  std::size_t budget = kDefaultGridBudget;

  GridSpec spec() const;
};

struct SplitConfig {
  PlaneBox box;
  double R = 1.0;
  RhoConfig rho;
  WeightedSolveOptions solver;
  /// Random points for the distance inequalities, drawn in [-sample_half, sample_half]^k.
  std::size_t samples = 1000;
  double sample_half = 10.0;
  std::uint64_t seed = 1;
  /// Skip the l2 membership certificate of f (used for f = 0 and tests).
  bool certify_input = true;
};

struct SplitReport {
  Cone U, U1, U2, V1, V2, W1, W2;
  double theta = 1.0;
  double B_tilde = 0.0;
  double A2 = 0.0;
  double B2 = 0.0;
  double D = 0.0;
  double H = 0.0;
  double input_norm = 0.0;           // l2 norm of f in (A, B) over U
  double reconstruction_error = 0.0;  // max |f - f1 - f2| / max |f| on the grid
  double norm_f1 = 0.0;               // weighted L2 in (A', B') over U u U1
  double norm_f2 = 0.0;               // weighted L2 in (A', B') over U u U2
  double eta_extent = 0.0;            // max |x| over grid points with eta != 0
  bool eta_support_ok = true;         // eta vanishes outside {d_W1 <= 1} n {d_W2 <= 1}
  double aaa1_excess = 0.0;           // max of d_U(theta x) - d_{U u U_nu}(x), x outside V_nu
  double aaa2_C = 0.0;                // max of d_U(x) - d_{U u U_nu}(x / theta) on W~_nu
  HormanderResult hormander;
  std::vector<SolveStep> diagnostics;
  bool converged = false;
};

struct SplitResult {
  SampledField f1;
  SampledField f2;
  SampledField eta;
  SampledField psi;
  SplitReport report;
};

/// f = f1 + f2 with f_nu = f g_nu -/+ psi and dbar psi = f dbar g1, psi the
/// minimizer against 2 rho for a psh rho built over U u U1 u U2 with B/theta.
SplitResult lemma7_split(const TestFunction& f, const Cone& U, const Cone& U1, const Cone& U2,
                         const WeightSpec& w, const EntireSeed& seed, const SplitConfig& cfg = {});

/// Splitting along closed cones K1, K2; w.U is the conic neighborhood W of
/// K1 n K2 on which f is certified. Runs lemma7_split with U = W and
/// U_nu = cl(V_nu) n V, V = (R^k \ W) u {0}.
SplitResult theorem2_split(const TestFunction& f, const Cone& K1, const Cone& K2,
                           const WeightSpec& w, const EntireSeed& seed,
                           const SplitConfig& cfg = {});

/// chi(z) = s(|z|) with s(r) = integral of g0 over [2r - 3, 1]: 1 for |z| <= 1,
/// 0 for |z| >= 2.
double cutoff(const Mollifier& m, cplx z);
cplx dbar_cutoff(const Mollifier& m, cplx z);
/// sup |dbar chi|^2 by dense radial sampling.
double cutoff_sup_dbar_sq(const Mollifier& m, std::size_t samples = 20001);

struct DensityConfig {
  PlaneBox box{17.0, 2.2, 426, 56};
  std::vector<int> ns{2, 4, 8};
  RhoConfig rho;
  WeightedSolveOptions solver;
  bool certify_input = true;
};

struct DensityStep {
  int n = 0;
  double R = 0.0;
  double error = 0.0;       // weighted L2 of f - f_n in (A', B') over W
  double tail = 0.0;        // the part from f (1 - chi(z/n)) alone
  double correction = 0.0;  // weighted L2 of psi_n alone
  HormanderResult hormander;
  bool converged = false;
};

struct DensityResult {
  Cone W;
  double A2 = 0.0;
  double B2 = 0.0;
  double a = 0.0;  // sup |dbar chi|^2
  std::vector<DensityStep> steps;
  std::vector<SampledField> approximants;
  bool decreasing() const;
};

/// f_n = f chi(z/n) - psi_n with dbar psi_n = f dbar[chi(z/n)] solved against
/// 2 rho_{2n} built over w.U; errors are measured over W.
DensityResult density_approximate(const TestFunction& f, const WeightSpec& w, const Cone& W,
                                  const EntireSeed& seed, const DensityConfig& cfg = {});

inline constexpr const char* kDensityCsvHeader = "n,error,tail,correction,hormander_lhs,hormander_rhs";

}  // namespace ccl
