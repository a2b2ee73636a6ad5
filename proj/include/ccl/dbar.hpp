#pragma once

#include <span>
#include <string>
#include <vector>

#include "ccl/numerics.hpp"

namespace ccl {

enum class CauchyMethod { direct, convolution };

/// Fraction of the box on each side that must stay free of eta.
inline constexpr double kSupportMargin = 0.1;

/// psi(z) = (1/pi) sum over cells of eta(zeta) * integral_cell 1/(z - zeta).
/// direct: midpoint kernel with the exact (zero) integral on the cell at z;
/// convolution: FFT with exact cell integrals of 1/w for every offset.
/// Requires a two-axis grid and eta vanishing within kSupportMargin of the box.
SampledField cauchy_solve(const SampledField& eta, CauchyMethod method = CauchyMethod::convolution);

struct SolveStep {
  int iteration = 0;
  double objective = 0.0;  // sum |psi|^2 e^{-(rho - rho_min)} (1+|z|^2)^{-2} dA
  double residual = 0.0;   // ||D psi - eta||_2 / ||eta||_2
};

struct WeightedSolveOptions {
  int max_refinements = 6;
  double target_residual = 1e-8;
  /// The solve caps rho at this much above its value where |eta|^2 e^{-rho}
  /// peaks. Where the weight
  /// e^{-rho} is negligible the exact minimizer is free to grow without
  /// bound, which would swamp f in f1 + f2; the floor keeps psi representable.
  /// Reported objectives always use the true rho.
  double weight_range = 30.0;
};

struct WeightedSolveResult {
  SampledField psi;
  std::vector<SolveStep> diagnostics;
  double rho_min = 0.0;  // objective values are scaled by e^{rho_min}
  bool converged = false;
};

/// Minimizes sum |psi|^2 e^{-rho} (1+|z|^2)^{-2} over grid fields subject to
/// the centered-difference equation dbar psi = eta at every interior point.
/// Iteration 0 of the diagnostics is the unweighted minimum-norm solution;
/// later rows are the weighted solve and its refinement steps.
WeightedSolveResult weighted_min_solve(const SampledField& eta, std::span<const double> rho,
                                       const WeightedSolveOptions& opt = {});

/// Weighted objective of an arbitrary field, on the same scale as the
/// diagnostics of weighted_min_solve.
double weighted_objective(const SampledField& psi, std::span<const double> rho, double rho_min);

struct HormanderResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  bool pass = false;
};

/// lhs = 2 sum |psi|^2 e^{-rho} (1+|z|^2)^{-2} dA, rhs = k^2 sum |eta|^2 e^{-rho} dA;
/// pass when lhs <= rhs (1 + slack). Sums are formed in the log domain.
HormanderResult hormander_check(const SampledField& psi, const SampledField& eta,
                                std::span<const double> rho, int k = 1, double slack = 0.1);

/// Values of fn at every grid point of a one-variable grid.
std::vector<double> sample_real(const GridSpec& grid, const RealFn& fn);

inline constexpr const char* kSolverCsvHeader = "iteration,objective,residual";

}  // namespace ccl
