#include "ccl/dbar.hpp"

#include <fftw3.h>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ccl/errors.hpp"

namespace ccl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_plane(const GridSpec& g, const char* who) {
  if (g.axes() != 2)
    throw DomainError(std::string(who) + ": only k = 1 (two real axes) is supported");
}

void require_support(const SampledField& eta) {
  const GridSpec& g = eta.grid();
  const GridPoints pts = make_grid(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (eta[p] == cplx{}) continue;
    for (std::size_t a = 0; a < 2; ++a) {
      const double margin = kSupportMargin * (g.upper[a] - g.lower[a]);
      const double c = pts.point(p)[a];
      if (c < g.lower[a] + margin || c > g.upper[a] - margin)
        throw PreconditionError("cauchy_solve: support of eta comes within 10% of the box boundary");
    }
  }
}

// Antiderivatives with d^2/du dv equal to u/(u^2+v^2) and v/(u^2+v^2).
double prim_u(double u, double v) {
  const double r2 = u * u + v * v;
  double out = -v;
  if (u != 0.0) out += u * std::atan(v / u);
  if (r2 > 0.0) out += 0.5 * v * std::log(r2);
  return out;
}

double prim_v(double u, double v) { return prim_u(v, u); }

// (1/pi) integral of 1/w over [u1,u2] x [v1,v2].
cplx cell_integral(double u1, double u2, double v1, double v2) {
  auto box = [&](double (*f)(double, double)) {
    return f(u2, v2) - f(u1, v2) - f(u2, v1) + f(u1, v1);
  };
  return cplx(box(prim_u), -box(prim_v)) / M_PI;
}

SampledField cauchy_direct(const SampledField& eta) {
  const GridSpec& g = eta.grid();
  const GridPoints pts = make_grid(g);
  const double weight = g.step(0) * g.step(1) / M_PI;
  std::vector<std::size_t> support;
  for (std::size_t q = 0; q < g.size(); ++q)
    if (eta[q] != cplx{}) support.push_back(q);
  std::vector<cplx> psi(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    const cplx z(pts.point(p)[0], pts.point(p)[1]);
    cplx s = 0.0;
    for (std::size_t q : support) {
      if (q == p) continue;  // exact integral over the centred cell vanishes
      s += eta[q] / (z - cplx(pts.point(q)[0], pts.point(q)[1]));
    }
    psi[p] = weight * s;
  }
  return SampledField(g, std::move(psi), "cauchy transform (direct)");
}

SampledField cauchy_fft(const SampledField& eta) {
  const GridSpec& g = eta.grid();
  const std::size_t nx = g.counts[0], ny = g.counts[1];
  const std::size_t px = 2 * nx, py = 2 * ny;
  const double hx = g.step(0), hy = g.step(1);

  auto* a = fftw_alloc_complex(px * py);
  auto* b = fftw_alloc_complex(px * py);
  fftw_plan fa = fftw_plan_dft_2d(static_cast<int>(px), static_cast<int>(py), a, a, FFTW_FORWARD,
                                  FFTW_ESTIMATE);
  fftw_plan fb = fftw_plan_dft_2d(static_cast<int>(px), static_cast<int>(py), b, b, FFTW_FORWARD,
                                  FFTW_ESTIMATE);
  fftw_plan inv = fftw_plan_dft_2d(static_cast<int>(px), static_cast<int>(py), a, a, FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
  std::fill_n(reinterpret_cast<double*>(a), 2 * px * py, 0.0);
  std::fill_n(reinterpret_cast<double*>(b), 2 * px * py, 0.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const cplx v = eta[i * ny + j];
      a[i * py + j][0] = v.real();
      a[i * py + j][1] = v.imag();
    }
  const long lx = static_cast<long>(nx), ly = static_cast<long>(ny);
  for (long m = -(lx - 1); m <= lx - 1; ++m)
    for (long n = -(ly - 1); n <= ly - 1; ++n) {
      const double u = m * hx, v = n * hy;
      const cplx k = cell_integral(u - 0.5 * hx, u + 0.5 * hx, v - 0.5 * hy, v + 0.5 * hy);
      const std::size_t im = static_cast<std::size_t>((m + static_cast<long>(px)) % static_cast<long>(px));
      const std::size_t in = static_cast<std::size_t>((n + static_cast<long>(py)) % static_cast<long>(py));
      b[im * py + in][0] = k.real();
      b[im * py + in][1] = k.imag();
    }
  fftw_execute(fa);
  fftw_execute(fb);
  for (std::size_t t = 0; t < px * py; ++t) {
    const cplx prod = cplx(a[t][0], a[t][1]) * cplx(b[t][0], b[t][1]);
    a[t][0] = prod.real();
    a[t][1] = prod.imag();
  }
  fftw_execute(inv);
  const double scale = 1.0 / static_cast<double>(px * py);
  std::vector<cplx> psi(g.size());
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      psi[i * ny + j] = cplx(a[i * py + j][0], a[i * py + j][1]) * scale;
  fftw_destroy_plan(fa);
  fftw_destroy_plan(fb);
  fftw_destroy_plan(inv);
  fftw_free(a);
  fftw_free(b);
  return SampledField(g, std::move(psi), "cauchy transform (convolution)");
}

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double e : v) m = std::max(m, e);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double e : v) s += std::exp(e - m);
  return m + std::log(s);
}

using SpMat = Eigen::SparseMatrix<cplx>;
using Vec = Eigen::VectorXcd;

// Centered-difference dbar restricted to interior rows.
SpMat dbar_matrix(const GridSpec& g) {
  const std::size_t nx = g.counts[0], ny = g.counts[1];
  const double cx = 1.0 / (4.0 * g.step(0)), cy = 1.0 / (4.0 * g.step(1));
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(4 * nx * ny);
  long row = 0;
  for (std::size_t i = 1; i + 1 < nx; ++i)
    for (std::size_t j = 1; j + 1 < ny; ++j, ++row) {
      const auto col = [&](std::size_t a, std::size_t b) { return static_cast<long>(a * ny + b); };
      t.emplace_back(row, col(i + 1, j), cplx(cx, 0.0));
      t.emplace_back(row, col(i - 1, j), cplx(-cx, 0.0));
      t.emplace_back(row, col(i, j + 1), cplx(0.0, cy));
      t.emplace_back(row, col(i, j - 1), cplx(0.0, -cy));
    }
  SpMat D(row, static_cast<long>(nx * ny));
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

Vec interior_values(const SampledField& eta) {
  const std::size_t nx = eta.grid().counts[0], ny = eta.grid().counts[1];
  Vec v((nx - 2) * (ny - 2));
  long row = 0;
  for (std::size_t i = 1; i + 1 < nx; ++i)
    for (std::size_t j = 1; j + 1 < ny; ++j) v[row++] = eta[i * ny + j];
  return v;
}

// Minimum-norm solution of D S phi = eta with rows equilibrated; returns psi = S phi.
class ScaledSolver {
 public:
  ScaledSolver(const SpMat& D, std::vector<double> log_s) : log_s_(std::move(log_s)) {
    SpMat A = D;
    row_log_.assign(A.rows(), kNegInf);
    for (long c = 0; c < A.outerSize(); ++c)
      for (SpMat::InnerIterator it(A, c); it; ++it)
        row_log_[it.row()] = std::max(row_log_[it.row()], log_s_[c]);
    for (long c = 0; c < A.outerSize(); ++c)
      for (SpMat::InnerIterator it(A, c); it; ++it)
        it.valueRef() *= std::exp(log_s_[c] - row_log_[it.row()]);
    A_ = A;
    const SpMat G = A_ * A_.adjoint();
    ldlt_.compute(G);
    if (ldlt_.info() != Eigen::Success)
      throw NumericalError("weighted_min_solve: the normal-equation matrix is singular");
  }

  Vec solve(const Vec& rhs) const {
    Vec r(rhs.size());
    for (long p = 0; p < rhs.size(); ++p) r[p] = rhs[p] * std::exp(-row_log_[p]);
    const Vec mu = ldlt_.solve(r);
    if (ldlt_.info() != Eigen::Success) throw NumericalError("weighted_min_solve: solve failed");
    Vec phi = A_.adjoint() * mu;
    for (long q = 0; q < phi.size(); ++q) phi[q] *= std::exp(log_s_[q]);
    return phi;
  }

 private:
  std::vector<double> log_s_;
  std::vector<double> row_log_;
  SpMat A_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
};

std::vector<double> log_one_plus(const GridSpec& g) {
  const GridPoints pts = make_grid(g);
  std::vector<double> out(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double x = pts.point(p)[0], y = pts.point(p)[1];
    out[p] = std::log1p(x * x + y * y);
  }
  return out;
}

}  // namespace

SampledField cauchy_solve(const SampledField& eta, CauchyMethod method) {
  require_plane(eta.grid(), "cauchy_solve");
  require_support(eta);
  return method == CauchyMethod::direct ? cauchy_direct(eta) : cauchy_fft(eta);
}

double weighted_objective(const SampledField& psi, std::span<const double> rho, double rho_min) {
  const GridSpec& g = psi.grid();
  if (rho.size() != g.size()) throw DimensionMismatch("weighted_objective: rho size");
  const auto l1 = log_one_plus(g);
  double s = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double a = std::abs(psi[p]);
    if (a == 0.0) continue;
    s += a * a * std::exp(-(rho[p] - rho_min) - 2.0 * l1[p]);
  }
  return s * g.step(0) * g.step(1);
}

WeightedSolveResult weighted_min_solve(const SampledField& eta, std::span<const double> rho,
                                       const WeightedSolveOptions& opt) {
  const GridSpec& g = eta.grid();
  require_plane(g, "weighted_min_solve");
  if (rho.size() != g.size()) throw DimensionMismatch("weighted_min_solve: rho size differs from grid");
  if (g.counts[0] < 3 || g.counts[1] < 3) throw DomainError("weighted_min_solve: grid too small");
  for (double r : rho)
    if (!std::isfinite(r)) throw NumericalError("weighted_min_solve: non-finite weight sample");

  const double rho_min = *std::min_element(rho.begin(), rho.end());
  const SpMat D = dbar_matrix(g);
  const Vec target = interior_values(eta);
  const double target_norm = target.norm();

  WeightedSolveResult out{SampledField(g, std::vector<cplx>(g.size())), {}, rho_min, false};
  if (target_norm == 0.0) {
    out.diagnostics.push_back({0, 0.0, 0.0});
    out.converged = true;
    return out;
  }

  auto as_field = [&](const Vec& v, const char* meta) {
    return SampledField(g, std::vector<cplx>(v.data(), v.data() + v.size()), meta);
  };
  auto residual = [&](const Vec& psi) { return (D * psi - target).norm() / target_norm; };

  {
    const ScaledSolver plain(D, std::vector<double>(g.size(), 0.0));
    const Vec psi0 = plain.solve(target);
    out.diagnostics.push_back(
        {0, weighted_objective(as_field(psi0, ""), rho, rho_min), residual(psi0)});
  }

  const auto l1 = log_one_plus(g);
  std::vector<double> log_s(g.size());
  // Anchor of the weight floor: the point carrying the largest share of the
  // weighted data |eta|^2 e^{-rho}.
  double anchor = rho_min, best = kNegInf;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double a = std::abs(eta[p]);
    if (a == 0.0) continue;
    const double v = 2.0 * std::log(a) - rho[p];
    if (v > best) {
      best = v;
      anchor = rho[p];
    }
  }
  for (std::size_t p = 0; p < g.size(); ++p)
    log_s[p] = 0.5 * std::min(rho[p] - anchor, opt.weight_range) + l1[p];
  const ScaledSolver solver(D, std::move(log_s));

  Vec psi = solver.solve(target);
  double res = residual(psi);
  out.diagnostics.push_back({1, weighted_objective(as_field(psi, ""), rho, rho_min), res});
  for (int it = 0; it < opt.max_refinements && res > opt.target_residual; ++it) {
    psi += solver.solve(target - D * psi);
    const double next = residual(psi);
    out.diagnostics.push_back(
        {it + 2, weighted_objective(as_field(psi, ""), rho, rho_min), next});
    if (!(next < res)) {
      res = next;
      break;
    }
    res = next;
  }
  out.converged = res <= opt.target_residual;
  out.psi = as_field(psi, "weighted minimal dbar solution");
  return out;
}

HormanderResult hormander_check(const SampledField& psi, const SampledField& eta,
                                std::span<const double> rho, int k, double slack) {
  if (!(psi.grid() == eta.grid())) throw DimensionMismatch("hormander_check: grids differ");
  const GridSpec& g = psi.grid();
  require_plane(g, "hormander_check");
  if (rho.size() != g.size()) throw DimensionMismatch("hormander_check: rho size");
  const auto l1 = log_one_plus(g);
  std::vector<double> left, right;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double a = std::abs(psi[p]);
    if (a > 0.0) left.push_back(2.0 * std::log(a) - rho[p] - 2.0 * l1[p]);
    const double e = std::abs(eta[p]);
    if (e > 0.0) right.push_back(2.0 * std::log(e) - rho[p]);
  }
  const double log_cell = std::log(g.step(0) * g.step(1));
  HormanderResult r;
  r.log_lhs = std::log(2.0) + log_sum_exp(left) + log_cell;
  r.log_rhs = 2.0 * std::log(static_cast<double>(k)) + log_sum_exp(right) + log_cell;
  r.lhs = std::exp(r.log_lhs);
  r.rhs = std::exp(r.log_rhs);
  r.pass = r.log_lhs == kNegInf || r.log_lhs <= r.log_rhs + std::log1p(slack);
  return r;
}

std::vector<double> sample_real(const GridSpec& grid, const RealFn& fn) {
  const GridPoints pts = make_grid(grid);
  std::vector<double> out(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) out[p] = fn(to_complex(pts.point(p)));
  return out;
}

}  // namespace ccl
