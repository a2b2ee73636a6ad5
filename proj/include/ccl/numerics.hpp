#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ccl {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultGridBudget = std::size_t{1} << 24;

/// Uniform rectangular grid. Axes for k complex variables are ordered
/// x1, y1, x2, y2, ...; points are stored row-major (last axis fastest).
struct GridSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> counts;
  std::size_t budget = kDefaultGridBudget;

  std::size_t axes() const { return counts.size(); }
  std::size_t size() const;
  double step(std::size_t axis) const;
  double coord(std::size_t axis, std::size_t i) const;
  /// Throws DomainError on malformed bounds/counts and BudgetError when the
  /// point count exceeds the budget.
  void validate() const;
  /// Multi-index of flat index n.
  std::vector<std::size_t> unravel(std::size_t n) const;
  std::size_t stride(std::size_t axis) const;

  bool operator==(const GridSpec& other) const;
};

/// Square box [-half, half]^axes with n points per axis.
GridSpec cube_grid(std::size_t axes, double half, std::size_t n,
                   std::size_t budget = kDefaultGridBudget);

/// Flat coordinate array: point n occupies coords[n*axes .. n*axes+axes).
struct GridPoints {
  GridSpec spec;
  std::vector<double> coords;

  std::span<const double> point(std::size_t n) const {
    return {coords.data() + n * spec.axes(), spec.axes()};
  }
};

GridPoints make_grid(const GridSpec& spec);

/// Complex samples on a grid. Immutable after construction.
class SampledField {
 public:
  SampledField(GridSpec grid, std::vector<cplx> values, std::string meta = {});

  /// Samples fn at every grid point (axes x1, y1, ...).
  static SampledField sample(const GridSpec& grid,
                             const std::function<cplx(std::span<const double>)>& fn,
                             std::string meta = {});

  const GridSpec& grid() const { return grid_; }
  const std::vector<cplx>& values() const { return values_; }
  const std::string& meta() const { return meta_; }
  cplx operator[](std::size_t n) const { return values_[n]; }
  std::size_t size() const { return values_.size(); }
  double max_abs() const;

 private:
  GridSpec grid_;
  std::vector<cplx> values_;
  std::string meta_;
};

/// Point z in C^k from grid coordinates (x1, y1, x2, y2, ...).
std::vector<cplx> to_complex(std::span<const double> coords);

/// max over interior points of |(1/2)(d/dx_j + i d/dy_j) psi - eta| using
/// centered differences. Points where `exclude` returns true are skipped.
double dbar_residual(const SampledField& psi, const SampledField& eta, std::size_t j,
                     const std::function<bool(std::span<const double>)>& exclude = {});

/// Centered-difference dbar_j of a field at interior points; zero on the
/// boundary layer.
SampledField dbar_field(const SampledField& psi, std::size_t j);

using RealFn = std::function<double(std::span<const cplx>)>;

inline constexpr int kCircleDefaultPoints = 64;

/// (1/n) sum_m u(z0 + r e^{2 pi i m / n} w).
double circle_mean(const RealFn& u, std::span<const cplx> z0, std::span<const cplx> w, double r,
                   int n = kCircleDefaultPoints);

/// CSV: one column per axis, then re, im. Header row names the columns.
void write_field_csv(const std::string& path, const SampledField& field);

/// Binary layout (little-endian): 16-byte header {char magic[4] = "CCLF";
/// u32 axes; u64 points}, then per axis {f64 lower; f64 upper; u64 count},
/// then interleaved (re, im) f64 pairs in grid order.
void write_field_binary(const std::string& path, const SampledField& field);
SampledField read_field_binary(const std::string& path);

}  // namespace ccl
