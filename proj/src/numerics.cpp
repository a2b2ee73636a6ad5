#include "ccl/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ccl/errors.hpp"

namespace ccl {

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (std::size_t c : counts) n *= c;
  return counts.empty() ? 0 : n;
}

double GridSpec::step(std::size_t axis) const {
  return (upper[axis] - lower[axis]) / static_cast<double>(counts[axis] - 1);
}

double GridSpec::coord(std::size_t axis, std::size_t i) const {
  if (i + 1 == counts[axis]) return upper[axis];
  return lower[axis] + step(axis) * static_cast<double>(i);
}

void GridSpec::validate() const {
  if (counts.empty()) throw DomainError("grid: at least one axis required");
  if (lower.size() != counts.size() || upper.size() != counts.size())
    throw DomainError("grid: bounds and counts differ in length");
  double total = 1.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (!(lower[a] < upper[a])) throw DomainError("grid: bounds must satisfy lower < upper");
    if (counts[a] < 2) throw DomainError("grid: every axis needs at least 2 points");
    total *= static_cast<double>(counts[a]);
  }
  if (total > static_cast<double>(budget))
    throw BudgetError("grid: " + std::to_string(static_cast<long long>(total)) +
                      " points exceed the budget of " + std::to_string(budget));
}

std::size_t GridSpec::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t a = axis + 1; a < counts.size(); ++a) s *= counts[a];
  return s;
}

std::vector<std::size_t> GridSpec::unravel(std::size_t n) const {
  std::vector<std::size_t> idx(counts.size());
  for (std::size_t a = counts.size(); a-- > 0;) {
    idx[a] = n % counts[a];
    n /= counts[a];
  }
  return idx;
}

bool GridSpec::operator==(const GridSpec& other) const {
  return lower == other.lower && upper == other.upper && counts == other.counts;
}

GridSpec cube_grid(std::size_t axes, double half, std::size_t n, std::size_t budget) {
  GridSpec g;
  g.lower.assign(axes, -half);
  g.upper.assign(axes, half);
  g.counts.assign(axes, n);
  g.budget = budget;
  g.validate();
  return g;
}

GridPoints make_grid(const GridSpec& spec) {
  spec.validate();
  GridPoints out{spec, {}};
  const std::size_t n = spec.size();
  const std::size_t d = spec.axes();
  out.coords.resize(n * d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t a = 0; a < d; ++a) out.coords[p * d + a] = spec.coord(a, idx[a]);
    for (std::size_t a = d; a-- > 0;) {
      if (++idx[a] < spec.counts[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

SampledField::SampledField(GridSpec grid, std::vector<cplx> values, std::string meta)
    : grid_(std::move(grid)), values_(std::move(values)), meta_(std::move(meta)) {
  grid_.validate();
  if (values_.size() != grid_.size())
    throw DimensionMismatch("field: " + std::to_string(values_.size()) + " values for " +
                            std::to_string(grid_.size()) + " grid points");
}

SampledField SampledField::sample(const GridSpec& grid,
                                  const std::function<cplx(std::span<const double>)>& fn,
                                  std::string meta) {
  const GridPoints pts = make_grid(grid);
  std::vector<cplx> values(grid.size());
  for (std::size_t n = 0; n < values.size(); ++n) values[n] = fn(pts.point(n));
  return SampledField(grid, std::move(values), std::move(meta));
}

double SampledField::max_abs() const {
  double m = 0.0;
  for (const cplx& v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<cplx> to_complex(std::span<const double> coords) {
  if (coords.size() % 2 != 0) throw DimensionMismatch("complex point needs an even axis count");
  std::vector<cplx> z(coords.size() / 2);
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = {coords[2 * j], coords[2 * j + 1]};
  return z;
}

namespace {

bool is_interior(const GridSpec& g, const std::vector<std::size_t>& idx) {
  for (std::size_t a = 0; a < idx.size(); ++a)
    if (idx[a] == 0 || idx[a] + 1 == g.counts[a]) return false;
  return true;
}

cplx centered_dbar(const SampledField& f, std::size_t n, std::size_t j) {
  const GridSpec& g = f.grid();
  const std::size_t ax = 2 * j, ay = 2 * j + 1;
  const std::size_t sx = g.stride(ax), sy = g.stride(ay);
  const cplx dx = (f[n + sx] - f[n - sx]) / (2.0 * g.step(ax));
  const cplx dy = (f[n + sy] - f[n - sy]) / (2.0 * g.step(ay));
  return 0.5 * (dx + cplx(0.0, 1.0) * dy);
}

}  // namespace

double dbar_residual(const SampledField& psi, const SampledField& eta, std::size_t j,
                     const std::function<bool(std::span<const double>)>& exclude) {
  if (!(psi.grid() == eta.grid())) throw DimensionMismatch("dbar_residual: grids differ");
  const GridSpec& g = psi.grid();
  if (2 * j + 1 >= g.axes()) throw DimensionMismatch("dbar_residual: axis index out of range");
  const GridPoints pts = exclude ? make_grid(g) : GridPoints{g, {}};
  double worst = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (!is_interior(g, g.unravel(n))) continue;
    if (exclude && exclude(pts.point(n))) continue;
    worst = std::max(worst, std::abs(centered_dbar(psi, n, j) - eta[n]));
  }
  return worst;
}

SampledField dbar_field(const SampledField& psi, std::size_t j) {
  const GridSpec& g = psi.grid();
  if (2 * j + 1 >= g.axes()) throw DimensionMismatch("dbar_field: axis index out of range");
  std::vector<cplx> out(g.size(), cplx{});
  for (std::size_t n = 0; n < g.size(); ++n)
    if (is_interior(g, g.unravel(n))) out[n] = centered_dbar(psi, n, j);
  return SampledField(g, std::move(out), "dbar of " + psi.meta());
}

double circle_mean(const RealFn& u, std::span<const cplx> z0, std::span<const cplx> w, double r,
                   int n) {
  if (!(r > 0.0)) throw DomainError("circle_mean: radius must be positive");
  if (n < 2) throw DomainError("circle_mean: need at least 2 points");
  if (z0.size() != w.size()) throw DimensionMismatch("circle_mean: z0 and w differ in dimension");
  std::vector<cplx> z(z0.size());
  double sum = 0.0;
  for (int m = 0; m < n; ++m) {
    const cplx e = std::polar(r, 2.0 * M_PI * m / n);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = z0[j] + e * w[j];
    sum += u(z);
  }
  return sum / n;
}

void write_field_csv(const std::string& path, const SampledField& field) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  const GridSpec& g = field.grid();
  for (std::size_t a = 0; a < g.axes(); ++a) out << (a % 2 == 0 ? "x" : "y") << (a / 2 + 1) << ',';
  out << "re,im\n";
  out << std::setprecision(17);
  const GridPoints pts = make_grid(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    for (double c : pts.point(n)) out << c << ',';
    out << field[n].real() << ',' << field[n].imag() << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

namespace {

static_assert(std::numeric_limits<double>::is_iec559);

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw ParseError("field: truncated binary file");
  return v;
}

}  // namespace

void write_field_binary(const std::string& path, const SampledField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  const GridSpec& g = field.grid();
  out.write("CCLF", 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.axes()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(g.size()));
  for (std::size_t a = 0; a < g.axes(); ++a) {
    put<double>(out, g.lower[a]);
    put<double>(out, g.upper[a]);
    put<std::uint64_t>(out, g.counts[a]);
  }
  for (const cplx& v : field.values()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) throw Error("write failed: " + path);
}

SampledField read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::memcmp(magic.data(), "CCLF", 4) != 0) throw ParseError("field: bad magic");
  const auto axes = get<std::uint32_t>(in);
  const auto points = get<std::uint64_t>(in);
  if (axes == 0 || axes > 64) throw ParseError("field: implausible axis count");
  GridSpec g;
  g.budget = std::numeric_limits<std::size_t>::max();
  for (std::uint32_t a = 0; a < axes; ++a) {
    g.lower.push_back(get<double>(in));
    g.upper.push_back(get<double>(in));
    g.counts.push_back(get<std::uint64_t>(in));
  }
  try {
    g.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("field: ") + e.what());
  }
  if (g.size() != points) throw ParseError("field: header point count disagrees with axes");
  std::vector<cplx> values(points);
  for (auto& v : values) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = {re, im};
  }
  return SampledField(std::move(g), std::move(values), "read from " + path);
}

}  // namespace ccl
