#include "ccl/cones.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ccl/errors.hpp"

namespace ccl {

namespace {

constexpr double kAngleTol = 1e-12;

double wrap_angle(double a) {
  double w = a - kTwoPi * std::floor(a / kTwoPi);
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// Interval on the real line with endpoint flags.
struct Interval {
  double lo, hi;
  bool lc, hc;

  bool empty() const { return lo > hi || (lo == hi && !(lc && hc)); }
};

Interval meet(const Interval& a, const Interval& b) {
  Interval r{};
  if (a.lo == b.lo) {
    r.lo = a.lo;
    r.lc = a.lc && b.lc;
  } else if (a.lo > b.lo) {
    r.lo = a.lo;
    r.lc = a.lc;
  } else {
    r.lo = b.lo;
    r.lc = b.lc;
  }
  if (a.hi == b.hi) {
    r.hi = a.hi;
    r.hc = a.hc && b.hc;
  } else if (a.hi < b.hi) {
    r.hi = a.hi;
    r.hc = a.hc;
  } else {
    r.hi = b.hi;
    r.hc = b.hc;
  }
  return r;
}

bool contains(const Interval& outer, const Interval& inner) {
  if (inner.empty()) return true;
  const bool lo_ok = inner.lo > outer.lo || (inner.lo == outer.lo && (outer.lc || !inner.lc));
  const bool hi_ok = inner.hi < outer.hi || (inner.hi == outer.hi && (outer.hc || !inner.hc));
  return lo_ok && hi_ok;
}

bool arc_is_empty(const Arc& a) { return a.len == 0.0 && !(a.lo_closed && a.hi_closed); }

// Both copies of b, unwrapped relative to a.lo.
std::array<Interval, 2> unwrap_relative(const Arc& a, const Arc& b) {
  const double d = wrap_angle(b.lo - a.lo);
  return {Interval{d, d + b.len, b.lo_closed, b.hi_closed},
          Interval{d - kTwoPi, d - kTwoPi + b.len, b.lo_closed, b.hi_closed}};
}

// Normalizes an arc list; returns true when the union is the whole circle.
bool normalize_arcs(std::vector<Arc>& arcs) {
  std::vector<Arc> in;
  for (Arc a : arcs) {
    if (!(a.len >= 0.0)) throw DomainError("cone: arc length must be nonnegative");
    if (arc_is_empty(a)) continue;
    if (a.len > kTwoPi || (a.len == kTwoPi && (a.lo_closed || a.hi_closed))) return true;
    a.lo = wrap_angle(a.lo);
    in.push_back(a);
  }
  std::sort(in.begin(), in.end(), [](const Arc& x, const Arc& y) {
    if (x.lo != y.lo) return x.lo < y.lo;
    return x.lo_closed && !y.lo_closed;
  });
  std::vector<Arc> out;
  auto absorb = [](Arc& cur, const Arc& a, double shift) {
    const double a_hi = a.hi() + shift;
    if (a_hi > cur.hi()) {
      cur.len = a_hi - cur.lo;
      cur.hi_closed = a.hi_closed;
    } else if (a_hi == cur.hi()) {
      cur.hi_closed = cur.hi_closed || a.hi_closed;
    }
  };
  for (const Arc& a : in) {
    if (!out.empty()) {
      Arc& cur = out.back();
      const bool touches = a.lo < cur.hi() || (a.lo == cur.hi() && (cur.hi_closed || a.lo_closed));
      if (touches) {
        if (a.lo == cur.lo) cur.lo_closed = cur.lo_closed || a.lo_closed;
        absorb(cur, a, 0.0);
        continue;
      }
    }
    out.push_back(a);
  }
  // Wrap-around: the last arc may run past 2pi into the first ones.
  while (out.size() > 1) {
    Arc& last = out.back();
    const Arc& first = out.front();
    const double over = last.hi() - kTwoPi;
    const bool touches =
        over > first.lo || (over == first.lo && (last.hi_closed || first.lo_closed));
    if (!touches) break;
    absorb(last, first, kTwoPi);
    out.erase(out.begin());
  }
  if (out.size() == 1) {
    const Arc& a = out.front();
    const double over = a.hi() - kTwoPi;
    if (over > a.lo || (over == a.lo && (a.hi_closed || a.lo_closed))) return true;
  }
  arcs = std::move(out);
  return false;
}

void check_dims(const Cone& c, std::size_t n) {
  if (static_cast<std::size_t>(c.dim()) != n)
    throw DimensionMismatch("cone of dimension " + std::to_string(c.dim()) +
                            " applied to a point of dimension " + std::to_string(n));
}

bool in_closure_2d(const Cone& c, double theta) {
  for (const Arc& a : c.arcs()) {
    Arc closed = a;
    closed.lo_closed = closed.hi_closed = true;
    if (closed.contains_angle(theta, kAngleTol)) return true;
  }
  return false;
}

std::vector<double> unit_direction(std::span<const double> d) {
  double norm = 0.0;
  for (double v : d) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<double> u(d.begin(), d.end());
  for (double& v : u) v /= norm;
  return u;
}

std::array<double, 2> square_point(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double m = std::max(std::abs(c), std::abs(s));
  return {c / m, s / m};
}

}  // namespace

bool Arc::contains_angle(double theta, double tol) const {
  double d = std::fmod(theta - lo, kTwoPi);
  if (d < 0) d += kTwoPi;
  if (d > 0.0 && d < len) return true;
  if (d == 0.0 && (lo_closed || (len == kTwoPi && hi_closed))) return true;
  if (d == len && hi_closed) return true;
  if (lo_closed && (d <= tol || kTwoPi - d <= tol)) return true;
  if (hi_closed && std::abs(d - len) <= tol) return true;
  return false;
}

double sup_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Cone Cone::origin(int dim) {
  if (dim < 1) throw DomainError("cone: dimension must be >= 1");
  Cone c;
  c.dim_ = dim;
  return c;
}

Cone Cone::full(int dim) {
  Cone c = origin(dim);
  c.full_ = true;
  if (dim == 1) c.neg_ = c.pos_ = true;
  return c;
}

Cone Cone::rays1d(bool negative, bool positive) {
  Cone c = origin(1);
  c.neg_ = negative;
  c.pos_ = positive;
  c.full_ = negative && positive;
  return c;
}

Cone Cone::arcs2d(std::vector<Arc> arcs) {
  Cone c = origin(2);
  if (normalize_arcs(arcs)) {
    c.full_ = true;
    return c;
  }
  c.arcs_ = std::move(arcs);
  return c;
}

Cone Cone::ray2d(double theta) { return arcs2d({Arc{theta, 0.0, true, true}}); }

Cone Cone::sampled(int dim, std::vector<std::vector<double>> directions, bool open) {
  Cone c = origin(dim);
  for (auto& d : directions) {
    if (static_cast<int>(d.size()) != dim) throw DimensionMismatch("cone: direction dimension");
    if (sup_norm(d) == 0.0) throw DomainError("cone: zero direction");
    c.dirs_.push_back(unit_direction(d));
  }
  c.open_ = open;
  return c;
}

bool Cone::is_origin() const {
  if (full_) return false;
  if (dim_ == 1) return !neg_ && !pos_;
  if (dim_ == 2) return arcs_.empty();
  return dirs_.empty();
}

bool Cone::is_closed() const {
  if (full_ || is_origin() || dim_ == 1) return true;
  if (dim_ == 2)
    return std::all_of(arcs_.begin(), arcs_.end(),
                       [](const Arc& a) { return a.lo_closed && a.hi_closed; });
  return !open_;
}

bool Cone::has_open_projection() const {
  if (full_ || is_origin() || dim_ == 1) return true;
  if (dim_ == 2)
    return std::all_of(arcs_.begin(), arcs_.end(), [](const Arc& a) {
      return a.len > 0.0 && !a.lo_closed && !a.hi_closed;
    });
  return open_;
}

Cone Cone::closure() const {
  if (dim_ != 2) {
    Cone c = *this;
    c.open_ = false;
    return c;
  }
  if (full_ || is_origin()) return *this;
  std::vector<Arc> arcs = arcs_;
  for (Arc& a : arcs) a.lo_closed = a.hi_closed = true;
  return arcs2d(std::move(arcs));
}

Cone Cone::complement() const {
  if (dim_ == 1) return rays1d(!neg_, !pos_);
  if (full_) return origin(dim_);
  if (is_origin()) return full(dim_);
  if (dim_ > 2) throw DomainError("cone: complement is only exact for k <= 2");
  std::vector<Arc> gaps;
  const std::size_t n = arcs_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Arc& a = arcs_[i];
    const Arc& next = arcs_[(i + 1) % n];
    const double next_lo = (i + 1 < n) ? next.lo : next.lo + kTwoPi;
    Arc g{a.hi(), next_lo - a.hi(), !a.hi_closed, !next.lo_closed};
    if (g.len < 0.0) g.len = 0.0;
    if (!arc_is_empty(g)) gaps.push_back(g);
  }
  return arcs2d(std::move(gaps));
}

Cone Cone::intersect(const Cone& other) const {
  if (dim_ != other.dim_) throw DimensionMismatch("cone intersection: dimensions differ");
  if (full_) return other;
  if (other.full_) return *this;
  if (is_origin() || other.is_origin()) return origin(dim_);
  if (dim_ == 1) return rays1d(neg_ && other.neg_, pos_ && other.pos_);
  if (dim_ > 2) throw DomainError("cone: intersection is only exact for k <= 2");
  std::vector<Arc> pieces;
  for (const Arc& a : arcs_) {
    const Interval base{0.0, a.len, a.lo_closed, a.hi_closed};
    for (const Arc& b : other.arcs_) {
      for (const Interval& bi : unwrap_relative(a, b)) {
        const Interval r = meet(base, bi);
        if (r.empty()) continue;
        pieces.push_back(Arc{a.lo + r.lo, r.hi - r.lo, r.lc, r.hc});
      }
    }
  }
  return arcs2d(std::move(pieces));
}

Cone Cone::unite(const Cone& other) const {
  if (dim_ != other.dim_) throw DimensionMismatch("cone union: dimensions differ");
  if (full_ || other.full_) return full(dim_);
  if (dim_ == 1) return rays1d(neg_ || other.neg_, pos_ || other.pos_);
  if (dim_ == 2) {
    std::vector<Arc> arcs = arcs_;
    arcs.insert(arcs.end(), other.arcs_.begin(), other.arcs_.end());
    return arcs2d(std::move(arcs));
  }
  Cone c = *this;
  c.dirs_.insert(c.dirs_.end(), other.dirs_.begin(), other.dirs_.end());
  c.open_ = open_ && other.open_;
  return c;
}

bool Cone::subset_of(const Cone& other) const {
  if (dim_ != other.dim_) throw DimensionMismatch("cone inclusion: dimensions differ");
  if (other.full_) return true;
  if (full_) return false;
  if (is_origin()) return true;
  if (dim_ == 1) return (!neg_ || other.neg_) && (!pos_ || other.pos_);
  if (dim_ > 2) throw DomainError("cone: inclusion is only exact for k <= 2");
  for (const Arc& p : arcs_) {
    bool covered = false;
    for (const Arc& w : other.arcs_) {
      const Interval outer{0.0, w.len, w.lo_closed, w.hi_closed};
      for (const Interval& cand : unwrap_relative(w, p)) {
        if (contains(outer, cand)) covered = true;
      }
      if (covered) break;
    }
    if (!covered) return false;
  }
  return true;
}

bool Cone::operator==(const Cone& other) const {
  return dim_ == other.dim_ && subset_of(other) && other.subset_of(*this);
}

std::vector<double> Cone::boundary_angles() const {
  std::vector<double> out;
  if (dim_ != 2 || full_) return out;
  for (const Arc& a : arcs_) {
    out.push_back(a.lo);
    if (a.len > 0.0) out.push_back(wrap_angle(a.hi()));
  }
  return out;
}

bool cone_membership(const Cone& cone, std::span<const double> x) {
  check_dims(cone, x.size());
  if (sup_norm(x) == 0.0 || cone.is_full()) return true;
  if (cone.dim() == 1) return x[0] > 0 ? cone.has_positive() : cone.has_negative();
  if (cone.dim() == 2) {
    const double theta = std::atan2(x[1], x[0]);
    for (const Arc& a : cone.arcs())
      if (a.contains_angle(theta, kAngleTol)) return true;
    return false;
  }
  const auto u = unit_direction(x);
  for (const auto& d : cone.directions()) {
    double diff = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) diff = std::max(diff, std::abs(u[i] - d[i]));
    if (diff <= kAngleTol) return true;
  }
  return false;
}

double point_ray_distance(std::span<const double> x, std::span<const double> d) {
  const std::size_t k = x.size();
  auto f = [&](double t) {
    double m = 0.0;
    for (std::size_t i = 0; i < k; ++i) m = std::max(m, std::abs(x[i] - t * d[i]));
    return m;
  };
  // Convex piecewise-linear in t: the minimum sits at t = 0, a kink of one
  // coordinate, or a crossing of two coordinates.
  double best = f(0.0);
  auto consider = [&](double t) {
    if (t > 0.0 && std::isfinite(t)) best = std::min(best, f(t));
  };
  for (std::size_t i = 0; i < k; ++i) {
    if (d[i] != 0.0) consider(x[i] / d[i]);
    for (std::size_t j = i + 1; j < k; ++j) {
      if (d[i] != d[j]) consider((x[i] - x[j]) / (d[i] - d[j]));
      if (d[i] != -d[j]) consider((x[i] + x[j]) / (d[i] + d[j]));
    }
  }
  return best;
}

double segment_ray_distance(std::span<const double> p, std::span<const double> q,
                            std::span<const double> d) {
  if (p.size() != 2 || q.size() != 2 || d.size() != 2)
    throw DimensionMismatch("segment_ray_distance is defined on R^2");
  // Variables v = (s, t, z); rows g . v <= c.
  std::vector<std::array<double, 3>> g;
  std::vector<double> c;
  for (int i = 0; i < 2; ++i) {
    const double e = q[i] - p[i];
    g.push_back({e, -d[i], -1.0});
    c.push_back(-p[i]);
    g.push_back({-e, d[i], -1.0});
    c.push_back(p[i]);
  }
  g.push_back({-1.0, 0.0, 0.0});
  c.push_back(0.0);
  g.push_back({1.0, 0.0, 0.0});
  c.push_back(1.0);
  g.push_back({0.0, -1.0, 0.0});
  c.push_back(0.0);

  double scale = 1.0;
  for (double v : p) scale = std::max(scale, std::abs(v));
  for (double v : q) scale = std::max(scale, std::abs(v));
  const double feas_tol = 1e-12 * scale;

  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = g.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t e = b + 1; e < m; ++e) {
        const auto& r0 = g[a];
        const auto& r1 = g[b];
        const auto& r2 = g[e];
        const double det = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) -
                           r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
                           r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
        if (std::abs(det) < 1e-14) continue;
        const double c0 = c[a], c1 = c[b], c2 = c[e];
        const double s = (c0 * (r1[1] * r2[2] - r1[2] * r2[1]) -
                          r0[1] * (c1 * r2[2] - r1[2] * c2) + r0[2] * (c1 * r2[1] - r1[1] * c2)) /
                         det;
        const double t = (r0[0] * (c1 * r2[2] - r1[2] * c2) - c0 * (r1[0] * r2[2] - r1[2] * r2[0]) +
                          r0[2] * (r1[0] * c2 - c1 * r2[0])) /
                         det;
        const double z = (r0[0] * (r1[1] * c2 - c1 * r2[1]) - r0[1] * (r1[0] * c2 - c1 * r2[0]) +
                          c0 * (r1[0] * r2[1] - r1[1] * r2[0])) /
                         det;
        bool feasible = true;
        for (std::size_t r = 0; r < m && feasible; ++r) {
          const double lhs = g[r][0] * s + g[r][1] * t + g[r][2] * z;
          if (lhs > c[r] + feas_tol) feasible = false;
        }
        if (feasible) best = std::min(best, z);
      }
    }
  }
  return std::max(best, 0.0);
}

double cone_distance(const Cone& cone, std::span<const double> x) {
  check_dims(cone, x.size());
  const double norm = sup_norm(x);
  if (norm == 0.0 || cone.is_full()) return 0.0;
  if (cone.is_origin()) return norm;
  if (cone.dim() == 1) return cone_membership(cone, x) ? 0.0 : norm;
  if (cone.dim() == 2) {
    // Outside the closure the nearest point lies on a boundary ray.
    if (in_closure_2d(cone, std::atan2(x[1], x[0]))) return 0.0;
    double best = norm;
    for (double theta : cone.boundary_angles()) {
      const std::array<double, 2> dir{std::cos(theta), std::sin(theta)};
      best = std::min(best, point_ray_distance(x, dir));
    }
    return best;
  }
  double best = norm;
  for (const auto& d : cone.directions()) best = std::min(best, point_ray_distance(x, d));
  return best;
}

Cone conic_neighborhood(const Cone& cone, double margin) {
  if (!(margin > 0.0 && margin < kPi)) throw DomainError("conic_neighborhood: margin must lie in (0, pi)");
  if (cone.dim() == 1 || cone.is_full() || cone.is_origin()) return cone;
  if (cone.dim() > 2) throw DomainError("conic_neighborhood: only k <= 2 is supported");
  std::vector<Arc> dilated;
  for (const Arc& a : cone.arcs()) {
    const double len = a.len + 2.0 * margin;
    if (len >= kTwoPi) return Cone::full(2);
    dilated.push_back(Arc{a.lo - margin, len, false, false});
  }
  return Cone::arcs2d(std::move(dilated));
}

double separation_constant(const Cone& k1, const Cone& k2) {
  if (k1.dim() != k2.dim()) throw DimensionMismatch("separation_constant: dimensions differ");
  if (!k1.is_closed() || !k2.is_closed())
    throw PreconditionError("separation_constant: cones must be closed");
  if (k2.is_origin()) return 1.0;
  if (k1.dim() > 2) {
    double theta = std::numeric_limits<double>::infinity();
    for (const auto& d : k2.directions()) {
      std::vector<double> u(d);
      const double n = sup_norm(u);
      for (double& v : u) v /= n;
      theta = std::min(theta, cone_distance(k1, u));
    }
    if (!(theta > 0.0)) throw PreconditionError("separation_constant: cones intersect");
    return theta;
  }
  if (!k1.intersect(k2).is_origin())
    throw PreconditionError("separation_constant: cones intersect outside the origin");
  if (k1.is_origin() || k1.dim() == 1) return 1.0;

  std::vector<std::array<double, 2>> rays;
  for (double theta : k1.boundary_angles()) rays.push_back({std::cos(theta), std::sin(theta)});

  double theta = std::numeric_limits<double>::infinity();
  auto piece = [&](double a, double b) {
    const auto pa = square_point(a);
    const auto pb = square_point(b);
    for (const auto& r : rays) theta = std::min(theta, segment_ray_distance(pa, pb, r));
  };
  // Split each arc at the corners of the unit sphere of the uniform norm;
  // between corners the sphere is a straight segment.
  const std::vector<Arc> arcs = k2.is_full() ? std::vector<Arc>{Arc{0.0, kTwoPi, true, true}}
                                             : k2.arcs();
  for (const Arc& arc : arcs) {
    double start = arc.lo;
    const double end = arc.hi();
    double corner = kPi / 4.0 + (kPi / 2.0) * std::floor((start - kPi / 4.0) / (kPi / 2.0));
    while (corner <= start) corner += kPi / 2.0;
    while (corner < end) {
      piece(start, corner);
      start = corner;
      corner += kPi / 2.0;
    }
    piece(start, end);
  }
  return theta;
}

NeighborhoodSplit split_neighborhoods(const Cone& k1, const Cone& k2, const Cone& w) {
  if (k1.dim() != k2.dim() || k1.dim() != w.dim())
    throw DimensionMismatch("split_neighborhoods: dimensions differ");
  if (!k1.is_closed() || !k2.is_closed())
    throw PreconditionError("split_neighborhoods: K1 and K2 must be closed");
  if (!w.has_open_projection())
    throw PreconditionError("split_neighborhoods: W must have an open projection");
  if (!k1.intersect(k2).subset_of(w))
    throw PreconditionError("split_neighborhoods: W does not contain K1 n K2");
  if (k1.dim() == 1) return {k1, k2, kPi / 4.0};
  for (double margin = kPi / 4.0; margin >= kMarginFloor; margin *= 0.5) {
    Cone v1 = conic_neighborhood(k1, margin);
    Cone v2 = conic_neighborhood(k2, margin);
    if (v1.closure().intersect(v2.closure()).subset_of(w)) return {std::move(v1), std::move(v2), margin};
  }
  throw PreconditionError("split_neighborhoods: no margin above the floor separates the closures inside W");
}

YAML::Node cone_to_yaml(const Cone& c) {
  YAML::Node node;
  node["dim"] = c.dim();
  if (c.is_full()) {
    node["full"] = true;
    return node;
  }
  if (c.dim() == 1) {
    YAML::Node rays(YAML::NodeType::Sequence);
    if (c.has_negative()) rays.push_back("negative");
    if (c.has_positive()) rays.push_back("positive");
    rays.SetStyle(YAML::EmitterStyle::Flow);
    node["rays"] = rays;
  } else if (c.dim() == 2) {
    YAML::Node arcs(YAML::NodeType::Sequence);
    for (const Arc& a : c.arcs()) {
      YAML::Node n;
      n["lo"] = a.lo;
      n["hi"] = a.hi();
      n["lo_closed"] = a.lo_closed;
      n["hi_closed"] = a.hi_closed;
      n.SetStyle(YAML::EmitterStyle::Flow);
      arcs.push_back(n);
    }
    node["arcs"] = arcs;
  } else {
    YAML::Node dirs(YAML::NodeType::Sequence);
    for (const auto& d : c.directions()) {
      YAML::Node n;
      for (double v : d) n.push_back(v);
      n.SetStyle(YAML::EmitterStyle::Flow);
      dirs.push_back(n);
    }
    node["directions"] = dirs;
    node["open"] = c.has_open_projection();
  }
  return node;
}

Cone cone_from_yaml(const YAML::Node& node) {
  try {
    if (!node || !node.IsMap()) throw ParseError("cone: expected a mapping");
    if (!node["dim"]) throw ParseError("cone: missing 'dim'");
    const int dim = node["dim"].as<int>();
    if (dim < 1) throw ParseError("cone: dim must be >= 1");
    if (node["full"] && node["full"].as<bool>()) return Cone::full(dim);
    if (node["origin"] && node["origin"].as<bool>()) return Cone::origin(dim);
    if (dim == 1) {
      bool neg = false, pos = false;
      for (const auto& r : node["rays"]) {
        const auto name = r.as<std::string>();
        if (name == "negative") neg = true;
        else if (name == "positive") pos = true;
        else throw ParseError("cone: unknown ray '" + name + "'");
      }
      return Cone::rays1d(neg, pos);
    }
    if (dim == 2) {
      std::vector<Arc> arcs;
      for (const auto& a : node["arcs"]) {
        if (!a["lo"]) throw ParseError("cone: arc needs 'lo'");
        const double lo = a["lo"].as<double>();
        const double hi = a["hi"] ? a["hi"].as<double>() : lo;
        if (hi < lo) throw ParseError("cone: arc needs hi >= lo");
        const bool closed = a["closed"] ? a["closed"].as<bool>() : true;
        const bool lc = a["lo_closed"] ? a["lo_closed"].as<bool>() : closed;
        const bool hc = a["hi_closed"] ? a["hi_closed"].as<bool>() : closed;
        arcs.push_back(Arc{lo, hi - lo, lc, hc});
      }
      return Cone::arcs2d(std::move(arcs));
    }
    std::vector<std::vector<double>> dirs;
    for (const auto& d : node["directions"]) dirs.push_back(d.as<std::vector<double>>());
    const bool open = node["open"] ? node["open"].as<bool>() : false;
    return Cone::sampled(dim, std::move(dirs), open);
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("cone: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("cone: ") + e.what());
  }
}

std::string serialize_cone(const Cone& c) {
  YAML::Emitter out;
  out << cone_to_yaml(c);
  return out.c_str();
}

Cone parse_cone(const std::string& text) {
  try {
    return cone_from_yaml(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("cone: ") + e.what());
  }
}

}  // namespace ccl
