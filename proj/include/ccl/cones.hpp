#pragma once

#include <span>
#include <string>
#include <vector>

namespace YAML {
class Node;
}

namespace ccl {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

/// Closed or open angular interval [lo, lo + len] on the unit circle.
/// lo is kept in [0, 2pi); len in [0, 2pi].
struct Arc {
  double lo = 0.0;
  double len = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  double hi() const { return lo + len; }
  bool contains_angle(double theta, double tol = 0.0) const;
};

/// A scale-invariant subset of R^k that always contains the origin.
///
/// k = 1: any subset of {negative ray, positive ray} plus the origin.
/// k = 2: finite union of disjoint arcs of directions (exact arithmetic).
/// k > 2: finite set of sampled unit directions (distance is an upper estimate).
class Cone {
 public:
  /// The degenerate cone {0}.
  static Cone origin(int dim);
  static Cone full(int dim);
  static Cone rays1d(bool negative, bool positive);
  /// Union of arcs; arcs are normalized (merged, wrapped into [0, 2pi)).
  static Cone arcs2d(std::vector<Arc> arcs);
  /// Closed ray in direction theta (k = 2).
  static Cone ray2d(double theta);
  /// Sampled directions for k > 2; directions need not be normalized.
  static Cone sampled(int dim, std::vector<std::vector<double>> directions, bool open);

  int dim() const { return dim_; }
  bool is_full() const { return full_; }
  bool is_origin() const;
  bool has_negative() const { return neg_; }
  bool has_positive() const { return pos_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<std::vector<double>>& directions() const { return dirs_; }

  bool is_closed() const;
  /// Open projection on the sphere (the origin cone counts as open).
  bool has_open_projection() const;

  Cone closure() const;
  /// (R^k \ this) u {0}.
  Cone complement() const;
  Cone intersect(const Cone& other) const;
  Cone unite(const Cone& other) const;
  /// Set inclusion, exact for k <= 2.
  bool subset_of(const Cone& other) const;

  bool operator==(const Cone& other) const;

  /// Direction angles of the boundary rays of the closure (k = 2).
  std::vector<double> boundary_angles() const;

 private:
  int dim_ = 1;
  bool full_ = false;
  bool neg_ = false;
  bool pos_ = false;
  std::vector<Arc> arcs_;
  std::vector<std::vector<double>> dirs_;
  bool open_ = false;
};

/// Uniform norm of a real vector.
double sup_norm(std::span<const double> x);

bool cone_membership(const Cone& cone, std::span<const double> x);

/// delta_U(x) = inf over x' in U of |x - x'| in the uniform norm. Exact for
/// k <= 2; for k > 2 the minimum over the sampled rays (an upper estimate).
double cone_distance(const Cone& cone, std::span<const double> x);

/// Open-projection cone containing `cone`, each arc dilated by `margin`.
Cone conic_neighborhood(const Cone& cone, double margin);

/// theta = inf { delta_K1(x) : x in K2, |x| = 1 }. Requires closed cones with
/// K1 n K2 = {0}. Returns 1 when K2 = {0}.
double separation_constant(const Cone& k1, const Cone& k2);

struct NeighborhoodSplit {
  Cone v1;
  Cone v2;
  double margin = 0.0;
};

inline constexpr double kMarginFloor = 1e-6;

/// Conic neighborhoods V1 of K1 and V2 of K2 with cl(V1) n cl(V2) inside W.
/// The dilation margin starts at pi/4 and is halved until the inclusion
/// verifies; below kMarginFloor a PreconditionError is raised.
NeighborhoodSplit split_neighborhoods(const Cone& k1, const Cone& k2, const Cone& w);

/// min over t >= 0 and s in [0, 1] of |p + s (q - p) - t d| (uniform norm, R^2).
/// Exact: vertex enumeration of the equivalent three-variable linear program.
double segment_ray_distance(std::span<const double> p, std::span<const double> q,
                            std::span<const double> d);

/// Uniform-norm distance from x to the closed ray {t d : t >= 0}, any dimension.
double point_ray_distance(std::span<const double> x, std::span<const double> d);

YAML::Node cone_to_yaml(const Cone& c);
Cone cone_from_yaml(const YAML::Node& node);
std::string serialize_cone(const Cone& c);
Cone parse_cone(const std::string& text);

}  // namespace ccl
