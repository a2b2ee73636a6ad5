#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace YAML {
class Node;
}

namespace ccl {

/// Index function used as either the decay profile (alpha) or the growth
/// profile (beta) of a weight. Values are continuous, nondecreasing and
/// unbounded on [0, inf).
class Profile {
 public:
  enum class Kind { power, table };

  /// value(s) = s^exponent.
  static Profile power(double exponent, double kappa, double s0 = 0.0, bool convex = true);

  /// Piecewise-linear interpolation through (s, value) nodes. The first node
  /// must sit at s = 0; beyond the last node the last segment is extended.
  static Profile table(std::vector<std::pair<double, double>> nodes, double kappa, double s0,
                       bool convex);

  double operator()(double s) const;

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  double kappa() const { return kappa_; }
  double s0() const { return s0_; }
  bool convex() const { return convex_; }
  const std::vector<std::pair<double, double>>& nodes() const { return nodes_; }

  /// Copy shifted so that value(0) = 0. Power profiles are returned unchanged.
  Profile normalized() const;

  /// Power with exponent <= 1, or a table whose slopes never increase.
  bool is_concave() const;

 private:
  Profile() = default;

  Kind kind_ = Kind::power;
  double exponent_ = 1.0;
  double kappa_ = 1.0;
  double s0_ = 0.0;
  bool convex_ = false;
  std::vector<std::pair<double, double>> nodes_;
};

/// Evaluates p at s; throws DomainError for negative s.
double eval_profile(const Profile& p, double s);

struct ProfileViolation {
  std::string profile;    // "alpha" or "beta"
  std::string condition;  // monotone | unbounded | convexity | kappa-growth
  double location = 0.0;  // witnessing sample (first point of the triple for convexity)
  double magnitude = 0.0;
};

struct ProfileReport {
  std::vector<ProfileViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the admissibility conditions on sampled points: both profiles
/// monotone and unbounded, beta midpoint convex (alpha too when flagged
/// convex), and alpha(s)/s^kappa nondecreasing for s >= s0. Relative
/// tolerance 1e-10.
ProfileReport verify_profile(const Profile& alpha, const Profile& beta, std::span<const double> grid);

inline constexpr double kProfileRelTol = 1e-10;

YAML::Node profile_to_yaml(const Profile& p);
Profile profile_from_yaml(const YAML::Node& node);
std::string serialize_profile(const Profile& p);
Profile parse_profile(const std::string& text);

}  // namespace ccl
