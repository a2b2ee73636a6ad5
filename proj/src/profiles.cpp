#include "ccl/profiles.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccl/errors.hpp"

namespace ccl {

Profile Profile::power(double exponent, double kappa, double s0, bool convex) {
  if (!(exponent > 0.0)) throw DomainError("power profile: exponent must be positive");
  if (!(kappa > 0.0)) throw DomainError("profile: kappa must be positive");
  if (!(s0 >= 0.0)) throw DomainError("profile: s0 must be nonnegative");
  Profile p;
  p.kind_ = Kind::power;
  p.exponent_ = exponent;
  p.kappa_ = kappa;
  p.s0_ = s0;
  p.convex_ = convex;
  return p;
}

Profile Profile::table(std::vector<std::pair<double, double>> nodes, double kappa, double s0,
                       bool convex) {
  if (nodes.size() < 2) throw DomainError("table profile: need at least two nodes");
  if (nodes.front().first != 0.0) throw DomainError("table profile: first node must be at s = 0");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i].first > nodes[i - 1].first))
      throw DomainError("table profile: node abscissae must be strictly increasing");
  }
  if (!(kappa > 0.0)) throw DomainError("profile: kappa must be positive");
  if (!(s0 >= 0.0)) throw DomainError("profile: s0 must be nonnegative");
  Profile p;
  p.kind_ = Kind::table;
  p.kappa_ = kappa;
  p.s0_ = s0;
  p.convex_ = convex;
  p.nodes_ = std::move(nodes);
  return p;
}

double Profile::operator()(double s) const {
  if (kind_ == Kind::power) {
    if (s == 0.0) return 0.0;
    if (exponent_ == 2.0) return s * s;
    if (exponent_ == 1.0) return s;
    return std::pow(s, exponent_);
  }
  // Segment search; extrapolate the last segment past the end.
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s,
                             [](double v, const auto& node) { return v < node.first; });
  std::size_t hi = static_cast<std::size_t>(it - nodes_.begin());
  hi = std::clamp<std::size_t>(hi, 1, nodes_.size() - 1);
  const auto& [s1, v1] = nodes_[hi - 1];
  const auto& [s2, v2] = nodes_[hi];
  return v1 + (v2 - v1) * (s - s1) / (s2 - s1);
}

Profile Profile::normalized() const {
  if (kind_ == Kind::power) return *this;
  Profile p = *this;
  const double shift = nodes_.front().second;
  for (auto& node : p.nodes_) node.second -= shift;
  return p;
}

bool Profile::is_concave() const {
  if (kind_ == Kind::power) return exponent_ <= 1.0;
  double prev = INFINITY;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const double slope =
        (nodes_[i].second - nodes_[i - 1].second) / (nodes_[i].first - nodes_[i - 1].first);
    if (slope > prev) return false;
    prev = slope;
  }
  return true;
}

double eval_profile(const Profile& p, double s) {
  if (!(s >= 0.0)) throw DomainError("eval_profile: argument must be nonnegative");
  return p(s);
}

namespace {

double tol_for(double a, double b) {
  return kProfileRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_monotone(const Profile& p, const std::string& name, std::span<const double> grid,
                    std::vector<ProfileViolation>& out) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = p(grid[i - 1]);
    const double b = p(grid[i]);
    if (b < a - tol_for(a, b)) {
      out.push_back({name, "monotone", grid[i], a - b});
      return;
    }
  }
}

void check_unbounded(const Profile& p, const std::string& name,
                     std::vector<ProfileViolation>& out) {
  const double far = p(1e6);
  const double near = p(1.0);
  if (!(far > near + 10.0)) out.push_back({name, "unbounded", 1e6, near + 10.0 - far});
}

// Midpoint convexity over sample pairs. All pairs for small grids; a strided
// subset otherwise so the pair count stays near 2e5.
void check_convex(const Profile& p, const std::string& name, std::span<const double> grid,
                  std::vector<ProfileViolation>& out) {
  const std::size_t n = grid.size();
  const std::size_t stride = std::max<std::size_t>(1, (n * n) / 200000);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; j += (j - i < 4 ? 1 : stride)) {
      const double s = grid[i];
      const double t = grid[j];
      const double mid = p(0.5 * (s + t));
      const double chord = 0.5 * (p(s) + p(t));
      if (mid > chord + tol_for(mid, chord)) {
        out.push_back({name, "convexity", s, mid - chord});
        return;
      }
    }
  }
}

void check_kappa(const Profile& alpha, std::span<const double> grid,
                 std::vector<ProfileViolation>& out) {
  double prev = -INFINITY;
  for (double s : grid) {
    if (s < alpha.s0() || s <= 0.0) continue;
    const double ratio = alpha(s) / std::pow(s, alpha.kappa());
    if (ratio < prev - tol_for(ratio, prev)) {
      out.push_back({"alpha", "kappa-growth", s, prev - ratio});
      return;
    }
    prev = ratio;
  }
}

}  // namespace

ProfileReport verify_profile(const Profile& alpha, const Profile& beta,
                             std::span<const double> grid) {
  if (grid.empty()) throw DomainError("verify_profile: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw DomainError("verify_profile: grid must be sorted");
  if (grid.front() < 0.0) throw DomainError("verify_profile: grid must be nonnegative");

  ProfileReport report;
  check_monotone(alpha, "alpha", grid, report.violations);
  check_monotone(beta, "beta", grid, report.violations);
  check_unbounded(alpha, "alpha", report.violations);
  check_unbounded(beta, "beta", report.violations);
  check_convex(beta, "beta", grid, report.violations);
  if (alpha.convex()) check_convex(alpha, "alpha", grid, report.violations);
  check_kappa(alpha, grid, report.violations);
  return report;
}

YAML::Node profile_to_yaml(const Profile& p) {
  YAML::Node node;
  node["kind"] = p.kind() == Profile::Kind::power ? "power" : "table";
  if (p.kind() == Profile::Kind::power) node["exponent"] = p.exponent();
  node["kappa"] = p.kappa();
  node["s0"] = p.s0();
  node["convex"] = p.convex();
  if (p.kind() == Profile::Kind::table) {
    for (const auto& [s, v] : p.nodes()) {
      YAML::Node pair;
      pair.push_back(s);
      pair.push_back(v);
      pair.SetStyle(YAML::EmitterStyle::Flow);
      node["table"].push_back(pair);
    }
  }
  return node;
}

Profile profile_from_yaml(const YAML::Node& node) {
  try {
    if (!node || !node.IsMap()) throw ParseError("profile: expected a mapping");
    const std::string kind = node["kind"] ? node["kind"].as<std::string>() : "power";
    const double kappa = node["kappa"] ? node["kappa"].as<double>() : 1.0;
    const double s0 = node["s0"] ? node["s0"].as<double>() : 0.0;
    const bool convex = node["convex"] ? node["convex"].as<bool>() : false;
    if (kind == "power") {
      if (!node["exponent"]) throw ParseError("profile: power kind needs 'exponent'");
      return Profile::power(node["exponent"].as<double>(), kappa, s0, convex);
    }
    if (kind == "table") {
      std::vector<std::pair<double, double>> nodes;
      for (const auto& item : node["table"]) {
        if (!item.IsSequence() || item.size() != 2)
          throw ParseError("profile: table entries must be [s, value] pairs");
        nodes.emplace_back(item[0].as<double>(), item[1].as<double>());
      }
      return Profile::table(std::move(nodes), kappa, s0, convex);
    }
    throw ParseError("profile: unknown kind '" + kind + "'");
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("profile: ") + e.what());
  }
}

std::string serialize_profile(const Profile& p) {
  YAML::Emitter out;
  out << profile_to_yaml(p);
  return out.c_str();
}

Profile parse_profile(const std::string& text) {
  try {
    return profile_from_yaml(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("profile: ") + e.what());
  }
}

}  // namespace ccl
