#pragma once

#include <string_view>
#include <vector>

namespace ampgdf {

enum class Family { kL1, kScad, kMcp };

std::string_view to_string(Family family);

/// Parses "l1", "scad" or "mcp" (case-insensitive). Throws InvalidArgument.
Family parse_family(std::string_view name);

/// Penalty family plus its parameters {lambda, a}. Always valid once built:
/// lambda > 0, a > 2 for SCAD and a > 1 for MCP. `a` is ignored for L1.
class PenaltySpec {
 public:
  static PenaltySpec l1(double lambda);
  static PenaltySpec scad(double lambda, double a);
  static PenaltySpec mcp(double lambda, double a);
  static PenaltySpec make(Family family, double lambda, double a);

  Family family() const noexcept { return family_; }
  double lambda() const noexcept { return lambda_; }
  double a() const noexcept { return a_; }

  /// Negative curvature J'' of the transient branch: 1/(a-1) for SCAD,
  /// 1/a for MCP, 0 for L1.
  double transient_curvature() const noexcept;

  /// Supremum of the effective variance for which the scalar problem stays
  /// strictly convex: a-1 for SCAD, a for MCP, +inf for L1.
  double max_effective_variance() const noexcept;

 private:
  PenaltySpec(Family family, double lambda, double a)
      : family_(family), lambda_(lambda), a_(a) {}

  Family family_;
  double lambda_;
  double a_;
};

/// Solution of argmin_t (t - w)^2 / (2 sigma2) + J(t), written as
/// theta_hat = v_value * s_value with s_value expressed in the rescaled
/// field w / sigma2.
struct ProxResult {
  double theta_hat = 0.0;
  double s_value = 0.0;
  double v_value = 0.0;
};

/// Branch of the scalar estimator selected by the rescaled field.
enum class ProxBranch { kZero, kSoft, kTransient, kLinear };

double penalty_value(double x, const PenaltySpec& spec) noexcept;

/// dJ/dx at x != 0. Throws ZeroArgument at the origin.
double penalty_subgradient(double x, const PenaltySpec& spec);

/// Closed-form scalar prox. Throws InvalidArgument for sigma2 <= 0 and
/// CurvatureError when sigma2 >= spec.max_effective_variance().
ProxResult prox(double w, double sigma2, const PenaltySpec& spec);

/// Branch that prox(w, sigma2, spec) lands in. Same preconditions as prox.
ProxBranch prox_branch(double w, double sigma2, const PenaltySpec& spec);

/// Ascending positive values of |w / sigma2| at which the scalar estimator
/// switches branch. Useful as quadrature breakpoints.
std::vector<double> field_breakpoints(const PenaltySpec& spec, double sigma2);

}  // namespace ampgdf
