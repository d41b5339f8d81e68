#include "ampgdf/penalty.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "ampgdf/errors.hpp"

namespace ampgdf {
namespace {

double sgn(double x) noexcept { return static_cast<double>((x > 0.0) - (x < 0.0)); }

void check_variance(double sigma2, const PenaltySpec& spec) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidArgument("prox: sigma2 must be positive and finite, got " +
                          std::to_string(sigma2));
  }
  if (sigma2 >= spec.max_effective_variance()) {
    throw CurvatureError("prox: effective variance " + std::to_string(sigma2) +
                         " exceeds the convexity limit " +
                         std::to_string(spec.max_effective_variance()) + " for " +
                         std::string(to_string(spec.family())));
  }
}

// Branch for a nonnegative rescaled field. Boundary values belong to the
// lower branch, matching the half-open intervals of the case tables.
ProxBranch branch_of(double field, double sigma2, const PenaltySpec& spec) noexcept {
  const double lambda = spec.lambda();
  const double inv_var = 1.0 / sigma2;
  if (field <= lambda) return ProxBranch::kZero;
  switch (spec.family()) {
    case Family::kL1:
      return ProxBranch::kSoft;
    case Family::kScad:
      if (field <= lambda * (1.0 + inv_var)) return ProxBranch::kSoft;
      if (field <= spec.a() * lambda * inv_var) return ProxBranch::kTransient;
      return ProxBranch::kLinear;
    case Family::kMcp:
      if (field <= spec.a() * lambda * inv_var) return ProxBranch::kTransient;
      return ProxBranch::kLinear;
  }
  return ProxBranch::kZero;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kL1:
      return "l1";
    case Family::kScad:
      return "scad";
    case Family::kMcp:
      return "mcp";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "l1" || lower == "lasso") return Family::kL1;
  if (lower == "scad") return Family::kScad;
  if (lower == "mcp") return Family::kMcp;
  throw InvalidArgument("unknown penalty family '" + std::string(name) + "'");
}

PenaltySpec PenaltySpec::l1(double lambda) { return make(Family::kL1, lambda, 0.0); }
PenaltySpec PenaltySpec::scad(double lambda, double a) { return make(Family::kScad, lambda, a); }
PenaltySpec PenaltySpec::mcp(double lambda, double a) { return make(Family::kMcp, lambda, a); }

PenaltySpec PenaltySpec::make(Family family, double lambda, double a) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("penalty: lambda must be positive, got " + std::to_string(lambda));
  }
  if (family == Family::kScad && !(a > 2.0)) {
    throw InvalidArgument("penalty: SCAD requires a > 2, got " + std::to_string(a));
  }
  if (family == Family::kMcp && !(a > 1.0)) {
    throw InvalidArgument("penalty: MCP requires a > 1, got " + std::to_string(a));
  }
  if (family != Family::kL1 && !std::isfinite(a)) {
    throw InvalidArgument("penalty: a must be finite");
  }
  return PenaltySpec(family, lambda, family == Family::kL1 ? 0.0 : a);
}

double PenaltySpec::transient_curvature() const noexcept {
  switch (family_) {
    case Family::kScad:
      return 1.0 / (a_ - 1.0);
    case Family::kMcp:
      return 1.0 / a_;
    case Family::kL1:
      break;
  }
  return 0.0;
}

double PenaltySpec::max_effective_variance() const noexcept {
  switch (family_) {
    case Family::kScad:
      return a_ - 1.0;
    case Family::kMcp:
      return a_;
    case Family::kL1:
      break;
  }
  return std::numeric_limits<double>::infinity();
}

double penalty_value(double x, const PenaltySpec& spec) noexcept {
  const double t = std::abs(x);
  const double lambda = spec.lambda();
  const double a = spec.a();
  switch (spec.family()) {
    case Family::kL1:
      return lambda * t;
    case Family::kScad:
      if (t <= lambda) return lambda * t;
      if (t <= a * lambda) return -(t * t - 2.0 * a * lambda * t + lambda * lambda) / (2.0 * (a - 1.0));
      return (a + 1.0) * lambda * lambda / 2.0;
    case Family::kMcp:
      if (t <= a * lambda) return lambda * t - t * t / (2.0 * a);
      return a * lambda * lambda / 2.0;
  }
  return 0.0;
}

double penalty_subgradient(double x, const PenaltySpec& spec) {
  if (x == 0.0) throw ZeroArgument("penalty_subgradient: undefined at x = 0");
  const double t = std::abs(x);
  const double s = sgn(x);
  const double lambda = spec.lambda();
  const double a = spec.a();
  switch (spec.family()) {
    case Family::kL1:
      return lambda * s;
    case Family::kScad:
      if (t <= lambda) return lambda * s;
      if (t <= a * lambda) return -(x - a * lambda * s) / (a - 1.0);
      return 0.0;
    case Family::kMcp:
      if (t <= a * lambda) return lambda * s - x / a;
      return 0.0;
  }
  return 0.0;
}

ProxBranch prox_branch(double w, double sigma2, const PenaltySpec& spec) {
  check_variance(sigma2, spec);
  return branch_of(std::abs(w) / sigma2, sigma2, spec);
}

ProxResult prox(double w, double sigma2, const PenaltySpec& spec) {
  check_variance(sigma2, spec);
  const double field = std::abs(w) / sigma2;
  const double s = sgn(w);
  const double lambda = spec.lambda();
  const double inv_var = 1.0 / sigma2;

  double s_abs = 0.0;
  double v = 0.0;
  switch (branch_of(field, sigma2, spec)) {
    case ProxBranch::kZero:
      return {};
    case ProxBranch::kSoft:
      s_abs = field - lambda;
      v = sigma2;
      break;
    case ProxBranch::kTransient:
      if (spec.family() == Family::kScad) {
        const double a = spec.a();
        s_abs = field - a * lambda / (a - 1.0);
      } else {
        s_abs = field - lambda;
      }
      v = 1.0 / (inv_var - spec.transient_curvature());
      break;
    case ProxBranch::kLinear:
      s_abs = field;
      v = sigma2;
      break;
  }
  return {s * v * s_abs, s * s_abs, v};
}

std::vector<double> field_breakpoints(const PenaltySpec& spec, double sigma2) {
  check_variance(sigma2, spec);
  const double lambda = spec.lambda();
  const double inv_var = 1.0 / sigma2;
  switch (spec.family()) {
    case Family::kL1:
      return {lambda};
    case Family::kScad:
      return {lambda, lambda * (1.0 + inv_var), spec.a() * lambda * inv_var};
    case Family::kMcp:
      return {lambda, spec.a() * lambda * inv_var};
  }
  return {};
}

}  // namespace ampgdf
