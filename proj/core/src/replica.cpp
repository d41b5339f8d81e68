#include "ampgdf/replica.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ampgdf/errors.hpp"

namespace ampgdf {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
// exp(-z^2/2) z^2 is below 1e-300 past this.
constexpr double kTailCut = 38.0;

struct Conjugates {
  double Q_hat;
  double chi_hat;
};

struct ChiTerms {
  double rho_hat;
  double gamma;
  double denominator;  // Q_hat(a-1) - 1, Q_hat a - 1, or 1 for L1
  double chi;
};

Conjugates conjugates(double Q, double chi, const ReplicaInputs& in) {
  const double q_hat = 1.0 / (1.0 + chi);
  return {q_hat, (Q + in.sigma_y2 + in.m_y * in.m_y) * q_hat * q_hat};
}

double transient_denominator(const PenaltySpec& spec, double q_hat) {
  switch (spec.family()) {
    case Family::kScad:
      return q_hat * (spec.a() - 1.0) - 1.0;
    case Family::kMcp:
      return q_hat * spec.a() - 1.0;
    case Family::kL1:
      break;
  }
  return 1.0;
}

ChiTerms chi_terms(const Conjugates& c, const ReplicaInputs& in, double guard) {
  const PenaltySpec& spec = in.spec;
  const double lambda = spec.lambda();
  const double scale = std::sqrt(2.0 * c.chi_hat);
  ChiTerms t{};
  t.rho_hat = std::erfc(lambda / scale);
  t.denominator = transient_denominator(spec, c.Q_hat);
  if (spec.family() != Family::kL1 && t.denominator < guard) {
    throw UnstableRegion("replica: transient denominator " + std::to_string(t.denominator) +
                         " collapsed (lambda = " + std::to_string(lambda) + ")");
  }
  const double a = spec.a();
  switch (spec.family()) {
    case Family::kL1:
      t.gamma = 0.0;
      break;
    case Family::kScad:
      t.gamma = (std::erfc(lambda * (c.Q_hat + 1.0) / scale) - std::erfc(a * lambda * c.Q_hat / scale)) /
                in.alpha;
      break;
    case Family::kMcp:
      t.gamma = (std::erfc(lambda / scale) - std::erfc(a * lambda * c.Q_hat / scale)) / in.alpha;
      break;
  }
  t.chi = t.rho_hat / (in.alpha * c.Q_hat) + t.gamma / (c.Q_hat * t.denominator);
  return t;
}

}  // namespace

double effective_second_moment(const PenaltySpec& spec, double Q_hat, double chi_hat) {
  if (!(Q_hat > 0.0) || !(chi_hat >= 0.0)) {
    throw InvalidArgument("effective_second_moment: need Q_hat > 0 and chi_hat >= 0");
  }
  if (chi_hat == 0.0) return 0.0;
  const double sigma2 = 1.0 / Q_hat;
  const double root = std::sqrt(chi_hat);
  auto integrand = [&](double z) {
    const double x = prox(root * z * sigma2, sigma2, spec).theta_hat;
    return x * x * std::exp(-0.5 * z * z) * kInvSqrt2Pi;
  };

  std::vector<double> knots;
  for (double b : field_breakpoints(spec, sigma2)) knots.push_back(b / root);
  knots.push_back(std::max(knots.back(), 0.0) + kTailCut);

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0;
  // x* vanishes below the first knot.
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    total += Quadrature::integrate(integrand, knots[i], knots[i + 1], 20, 1e-14);
  }
  return 2.0 * total;
}

ReplicaFixedPoint replica_solve(const ReplicaInputs& in, const ReplicaOptions& opts) {
  if (!(in.alpha > 0.0)) throw InvalidArgument("replica: alpha must be positive");
  if (!(in.sigma_y2 > 0.0)) throw InvalidArgument("replica: sigma_y2 must be positive");
  if (!(opts.tol > 0.0)) throw InvalidArgument("replica: tol must be positive");
  if (!(opts.damping >= 0.0 && opts.damping < 1.0)) {
    throw InvalidArgument("replica: damping must lie in [0, 1)");
  }

  double Q = 0.0;
  double chi = 0.0;
  double residual = INFINITY;
  double best_recent = INFINITY;
  double best_earlier = INFINITY;
  const int window = std::max(10, opts.max_iters / 10);

  for (int it = 1; it <= opts.max_iters; ++it) {
    const Conjugates c = conjugates(Q, chi, in);
    const ChiTerms t = chi_terms(c, in, opts.denominator_guard);
    const double Q_new = effective_second_moment(in.spec, c.Q_hat, c.chi_hat) / in.alpha;
    residual = std::max(std::abs(t.chi - chi), std::abs(Q_new - Q));
    if (!std::isfinite(residual)) throw UnstableRegion("replica: iterates became non-finite");

    if (residual <= opts.tol) {
      ReplicaFixedPoint fp;
      fp.Q = Q;
      fp.chi = chi;
      fp.Q_hat = c.Q_hat;
      fp.chi_hat = c.chi_hat;
      fp.rho_hat = t.rho_hat;
      fp.gamma = t.gamma;
      fp.df = chi / (1.0 + chi);
      fp.alpha = in.alpha;
      fp.residual = residual;
      fp.iterations = it;
      fp.converged = true;
      return fp;
    }

    if (it > opts.max_iters - window) {
      best_recent = std::min(best_recent, residual);
    } else if (it > opts.max_iters - 2 * window) {
      best_earlier = std::min(best_earlier, residual);
    }
    chi = opts.damping * chi + (1.0 - opts.damping) * t.chi;
    Q = opts.damping * Q + (1.0 - opts.damping) * Q_new;
  }

  if (best_recent >= best_earlier && residual > 1e3 * opts.tol) {
    throw UnstableRegion("replica: iterates oscillate without contracting (residual " +
                         std::to_string(residual) + ")");
  }
  const Conjugates c = conjugates(Q, chi, in);
  const ChiTerms t = chi_terms(c, in, opts.denominator_guard);
  ReplicaFixedPoint fp;
  fp.Q = Q;
  fp.chi = chi;
  fp.Q_hat = c.Q_hat;
  fp.chi_hat = c.chi_hat;
  fp.rho_hat = t.rho_hat;
  fp.gamma = t.gamma;
  fp.df = chi / (1.0 + chi);
  fp.alpha = in.alpha;
  fp.residual = residual;
  fp.iterations = opts.max_iters;
  fp.converged = false;
  return fp;
}

double replica_gdf(const ReplicaFixedPoint& fp) { return fp.chi / (1.0 + fp.chi); }

double replica_gdf_decomposed(const ReplicaFixedPoint& fp, const PenaltySpec& spec) {
  const double base = fp.rho_hat / fp.alpha;
  if (spec.family() == Family::kL1) return base;
  return base + fp.gamma / transient_denominator(spec, fp.Q_hat);
}

double aic_gap(const ReplicaFixedPoint& fp, const PenaltySpec& spec, double sigma_y2) {
  if (spec.family() == Family::kL1 || fp.gamma == 0.0) return 0.0;
  return fp.gamma * sigma_y2 / transient_denominator(spec, fp.Q_hat);
}

}  // namespace ampgdf
