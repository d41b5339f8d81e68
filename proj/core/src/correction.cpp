#include "ampgdf/correction.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ampgdf/errors.hpp"

namespace ampgdf {
namespace {

struct Classification {
  VectorXd psi;
  VectorXd phi;
  VectorXd signs;

  bool operator==(const Classification& o) const {
    return psi == o.psi && phi == o.phi && signs == o.signs;
  }
};

// Branch indicators in coefficient space; a zero entry keeps its old sign.
Classification classify(const VectorXd& x, const VectorXd& old_signs, const PenaltySpec& spec) {
  const Index k = x.size();
  Classification c{VectorXd::Zero(k), VectorXd::Zero(k), old_signs};
  const double lambda = spec.lambda();
  const double a = spec.a();
  for (Index i = 0; i < k; ++i) {
    const double t = std::abs(x[i]);
    if (x[i] > 0.0) c.signs[i] = 1.0;
    if (x[i] < 0.0) c.signs[i] = -1.0;
    switch (spec.family()) {
      case Family::kL1:
        c.psi[i] = 1.0;
        break;
      case Family::kScad:
        if (t <= lambda) {
          c.psi[i] = 1.0;
        } else if (t <= a * lambda) {
          c.phi[i] = 1.0;
        }
        break;
      case Family::kMcp:
        if (t <= a * lambda) c.phi[i] = 1.0;
        break;
    }
  }
  return c;
}

// Constant part of the linearised J' on each branch.
VectorXd subgradient_offset(const Classification& c, const PenaltySpec& spec) {
  const double lambda = spec.lambda();
  switch (spec.family()) {
    case Family::kL1:
      return lambda * c.signs;
    case Family::kScad: {
      const double a = spec.a();
      return (lambda * c.psi.array() * c.signs.array() +
              a * lambda / (a - 1.0) * c.phi.array() * c.signs.array())
          .matrix();
    }
    case Family::kMcp:
      return (lambda * c.phi.array() * c.signs.array()).matrix();
  }
  return VectorXd::Zero(c.signs.size());
}

}  // namespace

std::vector<Index> extract_support(const VectorXd& a, double support_tol) {
  if (!(support_tol > 0.0)) throw InvalidArgument("extract_support: support_tol must be positive");
  std::vector<Index> support;
  for (Index i = 0; i < a.size(); ++i) {
    if (std::abs(a[i]) > support_tol) support.push_back(i);
  }
  return support;
}

SupportSystem solve_support_system(const RegressionInstance& inst, const std::vector<Index>& support,
                                   const VectorXd& x_init, const PenaltySpec& spec,
                                   const SupportOptions& opts) {
  if (support.empty()) throw EmptySupport("solve_support_system: empty support");
  if (x_init.size() != inst.cols()) {
    throw DimensionMismatch("solve_support_system: x_init must have length N");
  }
  const Index k = static_cast<Index>(support.size());
  SupportSystem sys;
  sys.support = support;
  sys.A_K.resize(inst.rows(), k);
  VectorXd x0(k);
  for (Index j = 0; j < k; ++j) {
    sys.A_K.col(j) = inst.A.col(support[static_cast<std::size_t>(j)]);
    x0[j] = x_init[support[static_cast<std::size_t>(j)]];
  }
  if (k > inst.rows()) {
    throw SingularSystem("solve_support_system: support size " + std::to_string(k) +
                         " exceeds the number of rows " + std::to_string(inst.rows()));
  }

  const MatrixXd gram = sys.A_K.transpose() * sys.A_K;
  const VectorXd aty = sys.A_K.transpose() * inst.y;
  const double curvature = spec.transient_curvature();

  Classification cls = classify(x0, VectorXd::Zero(k), spec);
  for (int pass = 1; pass <= opts.max_reclassify; ++pass) {
    MatrixXd H = gram;
    H.diagonal() -= curvature * cls.phi;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(H);
    if (eig.info() != Eigen::Success) throw SingularSystem("solve_support_system: eigensolver failed");
    const VectorXd& ev = eig.eigenvalues();
    const double max_abs = ev.cwiseAbs().maxCoeff();
    const double min_abs = ev.cwiseAbs().minCoeff();
    const double cond = min_abs > 0.0 ? max_abs / min_abs : INFINITY;
    if (!(cond <= opts.max_condition)) {
      throw SingularSystem("solve_support_system: condition number " + std::to_string(cond) +
                           " exceeds limit");
    }
    const MatrixXd& Q = eig.eigenvectors();
    sys.U = Q * ev.cwiseInverse().asDiagonal() * Q.transpose();
    sys.x_K = sys.U * (aty - subgradient_offset(cls, spec));
    sys.condition = cond;
    sys.passes = pass;

    Classification next = classify(sys.x_K, cls.signs, spec);
    if (next == cls) {
      sys.psi = cls.psi;
      sys.phi = cls.phi;
      sys.signs = cls.signs;
      return sys;
    }
    cls = std::move(next);
  }
  throw ReclassificationLoop("solve_support_system: branch assignment did not stabilise after " +
                             std::to_string(opts.max_reclassify) + " passes");
}

VectorXd corrected_variances(const SupportSystem& sys, const PenaltySpec& /*spec*/) {
  const VectorXd v = sys.U.diagonal();
  for (Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) {
      throw NegativeCorrectedVariance("corrected_variances: U(" + std::to_string(i) + "," +
                                      std::to_string(i) + ") = " + std::to_string(v[i]));
    }
  }
  return v;
}

double corrected_gdf(const MatrixXd& A, const std::vector<Index>& support, const VectorXd& v_tilde) {
  if (static_cast<Index>(support.size()) != v_tilde.size()) {
    throw DimensionMismatch("corrected_gdf: support and v_tilde lengths differ");
  }
  if (A.rows() == 0) throw DimensionMismatch("corrected_gdf: empty matrix");
  if (support.empty()) return 0.0;
  if ((v_tilde.array() <= 0.0).any()) {
    throw NegativeCorrectedVariance("corrected_gdf: nonpositive corrected variance");
  }
  VectorXd V = VectorXd::Zero(A.rows());
  for (std::size_t j = 0; j < support.size(); ++j) {
    V += A.col(support[j]).cwiseAbs2() * v_tilde[static_cast<Index>(j)];
  }
  return (V.array() / (1.0 + V.array())).mean();
}

}  // namespace ampgdf
