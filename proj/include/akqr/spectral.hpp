#pragma once

#include "akqr/common.hpp"
#include "akqr/kernels.hpp"
#include "akqr/solver.hpp"

#include <optional>
#include <vector>

namespace akqr {

/// Finitely supported probability measure on one block's input space.
struct DiscreteMeasure {
  PointMatrix points;
  Vector weights;

  static DiscreteMeasure uniform(PointMatrix points);

  Eigen::Index size() const { return points.rows(); }

  /// Throws InputError unless weights are positive, sum to 1 (1e-12) and
  /// points are finite.
  void validate() const;
};

/// W^{1/2} K W^{1/2}, whose spectrum is that of the integral operator
/// f -> sum_p k(., x_p) f(x_p) w_p restricted to the support.
Matrix operator_matrix(const KernelSpec& spec, const DiscreteMeasure& mu);

/// Eigenpairs of an integral operator on a discrete measure.
///
/// Column l of eigenfunctions holds psi_l at the support points; the columns
/// are orthonormal in L_2(mu) and form a complete basis of functions on the
/// support.
struct OperatorDecomposition {
  Vector eigenvalues;
  Matrix eigenfunctions;
  Vector weights;
  /// Eigenvalues at or below this value are treated as 0.
  double cutoff = 0;

  Eigen::Index size() const { return eigenvalues.size(); }

  /// c_l = <g, psi_l>_{L_2(mu)}.
  Vector coefficients(const Eigen::Ref<const Vector>& values) const;
  Vector values(const Eigen::Ref<const Vector>& coefficients) const;
  double l2_norm_sq(const Eigen::Ref<const Vector>& values) const;
};

/// Eigen-decomposition of W^{1/2} K W^{1/2}. Weights default to uniform.
OperatorDecomposition decompose(const Matrix& op, const std::optional<Vector>& weights = std::nullopt);
OperatorDecomposition decompose(const KernelSpec& spec, const DiscreteMeasure& mu);

/// A function on the support of a measure. When it lies in the RKHS the
/// expansion f = sum_p a_p k(x_p, .) and its squared norm are filled in.
struct BlockFunction {
  Vector values;
  std::optional<Vector> expansion;
  std::optional<double> rkhs_norm_sq;
};

/// Wraps values and fills the RKHS fields when the null-space component is
/// negligible.
BlockFunction make_block_function(const OperatorDecomposition& decomp, const Eigen::Ref<const Vector>& values);

/// L^r g: coefficients scaled by mu_l^r, with 0^r = 0.
BlockFunction power_apply(const OperatorDecomposition& decomp, double r, const BlockFunction& g);

/// (L + lambda I)^{-1} L f*.
BlockFunction intermediate(const OperatorDecomposition& decomp, const BlockFunction& fstar, double lambda);

struct Lemma2Result {
  double lhs = 0;
  double rhs = 0;
};

/// lhs = ||f_lambda - f*||^2 + lambda ||f_lambda||_H^2 and
/// rhs = lambda^{2r} ||g*||^2 for f* = L^r g*.
Lemma2Result lemma2_check(const OperatorDecomposition& decomp, const BlockFunction& gstar, double r, double lambda);

/// Additive problem over the product of per-block discrete measures with
/// target f* = sum_j L_j^r g*_j and three-point noise whose tau-quantile is 0.
struct ApproxProblem {
  std::vector<KernelSpec> specs;
  std::vector<DiscreteMeasure> measures;
  std::vector<Vector> gstars;
  double r = 0.5;
  double tau = 0.5;
  /// Noise takes the values -b, 0, b with probabilities tau/2, 1/2, (1-tau)/2.
  double noise_offset = 0.5;
};

struct ApproxResult {
  double d_measured = 0;
  double d_bound = 0;
  double c_r = 0;
};

/// Full weighted data set (x, y, probability) of an ApproxProblem together
/// with the target values f* at each row.
struct ApproxData {
  DataSet data;
  Vector target;
  KernelSpec kernel;
};

ApproxData approx_data(const ApproxProblem& problem);

/// Measured D(lambda) via the weighted solver, and the bound C_r lambda^r.
ApproxResult approx_error(const ApproxProblem& problem, double lambda, const FitOptions& opts = {});

}  // namespace akqr
