#pragma once

#include "akqr/common.hpp"
#include "akqr/dataset.hpp"
#include "akqr/kernels.hpp"

#include <cstdint>
#include <vector>

namespace akqr {

struct FitOptions {
  /// Stop once gap <= gap_tol * (1 + |dual objective|).
  double gap_tol = 1e-8;
  int max_epochs = 10000;
  std::uint64_t seed = 0;
  /// Epochs between active-face Newton steps; 0 disables them.
  int polish_every = 20;
};

/// Regularised pinball-loss fit f = sum_i alpha_i k(x_i, .).
///
/// The dual variables live in the box [-tau, 1 - tau]; the primal
/// coefficients are recovered as alpha_i = -w_i u_i / (2 lambda).
struct Model {
  KernelSpec spec;
  PointMatrix support;
  Vector dual;
  Vector alpha;
  double lambda = 0;
  double tau = 0;
  double gap = 0;
  int epochs = 0;
};

/// Per-epoch record of the duality gap, as certified so far (best primal
/// value seen minus current dual value).
struct FitTrace {
  std::vector<double> gaps;
  std::vector<double> dual_objectives;
};

Model fit(const KernelSpec& spec, const DataSet& data, double lambda, double tau, const FitOptions& opts = {},
          FitTrace* trace = nullptr);

/// Same as fit() with a precomputed Gram matrix of data.inputs.
Model fit(const GramMatrix& gram, const DataSet& data, double lambda, double tau, const FitOptions& opts = {},
          FitTrace* trace = nullptr);

double predict_point(const Model& model, const Eigen::Ref<const Vector>& x);
Vector predict(const Model& model, const PointMatrix& points);

/// ||f||_H = sqrt(alpha^T K alpha) over the support.
double rkhs_norm(const Model& model);

/// Primal minus dual objective, evaluated for the model's dual vector.
double duality_gap(const Model& model, const DataSet& data);

struct Objective {
  /// sum_i w_i L*(y_i, f(x_i)) + lambda ||f||^2
  double shifted = 0;
  /// sum_i w_i L(y_i, f(x_i)) + lambda ||f||^2
  double unshifted = 0;
};

Objective objective(const Model& model, const DataSet& data);

/// D(u) = -sum w_i u_i y_i - (1/(4 lambda)) (Wu)^T K (Wu) for the unshifted
/// primal. Subtract sum_i w_i L(y_i, 0) for the shifted one.
double dual_objective(const Eigen::Ref<const Vector>& dual, const Eigen::Ref<const Matrix>& gram,
                      const DataSet& data, double lambda);

void to_json(nlohmann::json& j, const Model& model);
Model model_from_json(const nlohmann::json& j);

}  // namespace akqr
