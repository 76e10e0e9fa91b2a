#include "akqr/spectral.hpp"

#include "akqr/loss.hpp"

#include <cmath>

namespace akqr {

namespace {

constexpr double kRelativeCutoff = 1e-12;

double cutoff_for(const Vector& eigenvalues) {
  return eigenvalues.size() ? kRelativeCutoff * std::max(eigenvalues(0), 0.0) : 0.0;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::uniform(PointMatrix points) {
  const auto m = points.rows();
  if (m < 1) throw InputError("measure needs at least one point");
  return {std::move(points), Vector::Constant(m, 1.0 / static_cast<double>(m))};
}

void DiscreteMeasure::validate() const {
  if (size() < 1) throw InputError("measure needs at least one point");
  if (weights.size() != size()) throw InputError("measure weight count differs from point count");
  if (!points.allFinite() || !weights.allFinite()) throw InputError("measure has non-finite entries");
  if ((weights.array() <= 0).any()) throw InputError("measure weights must be positive");
  if (std::abs(weights.sum() - 1.0) > 1e-12) throw InputError("measure weights must sum to 1");
}

Matrix operator_matrix(const KernelSpec& spec, const DiscreteMeasure& mu) {
  if (spec.is_composite()) throw InputError("operator_matrix: expects a single-block kernel");
  mu.validate();
  const Vector s = mu.weights.cwiseSqrt();
  return s.asDiagonal() * gram(spec, mu.points).entries * s.asDiagonal();
}

OperatorDecomposition decompose(const Matrix& op, const std::optional<Vector>& weights) {
  const auto m = op.rows();
  if (m < 1 || op.cols() != m) throw InputError("decompose: expects a square nonempty matrix");
  if (!op.allFinite()) throw NumericError("decompose: non-finite operator");
  const Vector w = weights ? *weights : Vector::Constant(m, 1.0 / static_cast<double>(m));
  if (w.size() != m || (w.array() <= 0).any()) throw InputError("decompose: weights must be positive");

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (op + op.transpose()));
  if (es.info() != Eigen::Success) throw NumericError("decompose: eigensolver failed");

  OperatorDecomposition d;
  d.weights = w;
  d.eigenvalues = es.eigenvalues().reverse();
  d.eigenfunctions = w.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().rowwise().reverse();
  if (d.eigenvalues(m - 1) < -1e-10 * std::max(1.0, std::abs(d.eigenvalues(0))))
    throw NumericError("decompose: operator is not positive semidefinite");
  d.eigenvalues = d.eigenvalues.cwiseMax(0.0);
  d.cutoff = cutoff_for(d.eigenvalues);
  return d;
}

OperatorDecomposition decompose(const KernelSpec& spec, const DiscreteMeasure& mu) {
  return decompose(operator_matrix(spec, mu), mu.weights);
}

Vector OperatorDecomposition::coefficients(const Eigen::Ref<const Vector>& values) const {
  if (values.size() != size()) throw InputError("function length differs from measure size");
  return eigenfunctions.transpose() * weights.cwiseProduct(values);
}

Vector OperatorDecomposition::values(const Eigen::Ref<const Vector>& coefficients) const {
  if (coefficients.size() != size()) throw InputError("coefficient length differs from measure size");
  return eigenfunctions * coefficients;
}

double OperatorDecomposition::l2_norm_sq(const Eigen::Ref<const Vector>& values) const {
  if (values.size() != size()) throw InputError("function length differs from measure size");
  return weights.dot(values.cwiseAbs2());
}

BlockFunction make_block_function(const OperatorDecomposition& decomp, const Eigen::Ref<const Vector>& values) {
  BlockFunction f{values, std::nullopt, std::nullopt};
  const Vector c = decomp.coefficients(values);
  double null_part = 0, norm_sq = 0;
  Vector scaled = Vector::Zero(c.size());
  for (Eigen::Index l = 0; l < c.size(); ++l) {
    const double mu = decomp.eigenvalues(l);
    if (mu > decomp.cutoff) {
      norm_sq += c(l) * c(l) / mu;
      scaled(l) = c(l) / mu;
    } else {
      null_part += c(l) * c(l);
    }
  }
  if (null_part <= 1e-20 * std::max(1.0, c.squaredNorm())) {
    f.rkhs_norm_sq = norm_sq;
    f.expansion = decomp.weights.cwiseProduct(decomp.eigenfunctions * scaled);
  }
  return f;
}

namespace {

template <typename Filter>
BlockFunction apply_filter(const OperatorDecomposition& decomp, const BlockFunction& g, Filter filter) {
  Vector c = decomp.coefficients(g.values);
  for (Eigen::Index l = 0; l < c.size(); ++l) {
    const double mu = decomp.eigenvalues(l);
    c(l) = mu > decomp.cutoff ? filter(mu) * c(l) : 0.0;
  }
  return make_block_function(decomp, decomp.values(c));
}

}  // namespace

BlockFunction power_apply(const OperatorDecomposition& decomp, double r, const BlockFunction& g) {
  if (!(r > 0) || !std::isfinite(r)) throw InputError("power_apply: r must be positive");
  return apply_filter(decomp, g, [r](double mu) { return std::pow(mu, r); });
}

BlockFunction intermediate(const OperatorDecomposition& decomp, const BlockFunction& fstar, double lambda) {
  if (!(lambda > 0)) throw InputError("intermediate: lambda must be positive");
  return apply_filter(decomp, fstar, [lambda](double mu) { return mu / (mu + lambda); });
}

Lemma2Result lemma2_check(const OperatorDecomposition& decomp, const BlockFunction& gstar, double r, double lambda) {
  if (!(r > 0) || r > 0.5) throw InputError("lemma2_check: r must lie in (0, 1/2]");
  if (!(lambda > 0) || lambda > 1) throw InputError("lemma2_check: lambda must lie in (0, 1]");
  const BlockFunction fstar = power_apply(decomp, r, gstar);
  const BlockFunction flam = intermediate(decomp, fstar, lambda);
  if (!flam.rkhs_norm_sq) throw NumericError("lemma2_check: intermediate function left the RKHS");
  const double lhs = decomp.l2_norm_sq(flam.values - fstar.values) + lambda * *flam.rkhs_norm_sq;
  return {lhs, std::pow(lambda, 2 * r) * decomp.l2_norm_sq(gstar.values)};
}

ApproxData approx_data(const ApproxProblem& problem) {
  const auto s = static_cast<int>(problem.specs.size());
  if (s < 1 || problem.measures.size() != problem.specs.size() || problem.gstars.size() != problem.specs.size())
    throw InputError("approx: need one kernel, measure and g* per block");
  check_tau(problem.tau);
  if (!(problem.r > 0) || problem.r > 0.5) throw InputError("approx: r must lie in (0, 1/2]");
  if (!(problem.noise_offset >= 0)) throw InputError("approx: noise offset must be nonnegative");

  std::vector<int> dims;
  std::vector<Vector> fstars;
  Eigen::Index support = 1;
  for (int j = 0; j < s; ++j) {
    const auto& mu = problem.measures[j];
    const auto decomp = decompose(problem.specs[j], mu);
    fstars.push_back(power_apply(decomp, problem.r, {problem.gstars[j], {}, {}}).values);
    dims.push_back(static_cast<int>(mu.points.cols()));
    support *= mu.size();
  }
  BlockLayout layout(dims);

  const double noise[3] = {-problem.noise_offset, 0.0, problem.noise_offset};
  const double prob[3] = {problem.tau / 2, 0.5, (1 - problem.tau) / 2};
  const Eigen::Index rows = 3 * support;
  DataSet data;
  data.inputs.resize(rows, layout.total_dim());
  data.responses.resize(rows);
  Vector weights(rows), target(support);

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(s), 0);
  for (Eigen::Index p = 0; p < support; ++p) {
    double w = 1, f = 0;
    Eigen::Index row = 3 * p;
    for (int j = 0; j < s; ++j) {
      const auto& mu = problem.measures[j];
      data.inputs.block(row, layout.offset(j), 1, layout.width(j)) = mu.points.row(idx[j]);
      w *= mu.weights(idx[j]);
      f += fstars[j](idx[j]);
    }
    target(p) = f;
    for (int k = 0; k < 3; ++k) {
      data.inputs.row(row + k) = data.inputs.row(row);
      data.responses(row + k) = f + noise[k];
      weights(row + k) = w * prob[k];
    }
    for (int j = s - 1; j >= 0; --j) {
      if (++idx[j] < problem.measures[j].size()) break;
      idx[j] = 0;
    }
  }
  data.weights = weights / weights.sum();
  Vector expanded(rows);
  for (Eigen::Index p = 0; p < support; ++p) expanded.segment(3 * p, 3).setConstant(target(p));
  return {std::move(data), std::move(expanded), KernelSpec::additive(layout, problem.specs)};
}

ApproxResult approx_error(const ApproxProblem& problem, double lambda, const FitOptions& opts) {
  const ApproxData pd = approx_data(problem);
  const Model model = fit(pd.kernel, pd.data, lambda, problem.tau, opts);
  const double risk_target = empirical_risk(problem.tau, pd.target, pd.data, false).value;

  ApproxResult out;
  out.d_measured = objective(model, pd.data).unshifted - risk_target;
  const double lip = lipschitz_constant(problem.tau);
  for (std::size_t j = 0; j < problem.gstars.size(); ++j) {
    const double g = std::sqrt(problem.measures[j].weights.dot(problem.gstars[j].cwiseAbs2()));
    out.c_r += lip * g + g * g;
  }
  out.d_bound = out.c_r * std::pow(lambda, problem.r);
  return out;
}

}  // namespace akqr
