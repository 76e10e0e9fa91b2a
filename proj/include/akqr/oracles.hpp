#pragma once

#include "akqr/common.hpp"
#include "akqr/dataset.hpp"

namespace akqr::oracle {

/// Largest value of the weighted box dual
///   -sum w_i u_i y_i - (1/(4 lambda)) (Wu)^T K (Wu),  u in [-tau, 1-tau]^n,
/// over a grid of the given step, for n <= 3. For n = 3 the last coordinate
/// is maximised exactly for each grid point of the first two.
double dual_grid_max(const Matrix& gram, const DataSet& data, double lambda, double tau, double step = 1e-3);

/// Primal value sum w_i L(y_i, (K a)_i) + lambda a^T K a of an expansion.
double primal_value(const Matrix& gram, const DataSet& data, const Vector& alpha, double lambda, double tau);

struct Lemma2Values {
  double lhs = 0;
  double rhs = 0;
};

/// Lemma 2 quantities in the symmetrised coordinates h = W^{1/2} g, using an
/// SVD for the fractional power and linear solves for (A + lambda I)^{-1}.
Lemma2Values lemma2(const Matrix& gram, const Vector& weights, const Vector& g, double r, double lambda);

/// sum_{m=0}^M C(2m, m) 4^{-m} = (2M + 1) C(2M, M) 4^{-M}.
double central_binomial_sum(int M);

/// E[L*(Z, delta) - L*(Z, 0)] for Z uniform on [-2 a tau, 2 a (1 - tau)], by
/// composite Simpson quadrature.
double uniform_noise_excess(double a, double tau, double delta, int intervals = 20000);

}  // namespace akqr::oracle
