#pragma once

#include "akqr/common.hpp"

#include <algorithm>
#include <cmath>

namespace akqr {

struct DataSet;

inline void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw InputError("quantile level tau must lie in (0, 1)");
}

/// Pinball loss L(y, t). The tie t == y falls in the -tau(t - y) branch.
template <typename Scalar>
Scalar pinball(Scalar tau, Scalar y, Scalar t) {
  check_tau(static_cast<double>(tau));
  const Scalar r = t - y;
  return r > Scalar(0) ? (Scalar(1) - tau) * r : -tau * r;
}

/// L*(y, t) = L(y, t) - L(y, 0).
template <typename Scalar>
Scalar shifted(Scalar tau, Scalar y, Scalar t) {
  return pinball(tau, y, t) - pinball(tau, y, Scalar(0));
}

/// |L|_1 = max(tau, 1 - tau).
template <typename Scalar>
Scalar lipschitz_constant(Scalar tau) {
  check_tau(static_cast<double>(tau));
  return std::max(tau, Scalar(1) - tau);
}

/// Projection onto [-bound, bound].
template <typename Scalar>
Scalar clip(Scalar bound, Scalar t) {
  if (!(bound > Scalar(0))) throw InputError("clip bound must be positive");
  return std::clamp(t, -bound, bound);
}

template <typename Derived>
auto clip(typename Derived::Scalar bound, const Eigen::MatrixBase<Derived>& t) {
  if (!(bound > 0)) throw InputError("clip bound must be positive");
  return t.cwiseMax(-bound).cwiseMin(bound);
}

struct RiskValue {
  double value = 0;
  double total_weight = 0;
};

/// Weighted mean of per-point (shifted) pinball losses.
RiskValue empirical_risk(double tau, const Eigen::Ref<const Vector>& predictions, const DataSet& data,
                         bool use_shifted);

}  // namespace akqr
