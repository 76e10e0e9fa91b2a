#include "akqr/loss.hpp"

#include "akqr/dataset.hpp"

namespace akqr {

RiskValue empirical_risk(double tau, const Eigen::Ref<const Vector>& predictions, const DataSet& data,
                         bool use_shifted) {
  check_tau(tau);
  if (data.size() < 1) throw InputError("empirical_risk: empty data");
  if (predictions.size() != data.size()) throw InputError("empirical_risk: prediction count differs from data size");
  const Vector w = data.effective_weights();
  if ((w.array() < 0).any() || !(w.sum() > 0)) throw InputError("empirical_risk: invalid weights");
  double acc = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double y = data.responses(i);
    acc += w(i) * (use_shifted ? shifted(tau, y, predictions(i)) : pinball(tau, y, predictions(i)));
  }
  const double total = w.sum();
  return {acc / total, total};
}

}  // namespace akqr
