#include "akqr/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace akqr::oracle {

namespace {

double check_loss(double tau, double y, double t) {
  const double r = y - t;
  return r >= 0 ? tau * r : (tau - 1) * r;
}

}  // namespace

double dual_grid_max(const Matrix& gram, const DataSet& data, double lambda, double tau, double step) {
  const auto n = data.size();
  if (n < 1 || n > 3) throw InputError("dual_grid_max: supports 1 <= n <= 3");
  const Vector w = data.effective_weights();
  const Vector& y = data.responses;
  const Matrix q = w.asDiagonal() * gram * w.asDiagonal() / (4 * lambda);
  const double lo = -tau, hi = 1 - tau;
  const int steps = static_cast<int>(std::ceil((hi - lo) / step));
  auto grid = [&](int k) { return std::min(hi, lo + k * step); };
  auto value = [&](const Vector& u) { return -w.cwiseProduct(u).dot(y) - u.dot(q * u); };

  double best = -std::numeric_limits<double>::infinity();
  Vector u = Vector::Zero(n);
  if (n == 1) {
    for (int a = 0; a <= steps; ++a) {
      u(0) = grid(a);
      best = std::max(best, value(u));
    }
    return best;
  }
  for (int a = 0; a <= steps; ++a)
    for (int b = 0; b <= steps; ++b) {
      u(0) = grid(a);
      u(1) = grid(b);
      if (n == 2) {
        best = std::max(best, value(u));
        continue;
      }
      // Concave quadratic in u_3: -w_3 y_3 u - q_33 u^2 - 2 u (q_31 u_1 + q_32 u_2).
      const double lin = -w(2) * y(2) - 2 * (q(2, 0) * u(0) + q(2, 1) * u(1));
      const double quad = q(2, 2);
      double cands[3] = {lo, hi, lo};
      if (quad > 0) cands[2] = std::clamp(lin / (2 * quad), lo, hi);
      for (const double c : cands) {
        u(2) = c;
        best = std::max(best, value(u));
      }
    }
  return best;
}

double primal_value(const Matrix& gram, const DataSet& data, const Vector& alpha, double lambda, double tau) {
  const Vector f = gram * alpha;
  const Vector w = data.effective_weights();
  double acc = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) acc += w(i) * check_loss(tau, data.responses(i), f(i));
  return acc + lambda * alpha.dot(gram * alpha);
}

Lemma2Values lemma2(const Matrix& gram, const Vector& weights, const Vector& g, double r, double lambda) {
  const auto m = gram.rows();
  const Vector s = weights.cwiseSqrt();
  const Matrix a = s.asDiagonal() * gram * s.asDiagonal();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector sv = svd.singularValues();
  const double cut = 1e-12 * (sv.size() ? sv(0) : 0.0);
  for (auto& x : sv) x = x > cut ? std::pow(x, r) : 0.0;
  const Matrix ar = svd.matrixU() * sv.asDiagonal() * svd.matrixU().transpose();

  const Vector hg = s.cwiseProduct(g);
  const Vector hf = ar * hg;
  const Matrix shifted = a + lambda * Matrix::Identity(m, m);
  const Vector qv = shifted.ldlt().solve(hf);
  const Vector hfl = a * qv;
  return {(hfl - hf).squaredNorm() + lambda * qv.dot(a * qv), std::pow(lambda, 2 * r) * hg.squaredNorm()};
}

double central_binomial_sum(int M) {
  if (M < 0) throw InputError("central_binomial_sum: M must be nonnegative");
  const double log_term = std::lgamma(2.0 * M + 1) - 2 * std::lgamma(M + 1.0) - 2.0 * M * std::log(2.0);
  return (2.0 * M + 1) * std::exp(log_term);
}

double uniform_noise_excess(double a, double tau, double delta, int intervals) {
  const double lo = -2 * a * tau, hi = 2 * a * (1 - tau);
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / intervals;
  // Split at the kinks so Simpson's rule integrates each smooth piece.
  const double kinks[] = {lo, std::clamp(std::min(0.0, delta), lo, hi), std::clamp(std::max(0.0, delta), lo, hi), hi};
  double total = 0;
  for (int p = 0; p < 3; ++p) {
    const double x0 = kinks[p], x1 = kinks[p + 1];
    if (!(x1 > x0)) continue;
    const int k = std::max(2, 2 * static_cast<int>(std::ceil((x1 - x0) / h / 2)));
    const double hk = (x1 - x0) / k;
    auto f = [&](double z) { return check_loss(tau, z, delta) - check_loss(tau, z, 0.0); };
    double acc = f(x0) + f(x1);
    for (int i = 1; i < k; ++i) acc += (i % 2 ? 4 : 2) * f(x0 + i * hk);
    total += acc * hk / 3;
  }
  return total / (hi - lo);
}

}  // namespace akqr::oracle
