#include "akqr/solver.hpp"

#include "akqr/loss.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace akqr {

namespace {

constexpr double kDiagGuard = 1e-12;

void check_problem(const DataSet& data, double lambda, double tau) {
  data.validate();
  check_tau(tau);
  if (!(lambda > 0) || !std::isfinite(lambda)) throw InputError("lambda must be positive");
}

/// Coordinate-ascent working state. f tracks -K W u / (2 lambda).
class DualState {
 public:
  DualState(const Matrix& k, const DataSet& data, double lambda, double tau)
      : k_(k), y_(data.responses), w_(data.effective_weights()), lambda_(lambda), lo_(-tau), hi_(1 - tau),
        tau_(tau), u_(Vector::Zero(k.rows())), f_(Vector::Zero(k.rows())) {
    loss_at_zero_ = 0;
    for (Eigen::Index i = 0; i < y_.size(); ++i) loss_at_zero_ += w_(i) * pinball(tau_, y_(i), 0.0);
  }

  void sweep(const std::vector<Eigen::Index>& order) {
    for (const auto i : order) {
      const double wi = w_(i);
      if (wi <= 0) continue;
      const double step = 2 * lambda_ * (f_(i) - y_(i)) / (wi * (k_(i, i) + kDiagGuard));
      const double next = std::clamp(u_(i) + step, lo_, hi_);
      const double delta = next - u_(i);
      if (delta == 0) continue;
      u_(i) = next;
      f_.noalias() -= k_.col(i) * (wi * delta / (2 * lambda_));
    }
  }

  /// Newton step on the face where the free coordinates interpolate their
  /// responses. Two candidates are tried: the full step projected onto the
  /// box, and the step truncated at the first bound it meets; the one with
  /// the larger dual value is kept when it improves on the current point.
  void polish() {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < u_.size(); ++i)
      if (w_(i) > 0 && u_(i) > lo_ && u_(i) < hi_) free.push_back(i);
    if (free.empty()) return;
    const auto m = static_cast<Eigen::Index>(free.size());
    Matrix kff(m, m);
    Vector rhs(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      rhs(a) = 2 * lambda_ * (f_(free[a]) - y_(free[a]));
      for (Eigen::Index b = 0; b < m; ++b) kff(a, b) = k_(free[a], free[b]);
    }
    Vector z = kff.ldlt().solve(rhs);
    if (!z.allFinite() || (kff * z - rhs).norm() > 1e-10 * (1 + rhs.norm()))
      z = kff.completeOrthogonalDecomposition().solve(rhs);
    if (!z.allFinite()) return;

    // Along u + t d (W d = z on the free set): D(t) = D + t s - t^2 c / 2.
    const double slope = rhs.dot(z) / (2 * lambda_);
    const double curvature = z.dot(kff * z) / (2 * lambda_);
    if (!(slope > 0) || !(curvature > 0)) return;
    const double full = slope / curvature;
    double t = full;
    for (Eigen::Index a = 0; a < m; ++a) {
      const double d = z(a) / w_(free[a]);
      if (d > 0) t = std::min(t, (hi_ - u_(free[a])) / d);
      if (d < 0) t = std::min(t, (lo_ - u_(free[a])) / d);
    }

    const Vector saved = u_;
    Vector best = u_;
    double best_value = dual_shifted();
    for (const double step : {full, t}) {
      if (!(step > 0)) continue;
      u_ = saved;
      for (Eigen::Index a = 0; a < m; ++a) {
        const auto i = free[a];
        u_(i) = std::clamp(u_(i) + step * z(a) / w_(i), lo_, hi_);
      }
      refresh();
      const double value = dual_shifted();
      if (value > best_value) {
        best_value = value;
        best = u_;
      }
    }
    u_ = best;
    refresh();
  }

 public:
  void refresh() { f_.noalias() = k_ * (w_.cwiseProduct(u_)) * (-1.0 / (2 * lambda_)); }

  /// sum_i w_i [L(y_i, f_i) - u_i (f_i - y_i)], termwise nonnegative.
  double gap() const {
    double g = 0;
    for (Eigen::Index i = 0; i < u_.size(); ++i) {
      const double r = f_(i) - y_(i);
      g += w_(i) * std::max(0.0, pinball(tau_, y_(i), f_(i)) - u_(i) * r);
    }
    return g;
  }

  /// Shifted dual value: -sum w u y + (1/2) sum w u f - sum w L(y, 0).
  double dual_shifted() const {
    return -w_.cwiseProduct(u_).dot(y_) + 0.5 * w_.cwiseProduct(u_).dot(f_) - loss_at_zero_;
  }

  double primal_shifted() const { return dual_shifted() + gap(); }

  const Vector& dual() const { return u_; }
  const Vector& weights() const { return w_; }

 private:
  const Matrix& k_;
  const Vector& y_;
  Vector w_;
  double lambda_, lo_, hi_, tau_;
  Vector u_, f_;
  double loss_at_zero_;
};

}  // namespace

Model fit(const KernelSpec& spec, const DataSet& data, double lambda, double tau, const FitOptions& opts,
          FitTrace* trace) {
  check_problem(data, lambda, tau);
  return fit(gram(spec, data.inputs), data, lambda, tau, opts, trace);
}

Model fit(const GramMatrix& gram, const DataSet& data, double lambda, double tau, const FitOptions& opts,
          FitTrace* trace) {
  check_problem(data, lambda, tau);
  if (!(opts.gap_tol > 0)) throw InputError("gap_tol must be positive");
  if (opts.max_epochs < 1) throw InputError("max_epochs must be at least 1");
  if (gram.size() != data.size()) throw InputError("gram size differs from data size");
  if (!gram.entries.allFinite()) throw NumericError("gram has non-finite entries");
  if ((gram.entries.diagonal().array() < 0).any()) throw NumericError("gram has a negative diagonal");

  const auto n = data.size();
  DualState state(gram.entries, data, lambda, tau);
  std::mt19937_64 rng(opts.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  auto converged = [&](double gap) { return gap <= opts.gap_tol * (1 + std::abs(state.dual_shifted())); };

  double gap = state.gap();
  double best_primal = state.primal_shifted();
  int epoch = 0;
  while (!converged(gap)) {
    if (epoch == opts.max_epochs)
      throw ConvergenceError("fit: no convergence after " + std::to_string(epoch) + " epochs, gap " +
                                 std::to_string(gap),
                             gap);
    ++epoch;
    std::shuffle(order.begin(), order.end(), rng);
    state.sweep(order);
    state.refresh();
    if (opts.polish_every > 0 && epoch % opts.polish_every == 0) state.polish();
    gap = state.gap();
    if (!std::isfinite(gap)) throw NumericError("fit: non-finite duality gap");
    best_primal = std::min(best_primal, state.primal_shifted());
    if (trace) {
      trace->gaps.push_back(std::max(0.0, best_primal - state.dual_shifted()));
      trace->dual_objectives.push_back(state.dual_shifted());
    }
  }

  Model model{gram.spec, data.inputs, state.dual(), {}, lambda, tau, gap, epoch};
  model.alpha = -state.weights().cwiseProduct(state.dual()) / (2 * lambda);
  return model;
}

double predict_point(const Model& model, const Eigen::Ref<const Vector>& x) {
  if (x.size() != model.support.cols()) throw InputError("predict: point dimension differs from model");
  double acc = 0;
  for (Eigen::Index i = 0; i < model.support.rows(); ++i)
    acc += model.alpha(i) * detail::eval_contiguous(model.spec, model.support.row(i).data(), x.data(), x.size());
  return acc;
}

Vector predict(const Model& model, const PointMatrix& points) {
  if (points.cols() != model.support.cols()) throw InputError("predict: point dimension differs from model");
  return cross_gram(model.spec, points, model.support) * model.alpha;
}

double rkhs_norm(const Model& model) {
  return std::sqrt(rkhs_norm_sq(model.alpha, gram(model.spec, model.support)));
}

namespace {

Vector fitted_values(const Model& model, const DataSet& data, Matrix& k) {
  if (data.size() != model.support.rows()) throw InputError("data size differs from model support");
  k = gram(model.spec, data.inputs).entries;
  return k * model.alpha;
}

}  // namespace

double duality_gap(const Model& model, const DataSet& data) {
  Matrix k;
  const Vector f = fitted_values(model, data, k);
  const Vector w = data.effective_weights();
  double primal = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) primal += w(i) * pinball(model.tau, data.responses(i), f(i));
  primal += model.lambda * rkhs_norm_sq(model.alpha, k);
  return primal - dual_objective(model.dual, k, data, model.lambda);
}

Objective objective(const Model& model, const DataSet& data) {
  Matrix k;
  const Vector f = fitted_values(model, data, k);
  const double penalty = model.lambda * rkhs_norm_sq(model.alpha, k);
  return {empirical_risk(model.tau, f, data, true).value + penalty,
          empirical_risk(model.tau, f, data, false).value + penalty};
}

double dual_objective(const Eigen::Ref<const Vector>& dual, const Eigen::Ref<const Matrix>& gram,
                      const DataSet& data, double lambda) {
  const Vector wu = data.effective_weights().cwiseProduct(dual);
  return -wu.dot(data.responses) - wu.dot(gram * wu) / (4 * lambda);
}

void to_json(nlohmann::json& j, const Model& model) {
  nlohmann::json kernel;
  to_json(kernel, model.spec);
  const auto n = model.support.rows();
  j = {{"kernel", kernel},
       {"n", n},
       {"dims", model.support.cols()},
       {"support", std::vector<double>(model.support.data(), model.support.data() + model.support.size())},
       {"alpha", std::vector<double>(model.alpha.data(), model.alpha.data() + n)},
       {"dual", std::vector<double>(model.dual.data(), model.dual.data() + n)},
       {"lambda", model.lambda},
       {"tau", model.tau},
       {"gap", model.gap}};
}

Model model_from_json(const nlohmann::json& j) {
  try {
    Model m{kernel_from_json(j.at("kernel")), {}, {}, {}, 0, 0, 0, 0};
    const auto support = j.at("support").get<std::vector<double>>();
    const auto d = j.at("dims").get<Eigen::Index>();
    const auto alpha = j.at("alpha").get<std::vector<double>>();
    const auto n = static_cast<Eigen::Index>(alpha.size());
    if (d < 1 || static_cast<Eigen::Index>(support.size()) != n * d)
      throw InputError("model json: support size does not match alpha and dims");
    m.support = Eigen::Map<const PointMatrix>(support.data(), n, d);
    m.alpha = Eigen::Map<const Vector>(alpha.data(), n);
    if (j.contains("dual")) {
      const auto dual = j.at("dual").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(dual.size()) != n) throw InputError("model json: dual has wrong length");
      m.dual = Eigen::Map<const Vector>(dual.data(), n);
    }
    m.lambda = j.at("lambda").get<double>();
    m.tau = j.at("tau").get<double>();
    m.gap = j.value("gap", 0.0);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model json: ") + e.what());
  }
}

}  // namespace akqr
