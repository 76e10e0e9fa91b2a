#include "akqr/verify.hpp"

#include "akqr/capacity.hpp"
#include "akqr/experiments.hpp"
#include "akqr/oracles.hpp"
#include "akqr/solver.hpp"
#include "akqr/spectral.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

namespace akqr {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vector normal_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (auto& e : v) e = nd(rng);
  return v;
}

PointMatrix uniform_points(Rng& rng, Eigen::Index n, Eigen::Index d) {
  PointMatrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index c = 0; c < d; ++c) x(i, c) = uniform(rng, 0, 1);
  return x;
}

Vector random_weights(Rng& rng, Eigen::Index m) {
  Vector w(m);
  for (auto& e : w) e = uniform(rng, 0.1, 1.0);
  return w / w.sum();
}

VerifyRow le(std::string id, double lhs, double rhs) { return {std::move(id), lhs, rhs, lhs <= rhs}; }

}  // namespace

std::vector<VerifyRow> verify_lemma2(std::uint64_t seed) {
  std::vector<VerifyRow> rows;
  Rng rng(seed);
  for (int c = 0; c < 100; ++c) {
    const int m = 1 + static_cast<int>(rng() % 10);
    const int kind = static_cast<int>(rng() % 3);
    const KernelSpec spec = kind == 2 ? KernelSpec::sobolev_min() : KernelSpec::gaussian(uniform(rng, 0.2, 2.0));
    const int dim = kind == 1 ? 2 : 1;
    const DiscreteMeasure mu{uniform_points(rng, m, dim), random_weights(rng, m)};
    const Vector g = normal_vector(rng, m);
    const double r = 0.5 * (1 - uniform(rng, 0, 1));
    const double lambda = std::exp(std::log(1e-4) * uniform(rng, 0, 1));

    const auto decomp = decompose(spec, mu);
    const auto res = lemma2_check(decomp, {g, {}, {}}, r, lambda);
    const std::string id = "case" + std::to_string(c);
    rows.push_back(le("lemma2/" + id, res.lhs, res.rhs + 1e-9));
    const auto ref = oracle::lemma2(gram(spec, mu.points).entries, mu.weights, g, r, lambda);
    const double scale = 1 + std::abs(ref.lhs);
    rows.push_back(le("oracle_agreement/" + id, std::abs(res.lhs - ref.lhs) / scale, 1e-7));
  }
  return rows;
}

std::vector<VerifyRow> verify_capacity(std::uint64_t seed) {
  std::vector<VerifyRow> rows;
  Rng rng(seed);
  const auto layout = BlockLayout::uniform(2);
  const std::vector<KernelSpec> blocks{KernelSpec::gaussian(0.5), KernelSpec::gaussian(0.5)};
  const PointMatrix points = uniform_points(rng, 10, 2);
  Eigen::Index previous = 0;
  for (const double eps : {0.5, 0.25, 0.125}) {
    const std::string tag = "eps=" + std::to_string(eps).substr(0, 5);
    std::vector<EmpiricalNet> nets;
    std::vector<Matrix> fresh;
    double log_sum = 0, count_product = 1;
    for (int j = 0; j < 2; ++j) {
      const PointMatrix pj = block_columns(points, layout, j);
      nets.push_back(cover_ball(blocks[j], pj, 1.0, eps, {20000, mix_seed(seed, 10 + j)}));
      fresh.push_back(sample_ball(blocks[j], pj, 1.0, 1000, mix_seed(seed, 100 + j)));
      log_sum += std::log(static_cast<double>(nets[j].count()));
      count_product *= static_cast<double>(nets[j].count());
    }
    const auto net = additive_net(nets, layout);
    rows.push_back({"count_identity/" + tag, static_cast<double>(net.count()), count_product,
                    static_cast<double>(net.count()) == count_product});
    const double log_count = std::log(static_cast<double>(net.count()));
    rows.push_back(le("log_count/" + tag, std::abs(log_count - log_sum), 1e-12));
    rows.push_back(le("monotone/" + tag, static_cast<double>(previous), static_cast<double>(net.count())));
    previous = net.count();

    // Exhaustive nearest center over the whole product net.
    double worst = 0, chain_excess = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < 1000; ++k) {
      const Vector f = fresh[0].col(k) + fresh[1].col(k);
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < net.count(); ++c) best = std::min(best, (net.centers.col(c) - f).squaredNorm());
      worst = std::max(worst, std::sqrt(best / 10.0));
      const auto match = nearest_product_center(nets, {fresh[0].col(k), fresh[1].col(k)});
      chain_excess = std::max(chain_excess, match.distance - match.block_distance[0] - match.block_distance[1]);
    }
    rows.push_back(le("covered/" + tag, worst, 2 * eps));
    rows.push_back(le("triangle_chain/" + tag, chain_excess, 1e-12));
  }
  const auto scaled = cover_ball(blocks[0], block_columns(points, layout, 0), 2.0, 0.2, {20000, seed});
  const auto unit = cover_ball(blocks[0], block_columns(points, layout, 0), 1.0, 0.1, {20000, seed});
  rows.push_back({"homogeneity", static_cast<double>(scaled.count()), static_cast<double>(unit.count()),
                  scaled.count() == unit.count()});
  return rows;
}

std::vector<VerifyRow> verify_approx(std::uint64_t seed) {
  std::vector<VerifyRow> rows;
  FitOptions opts;
  opts.gap_tol = 1e-11;
  opts.max_epochs = 200000;
  for (int p = 0; p < 10; ++p) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(p)));
    ApproxProblem prob;
    for (int j = 0; j < 2; ++j) {
      prob.specs.push_back(j == 1 && p % 3 == 2 ? KernelSpec::sobolev_min()
                                                : KernelSpec::gaussian(uniform(rng, 0.3, 1.0)));
      prob.measures.push_back({uniform_points(rng, 6, 1), random_weights(rng, 6)});
      prob.gstars.push_back(normal_vector(rng, 6) * uniform(rng, 0.2, 1.0));
    }
    prob.r = p % 2 ? 0.25 : 0.5;
    prob.tau = (p % 3 == 0) ? 0.5 : (p % 3 == 1 ? 0.3 : 0.7);
    double last = -1;
    for (const double lambda : {0.01, 0.1, 0.5, 1.0}) {
      const auto res = approx_error(prob, lambda, opts);
      const std::string id = "problem" + std::to_string(p) + "/lambda=" + std::to_string(lambda).substr(0, 4);
      rows.push_back(le("bound/" + id, res.d_measured, res.d_bound + 1e-6));
      rows.push_back(le("nondecreasing/" + id, last, res.d_measured + 1e-8));
      last = res.d_measured;
    }
  }
  return rows;
}

std::vector<VerifyRow> verify_example1(std::uint64_t) {
  std::vector<VerifyRow> rows;
  const auto rep = example1_membership(1.0, 10000);
  rows.push_back({"additive_norm", rep.additive_norm, 1.0, rep.additive_norm == 1.0});

  const double c = 2 * std::sqrt(std::numbers::pi) / std::exp(2.0);
  double sum = 1, bound = 1, t = 1, worst_margin = std::numeric_limits<double>::infinity(), worst_oracle = 0;
  for (int m = 1; m <= 10000; ++m) {
    t *= (2.0 * m - 1) / (2.0 * m);
    sum += t;
    bound += c / std::sqrt(static_cast<double>(m));
    worst_margin = std::min(worst_margin, sum - bound);
    if (m % 97 == 0 || m == 10000) {
      const double exact = oracle::central_binomial_sum(m);
      worst_oracle = std::max(worst_oracle, std::abs(sum - exact) / exact);
    }
  }
  rows.push_back(le("lower_bound_all_M", 0.0, worst_margin));
  rows.push_back(le("closed_form_agreement", worst_oracle, 1e-10));
  const auto s = example1_series(10000);
  rows.push_back(le("series_matches_loop", std::abs(s.partial_sum - sum), 1e-9 * sum));
  const double asym = 2 * std::sqrt(10000 / std::numbers::pi);
  rows.push_back(le("asymptotic_2pct", std::abs(s.partial_sum - asym) / asym, 0.02));
  rows.push_back(le("exceeds_100", 100.0, s.partial_sum));
  return rows;
}

std::vector<VerifyRow> verify_solver(std::uint64_t seed) {
  std::vector<VerifyRow> rows;
  Rng rng(seed);
  FitOptions tight;
  tight.gap_tol = 1e-12;
  tight.max_epochs = 200000;

  // Tiny instances against the dual grid.
  for (int c = 0; c < 12; ++c) {
    const int n = 1 + c % 3;
    DataSet data;
    data.inputs = uniform_points(rng, n, 2);
    data.responses = normal_vector(rng, n);
    if (c == 0) data.responses.setZero();
    const double tau = uniform(rng, 0.1, 0.9), lambda = std::exp(std::log(10.0) * uniform(rng, -2, 1));
    const KernelSpec spec = c % 2 ? KernelSpec::gaussian(uniform(rng, 0.3, 1.5))
                                  : KernelSpec::additive(BlockLayout::uniform(2),
                                                         {KernelSpec::gaussian(0.5), KernelSpec::sobolev_min()});
    const Model model = fit(spec, data, lambda, tau, tight);
    const Matrix k = gram(spec, data.inputs).entries;
    const double obj = oracle::primal_value(k, data, model.alpha, lambda, tau);
    const double grid = oracle::dual_grid_max(k, data, lambda, tau);
    const std::string id = "tiny" + std::to_string(c) + "/n=" + std::to_string(n);
    rows.push_back(le("grid_oracle/" + id, obj, grid + 1e-3));
    rows.push_back(le("weak_duality/" + id, grid, obj + 1e-12));
  }
  {
    DataSet data;
    data.inputs = PointMatrix::Constant(3, 1, 0.4);
    data.responses = (Vector(3) << -1, 0, 1).finished();
    const auto spec = KernelSpec::gaussian(1.0);
    const Model model = fit(spec, data, 0.1, 0.5, tight);
    rows.push_back(le("median_identical_inputs", std::abs(predict(model, data.inputs)(0)), 1e-4));
  }

  // Duality gaps up to n = 200.
  FitOptions opts;
  opts.gap_tol = 1e-9;
  int instance = 0;
  for (const int n : {5, 20, 50, 100, 200}) {
    for (int rep = 0; rep < 2; ++rep, ++instance) {
      DataSet data;
      data.inputs = uniform_points(rng, n, 3);
      data.responses.resize(n);
      for (Eigen::Index i = 0; i < n; ++i)
        data.responses(i) = std::sin(4 * data.inputs(i, 0)) + data.inputs(i, 1) + uniform(rng, -0.5, 0.5);
      const double tau = rep ? 0.25 : 0.5;
      const double lambda = std::pow(static_cast<double>(n), -1.0 - rep / 3.0);
      const KernelSpec spec = rep ? KernelSpec::gaussian(0.7)
                                  : KernelSpec::additive(BlockLayout::uniform(3), {KernelSpec::gaussian(0.5),
                                                                                   KernelSpec::gaussian(0.5),
                                                                                   KernelSpec::gaussian(0.5)});
      opts.seed = static_cast<std::uint64_t>(instance);
      const Model model = fit(spec, data, lambda, tau, opts);
      rows.push_back(le("gap/n=" + std::to_string(n) + "/rep" + std::to_string(rep), duality_gap(model, data), 1e-8));
    }
  }

  // Norm bound ||f||_H <= sqrt(max|y| / lambda).
  for (int c = 0; c < 20; ++c) {
    const int n = 5 + static_cast<int>(rng() % 40);
    DataSet data;
    data.inputs = uniform_points(rng, n, 2);
    data.responses = normal_vector(rng, n) * uniform(rng, 0.1, 3.0);
    const double tau = uniform(rng, 0.1, 0.9), lambda = std::exp(std::log(10.0) * uniform(rng, -3, 0));
    const auto spec = KernelSpec::gaussian(uniform(rng, 0.2, 1.0));
    opts.seed = static_cast<std::uint64_t>(c);
    const Model model = fit(spec, data, lambda, tau, opts);
    rows.push_back(le("norm_bound/case" + std::to_string(c), rkhs_norm(model),
                      std::sqrt(data.response_bound() / lambda) + 1e-6));
  }
  return rows;
}

std::vector<std::string> verify_suites() { return {"lemma2", "capacity", "approx", "example1", "solver"}; }

std::vector<VerifyRow> run_verify_suite(const std::string& name, std::uint64_t seed) {
  if (name == "lemma2") return verify_lemma2(seed);
  if (name == "capacity") return verify_capacity(seed);
  if (name == "approx") return verify_approx(seed);
  if (name == "example1") return verify_example1(seed);
  if (name == "solver") return verify_solver(seed);
  throw InputError("unknown verify suite: " + name);
}

void write_verify_csv(std::ostream& out, const std::vector<VerifyRow>& rows) {
  out << "case_id,lhs,rhs,pass\n" << std::setprecision(17);
  for (const auto& r : rows) out << r.case_id << ',' << r.lhs << ',' << r.rhs << ',' << (r.pass ? "true" : "false") << '\n';
}

}  // namespace akqr
