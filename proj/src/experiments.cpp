#include "akqr/experiments.hpp"

#include "akqr/loss.hpp"
#include "akqr/solver.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

namespace akqr {

double TargetSpec::operator()(const double* x, int width) const {
  double mean = 0;
  for (int c = 0; c < width; ++c) mean += x[c];
  mean /= width;
  if (kind == "gaussian_bump") {
    double sq = 0;
    for (int c = 0; c < width; ++c) sq += (x[c] - center) * (x[c] - center);
    return amplitude * std::exp(-sq / (sigma * sigma));
  }
  if (kind == "sinusoid") return amplitude * std::sin(2 * std::numbers::pi * frequency * mean + phase);
  if (kind == "polynomial") {
    double acc = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * mean + *it;
    return acc;
  }
  throw InputError("unknown target kind: " + kind);
}

void ExperimentSpec::validate() const {
  if (layout.blocks() < 1) throw InputError("experiment: layout needs at least one block");
  if (static_cast<int>(target.size()) != layout.blocks()) throw InputError("experiment: need one target per block");
  for (const auto& t : target) {
    if (t.kind != "gaussian_bump" && t.kind != "sinusoid" && t.kind != "polynomial")
      throw InputError("experiment: unknown target kind " + t.kind);
    if (t.kind == "gaussian_bump" && !(t.sigma > 0)) throw InputError("experiment: bump sigma must be positive");
  }
  if (noise.kind != "uniform_symmetric") throw InputError("experiment: unsupported noise kind " + noise.kind);
  if (!(noise.halfwidth > 0)) throw InputError("experiment: noise halfwidth must be positive");
  check_tau(tau);
  if (n_grid.empty()) throw InputError("experiment: n_grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw InputError("experiment: sample sizes must be positive");
    if (i && n_grid[i] <= n_grid[i - 1]) throw InputError("experiment: n_grid must be strictly increasing");
  }
  if (!(beta > 0) || !(beta_b > 0)) throw InputError("experiment: beta must be positive");
  if (seeds.empty()) throw InputError("experiment: no seeds");
  if (risk_eval < 1) throw InputError("experiment: risk_eval must be positive");
  if (!(gap_tol > 0) || max_epochs < 1) throw InputError("experiment: invalid solver tolerances");
  if (workers < 1) throw InputError("experiment: workers must be positive");
  for (const KernelSpec* k : {&kernel_a, kernel_b ? &*kernel_b : nullptr}) {
    if (!k) continue;
    if (const auto dim = k->input_dim(); dim && *dim != layout.total_dim())
      throw InputError("experiment: kernel input dimension differs from layout");
  }
}

double ExperimentSpec::target_value(const double* x) const {
  double f = 0;
  for (int j = 0; j < layout.blocks(); ++j) f += target[j](x + layout.offset(j), layout.width(j));
  return f;
}

ExperimentSpec experiment_from_json(const nlohmann::json& j) {
  try {
    ExperimentSpec s;
    s.layout = BlockLayout(j.at("layout").get<std::vector<int>>());
    s.target.clear();
    for (const auto& t : j.at("target")) {
      TargetSpec ts;
      ts.kind = t.at("kind").get<std::string>();
      ts.amplitude = t.value("amplitude", ts.amplitude);
      ts.center = t.value("center", ts.center);
      ts.sigma = t.value("sigma", ts.sigma);
      ts.frequency = t.value("frequency", ts.frequency);
      ts.phase = t.value("phase", ts.phase);
      ts.coefficients = t.value("coefficients", std::vector<double>{});
      s.target.push_back(ts);
    }
    if (j.contains("noise")) {
      s.noise.kind = j["noise"].value("kind", s.noise.kind);
      s.noise.halfwidth = j["noise"].value("halfwidth", s.noise.halfwidth);
    }
    s.tau = j.value("tau", s.tau);
    s.kernel_a = kernel_from_json(j.at("kernel_a"));
    if (j.contains("kernel_b") && !j["kernel_b"].is_null()) s.kernel_b = kernel_from_json(j["kernel_b"]);
    s.n_grid = j.at("n_grid").get<std::vector<int>>();
    s.beta = j.value("beta", s.beta);
    s.beta_b = j.value("beta_b", s.beta_b);
    s.seeds = j.value("seeds", s.seeds);
    s.risk_eval = j.value("risk_eval", s.risk_eval);
    s.gap_tol = j.value("gap_tol", s.gap_tol);
    s.max_epochs = j.value("max_epochs", s.max_epochs);
    s.workers = j.value("workers", s.workers);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("experiment config: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const ExperimentSpec& s) {
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& t : s.target) {
    nlohmann::json tj{{"kind", t.kind}, {"amplitude", t.amplitude}};
    if (t.kind == "gaussian_bump") {
      tj["center"] = t.center;
      tj["sigma"] = t.sigma;
    } else if (t.kind == "sinusoid") {
      tj["frequency"] = t.frequency;
      tj["phase"] = t.phase;
    } else {
      tj["coefficients"] = t.coefficients;
    }
    targets.push_back(tj);
  }
  nlohmann::json ka, kb;
  to_json(ka, s.kernel_a);
  if (s.kernel_b) to_json(kb, *s.kernel_b);
  j = {{"layout", s.layout.dims()},
       {"target", targets},
       {"noise", {{"kind", s.noise.kind}, {"halfwidth", s.noise.halfwidth}}},
       {"tau", s.tau},
       {"kernel_a", ka},
       {"kernel_b", kb},
       {"n_grid", s.n_grid},
       {"beta", s.beta},
       {"beta_b", s.beta_b},
       {"seeds", s.seeds},
       {"risk_eval", s.risk_eval},
       {"gap_tol", s.gap_tol},
       {"max_epochs", s.max_epochs},
       {"workers", s.workers}};
}

namespace {

PointMatrix uniform_inputs(Eigen::Index n, int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointMatrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) x(i, c) = u(rng);
  return x;
}

}  // namespace

DataSet generate(const ExperimentSpec& spec, int n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw InputError("generate: n must be positive");
  std::mt19937_64 rng(seed);
  DataSet data;
  data.inputs = uniform_inputs(n, spec.layout.total_dim(), rng);
  data.responses.resize(n);
  const double a = spec.noise.halfwidth;
  const double shift = -a * (2 * spec.tau - 1);
  std::uniform_real_distribution<double> eps(-a, a);
  for (Eigen::Index i = 0; i < n; ++i) data.responses(i) = spec.target_value(data.inputs.row(i).data()) + eps(rng) + shift;
  return data;
}

double conditional_excess(const ExperimentSpec& spec, double delta) {
  // Noise around the quantile is uniform on [-2 a tau, 2 a (1 - tau)].
  const double a = spec.noise.halfwidth, tau = spec.tau;
  const double hi = 2 * a * (1 - tau), lo = -2 * a * tau;
  if (delta > hi) return a * (1 - tau) * (1 - tau) + (1 - tau) * (delta - hi);
  if (delta < lo) return a * tau * tau + tau * (lo - delta);
  return delta * delta / (4 * a);
}

double true_excess_risk(const Predictor& predictor, const ExperimentSpec& spec, int M, std::uint64_t seed) {
  if (M < 1) throw InputError("true_excess_risk: M must be positive");
  std::mt19937_64 rng(seed);
  const PointMatrix x = uniform_inputs(M, spec.layout.total_dim(), rng);
  const Vector t = predictor(x);
  if (t.size() != M) throw InputError("true_excess_risk: predictor returned the wrong length");
  double acc = 0;
  for (Eigen::Index i = 0; i < M; ++i) acc += conditional_excess(spec, t(i) - spec.target_value(x.row(i).data()));
  return acc / M;
}

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> lx, ly;
  SlopeFit out;
  for (const auto& [n, e] : points) {
    if (!(e > 0) || !(n > 0)) {
      ++out.dropped;
      continue;
    }
    lx.push_back(std::log(n));
    ly.push_back(std::log(e));
  }
  if (lx.size() < 3) throw InputError("fit_slope: need at least 3 points with positive excess");
  const Eigen::Index k = static_cast<Eigen::Index>(lx.size());
  const Vector x = Eigen::Map<const Vector>(lx.data(), k), y = Eigen::Map<const Vector>(ly.data(), k);
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  if (!(sxx > 0)) throw InputError("fit_slope: sample sizes must differ");
  out.slope = ((x.array() - mx) * (y.array() - my)).sum() / sxx;
  out.intercept = my - out.slope * mx;
  const double sst = (y.array() - my).square().sum();
  const double sse = (y.array() - out.intercept - out.slope * x.array()).square().sum();
  out.r2 = sst > 0 ? 1 - sse / sst : 1.0;
  return out;
}

ExperimentResult rate_experiment(const ExperimentSpec& spec) {
  spec.validate();
  struct Job {
    int kernel;
    int n;
    std::uint64_t seed;
  };
  std::vector<const KernelSpec*> kernels{&spec.kernel_a};
  if (spec.kernel_b) kernels.push_back(&*spec.kernel_b);
  const char* names[] = {"a", "b"};
  std::vector<Job> jobs;
  for (int k = 0; k < static_cast<int>(kernels.size()); ++k)
    for (const int n : spec.n_grid)
      for (const auto seed : spec.seeds) jobs.push_back({k, n, seed});

  ExperimentResult result;
  result.jobs.resize(jobs.size());
  auto run = [&](const Job& job) {
    JobResult r;
    r.kernel = names[job.kernel];
    r.n = job.n;
    r.seed = job.seed;
    const double beta = job.kernel == 0 ? spec.beta : spec.beta_b;
    r.lambda = std::pow(static_cast<double>(job.n), -beta);
    // Data and evaluation inputs depend on (seed, n) only, so kernels are compared on the same samples.
    const auto data_seed = mix_seed(job.seed, static_cast<std::uint64_t>(job.n));
    const DataSet data = generate(spec, job.n, data_seed);
    FitOptions opts;
    opts.gap_tol = spec.gap_tol;
    opts.max_epochs = spec.max_epochs;
    opts.seed = mix_seed(data_seed, static_cast<std::uint64_t>(job.kernel + 1));
    try {
      const Model model = fit(*kernels[job.kernel], data, r.lambda, spec.tau, opts);
      r.gap = model.gap;
      const double bound = data.response_bound();
      const auto risk_seed = mix_seed(data_seed, 0x5249534bULL);
      r.excess_raw = true_excess_risk([&](const PointMatrix& x) { return predict(model, x); }, spec, spec.risk_eval,
                                      risk_seed);
      r.excess = bound > 0 ? true_excess_risk(
                                 [&](const PointMatrix& x) { return Vector(clip(bound, predict(model, x))); }, spec,
                                 spec.risk_eval, risk_seed)
                           : r.excess_raw;
    } catch (const ConvergenceError& e) {
      r.failed = true;
      r.gap = e.last_gap();
      r.notice = e.what();
    }
    return r;
  };

  const int workers = std::min<int>(spec.workers, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) result.jobs[i] = run(jobs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) result.jobs[i] = run(jobs[i]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
          next = jobs.size();
        }
      });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (int k = 0; k < static_cast<int>(kernels.size()); ++k) {
    RateFit rf;
    rf.kernel = names[k];
    std::vector<std::pair<double, double>> points;
    for (const int n : spec.n_grid) {
      std::vector<double> values;
      for (const auto& j : result.jobs)
        if (j.kernel == rf.kernel && j.n == n) {
          if (j.failed) {
            result.notices.push_back("kernel " + j.kernel + " n=" + std::to_string(n) + " seed=" +
                                     std::to_string(j.seed) + " excluded: " + j.notice);
            continue;
          }
          values.push_back(j.excess);
        }
      if (values.empty()) continue;
      const Eigen::Map<const Vector> v(values.data(), static_cast<Eigen::Index>(values.size()));
      const double mean = v.mean();
      rf.n.push_back(n);
      rf.mean_excess.push_back(mean);
      rf.spread.push_back(std::sqrt((v.array() - mean).square().sum() / std::max<Eigen::Index>(1, v.size() - 1)));
      points.emplace_back(n, mean);
    }
    try {
      rf.fit = fit_slope(points);
    } catch (const InputError& e) {
      result.notices.push_back("kernel " + rf.kernel + ": " + e.what());
      rf.fit.slope = std::numeric_limits<double>::quiet_NaN();
    }
    result.fits.push_back(rf);
  }
  return result;
}

void write_results_csv(std::ostream& out, const ExperimentResult& result) {
  out << "kernel,n,seed,excess,lambda,gap,excess_raw\n" << std::setprecision(17);
  for (const auto& j : result.jobs) {
    if (j.failed) continue;
    out << j.kernel << ',' << j.n << ',' << j.seed << ',' << j.excess << ',' << j.lambda << ',' << j.gap << ','
        << j.excess_raw << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  out << "kernel,slope,intercept,r2\n" << std::setprecision(17);
  for (const auto& f : result.fits) out << f.kernel << ',' << f.fit.slope << ',' << f.fit.intercept << ',' << f.fit.r2 << '\n';
}

SeriesValue example1_series(int M) {
  if (M < 0) throw InputError("example1_series: M must be nonnegative");
  const double c = 2 * std::sqrt(std::numbers::pi) / std::exp(2.0);
  SeriesValue out{1.0, 1.0};
  double t = 1;
  for (int m = 0; m < M; ++m) {
    t *= (2.0 * m + 1) / (2.0 * m + 2);
    out.partial_sum += t;
    out.lower_bound += c / std::sqrt(m + 1.0);
  }
  return out;
}

MembershipReport example1_membership(double sigma, int grid_m) {
  if (!(sigma > 0)) throw InputError("example1_membership: sigma must be positive");
  if (grid_m < 1) throw InputError("example1_membership: grid_m must be positive");
  MembershipReport rep;
  // f = k_1(., 0) + 0 as a one-term expansion in the first block of k_1 + k_2.
  const auto k1 = KernelSpec::gaussian(sigma);
  PointMatrix origin = PointMatrix::Zero(1, 1);
  rep.additive_norm = std::sqrt(rkhs_norm_sq(Vector::Ones(1), gram(k1, origin)));
  for (long long m = 1; m <= grid_m; m *= 10) {
    const auto v = example1_series(static_cast<int>(m));
    rep.m.push_back(static_cast<int>(m));
    rep.partial_sum.push_back(v.partial_sum);
    rep.lower_bound.push_back(v.lower_bound);
  }
  if (rep.m.back() != grid_m) {
    const auto v = example1_series(grid_m);
    rep.m.push_back(grid_m);
    rep.partial_sum.push_back(v.partial_sum);
    rep.lower_bound.push_back(v.lower_bound);
  }
  return rep;
}

}  // namespace akqr
