#pragma once

#include "akqr/common.hpp"
#include "akqr/dataset.hpp"
#include "akqr/kernels.hpp"
#include "json.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace akqr {

/// Closed-form function of one coordinate block.
///   gaussian_bump: amplitude * exp(-||x - center||^2 / sigma^2)
///   sinusoid:      amplitude * sin(2 pi frequency * mean(x) + phase)
///   polynomial:    sum_k coefficients[k] * mean(x)^k
struct TargetSpec {
  std::string kind = "gaussian_bump";
  double amplitude = 1;
  double center = 0.5;
  double sigma = 0.5;
  double frequency = 1;
  double phase = 0;
  std::vector<double> coefficients;

  double operator()(const double* x, int width) const;
};

/// Uniform noise on [-a, a] shifted by -a (2 tau - 1), so the conditional
/// tau-quantile of Y given x is exactly the target.
struct NoiseSpec {
  std::string kind = "uniform_symmetric";
  double halfwidth = 0.5;
};

struct ExperimentSpec {
  BlockLayout layout = BlockLayout::uniform(1);
  std::vector<TargetSpec> target{TargetSpec{}};
  NoiseSpec noise;
  double tau = 0.5;
  KernelSpec kernel_a = KernelSpec::gaussian(0.5);
  std::optional<KernelSpec> kernel_b;
  std::vector<int> n_grid{100, 200, 400};
  /// lambda_n = n^{-beta} for kernel_a.
  double beta = 4.0 / 3.0;
  /// lambda_n = n^{-beta_b} for kernel_b.
  double beta_b = 1;
  std::vector<std::uint64_t> seeds{0};
  /// Number of fresh inputs for the true-risk estimate.
  int risk_eval = 20000;
  double gap_tol = 1e-8;
  int max_epochs = 10000;
  int workers = 1;

  void validate() const;
  double target_value(const double* x) const;
};

ExperimentSpec experiment_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const ExperimentSpec& spec);

/// X uniform on [0,1]^d and Y = f*(X) + noise. Deterministic per seed.
DataSet generate(const ExperimentSpec& spec, int n, std::uint64_t seed);

/// E[L*(Y, f*(x) + delta) - L*(Y, f*(x)) | x] for the spec's noise.
double conditional_excess(const ExperimentSpec& spec, double delta);

using Predictor = std::function<Vector(const PointMatrix&)>;

/// Monte Carlo over x of the closed-form conditional excess risk.
double true_excess_risk(const Predictor& predictor, const ExperimentSpec& spec, int M, std::uint64_t seed);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  /// Points dropped for non-positive excess.
  int dropped = 0;
};

/// Least squares on (log n, log excess). Needs >= 3 positive points.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points);

struct JobResult {
  std::string kernel;
  int n = 0;
  std::uint64_t seed = 0;
  double excess = 0;
  double lambda = 0;
  double gap = 0;
  double excess_raw = 0;
  bool failed = false;
  std::string notice;
};

struct RateFit {
  std::string kernel;
  std::vector<int> n;
  std::vector<double> mean_excess;
  std::vector<double> spread;
  SlopeFit fit;
};

struct ExperimentResult {
  std::vector<JobResult> jobs;
  std::vector<RateFit> fits;
  std::vector<std::string> notices;
};

/// Runs every (kernel, n, seed) job, clips predictions at max|y| of the
/// sample, and fits the decay slope of the mean clipped excess per kernel.
/// Data for a given (n, seed) is shared by both kernels.
ExperimentResult rate_experiment(const ExperimentSpec& spec);

/// Results: kernel,n,seed,excess,lambda,gap,excess_raw. Summary: kernel,slope,intercept,r2.
void write_results_csv(std::ostream& out, const ExperimentResult& result);
void write_summary_csv(std::ostream& out, const ExperimentResult& result);

struct SeriesValue {
  double partial_sum = 0;
  double lower_bound = 0;
};

/// S_M = sum_{m=0}^M (2m)! / (2^{2m} (m!)^2) and 1 + sum_{m=1}^M 2 sqrt(pi) / (e^2 sqrt(m)).
SeriesValue example1_series(int M);

struct MembershipReport {
  double additive_norm = 0;
  std::vector<int> m;
  std::vector<double> partial_sum;
  std::vector<double> lower_bound;
};

/// Norm of k_1(., 0) in the additive RKHS on [0,1]^2 and the product-kernel
/// series partial sums at M = 1, 10, 100, ... up to grid_m.
MembershipReport example1_membership(double sigma, int grid_m);

}  // namespace akqr
