#include "akqr/capacity.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace akqr {

double empirical_distance(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& g) {
  if (f.size() != g.size() || f.size() < 1) throw InputError("empirical_distance: lengths must match and be >= 1");
  return std::sqrt((f - g).squaredNorm() / static_cast<double>(f.size()));
}

Matrix sample_ball(const KernelSpec& spec, const PointMatrix& points, double R, Eigen::Index count,
                   std::uint64_t seed) {
  if (points.rows() < 1) throw InputError("sample_ball: need at least one point");
  if (!(R >= 0)) throw InputError("sample_ball: R must be nonnegative");
  const auto m = points.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram(spec, points).entries);
  if (es.info() != Eigen::Success) throw NumericError("sample_ball: eigensolver failed");
  const Matrix map = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  Matrix v(m, count);
  for (Eigen::Index c = 0; c < count; ++c) {
    Vector z(m);
    for (auto& e : z) e = normal(rng);
    const double norm = z.norm();
    const double radius = R * std::pow(uniform(rng), 1.0 / static_cast<double>(m));
    v.col(c) = norm > 0 ? Vector(z * (radius / norm)) : Vector::Zero(m);
  }
  return map * v;
}

EmpiricalNet cover_ball(const KernelSpec& spec, const PointMatrix& points, double R, double eps,
                        const CoverOptions& opts) {
  if (!(eps > 0)) throw InputError("cover_ball: eps must be positive");
  if (opts.samples < 1) throw InputError("cover_ball: need at least one sample");
  const Matrix samples = sample_ball(spec, points, R, opts.samples, opts.seed);
  const auto count = samples.cols();
  const double scale = static_cast<double>(samples.rows());

  // Squared RMS distance of every sample to its nearest chosen center.
  Vector nearest = Vector::Constant(count, std::numeric_limits<double>::infinity());
  std::vector<Eigen::Index> chosen;
  Eigen::Index next = 0;
  while (true) {
    chosen.push_back(next);
    const auto center = samples.col(next);
    for (Eigen::Index c = 0; c < count; ++c)
      nearest(c) = std::min(nearest(c), (samples.col(c) - center).squaredNorm() / scale);
    const double worst = nearest.maxCoeff(&next);
    if (std::sqrt(worst) <= eps) break;
  }

  EmpiricalNet net;
  net.radius = eps;
  net.points = points;
  net.centers.resize(samples.rows(), static_cast<Eigen::Index>(chosen.size()));
  for (std::size_t k = 0; k < chosen.size(); ++k) net.centers.col(static_cast<Eigen::Index>(k)) = samples.col(chosen[k]);
  return net;
}

EmpiricalNet additive_net(const std::vector<EmpiricalNet>& nets, const BlockLayout& layout) {
  const int s = layout.blocks();
  if (static_cast<int>(nets.size()) != s || s < 1) throw InputError("additive_net: need one net per block");
  const auto m = nets[0].points.rows();
  double total = 1;
  for (int j = 0; j < s; ++j) {
    if (nets[j].points.rows() != m || nets[j].points.cols() != layout.width(j))
      throw InputError("additive_net: block point sets are incompatible");
    if (nets[j].count() < 1) throw InputError("additive_net: empty block net");
    total *= static_cast<double>(nets[j].count());
  }
  if (total > 5e6) throw InputError("additive_net: product net too large to materialise");

  EmpiricalNet out;
  out.radius = s * nets[0].radius;
  for (int j = 1; j < s; ++j) out.radius = std::max(out.radius, s * nets[j].radius);
  out.points.resize(m, layout.total_dim());
  for (int j = 0; j < s; ++j) out.points.middleCols(layout.offset(j), layout.width(j)) = nets[j].points;

  const auto n = static_cast<Eigen::Index>(total);
  out.centers = Matrix::Zero(m, n);
  // Column index is the mixed-radix number (i_1, ..., i_s) with i_s fastest.
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index rest = c;
    for (int j = s - 1; j >= 0; --j) {
      out.centers.col(c) += nets[j].centers.col(rest % nets[j].count());
      rest /= nets[j].count();
    }
  }
  return out;
}

ProductMatch nearest_product_center(const std::vector<EmpiricalNet>& nets, const std::vector<Vector>& block_values) {
  if (nets.size() != block_values.size() || nets.empty())
    throw InputError("nearest_product_center: need one value vector per block");
  ProductMatch match;
  Vector center = Vector::Zero(block_values[0].size());
  Vector total = Vector::Zero(block_values[0].size());
  for (std::size_t j = 0; j < nets.size(); ++j) {
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < nets[j].count(); ++c) {
      const double d = empirical_distance(block_values[j], nets[j].centers.col(c));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    match.block_index.push_back(best);
    match.block_distance.push_back(best_d);
    center += nets[j].centers.col(best);
    total += block_values[j];
  }
  match.distance = empirical_distance(total, center);
  return match;
}

std::vector<CapacityRow> check_capacity_bound(const std::vector<KernelSpec>& components, const BlockLayout& layout,
                                              const PointMatrix& points, double R,
                                              const std::vector<double>& eps_grid, double c_zeta, double zeta,
                                              const CoverOptions& opts) {
  const int s = layout.blocks();
  if (static_cast<int>(components.size()) != s) throw InputError("capacity: need one kernel per block");
  if (points.cols() != layout.total_dim()) throw InputError("capacity: point dimension differs from layout");
  if (!(R >= 1)) throw InputError("capacity: R must be at least 1");
  if (!(zeta > 0) || !(zeta < 2) || !(c_zeta > 0)) throw InputError("capacity: need c_zeta > 0, 0 < zeta < 2");

  std::vector<CapacityRow> rows;
  for (const double eps : eps_grid) {
    const double block_bound = c_zeta * std::pow(R / eps, zeta);
    double log_sum = 0;
    for (int j = 0; j < s; ++j) {
      CoverOptions o = opts;
      o.seed = mix_seed(opts.seed, static_cast<std::uint64_t>(j));
      const auto net = cover_ball(components[j], block_columns(points, layout, j), R, eps, o);
      const double lc = std::log(static_cast<double>(net.count()));
      log_sum += lc;
      rows.push_back({eps, std::to_string(j), lc, block_bound, lc <= block_bound});
    }
    // Product net at radius s * eps; its bound is s^{1+zeta} c_zeta (R / (s eps))^zeta.
    const double additive_bound = std::pow(s, 1 + zeta) * c_zeta * std::pow(R / (s * eps), zeta);
    rows.push_back({eps, "additive", log_sum, additive_bound, log_sum <= additive_bound});
  }
  return rows;
}

}  // namespace akqr
