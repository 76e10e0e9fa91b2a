#pragma once

#include "akqr/common.hpp"
#include "akqr/kernels.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace akqr {

/// Root-mean-square distance between two value vectors.
double empirical_distance(const Eigen::Ref<const Vector>& f, const Eigen::Ref<const Vector>& g);

/// A finite net: column c of centers holds one function's values at the
/// evaluation points.
struct EmpiricalNet {
  Matrix centers;
  double radius = 0;
  PointMatrix points;

  Eigen::Index count() const { return centers.cols(); }
};

/// Value vectors of functions in {f in H : ||f||_H <= R} restricted to the
/// points. Each column is one draw: a uniform direction on the ellipsoid
/// scaled by R u^{1/m}, u uniform.
Matrix sample_ball(const KernelSpec& spec, const PointMatrix& points, double R, Eigen::Index count,
                   std::uint64_t seed);

struct CoverOptions {
  Eigen::Index samples = 20000;
  std::uint64_t seed = 0;
};

/// Greedy farthest-point net over seeded ball samples. Every sample lies
/// within eps of a center; the size is an estimate of the covering number.
EmpiricalNet cover_ball(const KernelSpec& spec, const PointMatrix& points, double R, double eps,
                        const CoverOptions& opts = {});

/// All sums of one center per block, evaluated on the full points. Covers
/// the additive ball at radius s * eps.
EmpiricalNet additive_net(const std::vector<EmpiricalNet>& nets, const BlockLayout& layout);

/// Index of the product center assembled from the nearest center of each
/// block, with the per-block distances that bound the total.
struct ProductMatch {
  std::vector<Eigen::Index> block_index;
  std::vector<double> block_distance;
  double distance = 0;
};

ProductMatch nearest_product_center(const std::vector<EmpiricalNet>& nets,
                                    const std::vector<Vector>& block_values);

struct CapacityRow {
  double eps = 0;
  std::string block;
  double log_count = 0;
  double bound = 0;
  bool pass = false;
};

/// For each eps: per-block log-counts compared with c_zeta (R/eps)^zeta, and
/// the additive log-count compared with s^{1+zeta} c_zeta (R/eps)^zeta.
/// Rows are reported, not asserted.
std::vector<CapacityRow> check_capacity_bound(const std::vector<KernelSpec>& components, const BlockLayout& layout,
                                              const PointMatrix& points, double R,
                                              const std::vector<double>& eps_grid, double c_zeta, double zeta,
                                              const CoverOptions& opts = {});

}  // namespace akqr
