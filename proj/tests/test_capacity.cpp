#include "doctest.h"

#include "akqr/capacity.hpp"

#include <random>

using namespace akqr;

namespace {

PointMatrix grid_points(int m, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  PointMatrix x(m, d);
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < d; ++c) x(i, c) = u(rng);
  return x;
}

}  // namespace

TEST_CASE("empirical distance") {
  CHECK(empirical_distance(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 2, 3)) == 0.0);
  CHECK(empirical_distance(Vector::Ones(1), Vector::Zero(1)) == 1.0);
  CHECK(empirical_distance(Vector::Ones(4), Vector::Zero(4)) == 1.0);
  CHECK_THROWS_AS(empirical_distance(Vector::Ones(4), Vector::Zero(3)), InputError);
}

TEST_CASE("ball samples respect the norm bound") {
  const auto spec = KernelSpec::gaussian(0.5);
  const PointMatrix x = grid_points(8, 1, 1);
  const Matrix k = gram(spec, x).entries;
  const Matrix f = sample_ball(spec, x, 1.5, 200, 3);
  // sup |f| <= R sqrt(k(x, x)) for every function in the ball.
  CHECK(f.cwiseAbs().maxCoeff() <= 1.5 + 1e-12);
  const Matrix kinv = k.completeOrthogonalDecomposition().pseudoInverse();
  for (Eigen::Index c = 0; c < f.cols(); ++c) CHECK(f.col(c).dot(kinv * f.col(c)) <= 1.5 * 1.5 * (1 + 1e-6));
}

TEST_CASE("cover_ball examples") {
  const auto spec = KernelSpec::gaussian(0.5);
  const PointMatrix x = grid_points(10, 1, 2);
  CHECK(cover_ball(spec, x, 1.0, 2.0, {2000, 0}).count() == 1);
  CHECK(cover_ball(spec, x, 0.0, 0.01, {2000, 0}).count() == 1);
  Eigen::Index previous = 0;
  for (const double eps : {0.8, 0.4, 0.2, 0.1}) {
    const auto net = cover_ball(spec, x, 1.0, eps, {5000, 7});
    CHECK(net.count() >= previous);
    previous = net.count();
  }
  const auto scaled = cover_ball(spec, x, 2.0, 0.2, {5000, 4});
  const auto unit = cover_ball(spec, x, 1.0, 0.1, {5000, 4});
  CHECK(scaled.count() == unit.count());
  CHECK_THROWS_AS(cover_ball(spec, x, 1.0, 0.0), InputError);
}

TEST_CASE("additive net") {
  const PointMatrix x = grid_points(6, 2, 3);
  const auto layout = BlockLayout::uniform(2);
  EmpiricalNet a{Matrix::Random(6, 3), 0.1, block_columns(x, layout, 0)};
  EmpiricalNet b{Matrix::Random(6, 4), 0.1, block_columns(x, layout, 1)};
  const auto net = additive_net({a, b}, layout);
  CHECK(net.count() == 12);
  CHECK(net.radius == doctest::Approx(0.2));
  CHECK((net.centers.col(5) - (a.centers.col(1) + b.centers.col(1))).norm() == 0.0);
  CHECK(net.points == x);

  const auto single = additive_net({a}, BlockLayout::uniform(1));
  CHECK(single.centers == a.centers);
  EmpiricalNet wrong{Matrix::Random(5, 2), 0.1, PointMatrix::Zero(5, 1)};
  CHECK_THROWS_AS(additive_net({a, wrong}, layout), InputError);
}

TEST_CASE("product net covers additive ball functions at radius s eps") {
  const PointMatrix x = grid_points(10, 2, 4);
  const auto layout = BlockLayout::uniform(2);
  const auto spec = KernelSpec::gaussian(0.5);
  for (const double eps : {0.5, 0.25}) {
    std::vector<EmpiricalNet> nets;
    std::vector<Matrix> fresh;
    for (int j = 0; j < 2; ++j) {
      nets.push_back(cover_ball(spec, block_columns(x, layout, j), 1.0, eps, {20000, 10u + j}));
      fresh.push_back(sample_ball(spec, block_columns(x, layout, j), 1.0, 300, 50u + j));
    }
    for (Eigen::Index k = 0; k < 300; ++k) {
      const auto match = nearest_product_center(nets, {fresh[0].col(k), fresh[1].col(k)});
      CHECK(match.distance <= match.block_distance[0] + match.block_distance[1] + 1e-12);
      CHECK(match.distance <= 2 * eps);
    }
  }
}

TEST_CASE("capacity report") {
  const PointMatrix x = grid_points(8, 2, 5);
  const auto layout = BlockLayout::uniform(2);
  const std::vector<KernelSpec> comps{KernelSpec::gaussian(0.5), KernelSpec::gaussian(0.5)};
  const auto rows = check_capacity_bound(comps, layout, x, 1.0, {0.5, 0.25, 0.125}, 5.0, 1.0, {3000, 1});
  REQUIRE(rows.size() == 9);
  double block_sum = 0, previous = -1;
  for (const auto& r : rows) {
    if (r.block == "additive") {
      CHECK(std::abs(r.log_count - block_sum) <= 1e-12);
      CHECK(r.log_count >= previous);
      previous = r.log_count;
      block_sum = 0;
    } else {
      block_sum += r.log_count;
    }
    CHECK(r.pass == (r.log_count <= r.bound));
  }
  CHECK_THROWS_AS(check_capacity_bound(comps, layout, x, 0.5, {0.5}, 5.0, 1.0), InputError);
}
