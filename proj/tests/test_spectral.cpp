#include "doctest.h"

#include "akqr/oracles.hpp"
#include "akqr/spectral.hpp"

#include <random>

using namespace akqr;

namespace {

DiscreteMeasure random_measure(std::mt19937_64& rng, int m, int d = 1) {
  std::uniform_real_distribution<double> u(0, 1), uw(0.1, 1);
  DiscreteMeasure mu{PointMatrix(m, d), Vector(m)};
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < d; ++c) mu.points(i, c) = u(rng);
    mu.weights(i) = uw(rng);
  }
  mu.weights /= mu.weights.sum();
  return mu;
}

Vector random_vector(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> nd;
  Vector v(m);
  for (auto& e : v) e = nd(rng);
  return v;
}

}  // namespace

TEST_CASE("operator matrix examples") {
  DiscreteMeasure one{PointMatrix::Constant(1, 1, 0.3), Vector::Ones(1)};
  CHECK(operator_matrix(KernelSpec::gaussian(1), one)(0, 0) == 1.0);

  std::mt19937_64 rng(1);
  const auto mu = random_measure(rng, 6);
  const auto uni = DiscreteMeasure::uniform(mu.points);
  const auto spec = KernelSpec::sobolev_min();
  CHECK((operator_matrix(spec, uni) - gram(spec, mu.points).entries / 6.0).cwiseAbs().maxCoeff() <= 1e-15);
  const Matrix op = operator_matrix(spec, mu);
  double trace = 0;
  for (int p = 0; p < 6; ++p) trace += mu.weights(p) * (1 + mu.points(p, 0));
  CHECK(std::abs(op.trace() - trace) <= 1e-14);
  CHECK_THROWS_AS(operator_matrix(KernelSpec::additive(BlockLayout::uniform(1), {spec}), mu), InputError);
  DiscreteMeasure bad = mu;
  bad.weights(0) += 0.1;
  CHECK_THROWS_AS(operator_matrix(spec, bad), InputError);
}

TEST_CASE("decompose invariants") {
  const auto id = decompose(Matrix::Identity(3, 3));
  CHECK((id.eigenvalues - Vector::Ones(3)).cwiseAbs().maxCoeff() <= 1e-15);

  DiscreteMeasure one{PointMatrix::Constant(1, 1, 0.3), Vector::Ones(1)};
  const auto single = decompose(KernelSpec::sobolev_min(), one);
  CHECK(single.eigenvalues(0) == doctest::Approx(1.3).epsilon(1e-15));
  CHECK(std::abs(single.eigenfunctions(0, 0)) == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const auto mu = random_measure(rng, 6, 2);
    const auto spec = KernelSpec::gaussian(0.5);
    const auto d = decompose(spec, mu);
    const Matrix gram_w = d.eigenfunctions.transpose() * mu.weights.asDiagonal() * d.eigenfunctions;
    CHECK((gram_w - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-8);
    for (int l = 1; l < 6; ++l) CHECK(d.eigenvalues(l) <= d.eigenvalues(l - 1));
    CHECK(d.eigenvalues.minCoeff() >= 0.0);
    const Vector s = mu.weights.cwiseSqrt();
    const Matrix rebuilt =
        s.asDiagonal() * d.eigenfunctions * d.eigenvalues.asDiagonal() * d.eigenfunctions.transpose() * s.asDiagonal();
    CHECK((rebuilt - operator_matrix(spec, mu)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("power_apply") {
  std::mt19937_64 rng(3);
  const auto mu = random_measure(rng, 7);
  const auto spec = KernelSpec::gaussian(0.6);
  const auto d = decompose(spec, mu);
  const BlockFunction g{random_vector(rng, 7), {}, {}};

  // r = 1 is the integral operator itself.
  const Vector direct = gram(spec, mu.points).entries * mu.weights.cwiseProduct(g.values);
  CHECK((power_apply(d, 1.0, g).values - direct).cwiseAbs().maxCoeff() <= 1e-9);

  const auto half_half = power_apply(d, 0.5, power_apply(d, 0.5, g));
  CHECK((half_half.values - power_apply(d, 1.0, g).values).cwiseAbs().maxCoeff() <= 1e-9);
  const auto semigroup = power_apply(d, 0.3, power_apply(d, 0.45, g));
  CHECK((semigroup.values - power_apply(d, 0.75, g).values).cwiseAbs().maxCoeff() <= 1e-9);

  CHECK_THROWS_AS(power_apply(d, 0.0, g), InputError);

  // Square-root range: ||L^{1/2} g||_H equals the L_2 norm of g off the null space.
  const auto root = power_apply(d, 0.5, g);
  REQUIRE(root.rkhs_norm_sq.has_value());
  const Vector c = d.coefficients(g.values);
  double range_part = 0;
  for (int l = 0; l < 7; ++l)
    if (d.eigenvalues(l) > d.cutoff) range_part += c(l) * c(l);
  CHECK(std::abs(*root.rkhs_norm_sq - range_part) <= 1e-8 * (1 + range_part));
  // The expansion reproduces the values and its norm.
  REQUIRE(root.expansion.has_value());
  const Matrix k = gram(spec, mu.points).entries;
  CHECK((k * *root.expansion - root.values).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("power_apply annihilates the null space") {
  // Two identical points: the operator has rank one.
  DiscreteMeasure mu{PointMatrix::Constant(2, 1, 0.4), Vector::Constant(2, 0.5)};
  const auto d = decompose(KernelSpec::gaussian(1), mu);
  const BlockFunction g{Eigen::Vector2d(1, -1), {}, {}};
  CHECK(power_apply(d, 0.5, g).values.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_FALSE(make_block_function(d, g.values).rkhs_norm_sq.has_value());
}

TEST_CASE("intermediate function") {
  DiscreteMeasure one{PointMatrix::Constant(1, 1, 0.0), Vector::Ones(1)};
  const auto d = decompose(KernelSpec::gaussian(1), one);
  const BlockFunction psi{d.eigenfunctions.col(0), {}, {}};
  const auto f = intermediate(d, psi, 0.5);
  CHECK(d.coefficients(f.values)(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(intermediate(d, psi, 1e12).values(0)) <= 1e-11);

  std::mt19937_64 rng(4);
  const auto mu = random_measure(rng, 5);
  const auto dd = decompose(KernelSpec::gaussian(0.5), mu);
  const BlockFunction g{random_vector(rng, 5), {}, {}};
  const Vector c = dd.coefficients(g.values), cl = dd.coefficients(intermediate(dd, g, 0.1).values);
  for (int l = 0; l < 5; ++l) {
    if (std::abs(c(l)) < 1e-12) continue;
    const double ratio = cl(l) / c(l);
    CHECK(ratio >= -1e-12);
    CHECK(ratio < 1.0);
  }
}

TEST_CASE("lemma2 check") {
  DiscreteMeasure one{PointMatrix::Constant(1, 1, 0.0), Vector::Ones(1)};
  const auto d = decompose(KernelSpec::gaussian(1), one);
  const auto res = lemma2_check(d, {Vector::Ones(1), {}, {}}, 0.5, 0.5);
  CHECK(res.lhs == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(res.rhs == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(lemma2_check(d, {Vector::Ones(1), {}, {}}, 0.5, 1e-10).lhs <= 1e-9);
  CHECK_THROWS_AS(lemma2_check(d, {Vector::Ones(1), {}, {}}, 0.6, 0.5), InputError);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  const auto mu = random_measure(rng, 8);
  const auto spec = KernelSpec::gaussian(0.4);
  const auto dd = decompose(spec, mu);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector g = random_vector(rng, 8);
    const double r = 0.5 * (1 - u(rng)), lambda = 1 - u(rng);
    const auto out = lemma2_check(dd, {g, {}, {}}, r, lambda);
    CHECK(out.lhs <= out.rhs + 1e-9);
    const auto ref = oracle::lemma2(gram(spec, mu.points).entries, mu.weights, g, r, lambda);
    CHECK(std::abs(out.lhs - ref.lhs) <= 1e-8 * (1 + ref.lhs));
    CHECK(std::abs(out.rhs - ref.rhs) <= 1e-12 * (1 + ref.rhs));
  }
}

TEST_CASE("approximation error") {
  std::mt19937_64 rng(6);
  ApproxProblem prob;
  for (int j = 0; j < 2; ++j) {
    prob.specs.push_back(KernelSpec::gaussian(0.5));
    prob.measures.push_back(random_measure(rng, 6));
    prob.gstars.push_back(random_vector(rng, 6));
  }
  FitOptions o;
  o.gap_tol = 1e-11;
  o.max_epochs = 200000;

  const auto pd = approx_data(prob);
  CHECK(pd.data.size() == 3 * 36);
  CHECK(std::abs(pd.data.weights->sum() - 1.0) <= 1e-12);

  double previous = -1;
  for (const double lambda : {0.01, 0.1, 0.5, 1.0}) {
    const auto res = approx_error(prob, lambda, o);
    CHECK(res.d_measured <= res.d_bound + 1e-6);
    CHECK(res.d_measured >= previous - 1e-8);
    previous = res.d_measured;
  }

  ApproxProblem zero = prob;
  for (auto& g : zero.gstars) g.setZero();
  CHECK(approx_error(zero, 0.1, o).d_measured <= 1e-8);
}
