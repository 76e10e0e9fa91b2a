#include "doctest.h"

#include "akqr/rates.hpp"
#include "akqr/common.hpp"

#include <cmath>
#include <limits>

using namespace akqr;

TEST_CASE("alpha_general examples") {
  const auto a = alpha_general({0.5, 1, 1, 1});
  CHECK(a.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(a.argmin_term == 3);
  CHECK(a.value == a.terms[a.argmin_term - 1]);
  CHECK(alpha_general({0.5, 1, 1, 1.9}).value == doctest::Approx(1.0 / 39.0).epsilon(1e-12));
  CHECK(round3(alpha_general({0.5, 1, 1, 1.9}).value) == 0.026);
  CHECK(alpha_general({0.25, 1, 0.5, 1}).value == doctest::Approx(4 / 3.5 - 1).epsilon(1e-12));
  CHECK(alpha_general({0.1, 1, 0.1, 0.1}).value == doctest::Approx(4 / 3.81 - 1).epsilon(1e-12));
  CHECK_THROWS_AS(alpha_general({0.6, 1, 1, 1}), InputError);
  CHECK_THROWS_AS(alpha_general({0.5, 1, 1, 2}), InputError);
  CHECK_THROWS_AS(alpha_general({0.5, 1, 1.5, 1}), InputError);
}

TEST_CASE("quantile exponents") {
  const auto inf = TypeExponent::infinity();
  CHECK(alpha_quantile(TypeExponent(2)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(alpha_quantile(inf) == 2.0 / 3.0);
  CHECK(alpha_quantile(TypeExponent(1e-12)) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(beta_quantile(inf) == 4.0 / 3.0);
  CHECK(beta_quantile(TypeExponent(2)) == doctest::Approx(1.0).epsilon(1e-15));
  for (const double p : {0.5, 1.0, 3.0, 50.0}) CHECK(beta_quantile(TypeExponent(p)) == 2 * alpha_quantile(TypeExponent(p)));
  CHECK_THROWS_AS(TypeExponent(0), InputError);

  CHECK(theta_from_p(inf, 2) == 1.0);
  CHECK(theta_from_p(TypeExponent(2), 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(theta_from_p(inf, 4) == 0.5);
  CHECK_THROWS_AS(theta_from_p(inf, 1), InputError);
}

TEST_CASE("comparison exponents") {
  CHECK(beta_es(7, 3, 1) == 1.0);
  CHECK(std::abs(beta_es(1000000, 1, 0.3) - 1) <= 1e-5);
  CHECK(beta_es(1, 1, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(alpha_es(2, 1) == 0.5);
  CHECK(alpha_es(100000000, 1) <= 1e-7);
  for (const int d : {1, 5, 40}) CHECK(alpha_es_theta(d, 2, 1) == alpha_es(d, 2));

  const auto inf = TypeExponent::infinity();
  CHECK(alpha_sc2(inf, 0.5, 1e-12) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(alpha_sc2(TypeExponent(2), 0.5, 1e-12) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  // r = 1 makes 2r/(r+1) = 1, which the first branch never exceeds.
  for (const double xi : {0.01, 0.3, 0.9}) {
    const double first = 3.0 / (4.0 + 2.0 * xi);
    CHECK(alpha_sc2(TypeExponent(2), 1.0, xi) == doctest::Approx(first).epsilon(1e-14));
  }
}

TEST_CASE("tables") {
  const auto t2 = table2();
  CHECK(t2.size() == 27);
  CHECK(t2[0].alpha == doctest::Approx(0.5));
  CHECK(round3(t2[10].alpha) == 0.25);

  for (const auto& row : table1()) {
    if (row.label == "theta=1, zeta=3/2") CHECK(std::abs(row.value - std::min(row.r, 1.0 / 7)) <= 1e-12);
    if (row.label == "theta>0, zeta fixed") CHECK(row.kind == Table1Row::Kind::Positive);
    if (row.label == "theta=0") CHECK(row.kind == Table1Row::Kind::Zero);
  }
}

TEST_CASE("monotonicity in zeta") {
  for (const double r : {0.1, 0.3, 0.5})
    for (const double th : {0.2, 0.6, 1.0})
      for (const double b : {0.5, 1.0, 4.0 / 3}) {
        double previous = std::numeric_limits<double>::infinity();
        for (double z = 0.05; z < 2; z += 0.05) {
          const double v = alpha_general({r, b, th, z}).value;
          CHECK(v <= previous + 1e-15);
          previous = v;
        }
      }
}

TEST_CASE("figure curve") {
  const auto curve = figure_curve(0.5, 0.5, 1, 1, 2000);
  CHECK(curve.size() == 2000);
  CHECK(curve[0].ours == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(curve[0].theirs == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(curve.back().ours - 1.0 / 7) <= 1e-3);
  CHECK(curve.back().theirs <= 1e-3);
  bool crossed = false;
  for (const auto& p : curve) crossed = crossed || p.ours > p.theirs;
  CHECK(crossed);
  CHECK_THROWS_AS(figure_curve(0.5, 0.5, 1, 1, 0), InputError);
}

TEST_CASE("theta-dependent comparison eventually loses to the quantile exponent") {
  for (const double p : {1.0, 5.0, 100.0}) {
    const TypeExponent tp(p);
    int d = 1;
    while (alpha_es_theta(d, 1, tp.ratio()) >= alpha_quantile(tp)) ++d;
    for (int e = d; e < d + 200; ++e) CHECK(alpha_es_theta(e, 1, tp.ratio()) < alpha_quantile(tp));
  }
}
