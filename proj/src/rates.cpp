#include "akqr/rates.hpp"

#include "akqr/common.hpp"

#include <algorithm>
#include <cmath>

namespace akqr {

void RateParams::validate() const {
  if (!(r > 0) || r > 0.5) throw InputError("rates: r must lie in (0, 1/2]");
  if (!(beta > 0) || !std::isfinite(beta)) throw InputError("rates: beta must be positive");
  if (!(theta >= 0) || theta > 1) throw InputError("rates: theta must lie in [0, 1]");
  if (!(zeta > 0) || !(zeta < 2)) throw InputError("rates: zeta must lie in (0, 2)");
}

RateResult alpha_general(const RateParams& p) {
  p.validate();
  const double r = p.r, b = p.beta, th = p.theta, z = p.zeta;
  const double d = 4 - 2 * th + z * th;
  RateResult out;
  out.terms[0] = r * b;
  out.terms[1] = 0.5 + b * (th * (1 + r) / 4 - (1 - r) / 2);
  out.terms[2] = 4 / d - b;
  out.terms[3] = 2 / d - (1 - r) * b / 2;
  out.terms[4] = out.terms[3] - (b * (1 + r) * (1 - th / 2) - 1) / 4;
  const auto it = std::min_element(out.terms.begin(), out.terms.end());
  out.value = *it;
  out.argmin_term = static_cast<int>(it - out.terms.begin()) + 1;
  return out;
}

TypeExponent::TypeExponent(double p) : p_(p), infinite_(std::isinf(p)) {
  if (!(p > 0)) throw InputError("type exponent p must be positive");
}

double TypeExponent::ratio() const { return infinite_ ? 1.0 : p_ / (p_ + 1); }

double TypeExponent::shifted_ratio() const { return infinite_ ? 1.0 : (p_ + 1) / (p_ + 2); }

double alpha_quantile(TypeExponent p) { return 2.0 / 3.0 * p.shifted_ratio(); }

double beta_quantile(TypeExponent p) { return 4.0 / 3.0 * p.shifted_ratio(); }

double theta_from_p(TypeExponent p, double q) {
  if (!(q > 1)) throw InputError("theta_from_p: q must exceed 1");
  return std::min(2 / q, p.ratio());
}

namespace {

void check_es(int d, double alpha_smooth, double theta) {
  if (d < 1) throw InputError("dimension must be positive");
  if (!(alpha_smooth >= 1) || !std::isfinite(alpha_smooth)) throw InputError("smoothness must be at least 1");
  if (!(theta >= 0) || theta > 1) throw InputError("theta must lie in [0, 1]");
}

}  // namespace

double beta_es(int d, double alpha_smooth, double theta) {
  check_es(d, alpha_smooth, theta);
  return (2 * alpha_smooth + d) / (2 * alpha_smooth * (2 - theta) + d);
}

double alpha_es(int d, double alpha_smooth) {
  check_es(d, alpha_smooth, 1);
  return 2 * alpha_smooth / (2 * alpha_smooth + d);
}

double alpha_es_theta(int d, double alpha_smooth, double theta) {
  check_es(d, alpha_smooth, theta);
  return 2 * alpha_smooth / (2 * alpha_smooth * (2 - theta) + d);
}

double alpha_sc2(TypeExponent p, double r, double xi) {
  if (!(r > 0) || r > 1) throw InputError("alpha_sc2: r must lie in (0, 1]");
  if (!(xi > 0) || !(xi < 1)) throw InputError("alpha_sc2: xi must lie in (0, 1)");
  // (p+1) r / ((p+2) r + (p+1-r) xi), divided through by p+2 so p = inf is exact.
  const double pp = p.shifted_ratio();
  const double tail = p.is_infinite() ? 1.0 : (p.value() + 1 - r) / (p.value() + 2);
  const double first = pp * r / (r + tail * xi);
  return std::min(first, 2 * r / (r + 1));
}

std::vector<Table1Row> table1() {
  using Kind = Table1Row::Kind;
  const double rs[] = {0.1, 0.25, 0.5};
  std::vector<Table1Row> rows;
  for (const double r : rs) {
    double smallest = std::numeric_limits<double>::infinity();
    for (const double th : {0.1, 0.25, 0.5, 0.75, 1.0})
      for (const double z : {0.1, 0.5, 1.0, 1.5, 1.9}) smallest = std::min(smallest, alpha_general({r, 1, th, z}).value);
    rows.push_back({"theta>0, zeta fixed", r, 0, 0, smallest > 0 ? Kind::Positive : Kind::Value, smallest, 0});

    auto value_row = [&](const char* label, double th, double z, double expected) {
      rows.push_back({label, r, th, z, Kind::Value, alpha_general({r, 1, th, z}).value, expected});
    };
    value_row("theta=1, zeta=1", 1, 1, std::min(r, 1.0 / 3));
    value_row("theta=1, zeta=3/2", 1, 1.5, std::min(r, 1.0 / 7));
    value_row("theta=1/2, zeta=1", 0.5, 1, std::min(r, 1.0 / 7));

    const double at_zero_theta = alpha_general({r, 1, 0, 1}).value;
    rows.push_back({"theta=0", r, 0, 1, std::abs(at_zero_theta) <= 1e-12 ? Kind::Zero : Kind::Value, at_zero_theta, 0});
    const double near_two = alpha_general({r, 1, 1, 2 - 1e-9}).value;
    rows.push_back({"zeta->2", r, 1, 2 - 1e-9, std::abs(near_two) <= 1e-6 ? Kind::Zero : Kind::Value, near_two, 0});
  }
  return rows;
}

std::vector<Table2Cell> table2() {
  std::vector<Table2Cell> cells;
  for (const double r : {0.5, 0.25, 0.1})
    for (const double th : {1.0, 0.5, 0.1})
      for (const double z : {0.1, 1.0, 1.9}) cells.push_back({r, th, z, alpha_general({r, 1, th, z}).value});
  return cells;
}

std::vector<CurvePoint> figure_curve(double r, double theta, double zeta, double alpha_smooth, int d_max) {
  if (d_max < 1) throw InputError("figure_curve: d_max must be at least 1");
  std::vector<CurvePoint> out;
  for (int d = 1; d <= d_max; ++d)
    out.push_back({d, alpha_general({r, beta_es(d, alpha_smooth, theta), theta, zeta}).value,
                   alpha_es(d, alpha_smooth)});
  return out;
}

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace akqr
