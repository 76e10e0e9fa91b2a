#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

namespace akqr {

/// Exponents (r, beta, theta, zeta) of the general learning rate.
struct RateParams {
  double r = 0.5;
  double beta = 1;
  double theta = 1;
  double zeta = 1;

  /// Throws InputError unless 0 < r <= 1/2, beta > 0, 0 <= theta <= 1 and
  /// 0 < zeta < 2.
  void validate() const;
};

struct RateResult {
  double value = 0;
  /// 1-based index of the smallest term.
  int argmin_term = 1;
  std::array<double, 5> terms{};
};

/// min{T1, ..., T5} with D = 4 - 2 theta + zeta theta:
///   T1 = r beta
///   T2 = 1/2 + beta (theta (1 + r) / 4 - (1 - r) / 2)
///   T3 = 4 / D - beta
///   T4 = 2 / D - (1 - r) beta / 2
///   T5 = T4 - (beta (1 + r) (1 - theta / 2) - 1) / 4
RateResult alpha_general(const RateParams& p);

/// Average type exponent p in (0, inf]; infinity is an exact value, not a
/// large number.
class TypeExponent {
 public:
  explicit TypeExponent(double p);
  static TypeExponent infinity() { return TypeExponent(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return infinite_; }
  double value() const { return p_; }

  /// p / (p + 1), exactly 1 at infinity.
  double ratio() const;
  /// (p + 1) / (p + 2), exactly 1 at infinity.
  double shifted_ratio() const;

 private:
  double p_;
  bool infinite_;
};

/// 2 (p + 1) / (3 (p + 2)); 2/3 at infinity.
double alpha_quantile(TypeExponent p);
/// 4 (p + 1) / (3 (p + 2)); 4/3 at infinity.
double beta_quantile(TypeExponent p);
/// min{2 / q, p / (p + 1)}.
double theta_from_p(TypeExponent p, double q);

/// (2 alpha + d) / (2 alpha (2 - theta) + d).
double beta_es(int d, double alpha_smooth, double theta);
/// 2 alpha / (2 alpha + d).
double alpha_es(int d, double alpha_smooth);
/// 2 alpha / (2 alpha (2 - theta) + d).
double alpha_es_theta(int d, double alpha_smooth, double theta);

/// min{(p + 1) r / ((p + 2) r + (p + 1 - r) xi), 2 r / (r + 1)}.
double alpha_sc2(TypeExponent p, double r, double xi);

/// Limit of the exponent as d grows, either known only to be positive, or a value.
struct Table1Row {
  enum class Kind { Positive, Zero, Value };
  std::string label;
  double r = 0;
  double theta = 0;
  double zeta = 0;
  Kind kind = Kind::Value;
  double value = 0;
  /// Value predicted by the closed-form row label, for Value rows.
  double expected = 0;
};

/// Rows evaluated with beta = 1 on r in {0.1, 0.25, 0.5}.
std::vector<Table1Row> table1();

struct Table2Cell {
  double r = 0;
  double theta = 0;
  double zeta = 0;
  double alpha = 0;
};

/// alpha_general at beta = 1 for r in {0.5, 0.25, 0.1}, theta in {1, 0.5, 0.1}
/// and zeta in {0.1, 1, 1.9}.
std::vector<Table2Cell> table2();

struct CurvePoint {
  int d = 0;
  double ours = 0;
  double theirs = 0;
};

/// For d = 1..d_max: ours = alpha_general(r, beta_es(d, alpha, theta), theta,
/// zeta), theirs = alpha_es(d, alpha).
std::vector<CurvePoint> figure_curve(double r, double theta, double zeta, double alpha_smooth, int d_max);

/// Rounds to 3 decimals for reporting.
double round3(double x);

}  // namespace akqr
