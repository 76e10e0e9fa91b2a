#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace akqr {

/// One checked inequality or identity: pass means lhs satisfies the suite's
/// relation to rhs.
struct VerifyRow {
  std::string case_id;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

/// Intermediate-function inequality on 100 random discrete measures, plus an
/// agreement check against a linear-solve evaluation.
std::vector<VerifyRow> verify_lemma2(std::uint64_t seed = 0);

/// Product-net construction for two Gaussian blocks on 10 points.
std::vector<VerifyRow> verify_capacity(std::uint64_t seed = 0);

/// Measured approximation error against C_r lambda^r on 10 additive problems.
std::vector<VerifyRow> verify_approx(std::uint64_t seed = 0);

/// Additive norm of k_1(., 0) and the product-kernel series.
std::vector<VerifyRow> verify_example1(std::uint64_t seed = 0);

/// Grid oracle on tiny problems, duality gaps up to n = 200, norm bound.
std::vector<VerifyRow> verify_solver(std::uint64_t seed = 0);

std::vector<std::string> verify_suites();
std::vector<VerifyRow> run_verify_suite(const std::string& name, std::uint64_t seed = 0);

/// Header "case_id,lhs,rhs,pass".
void write_verify_csv(std::ostream& out, const std::vector<VerifyRow>& rows);

}  // namespace akqr
