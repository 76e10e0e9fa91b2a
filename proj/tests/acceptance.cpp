#include "akqr/cli.hpp"
#include "akqr/experiments.hpp"
#include "akqr/rates.hpp"
#include "akqr/verify.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace akqr;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail, double seconds) {
  failures += !pass;
  std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << "  (" << seconds << " s)"
            << std::endl;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}


void suite_criterion(int id, const std::string& suite, double limit_seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_verify_suite(suite, 0);
  int failed = 0;
  std::string first;
  for (const auto& r : rows)
    if (!r.pass && failed++ == 0) first = " first failure " + r.case_id;
  const double s = since(t0);
  std::ostringstream d;
  d << suite << " " << rows.size() - failed << "/" << rows.size() << " rows" << first;
  if (s >= limit_seconds) d << " over time limit " << limit_seconds << " s";
  report(id, failed == 0 && !rows.empty() && s < limit_seconds, d.str(), s);
}

// Reference values of the limiting exponent table, ordered r, theta, zeta.
constexpr double kTable2[27] = {0.5,  0.333, 0.026, 0.311, 0.143, 0.013, 0.05, 0.026, 0.003,
                                0.25, 0.25,  0.026, 0.25,  0.143, 0.013, 0.05, 0.026, 0.003,
                                0.1,  0.1,   0.026, 0.1,   0.1,   0.013, 0.05, 0.026, 0.003};

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const char* argv[] = {"akqr", "rates", "table", "--which", "2"};
  std::ostringstream out, err;
  const int code = run(5, argv, out, err);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  const double r_vals[] = {0.5, 0.25, 0.1}, t_vals[] = {1, 0.5, 0.1}, z_vals[] = {0.1, 1, 1.9};
  int rows = 0, bad = 0;
  double worst = 0;
  while (std::getline(in, line)) {
    double r, t, z, a;
    char c;
    std::istringstream ls(line);
    ls >> r >> c >> t >> c >> z >> c >> a;
    if (rows < 27) {
      const int i = rows;
      const bool key = std::abs(r - r_vals[i / 9]) < 1e-9 && std::abs(t - t_vals[(i / 3) % 3]) < 1e-9 &&
                       std::abs(z - z_vals[i % 3]) < 1e-9;
      const double diff = std::abs(a - kTable2[i]);
      worst = std::max(worst, diff);
      bad += !key || diff > 5e-4;
    }
    ++rows;
  }
  // Unrounded values too.
  const auto cells = table2();
  for (std::size_t i = 0; i < cells.size() && i < 27; ++i) {
    const double diff = std::abs(cells[i].alpha - kTable2[i]);
    worst = std::max(worst, diff);
    bad += diff > 5e-4;
  }
  const double s = since(t0);
  std::ostringstream d;
  d << "27 cells, max |computed - reference| " << worst << " (tol 5e-4), rows " << rows;
  report(1, code == 0 && rows == 27 && cells.size() == 27 && bad == 0 && s < 1, d.str(), s);
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  int bad = 0, checked = 0;
  double worst = 0;
  for (const double r : {0.1, 0.25, 0.5}) {
    auto expect = [&](double theta, double zeta, double want) {
      const double got = alpha_general({r, 1, theta, zeta}).value;
      worst = std::max(worst, std::abs(got - want));
      bad += std::abs(got - want) > 1e-6;
      ++checked;
    };
    expect(1, 1, std::min(r, 1.0 / 3));
    expect(1, 1.5, std::min(r, 1.0 / 7));
    expect(0.5, 1, std::min(r, 1.0 / 7));
    for (const double zeta : {0.1, 1.0, 1.9}) expect(0, zeta, 0);
    for (const double theta : {0.0, 0.5, 1.0}) expect(theta, 2 - 1e-9, 0);
  }
  for (const auto& row : table1())
    if (row.kind == Table1Row::Kind::Value && std::abs(row.value - row.expected) > 1e-6) ++bad;
  const double s = since(t0);
  std::ostringstream d;
  d << checked << " values, max deviation " << worst << " (tol 1e-6)";
  report(2, bad == 0 && s < 1, d.str(), s);
}

void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (const auto p : {TypeExponent(1), TypeExponent(2), TypeExponent(5), TypeExponent(10), TypeExponent(100),
                       TypeExponent::infinity()}) {
    const double want = alpha_quantile(p);
    const double expected = p.is_infinite() ? 2.0 / 3 : 2 * (p.value() + 1) / (3 * (p.value() + 2));
    worst = std::max(worst, std::abs(want - expected));
    const auto res = alpha_general({0.5, beta_quantile(p), p.ratio(), 1e-6});
    for (const double t : res.terms) worst = std::max(worst, std::abs(t - expected));
  }
  const double s = since(t0);
  std::ostringstream d;
  d << "p in {1,2,5,10,100,inf}, max |term - 2(p+1)/(3(p+2))| " << worst << " (tol 1e-5)";
  report(3, worst <= 1e-5 && s < 1, d.str(), s);
}

void criterion9_10(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    report(9, false, "cannot open " + config_path, 0);
    report(10, false, "no run", 0);
    return;
  }
  const ExperimentSpec spec = experiment_from_json(nlohmann::json::parse(in));
  auto t0 = std::chrono::steady_clock::now();
  const auto first = rate_experiment(spec);
  const double s9 = since(t0);

  double slope_a = NAN, slope_b = NAN;
  for (const auto& f : first.fits) (f.kernel == "a" ? slope_a : slope_b) = f.fit.slope;
  const double floor = -3 / std::sqrt(static_cast<double>(spec.risk_eval));
  double min_excess = INFINITY;
  int failed_jobs = 0;
  for (const auto& j : first.jobs) {
    failed_jobs += j.failed;
    if (!j.failed) min_excess = std::min(min_excess, j.excess);
  }
  const bool a = slope_a <= -0.3;
  const bool b = slope_a <= slope_b + 0.05;
  const bool c = min_excess >= floor && failed_jobs == 0;
  std::ostringstream d;
  d << "(a) additive slope " << slope_a << " <= -0.3 " << (a ? "ok" : "no") << "; (b) product slope " << slope_b
    << ", need additive <= product + 0.05 " << (b ? "ok" : "no") << "; (c) min excess " << min_excess << " >= "
    << floor << " " << (c ? "ok" : "no") << ", failed jobs " << failed_jobs;
  report(9, a && b && c && s9 < 1800, d.str(), s9);

  t0 = std::chrono::steady_clock::now();
  const auto second = rate_experiment(spec);
  const double s10 = since(t0);
  std::ostringstream x, y;
  write_results_csv(x, first);
  write_results_csv(y, second);
  std::ostringstream d10;
  d10 << "results CSV " << x.str().size() << " bytes, " << (x.str() == y.str() ? "identical" : "different");
  report(10, x.str() == y.str() && !x.str().empty(), d10.str(), s10);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string config = argc > 1 ? argv[1] : "configs/rates_additive_d4.json";
  criterion1();
  criterion2();
  criterion3();
  suite_criterion(4, "lemma2", 10);
  suite_criterion(5, "approx", 60);
  suite_criterion(6, "solver", 60);
  suite_criterion(7, "capacity", 60);
  suite_criterion(8, "example1", 1);
  criterion9_10(config);
  std::cout << (failures ? "acceptance: FAIL (" + std::to_string(failures) + " criteria)" : "acceptance: PASS")
            << std::endl;
  return failures ? 1 : 0;
}
