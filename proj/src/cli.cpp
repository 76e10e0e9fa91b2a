#include "akqr/cli.hpp"

#include "akqr/dataset.hpp"
#include "akqr/experiments.hpp"
#include "akqr/rates.hpp"
#include "akqr/solver.hpp"
#include "akqr/verify.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace akqr {

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

/// Opens path for writing, or returns the fallback stream for "" and "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw InputError("cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void echo(std::ostream& err, const std::string& command, const nlohmann::json& config) {
  err << "config " << command << ' ' << config.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Additive-kernel quantile regression toolkit"};
  app.require_subcommand(1);

  auto* rates = app.add_subcommand("rates", "Learning-rate exponents, tables and curves");
  rates->require_subcommand(1);
  int which = 2;
  std::string rates_out;
  auto* table = rates->add_subcommand("table", "Emit Table 1 or Table 2 as CSV");
  table->add_option("--which", which, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  table->add_option("--out", rates_out, "Output CSV (stdout when omitted)");

  RateParams rp;
  auto* alpha = rates->add_subcommand("alpha", "Evaluate the general exponent");
  alpha->add_option("--r", rp.r)->required();
  alpha->add_option("--beta", rp.beta)->required();
  alpha->add_option("--theta", rp.theta)->required();
  alpha->add_option("--zeta", rp.zeta)->required();

  double curve_r = 0.5, curve_theta = 0.5, curve_zeta = 1, curve_alpha = 1;
  int d_max = 100;
  auto* curve = rates->add_subcommand("curve", "Exponent versus dimension");
  curve->add_option("--r", curve_r)->required();
  curve->add_option("--theta", curve_theta)->required();
  curve->add_option("--zeta", curve_zeta)->required();
  curve->add_option("--alpha-smooth", curve_alpha)->required();
  curve->add_option("--d-max", d_max)->required();
  curve->add_option("--out", rates_out);

  std::string data_path, kernel_path, model_path, out_path;
  double lambda = 0, tau = 0.5;
  FitOptions fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a regularised quantile model");
  fit_cmd->add_option("--data", data_path)->required();
  fit_cmd->add_option("--kernel", kernel_path)->required();
  fit_cmd->add_option("--lambda", lambda)->required();
  fit_cmd->add_option("--tau", tau)->required();
  fit_cmd->add_option("--out", out_path)->required();
  fit_cmd->add_option("--gap-tol", fit_opts.gap_tol);
  fit_cmd->add_option("--max-epochs", fit_opts.max_epochs);
  fit_cmd->add_option("--seed", fit_opts.seed);

  auto* predict_cmd = app.add_subcommand("predict", "Evaluate a fitted model");
  predict_cmd->add_option("--model", model_path)->required();
  predict_cmd->add_option("--data", data_path)->required();
  predict_cmd->add_option("--out", out_path);

  std::string config_path, out_dir;
  int workers = 0;
  auto* experiment = app.add_subcommand("experiment", "Empirical rate experiment");
  experiment->add_option("--config", config_path)->required();
  experiment->add_option("--out-dir", out_dir)->required();
  experiment->add_option("--workers", workers, "Overrides the config value");

  std::string suite;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "Run a property suite and emit a pass/fail report");
  verify->add_option("suite", suite)->required()->check(CLI::IsMember(verify_suites()));
  verify->add_option("--seed", seed);
  verify->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (table->parsed()) {
      echo(err, "rates table", {{"which", which}, {"out", rates_out}});
      Output o(rates_out, out);
      *o << std::fixed << std::setprecision(3);
      if (which == 2) {
        *o << "r,theta,zeta,alpha\n";
        for (const auto& c : table2()) *o << c.r << ',' << c.theta << ',' << c.zeta << ',' << round3(c.alpha) << '\n';
      } else {
        *o << "row,r,theta,zeta,kind,value\n";
        for (const auto& row : table1()) {
          const char* kind = row.kind == Table1Row::Kind::Positive ? "positive"
                             : row.kind == Table1Row::Kind::Zero   ? "zero"
                                                                   : "value";
          *o << '"' << row.label << "\"," << row.r << ',' << row.theta << ',' << row.zeta << ',' << kind << ','
             << round3(row.value) << '\n';
        }
      }
      return 0;
    }
    if (alpha->parsed()) {
      echo(err, "rates alpha", {{"r", rp.r}, {"beta", rp.beta}, {"theta", rp.theta}, {"zeta", rp.zeta}});
      const auto res = alpha_general(rp);
      out << std::fixed << std::setprecision(3) << round3(res.value) << " (term " << res.argmin_term << ")\n";
      return 0;
    }
    if (curve->parsed()) {
      echo(err, "rates curve",
           {{"r", curve_r}, {"theta", curve_theta}, {"zeta", curve_zeta}, {"alpha_smooth", curve_alpha},
            {"d_max", d_max}, {"out", rates_out}});
      Output o(rates_out, out);
      *o << "d,ours,theirs\n" << std::fixed << std::setprecision(3);
      for (const auto& p : figure_curve(curve_r, curve_theta, curve_zeta, curve_alpha, d_max))
        *o << p.d << ',' << round3(p.ours) << ',' << round3(p.theirs) << '\n';
      return 0;
    }
    if (fit_cmd->parsed()) {
      const KernelSpec spec = kernel_from_json(read_json_file(kernel_path));
      nlohmann::json kj;
      to_json(kj, spec);
      echo(err, "fit",
           {{"data", data_path}, {"kernel", kj}, {"lambda", lambda}, {"tau", tau}, {"gap_tol", fit_opts.gap_tol},
            {"max_epochs", fit_opts.max_epochs}, {"seed", fit_opts.seed}, {"out", out_path}});
      const DataSet data = read_csv_file(data_path);
      const Model model = fit(spec, data, lambda, tau, fit_opts);
      nlohmann::json mj;
      to_json(mj, model);
      Output o(out_path, out);
      *o << mj.dump(1) << '\n';
      err << "epochs " << model.epochs << " gap " << model.gap << '\n';
      return 0;
    }
    if (predict_cmd->parsed()) {
      echo(err, "predict", {{"model", model_path}, {"data", data_path}, {"out", out_path}});
      const Model model = model_from_json(read_json_file(model_path));
      const DataSet data = read_csv_file(data_path);
      const Vector pred = predict(model, data.inputs);
      Output o(out_path, out);
      *o << "prediction\n" << std::setprecision(17);
      for (const double v : pred) *o << v << '\n';
      return 0;
    }
    if (experiment->parsed()) {
      ExperimentSpec spec = experiment_from_json(read_json_file(config_path));
      if (workers > 0) spec.workers = workers;
      nlohmann::json cj;
      to_json(cj, spec);
      echo(err, "experiment", {{"config", cj}, {"out_dir", out_dir}});
      std::filesystem::create_directories(out_dir);
      const auto result = rate_experiment(spec);
      for (const auto& n : result.notices) err << "notice: " << n << '\n';
      std::ofstream results(std::filesystem::path(out_dir) / "results.csv");
      std::ofstream summary(std::filesystem::path(out_dir) / "summary.csv");
      std::ofstream resolved(std::filesystem::path(out_dir) / "config.json");
      if (!results || !summary || !resolved) throw InputError("cannot write into " + out_dir);
      write_results_csv(results, result);
      write_summary_csv(summary, result);
      resolved << cj.dump(1) << '\n';
      write_summary_csv(out, result);
      return 0;
    }
    if (verify->parsed()) {
      echo(err, "verify", {{"suite", suite}, {"seed", seed}, {"out", out_path}});
      const auto rows = run_verify_suite(suite, seed);
      Output o(out_path, out);
      write_verify_csv(*o, rows);
      std::size_t failed = 0;
      for (const auto& r : rows) failed += !r.pass;
      err << suite << ": " << rows.size() - failed << '/' << rows.size() << " passed\n";
      return failed ? 1 : 0;
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace akqr
