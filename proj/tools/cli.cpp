#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "glmcorr/beta_tests.hpp"
#include "glmcorr/dataset.hpp"
#include "glmcorr/errors.hpp"
#include "glmcorr/fit.hpp"
#include "glmcorr/phi_tests.hpp"
#include "glmcorr/report_io.hpp"
#include "glmcorr/simulate.hpp"

namespace glmtest {
namespace {

using namespace glmcorr;

struct ModelOptions {
  std::string data;
  std::string family;
  std::string link;
  std::string response;
  std::vector<std::string> covariates;
  bool no_intercept = false;
  std::optional<double> phi_known;
  std::string format = "table";
  std::string out;
};

struct TestOptions {
  std::vector<std::string> test_cols;
  std::vector<double> null_values;
  std::optional<double> phi0;
};

struct SimOptions {
  std::string family = "gamma";
  std::string link = "log";
  int n = 20;
  int p = 4;
  int q = 1;
  double phi = 1.0;
  std::string covariate_law = "uniform01";
  bool no_intercept = false;
  std::vector<double> beta;
  double delta = 0.0;
  std::vector<double> alpha = {0.10, 0.05, 0.01};
  std::uint64_t seed = 20240101;
  int reps = 15000;
  int workers = 1;
  std::string format = "table";
  std::string out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_model_options(CLI::App* sub, ModelOptions& m) {
  sub->add_option("--data", m.data, "CSV file with a header row")->required();
  sub->add_option("--family", m.family, "normal | gamma | inverse-normal")->required();
  sub->add_option("--link", m.link, "log | identity | reciprocal | reciprocal-squared")->required();
  sub->add_option("--response", m.response, "Response column (name or 1-based index)")->required();
  sub->add_option("--covariates", m.covariates, "Covariate columns; default all but the response; 'none' for none")
      ->delimiter(',');
  sub->add_flag("--no-intercept", m.no_intercept, "Omit the leading column of ones");
  sub->add_option("--phi-known", m.phi_known, "Treat the precision as known at this value");
  sub->add_option("--format", m.format, "table | json | csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  sub->add_option("--out", m.out, "Write output to this file instead of standard output");
}

struct LoadedModel {
  DesignMatrix X;
  Eigen::VectorXd y;
  Family family;
  Link link;
  ModelContext ctx;
};

template <class F>
auto usage_checked(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

LoadedModel load_model(const ModelOptions& m) {
  const Family family(usage_checked([&] { return parse_family(m.family); }));
  const Link link(usage_checked([&] { return parse_link(m.link); }));
  const DataFrame df = read_csv(m.data);
  const int ycol = df.column(m.response);
  std::vector<std::string> covs;
  if (m.covariates.empty()) {
    for (int j = 0; j < df.cols(); ++j) {
      if (j != ycol) covs.push_back(df.names[j]);
    }
  } else if (!(m.covariates.size() == 1 && m.covariates[0] == "none")) {
    covs = m.covariates;
  }
  DesignMatrix X = build_design(df, covs, !m.no_intercept);
  X.validate();
  Eigen::VectorXd y = df.values.col(ycol);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!family.in_domain(y[i])) {
      throw DataError("response value " + std::to_string(y[i]) + " on data row " + std::to_string(i + 1) +
                      " is outside the support of the " + std::string(family.name()) + " family");
    }
  }
  ModelContext ctx{family.kind(), link.kind(), df.names[ycol], X.column_names};
  return {std::move(X), std::move(y), family, link, std::move(ctx)};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FileError("cannot write '" + path + "'");
  f << text;
}

int resolve_design_column(const DesignMatrix& X, const std::string& key) {
  for (int j = 0; j < X.cols(); ++j) {
    if (X.column_names[j] == key) return j;
  }
  try {
    std::size_t used = 0;
    const int idx = std::stoi(key, &used);
    if (used == key.size() && idx >= 1 && idx <= X.cols()) return idx - 1;
  } catch (const std::exception&) {
  }
  throw UsageError("--test-cols: '" + key + "' is neither a design column name nor a 1-based index");
}

int cmd_fit(const ModelOptions& m, std::ostream& out) {
  const LoadedModel lm = load_model(m);
  FitOptions opts;
  opts.phi_known = m.phi_known;
  const FitSummary s = summarize_fit(fit_irls(lm.X, lm.y, lm.family, lm.link, opts), lm.X, lm.y, lm.family);
  const std::string text = m.format == "json"  ? fit_to_json(s, lm.ctx)
                           : m.format == "csv" ? fit_to_csv(s, lm.ctx)
                                               : fit_to_table(s, lm.ctx);
  emit(text, m.out, out);
  return kOk;
}

int cmd_test(const ModelOptions& m, const TestOptions& t, std::ostream& out) {
  if (t.test_cols.empty() == !t.phi0.has_value()) {
    throw UsageError("test: give exactly one of --test-cols or --phi0");
  }
  const LoadedModel lm = load_model(m);
  TestReport report;
  HypothesisLabel label;
  if (t.phi0) {
    if (m.phi_known) throw UsageError("test: --phi0 cannot be combined with --phi-known");
    label.on_phi = true;
    label.phi0 = *t.phi0;
    report = full_phi_test_report(lm.X, lm.y, lm.family, lm.link, PhiHypothesis{*t.phi0});
  } else {
    Hypothesis hyp;
    for (const std::string& c : t.test_cols) hyp.tested.push_back(resolve_design_column(lm.X, c));
    if (!t.null_values.empty() && t.null_values.size() != t.test_cols.size()) {
      throw UsageError("--null-values must have one entry per tested column");
    }
    hyp.beta10 = t.null_values.empty()
                     ? Eigen::VectorXd::Zero(hyp.q())
                     : Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(t.null_values.data(), hyp.q()));
    hyp.phi_known = m.phi_known;
    try {
      hyp.validate(lm.X.cols());
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    for (int j : hyp.tested) label.tested.push_back(lm.X.column_names[j]);
    label.values.assign(hyp.beta10.data(), hyp.beta10.data() + hyp.q());
    report = full_test_report(lm.X, lm.y, lm.family, lm.link, hyp);
  }
  const std::string text = m.format == "json"  ? report_to_json(report, lm.ctx, label)
                           : m.format == "csv" ? report_to_csv(report)
                                               : report_to_table(report, lm.ctx, label);
  emit(text, m.out, out);
  return kOk;
}

int cmd_simulate(const SimOptions& o, std::ostream& out) {
  SimScenario sc;
  sc.family = usage_checked([&] { return parse_family(o.family); });
  sc.link = usage_checked([&] { return parse_link(o.link); });
  sc.n = o.n;
  sc.p = o.p;
  sc.q = o.q;
  sc.phi_true = o.phi;
  sc.covariate_law = usage_checked([&] { return parse_covariate_law(o.covariate_law); });
  sc.intercept = !o.no_intercept;
  sc.beta_true = o.beta;
  sc.delta = o.delta;
  sc.levels = o.alpha;
  sc.replications = o.reps;
  sc.master_seed = o.seed;
  usage_checked([&] {
    sc.validate();
    if (o.workers < 1) throw DataError("--workers must be positive");
    return 0;
  });
  const RateTable table = simulate(sc, o.workers).table;
  const std::string text = o.format == "json"  ? rates_to_json(table, sc)
                           : o.format == "csv" ? rates_to_csv(table)
                                               : rates_to_table(table);
  out << text;
  if (!o.out.empty()) {
    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);
    const std::vector<std::string> files = {"rates.csv", "rates.json"};
    emit(rates_to_csv(table), (dir / files[0]).string(), out);
    emit(rates_to_json(table, sc), (dir / files[1]).string(), out);
    emit(run_manifest(table, sc, files), (dir / "manifest.json").string(), out);
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical and corrected likelihood-based tests for generalized linear models", "glmtest"};
  app.require_subcommand(1);

  ModelOptions fit_m;
  CLI::App* fit = app.add_subcommand("fit", "Fit a model and print estimates");
  add_model_options(fit, fit_m);

  ModelOptions test_m;
  TestOptions test_t;
  CLI::App* test = app.add_subcommand("test", "Test coefficients or the precision parameter");
  add_model_options(test, test_m);
  test->add_option("--test-cols", test_t.test_cols, "Tested design columns (names or 1-based indices)")
      ->delimiter(',');
  test->add_option("--null-values", test_t.null_values, "Null values, one per tested column (default 0)")
      ->delimiter(',');
  test->add_option("--phi0", test_t.phi0, "Test H0: phi = phi0 instead");

  SimOptions sim;
  CLI::App* simc = app.add_subcommand("simulate", "Monte Carlo rejection rates of all seven statistics");
  simc->add_option("--family", sim.family, "gamma | inverse-normal | normal")->capture_default_str();
  simc->add_option("--link", sim.link, "Link function")->capture_default_str();
  simc->add_option("--n", sim.n, "Sample size")->capture_default_str();
  simc->add_option("--p", sim.p, "Number of regression parameters")->capture_default_str();
  simc->add_option("--q", sim.q, "Number of tested parameters")->capture_default_str();
  simc->add_option("--phi", sim.phi, "True precision parameter")->capture_default_str();
  simc->add_option("--covariate-law", sim.covariate_law, "uniform01 | stdnormal")->capture_default_str();
  simc->add_flag("--no-intercept", sim.no_intercept, "Fill every design column with random covariates");
  simc->add_option("--beta", sim.beta, "Explicit true coefficients (p values)")->delimiter(',');
  simc->add_option("--delta", sim.delta, "Value of the tested coefficients in the data")->capture_default_str();
  simc->add_option("--alpha", sim.alpha, "Nominal levels")->delimiter(',');
  simc->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simc->add_option("--reps", sim.reps, "Replications")->capture_default_str();
  simc->add_option("--workers", sim.workers, "Worker threads")->capture_default_str();
  simc->add_option("--format", sim.format, "table | json | csv")->check(CLI::IsMember({"table", "json", "csv"}));
  simc->add_option("--out", sim.out, "Directory for rates.csv, rates.json and manifest.json");

  // One INI file for all subcommands, with a [fit], [test] or [simulate]
  // section; flags on the command line take precedence.
  app.set_config("--config", "", "INI configuration file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  for (CLI::App* sub : {fit, test, simc}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (fit->parsed()) return cmd_fit(fit_m, out);
    if (test->parsed()) return cmd_test(test_m, test_t, out);
    return cmd_simulate(sim, out);
  } catch (const UsageError& e) {
    err << "glmtest: " << e.what() << "\n";
    return kUsage;
  } catch (const FileError& e) {
    err << "glmtest: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "glmtest: data error: " << e.what() << "\n";
    return kData;
  } catch (const DomainError& e) {
    err << "glmtest: data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "glmtest: numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace glmtest
