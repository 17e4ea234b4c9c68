#include "glmcorr/report_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "glmcorr/errors.hpp"

namespace glmcorr {
namespace {

using nlohmann::json;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string exact(double v) { return fmt("%.17g", v); }

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

json terms_json(const CorrectionTerms& t) {
  const char* kind = t.kind == CorrectionKind::LR ? "LR" : (t.kind == CorrectionKind::Score ? "score" : "gradient");
  return json{{"kind", kind},       {"A1", t.A1}, {"A2", t.A2}, {"A3", t.A3}, {"A1_bphi", t.A1_bphi},
              {"A2_bphi", t.A2_bphi}, {"a", t.a},   {"b", t.b},   {"c", t.c}};
}

CorrectionTerms terms_from_json(const json& j) {
  CorrectionTerms t;
  const std::string kind = j.at("kind").get<std::string>();
  t.kind = kind == "LR" ? CorrectionKind::LR : (kind == "score" ? CorrectionKind::Score : CorrectionKind::Gradient);
  t.A1 = j.at("A1").get<double>();
  t.A2 = j.at("A2").get<double>();
  t.A3 = j.at("A3").get<double>();
  t.A1_bphi = j.at("A1_bphi").get<double>();
  t.A2_bphi = j.at("A2_bphi").get<double>();
  t.a = j.at("a").get<double>();
  t.b = j.at("b").get<double>();
  t.c = j.at("c").get<double>();
  return t;
}

json model_json(const ModelContext& ctx) {
  return json{{"family", to_string(ctx.family)}, {"link", to_string(ctx.link)}, {"response", ctx.response}};
}

std::string column_name(const ModelContext& ctx, std::size_t j) {
  return j < ctx.column_names.size() ? ctx.column_names[j] : "x" + std::to_string(j + 1);
}

json scenario_json(const SimScenario& sc) {
  const Eigen::VectorXd b = sc.coefficients();
  const std::vector<double> beta(b.data(), b.data() + b.size());
  return json{{"family", to_string(sc.family)},
              {"link", to_string(sc.link)},
              {"n", sc.n},
              {"p", sc.p},
              {"q", sc.q},
              {"phi", sc.phi_true},
              {"covariates", to_string(sc.covariate_law)},
              {"intercept", sc.intercept},
              {"beta", beta},
              {"delta", sc.delta},
              {"levels", sc.levels},
              {"replications", sc.replications},
              {"seed", sc.master_seed}};
}

}  // namespace

Eigen::VectorXd deviance_residuals(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, Family family) {
  Eigen::VectorXd r(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double d = std::sqrt(std::max(family.unit_deviance(y[i], mu[i]), 0.0));
    r[i] = y[i] >= mu[i] ? d : -d;
  }
  return r;
}

FitSummary summarize_fit(FittedModel fit, const DesignMatrix& X, const Eigen::VectorXd& y, Family family) {
  FitSummary s;
  s.se = standard_errors(fit, X);
  s.se_phi = fit.phi_estimated ? se_phi(fit, family) : 0.0;
  s.deviance_residuals = deviance_residuals(y, fit.mu, family);
  s.fit = std::move(fit);
  return s;
}

std::string fit_to_table(const FitSummary& s, const ModelContext& ctx) {
  std::ostringstream out;
  out << "family: " << to_string(ctx.family) << "   link: " << to_string(ctx.link);
  if (!ctx.response.empty()) out << "   response: " << ctx.response;
  out << "   n = " << s.fit.n() << "\n\n";
  std::size_t w = 12;
  for (std::size_t j = 0; j < static_cast<std::size_t>(s.fit.beta.size()); ++j) {
    w = std::max(w, column_name(ctx, j).size() + 2);
  }
  out << pad("term", w, true) << pad("estimate", 14) << pad("std.error", 14) << "\n";
  for (Eigen::Index j = 0; j < s.fit.beta.size(); ++j) {
    out << pad(column_name(ctx, static_cast<std::size_t>(j)), w, true) << pad(fmt("%.6f", s.fit.beta[j]), 14)
        << pad(fmt("%.6f", s.se[j]), 14) << "\n";
  }
  out << pad("phi", w, true) << pad(fmt("%.6f", s.fit.phi), 14)
      << pad(s.fit.phi_estimated ? fmt("%.6f", s.se_phi) : std::string("(fixed)"), 14) << "\n\n";
  out << "deviance: " << fmt("%.6f", s.fit.deviance) << "   log-likelihood: " << fmt("%.6f", s.fit.loglik)
      << "   iterations: " << s.fit.iterations << "\n";
  return out.str();
}

std::string fit_to_json(const FitSummary& s, const ModelContext& ctx) {
  json coefs = json::array();
  for (Eigen::Index j = 0; j < s.fit.beta.size(); ++j) {
    coefs.push_back({{"term", column_name(ctx, static_cast<std::size_t>(j))},
                     {"estimate", s.fit.beta[j]},
                     {"std_error", s.se[j]}});
  }
  json j = {{"schema", "glmcorr.fit/1"},
            {"model", model_json(ctx)},
            {"n", s.fit.n()},
            {"coefficients", coefs},
            {"phi", s.fit.phi},
            {"phi_estimated", s.fit.phi_estimated},
            {"phi_std_error", s.se_phi},
            {"deviance", s.fit.deviance},
            {"loglik", s.fit.loglik},
            {"iterations", s.fit.iterations},
            {"converged", s.fit.converged},
            {"fitted", std::vector<double>(s.fit.mu.data(), s.fit.mu.data() + s.fit.mu.size())},
            {"deviance_residuals", std::vector<double>(s.deviance_residuals.data(),
                                                       s.deviance_residuals.data() + s.deviance_residuals.size())}};
  return j.dump(2) + "\n";
}

std::string fit_to_csv(const FitSummary& s, const ModelContext& ctx) {
  std::ostringstream out;
  out << "term,estimate,std_error\n";
  for (Eigen::Index j = 0; j < s.fit.beta.size(); ++j) {
    out << column_name(ctx, static_cast<std::size_t>(j)) << ',' << exact(s.fit.beta[j]) << ',' << exact(s.se[j])
        << "\n";
  }
  out << "phi," << exact(s.fit.phi) << ',' << exact(s.se_phi) << "\n";
  return out.str();
}

std::string report_to_table(const TestReport& r, const ModelContext& ctx, const HypothesisLabel& h) {
  std::ostringstream out;
  out << "family: " << to_string(ctx.family) << "   link: " << to_string(ctx.link) << "   n = " << r.n
      << "   p = " << r.p << "\n";
  out << "H0: ";
  if (h.on_phi) {
    out << "phi = " << fmt("%g", h.phi0);
  } else {
    for (std::size_t k = 0; k < h.tested.size(); ++k) {
      if (k) out << ", ";
      out << h.tested[k] << " = " << fmt("%g", k < h.values.size() ? h.values[k] : 0.0);
    }
  }
  out << "   (df = " << r.q << ")\n\n";
  out << pad("statistic", 11, true) << pad("value", 12) << pad("p-value", 10) << "\n";
  for (const StatisticRecord& rec : r.records) {
    out << pad(std::string(to_string(rec.kind)), 11, true) << pad(fmt("%.4f", rec.value), 12)
        << pad(fmt("%.4f", rec.p_value), 10) << (rec.negative ? "  (negative)" : "") << "\n";
  }
  return out.str();
}

std::string report_to_json(const TestReport& r, const ModelContext& ctx, const HypothesisLabel& h) {
  json hyp = h.on_phi ? json{{"kind", "phi"}, {"phi0", h.phi0}}
                      : json{{"kind", "beta"}, {"tested", h.tested}, {"values", h.values}};
  json stats = json::array();
  for (const StatisticRecord& rec : r.records) {
    stats.push_back({{"name", to_string(rec.kind)},
                     {"value", rec.value},
                     {"df", rec.df},
                     {"p_value", rec.p_value},
                     {"negative", rec.negative},
                     {"correction", rec.correction ? terms_json(*rec.correction) : json(nullptr)}});
  }
  json j = {{"schema", "glmcorr.test_report/1"},
            {"model", model_json(ctx)},
            {"n", r.n},
            {"p", r.p},
            {"q", r.q},
            {"hypothesis", hyp},
            {"statistics", stats}};
  return j.dump(2) + "\n";
}

std::string report_to_csv(const TestReport& r) {
  std::ostringstream out;
  out << "statistic,value,df,p_value,negative\n";
  for (const StatisticRecord& rec : r.records) {
    out << to_string(rec.kind) << ',' << exact(rec.value) << ',' << rec.df << ',' << exact(rec.p_value) << ','
        << (rec.negative ? 1 : 0) << "\n";
  }
  return out.str();
}

TestReport report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("report JSON: ") + e.what());
  }
  TestReport r;
  r.n = j.at("n").get<int>();
  r.p = j.at("p").get<int>();
  r.q = j.at("q").get<int>();
  const json& stats = j.at("statistics");
  if (!stats.is_array() || stats.size() != kAllStatistics.size()) {
    throw DataError("report JSON: expected seven statistics");
  }
  for (std::size_t k = 0; k < kAllStatistics.size(); ++k) {
    const json& s = stats[k];
    StatisticRecord& rec = r.records[k];
    rec.kind = kAllStatistics[k];
    if (s.at("name").get<std::string>() != to_string(rec.kind)) throw DataError("report JSON: statistic order");
    rec.value = s.at("value").get<double>();
    rec.df = s.at("df").get<int>();
    rec.p_value = s.at("p_value").get<double>();
    rec.negative = s.at("negative").get<bool>();
    if (!s.at("correction").is_null()) rec.correction = terms_from_json(s.at("correction"));
  }
  return r;
}

std::string rates_to_table(const RateTable& t) {
  std::ostringstream out;
  out << "replications: " << t.replications << "   failed: " << t.failed << "   seed: " << t.master_seed
      << "   scenario: " << hex64(t.scenario_hash) << "\n\n";
  out << pad("statistic", 11, true);
  for (double a : t.levels) out << pad(fmt("%g%%", 100.0 * a), 16);
  out << pad("negative", 10) << "\n";
  for (std::size_t s = 0; s < t.statistics.size(); ++s) {
    out << pad(std::string(to_string(t.statistics[s])), 11, true);
    for (const RateCell& c : t.cells[s]) out << pad(fmt("%.2f", c.rate) + " (" + fmt("%.2f", c.mcse) + ")", 16);
    out << pad(std::to_string(t.negative[s]), 10) << "\n";
  }
  return out.str();
}

std::string rates_to_json(const RateTable& t, const SimScenario& sc) {
  json stats = json::array();
  for (std::size_t s = 0; s < t.statistics.size(); ++s) {
    json cells = json::array();
    for (std::size_t k = 0; k < t.levels.size(); ++k) {
      const RateCell& c = t.cells[s][k];
      cells.push_back({{"level", t.levels[k]},
                       {"rate", c.rate},
                       {"mcse", c.mcse},
                       {"rejections", c.rejections},
                       {"used", c.used}});
    }
    stats.push_back({{"name", to_string(t.statistics[s])}, {"negative_excluded", t.negative[s]}, {"cells", cells}});
  }
  json j = {{"schema", "glmcorr.rate_table/1"},
            {"scenario", scenario_json(sc)},
            {"scenario_hash", hex64(t.scenario_hash)},
            {"replications", t.replications},
            {"failed", t.failed},
            {"statistics", stats}};
  return j.dump(2) + "\n";
}

std::string rates_to_csv(const RateTable& t) {
  std::ostringstream out;
  out << "statistic,level,rate,mcse,rejections,used,negative_excluded\n";
  for (std::size_t s = 0; s < t.statistics.size(); ++s) {
    for (std::size_t k = 0; k < t.levels.size(); ++k) {
      const RateCell& c = t.cells[s][k];
      out << to_string(t.statistics[s]) << ',' << exact(t.levels[k]) << ',' << exact(c.rate) << ','
          << exact(c.mcse) << ',' << c.rejections << ',' << c.used << ',' << t.negative[s] << "\n";
    }
  }
  return out.str();
}

std::string run_manifest(const RateTable& t, const SimScenario& sc, const std::vector<std::string>& files) {
  json j = {{"schema", "glmcorr.manifest/1"},
            {"seed", sc.master_seed},
            {"scenario_hash", hex64(t.scenario_hash)},
            {"design_hash", hex64(sc.design_hash())},
            {"replications", t.replications},
            {"failed", t.failed},
            {"negative_excluded", t.negative},
            {"files", files},
            {"scenario", scenario_json(sc)}};
  return j.dump(2) + "\n";
}

}  // namespace glmcorr
