#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "glmcorr/beta_tests.hpp"
#include "glmcorr/family.hpp"
#include "glmcorr/fit.hpp"
#include "glmcorr/link.hpp"
#include "glmcorr/simulate.hpp"

namespace glmcorr {

// Labels that travel with a model through the writers.
struct ModelContext {
  FamilyKind family = FamilyKind::Normal;
  LinkKind link = LinkKind::Identity;
  std::string response;
  std::vector<std::string> column_names;
};

struct FitSummary {
  FittedModel fit;
  Eigen::VectorXd se;
  double se_phi = 0.0;
  Eigen::VectorXd deviance_residuals;
};

// sign(y - mu) sqrt(unit deviance).
Eigen::VectorXd deviance_residuals(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, Family family);

FitSummary summarize_fit(FittedModel fit, const DesignMatrix& X, const Eigen::VectorXd& y, Family family);

std::string fit_to_table(const FitSummary& s, const ModelContext& ctx);
std::string fit_to_json(const FitSummary& s, const ModelContext& ctx);
std::string fit_to_csv(const FitSummary& s, const ModelContext& ctx);

// What was tested: either coefficients against values or phi against phi0.
struct HypothesisLabel {
  bool on_phi = false;
  std::vector<std::string> tested;
  std::vector<double> values;
  double phi0 = 0.0;
};

std::string report_to_table(const TestReport& r, const ModelContext& ctx, const HypothesisLabel& h);
std::string report_to_json(const TestReport& r, const ModelContext& ctx, const HypothesisLabel& h);
std::string report_to_csv(const TestReport& r);
// Inverse of report_to_json for the statistics block; doubles round-trip exactly.
TestReport report_from_json(std::string_view text);

std::string rates_to_table(const RateTable& t);
std::string rates_to_json(const RateTable& t, const SimScenario& sc);
std::string rates_to_csv(const RateTable& t);
// Seed, scenario hash, replication and failure counts; no timestamps.
std::string run_manifest(const RateTable& t, const SimScenario& sc, const std::vector<std::string>& files);

}  // namespace glmcorr
