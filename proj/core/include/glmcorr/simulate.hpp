#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "glmcorr/beta_tests.hpp"
#include "glmcorr/family.hpp"
#include "glmcorr/fit.hpp"
#include "glmcorr/link.hpp"

namespace glmcorr {

enum class CovariateLaw { Uniform01, StdNormal };

std::string_view to_string(CovariateLaw law);
// Accepts "uniform", "uniform01", "U(0,1)", "normal", "stdnormal", "N(0,1)".
CovariateLaw parse_covariate_law(std::string_view name);

// One Monte Carlo experiment. The model is log mu = x' beta with a leading
// column of ones (unless intercept is false) and random covariates filling
// the remaining columns. The first q covariate columns are tested against
// zero; they carry delta in the data generating process and the remaining
// coefficients are one, unless beta_true is given explicitly.
struct SimScenario {
  FamilyKind family = FamilyKind::Gamma;
  LinkKind link = LinkKind::Log;
  int n = 20;
  int p = 4;
  int q = 1;
  double phi_true = 1.0;
  CovariateLaw covariate_law = CovariateLaw::Uniform01;
  bool intercept = true;
  std::vector<double> beta_true;
  double delta = 0.0;
  std::vector<double> levels = {0.10, 0.05, 0.01};
  int replications = 15000;
  std::uint64_t master_seed = 20240101;

  // Throws DataError on infeasible settings.
  void validate() const;
  std::vector<int> tested_columns() const;
  Eigen::VectorXd coefficients() const;
  // Key of everything that shapes the data generating process.
  std::uint64_t hash() const;
  // Key of the covariate draw only: law, n, p and intercept.
  std::uint64_t design_hash() const;
};

// Fixed design of a scenario, drawn once from the design stream.
DesignMatrix scenario_design(const SimScenario& sc);

struct RateCell {
  double rate = 0.0;  // percent
  double mcse = 0.0;  // percent, sqrt(r(1-r)/R)
  long rejections = 0;
  long used = 0;
};

struct RateTable {
  std::vector<Statistic> statistics;
  std::vector<double> levels;
  // cells[s][k]: statistic s at levels[k].
  std::vector<std::vector<RateCell>> cells;
  long replications = 0;
  long failed = 0;
  // Replications dropped from one statistic because it came out negative.
  std::vector<long> negative;
  std::uint64_t scenario_hash = 0;
  std::uint64_t master_seed = 0;

  const RateCell& at(Statistic s, std::size_t level_index) const;
};

// Raw per-replication values for all seven statistics; failed replications
// are absent, negative values are kept as computed.
struct SimulationResult {
  RateTable table;
  std::array<std::vector<double>, 7> samples;
};

// Runs every replication across `workers` threads. Output is identical for
// any worker count. Throws SimulationError when more than 2% of the
// replications fail.
SimulationResult simulate(const SimScenario& sc, int workers = 1);

RateTable run_null_rates(const SimScenario& sc, int workers = 1);
// Corrected statistics only, under beta_1 = ... = beta_q = delta.
RateTable run_power(const SimScenario& sc, int workers = 1);

// sup_x |F_n(x) - F(x)| against the chi-squared(df) distribution.
double ks_distance_to_chisq(std::vector<double> sample, int df);

}  // namespace glmcorr
