#include "glmcorr/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <string>
#include <thread>

#include "glmcorr/errors.hpp"
#include "glmcorr/random.hpp"
#include "glmcorr/special_functions.hpp"

namespace glmcorr {
namespace {

constexpr std::uint64_t kDesignStream = 0x64657369676eULL;  // "design"
constexpr double kMaxFailureFraction = 0.02;

class Hasher {
 public:
  Hasher& add(std::uint64_t v) {
    h_ = fnv1a64(&v, sizeof v, h_);
    return *this;
  }
  Hasher& add(double v) { return add(std::bit_cast<std::uint64_t>(v)); }
  Hasher& add(int v) { return add(static_cast<std::uint64_t>(static_cast<std::int64_t>(v))); }
  Hasher& add(std::string_view s) {
    h_ = fnv1a64(s.data(), s.size(), h_);
    return add(static_cast<std::uint64_t>(s.size()));
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

bool is_corrected(Statistic s) {
  return s == Statistic::LRCorrected || s == Statistic::ScoreCorrected || s == Statistic::GradientCorrected;
}

struct Outcome {
  bool ok = false;
  std::array<double, 7> values{};
};

Outcome run_replication(const SimScenario& sc, const DesignMatrix& X, const Eigen::VectorXd& mu,
                        const Hypothesis& hyp, std::uint64_t scenario_hash, long rep) {
  const Family family(sc.family);
  const Link link(sc.link);
  Rng rng({sc.master_seed, scenario_hash, static_cast<std::uint64_t>(rep)});
  Eigen::VectorXd y(sc.n);
  for (int i = 0; i < sc.n; ++i) y[i] = family.sample(mu[i], sc.phi_true, rng);
  Outcome out;
  try {
    const TestReport rep_ = full_test_report(X, y, family, link, hyp);
    for (std::size_t k = 0; k < kAllStatistics.size(); ++k) out.values[k] = rep_.records[k].value;
    out.ok = std::all_of(out.values.begin(), out.values.end(), [](double v) { return std::isfinite(v); });
  } catch (const std::exception&) {
    out.ok = false;
  }
  return out;
}

}  // namespace

std::string_view to_string(CovariateLaw law) {
  return law == CovariateLaw::Uniform01 ? "uniform01" : "stdnormal";
}

CovariateLaw parse_covariate_law(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "uniform" || s == "uniform01" || s == "u(0,1)") return CovariateLaw::Uniform01;
  if (s == "normal" || s == "stdnormal" || s == "n(0,1)") return CovariateLaw::StdNormal;
  throw DataError("unknown covariate law '" + std::string(name) + "'");
}

void SimScenario::validate() const {
  if (q < 1) throw DataError("scenario: q must be at least 1");
  if (q > p) throw DataError("scenario: q exceeds p");
  if (intercept && q > p - 1) throw DataError("scenario: q exceeds the number of non-intercept columns");
  if (p >= n) throw DataError("scenario: p must be smaller than n");
  if (!(phi_true > 0.0) || !std::isfinite(phi_true)) throw DataError("scenario: phi must be positive");
  if (replications < 1) throw DataError("scenario: replications must be positive");
  if (levels.empty()) throw DataError("scenario: no nominal levels");
  for (double a : levels) {
    if (!(a > 0.0 && a <= 1.0)) throw DataError("scenario: nominal levels must lie in (0, 1]");
  }
  if (!beta_true.empty() && static_cast<int>(beta_true.size()) != p) {
    throw DataError("scenario: beta_true must have p entries");
  }
  if (!std::isfinite(delta)) throw DataError("scenario: delta must be finite");
}

std::vector<int> SimScenario::tested_columns() const {
  std::vector<int> t(q);
  const int first = intercept ? 1 : 0;
  for (int j = 0; j < q; ++j) t[j] = first + j;
  return t;
}

Eigen::VectorXd SimScenario::coefficients() const {
  if (!beta_true.empty()) return Eigen::Map<const Eigen::VectorXd>(beta_true.data(), p);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(p);
  for (int j : tested_columns()) b[j] = delta;
  return b;
}

std::uint64_t SimScenario::hash() const {
  Hasher h;
  h.add(to_string(family)).add(static_cast<int>(link)).add(n).add(p).add(q).add(phi_true);
  h.add(to_string(covariate_law)).add(intercept ? 1 : 0);
  const Eigen::VectorXd b = coefficients();
  for (double v : b) h.add(v);
  return h.value();
}

std::uint64_t SimScenario::design_hash() const {
  Hasher h;
  h.add(std::string_view("design")).add(to_string(covariate_law)).add(n).add(p).add(intercept ? 1 : 0);
  return h.value();
}

DesignMatrix scenario_design(const SimScenario& sc) {
  sc.validate();
  Rng rng({sc.master_seed, sc.design_hash(), kDesignStream});
  Eigen::MatrixXd x(sc.n, sc.p);
  std::vector<std::string> names;
  const int first = sc.intercept ? 1 : 0;
  if (sc.intercept) {
    x.col(0).setOnes();
    names.emplace_back("(Intercept)");
  }
  for (int j = first; j < sc.p; ++j) {
    for (int i = 0; i < sc.n; ++i) {
      x(i, j) = sc.covariate_law == CovariateLaw::Uniform01 ? rng.uniform() : rng.normal();
    }
    names.push_back("x" + std::to_string(j + 1));
  }
  DesignMatrix X(std::move(x), std::move(names));
  X.validate();
  return X;
}

const RateCell& RateTable::at(Statistic s, std::size_t level_index) const {
  const auto it = std::find(statistics.begin(), statistics.end(), s);
  if (it == statistics.end()) throw DataError("rate table: statistic " + std::string(to_string(s)) + " absent");
  return cells.at(static_cast<std::size_t>(it - statistics.begin())).at(level_index);
}

SimulationResult simulate(const SimScenario& sc, int workers) {
  sc.validate();
  if (workers < 1) throw DataError("simulate: workers must be positive");
  const DesignMatrix X = scenario_design(sc);
  const Link link(sc.link);
  const Family family(sc.family);
  const Eigen::VectorXd eta = X.x * sc.coefficients();
  Eigen::VectorXd mu(sc.n);
  for (int i = 0; i < sc.n; ++i) {
    mu[i] = link.mu(eta[i]);
    family.check_domain(mu[i]);
  }
  Hypothesis hyp;
  hyp.tested = sc.tested_columns();
  hyp.beta10 = Eigen::VectorXd::Zero(sc.q);
  const std::uint64_t key = sc.hash();

  std::vector<Outcome> outcomes(static_cast<std::size_t>(sc.replications));
  std::atomic<long> next{0};
  auto work = [&] {
    for (long r = next.fetch_add(1); r < sc.replications; r = next.fetch_add(1)) {
      outcomes[static_cast<std::size_t>(r)] = run_replication(sc, X, mu, hyp, key, r);
    }
  };
  const int nthreads = std::min(workers, sc.replications);
  if (nthreads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
  }

  SimulationResult res;
  RateTable& tab = res.table;
  tab.statistics.assign(kAllStatistics.begin(), kAllStatistics.end());
  tab.levels = sc.levels;
  tab.replications = sc.replications;
  tab.scenario_hash = key;
  tab.master_seed = sc.master_seed;
  tab.negative.assign(kAllStatistics.size(), 0);
  tab.cells.assign(kAllStatistics.size(), std::vector<RateCell>(sc.levels.size()));

  std::vector<double> crit(sc.levels.size());
  for (std::size_t k = 0; k < sc.levels.size(); ++k) {
    crit[k] = sc.levels[k] >= 1.0 ? 0.0 : chisq_quantile(sc.levels[k], ChiSquared{sc.q});
  }
  for (const Outcome& o : outcomes) {
    if (!o.ok) {
      ++tab.failed;
      continue;
    }
    for (std::size_t s = 0; s < kAllStatistics.size(); ++s) {
      const double v = o.values[s];
      res.samples[s].push_back(v);
      if (v < 0.0 && is_corrected(kAllStatistics[s])) {
        ++tab.negative[s];
        continue;
      }
      for (std::size_t k = 0; k < sc.levels.size(); ++k) {
        RateCell& c = tab.cells[s][k];
        ++c.used;
        if (sc.levels[k] >= 1.0 || v > crit[k]) ++c.rejections;
      }
    }
  }
  if (static_cast<double>(tab.failed) > kMaxFailureFraction * sc.replications) {
    throw SimulationError("simulate: " + std::to_string(tab.failed) + " of " + std::to_string(sc.replications) +
                          " replications failed");
  }
  for (auto& row : tab.cells) {
    for (RateCell& c : row) {
      if (c.used == 0) continue;
      const double r = static_cast<double>(c.rejections) / static_cast<double>(c.used);
      c.rate = 100.0 * r;
      c.mcse = 100.0 * std::sqrt(r * (1.0 - r) / static_cast<double>(c.used));
    }
  }
  return res;
}

RateTable run_null_rates(const SimScenario& sc, int workers) {
  SimScenario null_sc = sc;
  null_sc.delta = 0.0;
  return simulate(null_sc, workers).table;
}

RateTable run_power(const SimScenario& sc, int workers) {
  RateTable full = simulate(sc, workers).table;
  RateTable out = full;
  out.statistics.clear();
  out.cells.clear();
  out.negative.clear();
  for (std::size_t s = 0; s < full.statistics.size(); ++s) {
    if (!is_corrected(full.statistics[s])) continue;
    out.statistics.push_back(full.statistics[s]);
    out.cells.push_back(full.cells[s]);
    out.negative.push_back(full.negative[s]);
  }
  return out;
}

double ks_distance_to_chisq(std::vector<double> sample, int df) {
  if (sample.empty()) throw DataError("ks_distance_to_chisq: empty sample");
  std::sort(sample.begin(), sample.end());
  const double m = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = sample[i] <= 0.0 ? 0.0 : chisq_cdf(sample[i], ChiSquared{df});
    d = std::max({d, static_cast<double>(i + 1) / m - F, F - static_cast<double>(i) / m});
  }
  return d;
}

}  // namespace glmcorr
