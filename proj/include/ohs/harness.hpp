// Copyright 2026 The ohs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment harness: runs an online pipeline over generated (or loaded)
// instances, checks invariants after every arrival, and compares the result
// with the offline optimum.
//
// Seeds: trial k of a run with root seed s uses derive_seed(s, purpose, k)
// for the instance, the arrival order, and the algorithm's own coin flips,
// so every trial is reproducible on its own and independent of how trials
// are scheduled.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ohs/complexity.hpp"
#include "ohs/core.hpp"
#include "ohs/fractional.hpp"
#include "ohs/generators.hpp"
#include "ohs/instance_io.hpp"
#include "ohs/netfinder.hpp"
#include "ohs/oracle.hpp"
#include "ohs/quasiuniform.hpp"
#include "ohs/random.hpp"
#include "ohs/uniformize.hpp"

namespace ohs {

enum class Pipeline {
  kUnweightedNetFinder,
  kWeightedQuasiUniform,
  kFractionalOnly,
  kLeftmost,
  kRightmost,
  kMedian,
  kCheapest,
};

inline std::string to_string(Pipeline p) {
  switch (p) {
    case Pipeline::kUnweightedNetFinder:
      return "unweighted-netfinder";
    case Pipeline::kWeightedQuasiUniform:
      return "weighted-quasiuniform";
    case Pipeline::kFractionalOnly:
      return "fractional-only";
    case Pipeline::kLeftmost:
      return "baseline-leftmost";
    case Pipeline::kRightmost:
      return "baseline-rightmost";
    case Pipeline::kMedian:
      return "baseline-median";
    case Pipeline::kCheapest:
      return "baseline-cheapest";
  }
  return "unknown";
}

inline Pipeline pipeline_from_string(const std::string& s) {
  for (auto p : {Pipeline::kUnweightedNetFinder, Pipeline::kWeightedQuasiUniform,
                 Pipeline::kFractionalOnly, Pipeline::kLeftmost,
                 Pipeline::kRightmost, Pipeline::kMedian, Pipeline::kCheapest})
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown pipeline '" + s + "'");
}

inline bool is_baseline(Pipeline p) {
  return p == Pipeline::kLeftmost || p == Pipeline::kRightmost ||
         p == Pipeline::kMedian || p == Pipeline::kCheapest;
}

inline std::string to_string(OrderPolicy p) {
  switch (p) {
    case OrderPolicy::kGiven:
      return "given";
    case OrderPolicy::kRandom:
      return "random";
    case OrderPolicy::kReverse:
      return "reverse";
  }
  return "unknown";
}

// Default phi profile for a family: linear in k for the planar families and
// intervals, quadratic for half-spaces in R^3.
inline SccProfile default_profile(const std::string& family) {
  if (family == "halfspaces3d" || family == "halfspaces")
    return SccProfile::linear_power(Rational(8), 2);
  if (family == "file") return SccProfile::vc_poly(2);
  return SccProfile::linear_power(Rational(8), 1);
}

struct ExperimentConfig {
  std::string family = "intervals";  // a generator family, "lowerbound", or "file"
  std::size_t n = 64;
  std::size_t m = 256;
  int depth = 4;  // lowerbound family only
  std::string instance_path;  // file family only
  CostModel cost_model = CostModel::kUnit;
  std::optional<SccProfile> phi;
  std::optional<int> d;  // VC dimension; defaults to the family's value
  Pipeline pipeline = Pipeline::kUnweightedNetFinder;
  std::int64_t c1 = 64;
  double c_alpha = 1.0;
  double c_beta = 2.0;
  double c_d = 2.0;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  OrderPolicy order = OrderPolicy::kGiven;
  std::uint64_t oracle_nodes = 2'000'000;
  bool timing = false;
  unsigned threads = 0;  // 0: hardware concurrency

  SccProfile profile() const { return phi ? *phi : default_profile(family); }

  int vc_d() const {
    if (d) return *d;
    if (family == "lowerbound") return 2;
    if (family == "file") return 2;
    return family_vc_dimension(family_from_string(family));
  }

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (c1 <= 0 || !(c_alpha > 0) || !(c_beta > 0) || !(c_d > 0))
      throw std::invalid_argument("algorithm constants must be positive");
    if (family == "lowerbound") {
      if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    } else if (family == "file") {
      if (instance_path.empty())
        throw std::invalid_argument("file family needs instance_path");
    } else {
      family_from_string(family);
      if (n < 1 || m < 1) throw std::invalid_argument("n and m must be >= 1");
    }
    profile().validate();
    if (vc_d() < 1) throw std::invalid_argument("d must be >= 1");
  }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["family"] = c.family;
  j["n"] = c.n;
  j["m"] = c.m;
  j["depth"] = c.depth;
  if (!c.instance_path.empty()) j["instance_path"] = c.instance_path;
  j["cost_model"] = to_string(c.cost_model);
  j["phi"] = to_json(c.profile());
  j["d"] = c.vc_d();
  j["pipeline"] = to_string(c.pipeline);
  j["constants"] = {{"c1", c.c1}, {"c_alpha", c.c_alpha},
                    {"c_beta", c.c_beta}, {"c_d", c.c_d}};
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["order"] = to_string(c.order);
  j["oracle_nodes"] = c.oracle_nodes;
  j["timing"] = c.timing;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("family")) c.family = j.at("family").get<std::string>();
  if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
  if (j.contains("m")) c.m = j.at("m").get<std::size_t>();
  if (j.contains("depth")) c.depth = j.at("depth").get<int>();
  if (j.contains("instance_path"))
    c.instance_path = j.at("instance_path").get<std::string>();
  if (j.contains("cost_model"))
    c.cost_model = cost_model_from_string(j.at("cost_model").get<std::string>());
  if (j.contains("phi")) c.phi = profile_from_json(j.at("phi"));
  if (j.contains("d")) c.d = j.at("d").get<int>();
  if (j.contains("pipeline"))
    c.pipeline = pipeline_from_string(j.at("pipeline").get<std::string>());
  if (j.contains("constants")) {
    const auto& k = j.at("constants");
    if (k.contains("c1")) c.c1 = k.at("c1").get<std::int64_t>();
    if (k.contains("c_alpha")) c.c_alpha = k.at("c_alpha").get<double>();
    if (k.contains("c_beta")) c.c_beta = k.at("c_beta").get<double>();
    if (k.contains("c_d")) c.c_d = k.at("c_d").get<double>();
  }
  if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("order"))
    c.order = order_policy_from_string(j.at("order").get<std::string>());
  if (j.contains("oracle_nodes"))
    c.oracle_nodes = j.at("oracle_nodes").get<std::uint64_t>();
  if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
  if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
  c.validate();
  return c;
}

// Per-arrival invariant bookkeeping.
struct InvariantLog {
  std::size_t violations = 0;
  std::vector<std::string> diagnostics;

  void fail(std::size_t t, const std::string& what) {
    ++violations;
    if (diagnostics.size() < 16)
      diagnostics.push_back("arrival " + std::to_string(t) + ": " + what);
  }
};

// One online algorithm run on one arrival sequence.
class PipelineRunner {
 public:
  PipelineRunner(Pipeline pipeline, const SetSystem& universe,
                 const ExperimentConfig& config, std::uint64_t seed)
      : pipeline_(pipeline), costs_(universe.costs()), n_(universe.n()),
        frac_(universe.n()), phases_(costs_), clones_(universe.n()),
        picked_(universe.n(), 0) {
    if (pipeline == Pipeline::kUnweightedNetFinder) {
      NetFinderConfig nc;
      nc.d = config.vc_d();
      nc.profile = config.profile();
      nc.c_alpha = config.c_alpha;
      nc.c_beta = config.c_beta;
      nc.c_d = config.c_d;
      net_ = std::make_unique<NetFinderState>(n_, nc, seed);
    }
    if (pipeline == Pipeline::kWeightedQuasiUniform) {
      QuasiConfig qc;
      qc.profile = config.profile();
      qc.c1 = config.c1;
      quasi_ = std::make_unique<QuasiState>(n_, qc, seed);
      lower_ = std::make_unique<LpLowerBound>(universe);
    }
  }

  Pipeline pipeline() const { return pipeline_; }
  const IntegralSolution& solution() const { return solution_; }
  const FractionalState& fractional() const { return frac_; }
  const CloneSystem& clones() const { return clones_; }
  const NetFinderState* net() const { return net_.get(); }
  const QuasiState* quasi() const { return quasi_.get(); }
  bool uses_fractional() const { return !is_baseline(pipeline_); }
  bool integral() const { return pipeline_ != Pipeline::kFractionalOnly; }

  // Serves S_t and checks every invariant that applies to the pipeline.
  void serve(const ElementSet& s, InvariantLog& log) {
    const std::size_t t = arrivals_++;
    std::vector<Fraction> before = frac_.x;
    const std::size_t size_before = solution_.size();
    switch (pipeline_) {
      case Pipeline::kFractionalOnly:
        frac_process(frac_, s, costs_);
        if (!is_covered(frac_, s)) log.fail(t, "fractional solution misses set");
        break;
      case Pipeline::kUnweightedNetFinder: {
        frac_process(frac_, s, costs_);
        if (!is_covered(frac_, s)) log.fail(t, "fractional solution misses set");
        const auto& tt = clones_.uniformize_step(frac_, s);
        check_clone_set(t, s, tt, log);
        net_->process(clones_, tt);
        std::size_t np = clones_.n_prime();
        auto a = static_cast<unsigned>(net_->phase());
        if (!((std::size_t{1} << a) <= np && np < (std::size_t{2} << a)))
          log.fail(t, "net-finder phase does not bracket N'");
        absorb(net_->solution());
        break;
      }
      case Pipeline::kWeightedQuasiUniform: {
        lower_->add_set(s);
        frac_.lower_bound = lower_->value();
        auto eligible = phases_.phase_wrap(frac_, s, lower_->phase());
        if (!is_covered(frac_, eligible))
          log.fail(t, "fractional solution misses eligible part of set");
        const Fraction floor_value = Fraction::at_least_inverse(n_);
        for (std::size_t e = 0; e < n_; ++e)
          if (!frac_.x[e].is_zero() && frac_.x[e] < floor_value) {
            log.fail(t, "positive x_e below 1/n");
            break;
          }
        const auto& tt = clones_.uniformize_step(frac_, s);
        check_clone_set(t, s, tt, log);
        if (!quasi_->process(tt)) log.fail(t, "clone set not hit by H");
        if (quasi_->load_bound_violations() > 0)
          log.fail(t, "backup load above its bound");
        absorb(quasi_->solution());
        break;
      }
      default:
        if (!is_hit(s, solution_)) add(pick(s));
        break;
    }
    for (std::size_t e = 0; e < n_; ++e)
      if (frac_.x[e] < before[e]) {
        log.fail(t, "fractional value decreased");
        break;
      }
    if (integral()) {
      if (!is_hit(s, solution_)) log.fail(t, "integral solution misses set");
      if (solution_.size() < size_before)
        log.fail(t, "integral solution shrank");
    }
  }

  BigRational alg_cost() const {
    if (pipeline_ == Pipeline::kFractionalOnly) return frac_cost(frac_, costs_);
    BigRational total = 0;
    for (auto e : solution_.chosen()) total += to_big(costs_[e]);
    return total;
  }

  BigRational fractional_cost() const { return frac_cost(frac_, costs_); }

 private:
  void check_clone_set(std::size_t t, const ElementSet& s, const CloneSet& tt,
                       InvariantLog& log) {
    if (tt.size() < n_) log.fail(t, "clone set smaller than n");
    if (proj(n_, tt) != s) log.fail(t, "clone set does not project to S_t");
  }

  ElementId pick(const ElementSet& s) const {
    switch (pipeline_) {
      case Pipeline::kLeftmost:
        return s.front();
      case Pipeline::kRightmost:
        return s.back();
      case Pipeline::kMedian:
        return s[(s.size() - 1) / 2];
      case Pipeline::kCheapest: {
        ElementId best = s.front();
        for (auto e : s)
          if (costs_[e] < costs_[best]) best = e;
        return best;
      }
      default:
        throw std::logic_error("not a baseline pipeline");
    }
  }

  void add(ElementId e) {
    if (!picked_[e]) {
      picked_[e] = 1;
      solution_.add(e, costs_[e]);
    }
  }

  void absorb(const ElementSet& elements) {
    for (auto e : elements) add(e);
  }

  Pipeline pipeline_;
  std::vector<Rational> costs_;
  std::size_t n_;
  FractionalState frac_;
  PhaseWrapper phases_;
  CloneSystem clones_;
  std::unique_ptr<NetFinderState> net_;
  std::unique_ptr<QuasiState> quasi_;
  std::unique_ptr<LpLowerBound> lower_;
  IntegralSolution solution_;
  std::vector<char> picked_;
  std::size_t arrivals_ = 0;
};

struct TrialResult {
  std::size_t index = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  BigRational alg_cost = 0;
  BigRational opt_cost = 0;
  BigRational lp_cost = 0;
  std::optional<BigRational> frac_cost;
  double ratio = 0;
  std::optional<double> rho;
  std::size_t violations = 0;
  bool aborted = false;
  std::vector<std::string> diagnostics;
  std::string oracle_method;
  double runtime_ms = 0;
};

inline double ratio_of(const BigRational& num, const BigRational& den) {
  if (den == 0) return num == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  return big_to_double(num / den);
}

// The instance of one trial (not used by the lowerbound family).
inline SetSystem trial_instance(const ExperimentConfig& c, std::size_t k) {
  if (c.family == "file") return read_instance(c.instance_path).system;
  return generate(family_from_string(c.family), c.n, c.m,
                  derive_seed(c.seed, seed_purpose::kInstance, k), c.cost_model)
      .system;
}

inline TrialResult run_trial(const ExperimentConfig& c, std::size_t k) {
  auto start = std::chrono::steady_clock::now();
  TrialResult r;
  r.index = k;
  InvariantLog log;
  const std::uint64_t algo_seed = derive_seed(c.seed, seed_purpose::kAlgorithm, k);
  SetSystem realized;
  std::optional<PipelineRunner> runner;
  if (c.family == "lowerbound") {
    DyadicIntervalAdversary adv(c.depth);
    SetSystem universe(adv.n(), {});
    runner.emplace(c.pipeline, universe, c, algo_seed);
    while (!adv.done() && log.violations == 0)
      runner->serve(adv.next(runner->solution()), log);
    realized = adv.instance().system;
  } else {
    SetSystem system = trial_instance(c, k);
    std::uint64_t order_seed = derive_seed(c.seed, seed_purpose::kOrder, k);
    ArrivalStream stream = make_order(system.m(), c.order, order_seed);
    realized = system.reordered(stream.order());
    runner.emplace(c.pipeline, system, c, algo_seed);
    while (!stream.done() && log.violations == 0)
      runner->serve(deliver_next(stream, system), log);
  }
  r.n = realized.n();
  r.m = realized.m();
  r.violations = log.violations;
  r.diagnostics = log.diagnostics;
  r.aborted = log.violations > 0;
  if (!r.aborted && runner->integral() &&
      !verify_feasible(realized, runner->solution(), realized.m())) {
    r.violations += 1;
    r.diagnostics.push_back("final solution infeasible");
    r.aborted = true;
  }
  auto oracle = exact_opt(realized, realized.m(), OracleBudget{c.oracle_nodes});
  r.opt_cost = oracle.opt_cost;
  r.lp_cost = oracle.lp_cost;
  r.oracle_method = oracle.method;
  r.alg_cost = runner->alg_cost();
  r.ratio = ratio_of(r.alg_cost, r.opt_cost);
  if (runner->uses_fractional()) {
    r.frac_cost = runner->fractional_cost();
    r.rho = ratio_of(*r.frac_cost, r.lp_cost);
  }
  if (c.timing)
    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start).count();
  return r;
}

inline nlohmann::json to_json(const TrialResult& r, bool timing) {
  nlohmann::json j;
  j["trial"] = r.index;
  j["n"] = r.n;
  j["m"] = r.m;
  j["algCost"] = big_str(r.alg_cost);
  j["optCost"] = big_str(r.opt_cost);
  j["lpCost"] = big_str(r.lp_cost);
  j["ratio"] = r.ratio;
  if (r.frac_cost) j["fracCost"] = big_str(*r.frac_cost);
  if (r.rho) j["rho"] = *r.rho;
  j["invariantViolations"] = r.violations;
  j["aborted"] = r.aborted;
  if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
  j["oracle"] = r.oracle_method;
  if (timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  double mean_ratio = 0;
  double median_ratio = 0;
  double max_ratio = 0;
  std::optional<double> mean_rho;
  std::size_t violations = 0;
  double runtime_ms = 0;
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

// Runs all trials, in parallel when threads != 1. Results are ordered by
// trial index before aggregation, so the report does not depend on
// scheduling.
inline ExperimentReport run_experiment(const ExperimentConfig& c) {
  c.validate();
  auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.config = c;
  rep.trials.resize(c.trials);
  unsigned workers = c.threads ? c.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, c.trials));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      std::size_t k = next++;
      if (k >= c.trials) return;
      try {
        rep.trials[k] = run_trial(c, k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = c.trials;
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  std::vector<double> ratios;
  double rho_sum = 0;
  std::size_t rho_count = 0;
  for (const auto& t : rep.trials) {
    ratios.push_back(t.ratio);
    rep.violations += t.violations;
    if (t.rho) {
      rho_sum += *t.rho;
      ++rho_count;
    }
  }
  double sum = 0;
  for (double v : ratios) sum += v;
  rep.mean_ratio = sum / static_cast<double>(ratios.size());
  rep.median_ratio = median_of(ratios);
  rep.max_ratio = *std::max_element(ratios.begin(), ratios.end());
  if (rho_count) rep.mean_rho = rho_sum / static_cast<double>(rho_count);
  if (c.timing)
    rep.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline nlohmann::json to_json(const ExperimentReport& rep) {
  nlohmann::json j;
  j["config"] = to_json(rep.config);
  auto trials = nlohmann::json::array();
  for (const auto& t : rep.trials) trials.push_back(to_json(t, rep.config.timing));
  j["trials"] = std::move(trials);
  j["aggregate"] = {{"mean_ratio", rep.mean_ratio},
                    {"median_ratio", rep.median_ratio},
                    {"max_ratio", rep.max_ratio},
                    {"invariantViolations", rep.violations}};
  if (rep.mean_rho) j["aggregate"]["mean_rho"] = *rep.mean_rho;
  if (rep.config.timing) j["aggregate"]["runtime_ms"] = rep.runtime_ms;
  return j;
}

// A grid of experiments: every (family, pipeline, n) combination of the base
// config, with m = m_per_n * n when m_per_n is set.
struct SweepConfig {
  ExperimentConfig base;
  std::vector<std::string> families;
  std::vector<Pipeline> pipelines;
  std::vector<std::size_t> n_values;
  std::optional<double> m_per_n;
};

inline SweepConfig sweep_from_json(const nlohmann::json& j) {
  SweepConfig s;
  s.base = config_from_json(j.contains("base") ? j.at("base") : nlohmann::json::object());
  if (j.contains("families"))
    s.families = j.at("families").get<std::vector<std::string>>();
  else
    s.families = {s.base.family};
  if (j.contains("pipelines")) {
    for (const auto& p : j.at("pipelines"))
      s.pipelines.push_back(pipeline_from_string(p.get<std::string>()));
  } else {
    s.pipelines = {s.base.pipeline};
  }
  if (j.contains("n_values"))
    s.n_values = j.at("n_values").get<std::vector<std::size_t>>();
  else
    s.n_values = {s.base.n};
  if (j.contains("m_per_n")) s.m_per_n = j.at("m_per_n").get<double>();
  return s;
}

inline const char* kSweepCsvHeader =
    "family,n,m,trials,pipeline,mean_ratio,median_ratio,max_ratio,mean_rho,"
    "runtime_ms";

struct SweepResult {
  std::vector<ExperimentReport> reports;
  std::size_t violations = 0;
};

inline SweepResult sweep(const SweepConfig& s, std::ostream& csv) {
  SweepResult out;
  csv << kSweepCsvHeader << "\n";
  for (const auto& family : s.families)
    for (auto pipeline : s.pipelines)
      for (auto n : s.n_values) {
        ExperimentConfig c = s.base;
        c.family = family;
        c.pipeline = pipeline;
        c.n = n;
        if (s.m_per_n)
          c.m = static_cast<std::size_t>(std::llround(*s.m_per_n * static_cast<double>(n)));
        if (!s.base.phi) c.phi.reset();
        auto rep = run_experiment(c);
        std::ostringstream row;
        row.precision(10);
        row << family << "," << n << "," << c.m << "," << c.trials << ","
            << to_string(pipeline) << "," << rep.mean_ratio << ","
            << rep.median_ratio << "," << rep.max_ratio << ",";
        if (rep.mean_rho) row << *rep.mean_rho;
        row << ",";
        if (c.timing) row << rep.runtime_ms;
        csv << row.str() << "\n";
        out.violations += rep.violations;
        out.reports.push_back(std::move(rep));
      }
  return out;
}

}  // namespace ohs
