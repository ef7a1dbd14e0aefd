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

// Command-line front end: generate, run, sweep, verify.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ohs/ohs.hpp"

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

int cmd_generate(const std::string& family, std::size_t n, std::size_t m,
                 std::uint64_t seed, const std::string& costs,
                 const std::string& order, const std::string& out) {
  auto inst = ohs::generate(ohs::family_from_string(family), n, m, seed,
                            ohs::cost_model_from_string(costs));
  auto stream = ohs::make_order(inst.system.m(), ohs::order_policy_from_string(order),
                                ohs::derive_seed(seed, ohs::seed_purpose::kOrder, 0));
  auto j = ohs::to_json(inst.system, &stream);
  j["geometry"] = ohs::geometry_json(inst);
  emit(out, j.dump(2) + "\n");
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out) {
  auto config = ohs::config_from_json(read_json(config_path));
  auto report = ohs::run_experiment(config);
  emit(out, ohs::to_json(report).dump(2) + "\n");
  std::cerr << "trials=" << report.trials.size()
            << " mean_ratio=" << report.mean_ratio
            << " max_ratio=" << report.max_ratio
            << " invariantViolations=" << report.violations << "\n";
  return report.violations == 0 ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& out,
              bool timing) {
  auto s = ohs::sweep_from_json(read_json(config_path));
  if (timing) s.base.timing = true;
  std::ostringstream csv;
  auto result = ohs::sweep(s, csv);
  emit(out, csv.str());
  std::cerr << "rows=" << result.reports.size()
            << " invariantViolations=" << result.violations << "\n";
  return result.violations == 0 ? 0 : 1;
}

int cmd_verify(const std::string& in, int k) {
  auto file = ohs::read_instance(in);
  const auto& sys = file.system;
  nlohmann::json j;
  j["n"] = sys.n();
  j["m"] = sys.m();
  j["weighted"] = sys.weighted();
  if (sys.n() <= ohs::kVcBruteForceLimit) {
    auto w = ohs::vc_dimension(sys);
    j["vc_dimension"] = w.dimension;
    j["vc_witness"] = w.shattered;
  } else {
    j["vc_dimension"] = nullptr;
  }
  if (sys.n() <= ohs::kShallowCellLimit) {
    j["shallow_cell_k"] = k;
    j["max_shallow_cell_ratio"] =
        ohs::max_shallow_cell_ratio(sys, static_cast<std::size_t>(k), sys.n());
  }
  if (file.extra.contains("geometry")) {
    auto family = file.extra["geometry"].value("family", "");
    if (!family.empty()) {
      auto bound = ohs::family_vc_dimension(ohs::family_from_string(family));
      j["family"] = family;
      j["family_vc_bound"] = bound;
      if (j["vc_dimension"].is_number() && j["vc_dimension"].get<int>() > bound) {
        std::cout << j.dump(2) << "\n";
        std::cerr << "VC dimension exceeds the family bound\n";
        return 1;
      }
    }
  }
  auto prof = ohs::default_profile(j.value("family", std::string("file")));
  j["phi_well_behaved"] = ohs::check_well_behaved(prof, 64);
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online hitting set experiments"};
  app.require_subcommand(1);

  std::string family = "intervals", costs = "unit", order = "given", out;
  std::size_t n = 64, m = 256;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("generate", "Generate an instance");
  gen->add_option("--family", family, "intervals|disks|squares|lines|halfspaces3d");
  gen->add_option("--n", n, "Number of points");
  gen->add_option("--m", m, "Number of ranges");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--costs", costs, "unit|uniform|power-law");
  gen->add_option("--order", order, "given|random|reverse");
  gen->add_option("--out", out, "Output file (default stdout)");

  std::string config;
  auto* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--config", config, "Experiment config JSON")->required();
  run->add_option("--out", out, "Report file (default stdout)");

  bool timing = false;
  auto* sw = app.add_subcommand("sweep", "Run a grid of experiments");
  sw->add_option("--config", config, "Sweep config JSON")->required();
  sw->add_option("--out", out, "CSV file (default stdout)");
  sw->add_flag("--timing", timing, "Fill the runtime_ms column");

  std::string in;
  int k = 3;
  auto* ver = app.add_subcommand("verify", "Run complexity checks on an instance");
  ver->add_option("--in", in, "Instance JSON")->required();
  ver->add_option("--k", k, "Depth for the shallow-cell check");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_generate(family, n, m, seed, costs, order, out);
    if (*run) return cmd_run(config, out);
    if (*sw) return cmd_sweep(config, out, timing);
    if (*ver) return cmd_verify(in, k);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
