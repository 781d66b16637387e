// bellcorr: parameter sweeps and one-shot queries for many-body Bell
// correlators of bosonic qubits.

#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bellcorr/sweep.hpp"

namespace {

using bellcorr::Scenario;
using bellcorr::SweepConfig;

// Finds --config PATH or --config=PATH.
std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(std::strlen("--config="));
  }
  return {};
}

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Config-file values become ordinary flags unless the command line already
// sets them.
std::vector<std::string> merge_config_file(std::vector<std::string> args) {
  const std::string path = find_config_path(args);
  if (path.empty()) return args;
  for (const auto& [key, value] : bellcorr::read_key_value_file(path)) {
    if (key == "config" || has_flag(args, key)) continue;
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

void add_common(CLI::App* sub, SweepConfig& config, std::optional<double>& tol, std::string& config_path) {
  sub->add_option("--out", config.output_path, "Output path (default: stdout)");
  sub->add_option("--tol", tol, "Tolerance override")->check(CLI::PositiveNumber);
  sub->add_option("--config", config_path, "key=value file; command-line flags win");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Many-body Bell correlators and local-realistic bounds for bosonic qubits", "bellcorr"};
  app.set_version_flag("--version", std::string(bellcorr::kToolVersion));
  app.require_subcommand(1);

  std::map<CLI::App*, SweepConfig> configs;
  std::map<CLI::App*, std::optional<double>> tolerances;
  std::string config_path;

  auto make_sub = [&](Scenario scenario, const std::string& description) {
    auto* sub = app.add_subcommand(std::string(bellcorr::scenario_name(scenario)), description);
    configs.emplace(sub, bellcorr::default_config(scenario));
    tolerances.emplace(sub, std::nullopt);
    add_common(sub, configs.at(sub), tolerances.at(sub), config_path);
    return sub;
  };

  {
    auto* sub = make_sub(Scenario::kBecScan, "Double-well ground-state correlators versus U (CSV)");
    auto& c = configs.at(sub);
    sub->add_option("--N", c.n_particles, "Particle number")->capture_default_str();
    sub->add_option("--U-min", c.u_min, "First U")->capture_default_str();
    sub->add_option("--U-max", c.u_max, "Last U")->capture_default_str();
    sub->add_option("--U-steps", c.u_steps, "Number of U points")->capture_default_str();
    sub->add_option("--orders", c.orders, "Correlator orders m")->delimiter(',')->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  }
  {
    auto* sub = make_sub(Scenario::kSpdcFull, "Full SPDC state correlators versus t (CSV)");
    auto& c = configs.at(sub);
    sub->add_option("--t-min", c.t_min, "First t (> 0)")->capture_default_str();
    sub->add_option("--t-max", c.t_max, "Last t")->capture_default_str();
    sub->add_option("--t-steps", c.t_steps, "Number of t points")->capture_default_str();
    sub->add_option("--orders", c.orders, "Correlator orders m")->delimiter(',')->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  }
  {
    auto* sub = make_sub(Scenario::kSpdcFixedN, "Fixed-N post-selected correlators, m = 1..N (CSV)");
    auto& c = configs.at(sub);
    sub->add_option("--Ns", c.n_list, "Pairs per region")->delimiter(',')->capture_default_str();
  }
  {
    auto* sub = make_sub(Scenario::kLhvCheck, "Exhaustive search over deterministic LHV strategies");
    auto& c = configs.at(sub);
    sub->add_option("--m", c.m, "Number of parties")->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  }
  {
    auto* sub = make_sub(Scenario::kExpand, "Expand J+^m into Jx/Jy words");
    auto& c = configs.at(sub);
    sub->add_option("--m", c.m, "Order")->capture_default_str();
  }
  {
    auto* sub = make_sub(Scenario::kBoundQuery, "Local-realistic bound for one or two regions");
    auto& c = configs.at(sub);
    sub->add_option("--N", c.n_particles, "Particles (region A)")->capture_default_str();
    sub->add_option("--m", c.m, "Order in region A")->capture_default_str();
    sub->add_option("--N-B", c.n_region_b, "Particles in region B");
    sub->add_option("--k", c.k, "Order in region B");
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = merge_config_file(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  CLI::App* chosen = app.get_subcommands().front();
  SweepConfig config = configs.at(chosen);
  config.tolerance = tolerances.at(chosen);

  try {
    bellcorr::validate(config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n\n" << chosen->help();
    return 2;
  }

  try {
    if (config.output_path.empty()) {
      bellcorr::run_scenario(std::cout, config);
    } else {
      std::ofstream out(config.output_path);
      if (!out) {
        std::cerr << "error: cannot open " << config.output_path << " for writing\n";
        return 1;
      }
      bellcorr::run_scenario(out, config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
