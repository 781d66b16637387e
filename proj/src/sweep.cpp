#include "bellcorr/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bellcorr/bell.hpp"
#include "bellcorr/hamiltonian.hpp"
#include "bellcorr/lhv.hpp"
#include "bellcorr/spdc.hpp"

namespace bellcorr {

namespace {

constexpr double kDefaultSeriesTolerance = 1e-14;

std::string join(const std::vector<std::int64_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(values[i]);
  }
  return s;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void write_preamble(std::ostream& out, const SweepConfig& config) {
  out << "# bellcorr " << kToolVersion << '\n';
  out << "# scenario=" << scenario_name(config.scenario) << '\n';
  for (const auto& [key, value] : config_echo(config)) out << "# " << key << '=' << value << '\n';
}

}  // namespace

std::string_view scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::kBecScan:
      return "bec-scan";
    case Scenario::kSpdcFull:
      return "spdc-full";
    case Scenario::kSpdcFixedN:
      return "spdc-fixed-n";
    case Scenario::kLhvCheck:
      return "lhv-check";
    case Scenario::kExpand:
      return "expand";
    case Scenario::kBoundQuery:
      return "bound";
  }
  return "unknown";
}

SweepConfig default_config(Scenario scenario) {
  SweepConfig config;
  config.scenario = scenario;
  if (scenario == Scenario::kSpdcFull) config.orders = {2, 3, 5, 6};
  if (scenario == Scenario::kBoundQuery) config.m = config.n_particles;
  return config;
}

void validate(const SweepConfig& c) {
  if (c.tolerance) require(*c.tolerance > 0.0, "tol must be positive");
  switch (c.scenario) {
    case Scenario::kBecScan:
      require(c.n_particles >= 1, "N must be at least 1");
      require(std::isfinite(c.u_min) && std::isfinite(c.u_max), "U range must be finite");
      require(c.u_steps >= 1, "U-steps must be at least 1");
      require(!c.orders.empty(), "orders must not be empty");
      for (auto m : c.orders) {
        require(m >= 1 && m <= c.n_particles,
                "order " + std::to_string(m) + " outside [1, " + std::to_string(c.n_particles) + "]");
      }
      break;
    case Scenario::kSpdcFull:
      require(c.t_min > 0.0 && std::isfinite(c.t_max) && c.t_max >= c.t_min, "need 0 < t-min <= t-max");
      require(c.t_steps >= 1, "t-steps must be at least 1");
      require(!c.orders.empty(), "orders must not be empty");
      for (auto m : c.orders) require(m >= 1, "orders must be at least 1");
      break;
    case Scenario::kSpdcFixedN:
      require(!c.n_list.empty(), "Ns must not be empty");
      for (auto n : c.n_list) require(n >= 1, "every N must be at least 1");
      break;
    case Scenario::kLhvCheck:
      require(c.m >= 1 && c.m <= kMaxBruteForceParties,
              "m must lie in [1, " + std::to_string(kMaxBruteForceParties) + "]");
      break;
    case Scenario::kExpand:
      require(c.m >= 1 && c.m <= 20, "m must lie in [1, 20]");
      break;
    case Scenario::kBoundQuery:
      require(c.n_particles >= 1, "N must be at least 1");
      require(c.m >= 0 && c.m <= c.n_particles, "m must lie in [0, N]");
      require(c.n_region_b.has_value() == c.k.has_value(), "N-B and k must be given together");
      if (c.n_region_b) {
        require(*c.n_region_b >= 1, "N-B must be at least 1");
        require(*c.k >= 0 && *c.k <= *c.n_region_b, "k must lie in [0, N-B]");
      }
      break;
  }
}

std::vector<std::pair<std::string, std::string>> config_echo(const SweepConfig& c) {
  std::vector<std::pair<std::string, std::string>> echo;
  switch (c.scenario) {
    case Scenario::kBecScan:
      echo = {{"N", std::to_string(c.n_particles)},
              {"U-min", format_double(c.u_min)},
              {"U-max", format_double(c.u_max)},
              {"U-steps", std::to_string(c.u_steps)},
              {"orders", join(c.orders)},
              {"tol", format_double(c.tolerance.value_or(kDefaultEigenTolerance))}};
      break;
    case Scenario::kSpdcFull:
      echo = {{"t-min", format_double(c.t_min)},
              {"t-max", format_double(c.t_max)},
              {"t-steps", std::to_string(c.t_steps)},
              {"orders", join(c.orders)},
              {"tol", format_double(c.tolerance.value_or(kDefaultSeriesTolerance))}};
      break;
    case Scenario::kSpdcFixedN:
      echo = {{"Ns", join(c.n_list)}};
      break;
    case Scenario::kLhvCheck:
    case Scenario::kExpand:
      echo = {{"m", std::to_string(c.m)}};
      break;
    case Scenario::kBoundQuery:
      echo = {{"N", std::to_string(c.n_particles)}, {"m", std::to_string(c.m)}};
      if (c.n_region_b) {
        echo.emplace_back("N-B", std::to_string(*c.n_region_b));
        echo.emplace_back("k", std::to_string(*c.k));
      }
      break;
  }
  return echo;
}

std::vector<double> linear_grid(double lo, double hi, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("linear_grid: need at least one point");
  std::vector<double> grid(static_cast<std::size_t>(n));
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double span = hi - lo;
  for (std::int64_t i = 0; i < n; ++i) {
    grid[i] = lo + span * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  grid.back() = hi;
  return grid;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, result.ptr};
}

std::string format_exp_of_log(double log_value) {
  if (log_value == -std::numeric_limits<double>::infinity()) return "0";
  if (!std::isfinite(log_value)) return format_double(log_value);
  // Extended precision keeps the fractional part of log10 accurate to all
  // printed digits for exponents up to the thousands.
  const long double log10_value = static_cast<long double>(log_value) / std::numbers::ln10_v<long double>;
  long double exponent = std::floor(log10_value);
  long double mantissa = std::pow(10.0L, log10_value - exponent);
  if (mantissa >= 10.0L) {
    mantissa /= 10.0L;
    exponent += 1.0L;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15Lge%+.0Lf", mantissa, exponent);
  return buf;
}

std::vector<BecRow> run_bec_scan(const SweepConfig& config) {
  validate(config);
  const auto grid = linear_grid(config.u_min, config.u_max, config.u_steps);
  const double tol = config.tolerance.value_or(kDefaultEigenTolerance);
  auto per_u = parallel_map<std::vector<BecRow>>(grid.size(), config.threads, [&](std::size_t i) {
    const double u = grid[i];
    GroundStateResult gs = [&] {
      try {
        return ground_state(build_bose_hubbard(config.n_particles, u), tol);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("bec-scan: ground state failed at U=" + format_double(u) + ": " + e.what());
      }
    }();
    std::vector<BecRow> rows;
    rows.reserve(config.orders.size());
    for (auto m : config.orders) {
      const auto report = correlator_single(gs.state, m);
      rows.push_back({u, m, report.log_correlator.log_magnitude(), report.log_bound, report.ratio(),
                      report.violates_bell});
    }
    return rows;
  });
  std::vector<BecRow> rows;
  for (auto& block : per_u) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

std::vector<SpdcFullRow> run_spdc_full(const SweepConfig& config) {
  validate(config);
  const auto grid = linear_grid(config.t_min, config.t_max, config.t_steps);
  const double tol = config.tolerance.value_or(kDefaultSeriesTolerance);
  auto per_t = parallel_map<std::vector<SpdcFullRow>>(grid.size(), config.threads, [&](std::size_t i) {
    const double t = grid[i];
    std::vector<SpdcFullRow> rows;
    for (auto m : config.orders) {
      CorrelatorReport report;
      try {
        report = full_state_report(t, m, tol);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError("spdc-full: t=" + format_double(t) + " m=" + std::to_string(m) + ": " + e.what());
      }
      rows.push_back({t, m, report.log_correlator.log_magnitude(), report.log_bound, report.ratio(),
                      report.violates_bell});
    }
    return rows;
  });
  std::vector<SpdcFullRow> rows;
  for (auto& block : per_t) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

std::vector<FixedNRow> run_spdc_fixed_n(const SweepConfig& config) {
  validate(config);
  std::vector<FixedNRow> rows;
  for (auto n : config.n_list) {
    const auto state = fixed_n_state(n);
    for (std::int64_t m = 1; m <= n; ++m) {
      const auto report = fixed_n_correlator(state, m);
      rows.push_back({n, m, report.ratio(), report.violates_bell});
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<BecRow>& rows) {
  write_preamble(out, config);
  out << "U,m,log_correlator,log_bound,ratio,violates\n";
  for (const auto& r : rows) {
    out << format_double(r.interaction) << ',' << r.m << ',' << format_double(r.log_correlator) << ','
        << format_double(r.log_bound) << ',' << format_double(r.ratio) << ',' << (r.violates ? 1 : 0) << '\n';
  }
}

void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<SpdcFullRow>& rows) {
  write_preamble(out, config);
  out << "t,m,log_correlator,log_bound,ratio,violates\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << r.m << ',' << format_double(r.log_correlator) << ','
        << format_double(r.log_bound) << ',' << format_double(r.ratio) << ',' << (r.violates ? 1 : 0) << '\n';
  }
}

void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<FixedNRow>& rows) {
  write_preamble(out, config);
  out << "N,m,ratio,violates\n";
  for (const auto& r : rows) {
    out << r.n_per_region << ',' << r.m << ',' << format_double(r.ratio) << ',' << (r.violates ? 1 : 0) << '\n';
  }
}

void run_lhv_check(std::ostream& out, const SweepConfig& config) {
  validate(config);
  const auto result = brute_force_enumerate(config.m, config.threads);
  const double bound = std::ldexp(1.0, static_cast<int>(-config.m));
  out << "m=" << config.m << '\n';
  out << "strategies enumerated: " << result.strategies_enumerated << '\n';
  out << "max |<Sigma_m>|^2 = " << format_double(result.max_value) << '\n';
  out << "min |<Sigma_m>|^2 = "
      << format_double(std::ldexp(static_cast<double>(result.min_scaled_norm), static_cast<int>(-2 * config.m)))
      << '\n';
  out << "bound 2^-m = " << format_double(bound) << '\n';
  out << "bound attained: " << (result.max_value == bound ? "yes" : "no") << '\n';
  out << "bound exceeded: " << (result.max_value > bound ? "yes" : "no") << '\n';
}

void run_expand(std::ostream& out, const SweepConfig& config) {
  validate(config);
  out << "# bellcorr " << kToolVersion << '\n';
  out << "# J+^" << config.m << " = sum of coefficient * word, with X = Jx and Y = Jy\n";
  out << "word,coefficient\n";
  for (const auto& w : expand_plus_power(config.m)) out << w.text() << ',' << coefficient_text(w) << '\n';
}

void run_bound_query(std::ostream& out, const SweepConfig& config) {
  validate(config);
  write_preamble(out, config);
  if (config.n_region_b) {
    const double b = bound_two_region_log(config.n_particles, *config.n_region_b, config.m, *config.k);
    out << "N_A,m,N_B,k,log_bound,bound\n";
    out << config.n_particles << ',' << config.m << ',' << *config.n_region_b << ',' << *config.k << ','
        << format_double(b) << ',' << format_exp_of_log(b) << '\n';
    return;
  }
  const double b = bound_single_log(config.n_particles, config.m);
  out << "N,m,log_bound,bound\n";
  out << config.n_particles << ',' << config.m << ',' << format_double(b) << ',' << format_exp_of_log(b) << '\n';
}

void run_scenario(std::ostream& out, const SweepConfig& config) {
  switch (config.scenario) {
    case Scenario::kBecScan:
      write_csv(out, config, run_bec_scan(config));
      break;
    case Scenario::kSpdcFull:
      write_csv(out, config, run_spdc_full(config));
      break;
    case Scenario::kSpdcFixedN:
      write_csv(out, config, run_spdc_fixed_n(config));
      break;
    case Scenario::kLhvCheck:
      run_lhv_check(out, config);
      break;
    case Scenario::kExpand:
      run_expand(out, config);
      break;
    case Scenario::kBoundQuery:
      run_bound_query(out, config);
      break;
  }
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string{};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

}  // namespace bellcorr
