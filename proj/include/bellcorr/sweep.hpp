#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace bellcorr {

enum class Scenario { kBecScan, kSpdcFull, kSpdcFixedN, kLhvCheck, kExpand, kBoundQuery };

std::string_view scenario_name(Scenario scenario);

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Parameters for every CLI scenario. Each scenario reads only its own fields;
/// defaults reproduce the narrow N=100 double-well scan.
struct SweepConfig {
  Scenario scenario = Scenario::kBecScan;

  // bec-scan
  std::int64_t n_particles = 100;
  double u_min = -1.3;
  double u_max = -0.7;
  std::int64_t u_steps = 121;
  std::vector<std::int64_t> orders = {70, 80, 90, 100};

  // spdc-full
  double t_min = 0.04;
  double t_max = 2.0;
  std::int64_t t_steps = 50;

  // spdc-fixed-n
  std::vector<std::int64_t> n_list = {2, 3, 6, 12};

  // lhv-check, expand, bound
  std::int64_t m = 3;
  std::optional<std::int64_t> n_region_b;
  std::optional<std::int64_t> k;

  /// Overrides the scenario's default tolerance when set.
  std::optional<double> tolerance;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string output_path;  // empty: stdout
};

/// Defaults for one scenario; spdc-full uses orders {2, 3, 5, 6}.
SweepConfig default_config(Scenario scenario);

/// Throws std::invalid_argument naming the offending field.
void validate(const SweepConfig& config);

/// key=value lines for the CSV header echo, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_echo(const SweepConfig& config);

/// n evenly spaced points from lo to hi inclusive (lo alone when n == 1).
std::vector<double> linear_grid(double lo, double hi, std::int64_t n);

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite.
std::string format_double(double x);

/// e^log_value in scientific notation without overflow, e.g. "6.87080689862124e+285".
std::string format_exp_of_log(double log_value);

struct BecRow {
  double interaction;
  std::int64_t m;
  double log_correlator;
  double log_bound;
  double ratio;
  bool violates;
};

struct SpdcFullRow {
  double t;
  std::int64_t m;
  double log_correlator;
  double log_bound;
  double ratio;
  bool violates;
};

struct FixedNRow {
  std::int64_t n_per_region;
  std::int64_t m;
  double ratio;
  bool violates;
};

/// One ground state per U, reused across orders. Rows ordered by U grid, then
/// by the order list. A solver failure is rethrown naming the U value.
std::vector<BecRow> run_bec_scan(const SweepConfig& config);
std::vector<SpdcFullRow> run_spdc_full(const SweepConfig& config);
std::vector<FixedNRow> run_spdc_fixed_n(const SweepConfig& config);

void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<BecRow>& rows);
void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<SpdcFullRow>& rows);
void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<FixedNRow>& rows);

/// Text report of the exhaustive LHV search.
void run_lhv_check(std::ostream& out, const SweepConfig& config);
/// CSV listing of the 2^m words of J+^m with their coefficients.
void run_expand(std::ostream& out, const SweepConfig& config);
/// CSV with the single-region bound, or the two-region bound when
/// n_region_b and k are set.
void run_bound_query(std::ostream& out, const SweepConfig& config);

/// Runs the configured scenario, writing to out.
void run_scenario(std::ostream& out, const SweepConfig& config);

/// Evaluates fn(0..count-1) on a worker pool; results keep index order. If
/// any call throws, the exception from the lowest index is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t count, unsigned threads, const std::function<T(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Reads a key=value file. Blank lines and lines starting with '#' are
/// skipped; surrounding whitespace is trimmed.
std::map<std::string, std::string> read_key_value_file(const std::string& path);

}  // namespace bellcorr
