#include "doctest.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bellcorr/sweep.hpp"

using namespace bellcorr;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Data rows of a CSV, split on commas, comments and header dropped.
std::vector<std::vector<std::string>> data_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  bool header_seen = false;
  for (const std::string& line : lines_of(text)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

std::string header_of(const std::string& text) {
  for (const std::string& line : lines_of(text)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  return {};
}

double parse(const std::string& s) {
  double x = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), x);
  return x;
}

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path.string();
}

}  // namespace

TEST_CASE("scenario names") {
  CHECK(scenario_name(Scenario::kBecScan) == "bec-scan");
  CHECK(scenario_name(Scenario::kSpdcFull) == "spdc-full");
  CHECK(scenario_name(Scenario::kSpdcFixedN) == "spdc-fixed-n");
  CHECK(scenario_name(Scenario::kLhvCheck) == "lhv-check");
  CHECK(scenario_name(Scenario::kExpand) == "expand");
  CHECK(scenario_name(Scenario::kBoundQuery) == "bound");
}

TEST_CASE("defaults") {
  const SweepConfig bec = default_config(Scenario::kBecScan);
  CHECK(bec.n_particles == 100);
  CHECK(bec.u_min == -1.3);
  CHECK(bec.u_max == -0.7);
  CHECK(bec.u_steps == 121);
  CHECK(bec.orders == std::vector<std::int64_t>{70, 80, 90, 100});
  const SweepConfig full = default_config(Scenario::kSpdcFull);
  CHECK(full.orders == std::vector<std::int64_t>{2, 3, 5, 6});
  CHECK(full.t_min == 0.04);
  CHECK(full.t_max == 2.0);
  CHECK(full.t_steps == 50);
  CHECK(default_config(Scenario::kSpdcFixedN).n_list == std::vector<std::int64_t>{2, 3, 6, 12});
  CHECK(default_config(Scenario::kBoundQuery).m == 100);
  for (Scenario s : {Scenario::kBecScan, Scenario::kSpdcFull, Scenario::kSpdcFixedN, Scenario::kLhvCheck,
                     Scenario::kExpand, Scenario::kBoundQuery}) {
    CHECK_NOTHROW(validate(default_config(s)));
  }
}

TEST_CASE("validation names the offending field") {
  auto rejects = [](SweepConfig c, const std::string& needle) {
    try {
      validate(c);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  SweepConfig bec = default_config(Scenario::kBecScan);
  bec.orders = {101};
  CHECK(rejects(bec, "order 101"));
  bec.orders = {};
  CHECK(rejects(bec, "orders"));
  bec = default_config(Scenario::kBecScan);
  bec.u_steps = 0;
  CHECK(rejects(bec, "U-steps"));
  bec = default_config(Scenario::kBecScan);
  bec.tolerance = 0.0;
  CHECK(rejects(bec, "tol"));

  SweepConfig full = default_config(Scenario::kSpdcFull);
  full.t_min = 0.0;
  CHECK(rejects(full, "t-min"));
  full = default_config(Scenario::kSpdcFull);
  full.t_max = 0.01;
  CHECK(rejects(full, "t-max"));

  SweepConfig fixed = default_config(Scenario::kSpdcFixedN);
  fixed.n_list = {2, 0};
  CHECK(rejects(fixed, "N"));

  SweepConfig lhv = default_config(Scenario::kLhvCheck);
  lhv.m = 17;
  CHECK(rejects(lhv, "m must lie"));

  SweepConfig bound = default_config(Scenario::kBoundQuery);
  bound.k = 1;
  CHECK(rejects(bound, "N-B and k"));
  bound.n_region_b = 1;
  bound.k = 2;
  CHECK(rejects(bound, "k must lie"));
  bound = default_config(Scenario::kBoundQuery);
  bound.m = 101;
  CHECK(rejects(bound, "m must lie"));
}

TEST_CASE("linear grid") {
  CHECK(linear_grid(3.0, 7.0, 1) == std::vector<double>{3.0});
  const auto g = linear_grid(0.04, 2.0, 50);
  REQUIRE(g.size() == 50);
  CHECK(g.front() == 0.04);
  CHECK(g.back() == 2.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(0.04 * (i + 1)).epsilon(1e-14));
  const auto u = linear_grid(-1.3, -0.7, 121);
  CHECK(u[60] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(linear_grid(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-1.3) == "-1.3");
  CHECK(format_double(100.0) == "100");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  std::mt19937_64 rng(18);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t b = bits(rng);
    double x;
    std::memcpy(&x, &b, sizeof x);
    if (!std::isfinite(x)) continue;
    const std::string s = format_double(x);
    CHECK(parse(s) == x);
    CHECK(s.size() <= 24);
  }
}

TEST_CASE("exponentiating logs for display") {
  CHECK(format_exp_of_log(-INFINITY) == "0");
  CHECK(format_exp_of_log(0.0) == "1e+0");
  CHECK(format_exp_of_log(std::log(2.0)) == "2e+0");
  CHECK(format_exp_of_log(std::log(0.125)) == "1.25e-1");
  // 2 ln(100!) - 100 ln 2 = ln(6.870806898621245e285).
  CHECK(format_exp_of_log(658.1640330551324).rfind("6.870806898621", 0) == 0);
  CHECK(format_exp_of_log(658.1640330551324).substr(16) == "e+285");
  CHECK(format_exp_of_log(INFINITY) == "inf");
}

TEST_CASE("bec-scan rows") {
  SweepConfig c = default_config(Scenario::kBecScan);
  c.n_particles = 2;
  c.u_min = c.u_max = 0.0;
  c.u_steps = 1;
  c.orders = {1};
  const auto rows = run_bec_scan(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].interaction == 0.0);
  CHECK(rows[0].ratio == doctest::Approx(0.5).epsilon(1e-13));
  CHECK_FALSE(rows[0].violates);

  c = default_config(Scenario::kBecScan);
  c.u_min = -2.0;
  c.u_max = 0.0;
  c.u_steps = 3;
  c.orders = {100, 70};
  const auto scan = run_bec_scan(c);
  REQUIRE(scan.size() == 6);
  CHECK(scan[0].interaction == -2.0);
  CHECK(scan[0].m == 100);
  CHECK(scan[1].m == 70);
  CHECK(scan[5].interaction == 0.0);
  CHECK(scan[5].ratio < 1.0);  // U = 0, m = 70
  for (const auto& r : scan) {
    CHECK(r.violates == (r.ratio > 1.0));
    CHECK(std::log(r.ratio) == doctest::Approx(r.log_correlator - r.log_bound).epsilon(1e-10));
  }
}

TEST_CASE("sweeps are deterministic across thread counts") {
  SweepConfig c = default_config(Scenario::kBecScan);
  c.u_steps = 13;
  std::ostringstream one;
  std::ostringstream many;
  c.threads = 1;
  run_scenario(one, c);
  c.threads = 5;
  run_scenario(many, c);
  CHECK(one.str() == many.str());

  SweepConfig f = default_config(Scenario::kSpdcFull);
  f.t_steps = 7;
  std::ostringstream f1;
  std::ostringstream f2;
  f.threads = 1;
  run_scenario(f1, f);
  f.threads = 3;
  run_scenario(f2, f);
  CHECK(f1.str() == f2.str());
}

TEST_CASE("finer tolerances move ratios by less than the coarse tolerance") {
  SweepConfig c = default_config(Scenario::kSpdcFull);
  c.t_steps = 10;
  c.tolerance = 1e-8;
  const auto coarse = run_spdc_full(c);
  c.tolerance = 1e-14;
  const auto fine = run_spdc_full(c);
  REQUIRE(coarse.size() == fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    CHECK(std::abs(coarse[i].ratio / fine[i].ratio - 1.0) <= 1e-8);
  }

  SweepConfig b = default_config(Scenario::kBecScan);
  b.u_steps = 5;
  b.tolerance = 1e-6;
  const auto bc = run_bec_scan(b);
  b.tolerance = 1e-13;
  const auto bf = run_bec_scan(b);
  for (std::size_t i = 0; i < bf.size(); ++i) {
    CHECK(std::abs(bc[i].ratio / bf[i].ratio - 1.0) <= 1e-6);
  }
}

TEST_CASE("spdc-full rows") {
  SweepConfig c = default_config(Scenario::kSpdcFull);
  const auto rows = run_spdc_full(c);
  CHECK(rows.size() == 50 * 4);
  CHECK(rows[0].t == 0.04);
  CHECK(rows[0].m == 2);
  CHECK(rows[1].m == 3);
  for (const auto& r : rows) {
    CHECK(r.ratio < 1.0);
    CHECK_FALSE(r.violates);
  }
}

TEST_CASE("spdc-fixed-n rows") {
  const auto rows = run_spdc_fixed_n(default_config(Scenario::kSpdcFixedN));
  CHECK(rows.size() == 2 + 3 + 6 + 12);
  CHECK(rows[1].n_per_region == 2);
  CHECK(rows[1].m == 2);
  CHECK(rows[1].ratio == doctest::Approx(16.0 / 9.0).epsilon(1e-12));
  CHECK(rows[1].violates);
  for (const auto& r : rows) {
    if (r.n_per_region == 6) CHECK(r.violates == (r.m >= 5));
  }
}

TEST_CASE("CSV layout and round trip") {
  SweepConfig c = default_config(Scenario::kBecScan);
  c.u_steps = 4;
  std::ostringstream out;
  const auto rows = run_bec_scan(c);
  write_csv(out, c, rows);
  const auto lines = lines_of(out.str());
  CHECK(lines[0] == "# bellcorr 1.0.0");
  CHECK(lines[1] == "# scenario=bec-scan");
  CHECK(lines[2] == "# N=100");
  CHECK(lines[3] == "# U-min=-1.3");
  CHECK(lines[4] == "# U-max=-0.7");
  CHECK(lines[5] == "# U-steps=4");
  CHECK(lines[6] == "# orders=70,80,90,100");
  CHECK(lines[7] == "# tol=1e-12");
  CHECK(header_of(out.str()) == "U,m,log_correlator,log_bound,ratio,violates");
  const auto parsed = data_rows(out.str());
  REQUIRE(parsed.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(parsed[i].size() == 6);
    CHECK(parse(parsed[i][0]) == rows[i].interaction);
    CHECK(std::stoll(parsed[i][1]) == rows[i].m);
    CHECK(parse(parsed[i][2]) == rows[i].log_correlator);
    CHECK(parse(parsed[i][3]) == rows[i].log_bound);
    CHECK(parse(parsed[i][4]) == rows[i].ratio);
    CHECK(parsed[i][5] == (rows[i].violates ? "1" : "0"));
  }

  std::ostringstream full;
  SweepConfig f = default_config(Scenario::kSpdcFull);
  f.t_steps = 2;
  write_csv(full, f, run_spdc_full(f));
  CHECK(header_of(full.str()) == "t,m,log_correlator,log_bound,ratio,violates");
  CHECK(full.str().find("# tol=1e-14\n") != std::string::npos);

  std::ostringstream fixed;
  SweepConfig n = default_config(Scenario::kSpdcFixedN);
  n.n_list = {2};
  write_csv(fixed, n, run_spdc_fixed_n(n));
  CHECK(header_of(fixed.str()) == "N,m,ratio,violates");
  const auto second = data_rows(fixed.str()).at(1);
  CHECK(second[0] == "2");
  CHECK(second[1] == "2");
  CHECK(parse(second[2]) == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
  CHECK(second[3] == "1");
}

TEST_CASE("text reports") {
  SweepConfig lhv = default_config(Scenario::kLhvCheck);
  std::ostringstream l;
  run_scenario(l, lhv);
  CHECK(l.str().find("strategies enumerated: 512\n") != std::string::npos);
  CHECK(l.str().find("max |<Sigma_m>|^2 = 0.125\n") != std::string::npos);
  CHECK(l.str().find("bound attained: yes\n") != std::string::npos);
  CHECK(l.str().find("bound exceeded: no\n") != std::string::npos);

  SweepConfig ex = default_config(Scenario::kExpand);
  ex.m = 2;
  std::ostringstream e;
  run_scenario(e, ex);
  CHECK(header_of(e.str()) == "word,coefficient");
  CHECK(data_rows(e.str()).size() == 4);
  CHECK(data_rows(e.str())[3] == std::vector<std::string>{"YY", "-1"});

  SweepConfig b = default_config(Scenario::kBoundQuery);
  std::ostringstream single;
  run_scenario(single, b);
  CHECK(header_of(single.str()) == "N,m,log_bound,bound");
  const auto row = data_rows(single.str()).at(0);
  CHECK(row[0] == "100");
  CHECK(parse(row[2]) == doctest::Approx(658.1640330551324).epsilon(1e-15));

  b.n_particles = 4;
  b.m = 4;
  b.n_region_b = 1;
  b.k = 1;
  std::ostringstream two;
  run_scenario(two, b);
  CHECK(header_of(two.str()) == "N_A,m,N_B,k,log_bound,bound");
  // (4!)^2 2^-5 = 18.
  CHECK(data_rows(two.str()).at(0)[5] == "1.8e+1");
}

TEST_CASE("parallel_map keeps order and reports the first failure") {
  const auto squares = parallel_map<int>(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == static_cast<int>(i * i));
  CHECK(parallel_map<int>(0, 4, [](std::size_t) { return 1; }).empty());
  try {
    parallel_map<int>(50, 3, [](std::size_t i) -> int {
      if (i == 7 || i == 30) throw std::runtime_error("index " + std::to_string(i));
      return 0;
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "index 7");
  }
}

TEST_CASE("key=value config files") {
  const std::string path = temp_file("bellcorr_test.cfg", "# comment\n\n  N = 12 \nUs=1=2\norders=1,2\r\n");
  const auto values = read_key_value_file(path);
  CHECK(values.size() == 3);
  CHECK(values.at("N") == "12");
  CHECK(values.at("Us") == "1=2");
  CHECK(values.at("orders") == "1,2");
  const std::string bad = temp_file("bellcorr_bad.cfg", "N=1\njunk\n");
  CHECK_THROWS_WITH_AS(read_key_value_file(bad), doctest::Contains(":2: expected key=value"), std::runtime_error);
  CHECK_THROWS_AS(read_key_value_file("/nonexistent/bellcorr.cfg"), std::runtime_error);
  std::filesystem::remove(path);
  std::filesystem::remove(bad);
}
