#include "bellcorr/spdc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bellcorr/hamiltonian.hpp"

namespace bellcorr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::int64_t kMaxPairTruncation = 50'000'000;
constexpr std::int64_t kMaxFockCutoff = 1 << 14;

void require_time(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(who) + ": squeezing time must be finite and >= 0");
  }
}

double log_sinh(double t) { return t - std::numbers::ln2 + std::log(-std::expm1(-2.0 * t)); }
double log_cosh(double t) { return t - std::numbers::ln2 + std::log1p(std::exp(-2.0 * t)); }
// ln tanh t without the cancellation of log_sinh - log_cosh at large t.
double log_tanh(double t) {
  if (t < 0.5) return std::log(std::tanh(t));
  return std::log1p(-2.0 / (std::exp(2.0 * t) + 1.0));
}

// (-i)^n, exact.
std::complex<double> minus_i_power(std::int64_t n) {
  static constexpr std::complex<double> kTable[] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return kTable[n % 4];
}

// Fock amplitudes C_n = (-i tanh t)^n / cosh t for n = 0..cutoff.
std::vector<std::complex<double>> pair_amplitudes(double t, std::int64_t cutoff) {
  std::vector<std::complex<double>> c(static_cast<std::size_t>(cutoff) + 1);
  if (t == 0.0) {
    c[0] = 1.0;
    return c;
  }
  const double lt = log_tanh(t);
  const double lc = log_cosh(t);
  for (std::int64_t n = 0; n <= cutoff; ++n) {
    c[n] = minus_i_power(n) * std::exp(static_cast<double>(n) * lt - lc);
  }
  return c;
}

// sum over (n, k) with n + m <= row_cutoff(k) of
// conj(C_{n+m} C_{k-m}) C_n C_k (n+m)!/n! k!/(k-m)!.
template <typename Cutoff>
std::complex<double> paired_shift_sum(const std::vector<std::complex<double>>& c, std::int64_t m,
                                      Cutoff n_max_for_k) {
  const auto top = static_cast<std::int64_t>(c.size()) - 1;
  std::complex<double> sum{};
  for (std::int64_t k = m; k <= top; ++k) {
    const double lff_b = log_falling_factorial(k, m);
    const std::int64_t n_max = std::min(n_max_for_k(k), top - m);
    for (std::int64_t n = 0; n <= n_max; ++n) {
      const double weight = std::exp(log_falling_factorial(n + m, m) + lff_b);
      sum += std::conj(c[n + m] * c[k - m]) * c[n] * c[k] * weight;
    }
  }
  return sum;
}

std::complex<double> square_cutoff_sum(double t, std::int64_t m, std::int64_t cutoff) {
  const auto c = pair_amplitudes(t, cutoff);
  return paired_shift_sum(c, m, [cutoff](std::int64_t) { return cutoff; });
}

}  // namespace

double pair_probability(double t, std::int64_t n_pairs) {
  require_time(t, "pair_probability");
  if (n_pairs < 0) throw std::invalid_argument("pair_probability: negative pair count");
  if (t == 0.0) return n_pairs == 0 ? 1.0 : 0.0;
  return std::exp(2.0 * static_cast<double>(n_pairs) * log_tanh(t) - 4.0 * log_cosh(t) +
                  std::log(static_cast<double>(n_pairs) + 1.0));
}

double pair_tail(double t, std::int64_t max_n) {
  require_time(t, "pair_tail");
  if (max_n < 0) return 1.0;
  if (t == 0.0) return 0.0;
  // (M+2) - (M+1)x = 1 + (M+1)(1-x) and 1-x = 1/cosh^2 t.
  const double m1 = static_cast<double>(max_n) + 1.0;
  return std::exp(m1 * 2.0 * log_tanh(t) + std::log1p(m1 * std::exp(-2.0 * log_cosh(t))));
}

PairDistribution build_distribution(double t, double epsilon) {
  require_time(t, "build_distribution");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("build_distribution: epsilon must lie in (0, 1)");
  }
  PairDistribution dist;
  dist.t = t;
  if (t == 0.0) {
    dist.probabilities = {1.0};
    return dist;
  }
  std::int64_t max_n = 0;
  while (pair_tail(t, max_n) > epsilon) {
    if (++max_n > kMaxPairTruncation) {
      throw ConvergenceError("build_distribution: truncation exceeds budget at t=" + std::to_string(t));
    }
  }
  dist.max_n = max_n;
  dist.tail_bound = pair_tail(t, max_n);
  dist.probabilities.resize(static_cast<std::size_t>(max_n) + 1);
  for (std::int64_t n = 0; n <= max_n; ++n) dist.probabilities[n] = pair_probability(t, n);
  return dist;
}

LogScalar analytic_full_correlator(double t, std::int64_t m) {
  require_time(t, "analytic_full_correlator");
  if (m < 1) throw std::invalid_argument("analytic_full_correlator: need m >= 1");
  if (t == 0.0) return LogScalar::zero();
  return LogScalar::from_log(4.0 * static_cast<double>(m) * (log_sinh(t) + log_cosh(t)) +
                             4.0 * log_factorial(m));
}

LogScalar numeric_full_correlator(double t, std::int64_t m, double tolerance) {
  require_time(t, "numeric_full_correlator");
  if (m < 0) throw std::invalid_argument("numeric_full_correlator: negative order");
  if (!(tolerance > 0.0)) throw std::invalid_argument("numeric_full_correlator: tolerance must be positive");
  if (t == 0.0) return m == 0 ? LogScalar::one() : LogScalar::zero();

  std::int64_t cutoff = std::max<std::int64_t>(16, 2 * m + 8);
  std::complex<double> previous = square_cutoff_sum(t, m, cutoff);
  while (true) {
    cutoff *= 2;
    if (cutoff > kMaxFockCutoff) {
      throw ConvergenceError("numeric_full_correlator: no convergence below Fock cutoff " +
                             std::to_string(kMaxFockCutoff) + " at t=" + std::to_string(t));
    }
    const std::complex<double> current = square_cutoff_sum(t, m, cutoff);
    if (!std::isfinite(std::abs(current))) {
      throw std::overflow_error("numeric_full_correlator: sum overflowed at t=" + std::to_string(t));
    }
    if (std::abs(current - previous) <= tolerance * std::abs(current)) {
      return LogComplex::from_complex(current).squared_modulus();
    }
    previous = current;
  }
}

double f_factor_log(const PairDistribution& distribution, std::int64_t m, std::int64_t k,
                    double tolerance) {
  if (m < 0 || k < 0) throw std::invalid_argument("f_factor_log: negative order");
  if (!(tolerance > 0.0)) throw std::invalid_argument("f_factor_log: tolerance must be positive");
  const std::int64_t first = std::max(m, k);
  if (distribution.t == 0.0) return first == 0 ? 0.0 : kNegInf;

  const double log_tolerance = std::log(tolerance / 10.0);
  auto log_p = [&](std::int64_t n) {
    if (n <= distribution.max_n) return std::log(distribution.probabilities[n]);
    return std::log(pair_probability(distribution.t, n));
  };

  double log_sum = kNegInf;
  double previous_term = kNegInf;
  for (std::int64_t n = first;; ++n) {
    if (n > kMaxPairTruncation) {
      throw ConvergenceError("f_factor_log: series did not converge at t=" + std::to_string(distribution.t));
    }
    const double term =
        log_p(n) + 2.0 * (log_falling_factorial(n, m) + log_falling_factorial(n, k));
    log_sum = log_add_exp(log_sum, term);
    const bool decreasing = term < previous_term;
    if (n > distribution.max_n && decreasing) {
      // Term ratios decrease towards tanh^2 t, so a geometric series with the
      // current ratio bounds what is left.
      const double log_r = term - previous_term;
      const double log_tail = term + log_r - std::log(-std::expm1(log_r));
      if (log_tail - log_sum < log_tolerance) break;
    }
    previous_term = term;
  }
  return log_sum;
}

CorrelatorReport full_state_report(double t, std::int64_t m, double tolerance) {
  require_time(t, "full_state_report");
  if (t == 0.0) throw std::invalid_argument("full_state_report: need t > 0");
  if (m < 1) throw std::invalid_argument("full_state_report: need m >= 1");
  const auto dist = build_distribution(t, 1e-15);
  const double log_bound =
      f_factor_log(dist, m, m, tolerance) - 2.0 * static_cast<double>(m) * std::numbers::ln2;
  return make_report(m, analytic_full_correlator(t, m), log_bound, 2 * m);
}

FixedNTwoRegionState::FixedNTwoRegionState(std::int64_t n_per_region,
                                           std::vector<std::complex<double>> amplitudes)
    : n_per_region_(n_per_region), amplitudes_(std::move(amplitudes)) {
  if (n_per_region_ < 0) throw std::invalid_argument("FixedNTwoRegionState: negative N");
  if (amplitudes_.size() != static_cast<std::size_t>(n_per_region_) + 1) {
    throw std::invalid_argument("FixedNTwoRegionState: expected N+1 amplitudes");
  }
  double norm_sq = 0.0;
  for (const auto& a : amplitudes_) norm_sq += std::norm(a);
  if (std::abs(norm_sq - 1.0) > 1e-12) {
    throw std::invalid_argument("FixedNTwoRegionState: amplitudes not normalized");
  }
}

FixedNTwoRegionState fixed_n_state(std::int64_t n_per_region) {
  if (n_per_region < 1) throw std::invalid_argument("fixed_n_state: need N >= 1");
  const double a = 1.0 / std::sqrt(static_cast<double>(n_per_region) + 1.0);
  return {n_per_region, std::vector<std::complex<double>>(static_cast<std::size_t>(n_per_region) + 1, a)};
}

LogComplex fixed_n_expectation(const FixedNTwoRegionState& state, std::int64_t m) {
  const auto N = state.n_per_region();
  if (m < 0) throw std::invalid_argument("fixed_n_expectation: negative order");
  if (m > N) return LogComplex::zero();

  std::vector<std::complex<double>> shifted = state.amplitudes();
  double log_scale = 0.0;
  for (std::int64_t step = 0; step < m; ++step) {
    std::vector<std::complex<double>> next(shifted.size());
    double max_abs = 0.0;
    for (std::int64_t n = 0; n < N; ++n) {
      // sqrt((n+1)(N-n)) from J+ on A times the identical factor from J- on B.
      next[n + 1] = static_cast<double>((n + 1) * (N - n)) * shifted[n];
      max_abs = std::max(max_abs, std::abs(next[n + 1]));
    }
    if (max_abs == 0.0) return LogComplex::zero();
    for (auto& x : next) x /= max_abs;
    log_scale += std::log(max_abs);
    shifted = std::move(next);
  }
  std::complex<double> overlap{};
  for (std::size_t n = 0; n < shifted.size(); ++n) overlap += std::conj(state.amplitudes()[n]) * shifted[n];
  return LogComplex::from_complex(overlap, log_scale);
}

CorrelatorReport fixed_n_correlator(const FixedNTwoRegionState& state, std::int64_t m) {
  const auto N = state.n_per_region();
  if (m < 0 || m > N) {
    throw std::invalid_argument("fixed_n_correlator: order " + std::to_string(m) + " outside [0, " +
                                std::to_string(N) + "]");
  }
  return make_report(m, fixed_n_expectation(state, m).squared_modulus(), bound_two_region_log(N, N, m, m),
                     2 * m);
}

LogScalar reduced_region_moment(const FixedNTwoRegionState& state, std::int64_t m, Region region) {
  const auto N = state.n_per_region();
  if (m < 0) throw std::invalid_argument("reduced_region_moment: negative order");
  if (m > N) return LogScalar::zero();
  const auto dim = static_cast<std::size_t>(N) + 1;

  // joint[a][b]: a = up count in A, b = up count in B.
  std::vector<std::vector<std::complex<double>>> joint(dim, std::vector<std::complex<double>>(dim));
  for (std::int64_t n = 0; n <= N; ++n) joint[n][N - n] = state.amplitudes()[n];

  std::vector<std::vector<std::complex<double>>> rho(dim, std::vector<std::complex<double>>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::complex<double> s{};
      for (std::size_t o = 0; o < dim; ++o) {
        s += region == Region::kA ? joint[i][o] * std::conj(joint[j][o])
                                  : joint[o][i] * std::conj(joint[o][j]);
      }
      rho[i][j] = s;
    }
  }

  // Tr[J+^m rho] = sum_a <a+m|J+^m|a> rho[a][a+m].
  std::complex<double> trace{};
  for (std::int64_t a = 0; a + m <= N; ++a) {
    const double element =
        std::exp(0.5 * (log_falling_factorial(a + m, m) + log_falling_factorial(N - a, m)));
    trace += element * rho[a][a + m];
  }
  return LogScalar::from_real(std::abs(trace));
}

LogScalar reduced_region_moment(std::int64_t n_per_region, std::int64_t m) {
  return reduced_region_moment(fixed_n_state(n_per_region), m, Region::kA);
}

CorrelatorReport fixed_n_region_report(const FixedNTwoRegionState& state, std::int64_t m, Region region) {
  const LogScalar moment = reduced_region_moment(state, m, region);
  return make_report(m, moment * moment, bound_single_log(state.n_per_region(), m), m);
}

MixtureCheck mixture_equivalence_check(double t, std::int64_t m, std::int64_t max_pairs) {
  require_time(t, "mixture_equivalence_check");
  if (m < 0) throw std::invalid_argument("mixture_equivalence_check: negative order");
  if (max_pairs < 0) throw std::invalid_argument("mixture_equivalence_check: negative truncation");

  MixtureCheck check;
  // Pure side: amplitudes with phases, restricted to n + k <= max_pairs.
  const auto c = pair_amplitudes(t, max_pairs);
  check.pure_value = paired_shift_sum(c, m, [max_pairs](std::int64_t k) { return max_pairs - k; });

  // Mixture side: fixed-N sectors weighted by p_N.
  for (std::int64_t n = std::max<std::int64_t>(m, 1); n <= max_pairs; ++n) {
    const double p = pair_probability(t, n);
    if (p == 0.0) continue;
    check.mixture_value += p * fixed_n_expectation(fixed_n_state(n), m).to_complex();
  }
  if (m == 0) check.mixture_value += pair_probability(t, 0);

  check.abs_discrepancy = std::abs(check.pure_value - check.mixture_value);
  const double scale = std::abs(check.pure_value);
  check.rel_discrepancy = scale > 0.0 ? check.abs_discrepancy / scale : check.abs_discrepancy;
  return check;
}

}  // namespace bellcorr
