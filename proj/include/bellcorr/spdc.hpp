#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bellcorr/bell.hpp"
#include "bellcorr/numerics.hpp"

namespace bellcorr {

// Four-mode pair creation: region A holds modes a_up, a_down and region B
// holds b_up, b_down. The state is
//   sum_{n,k} C_n C_k |n up, k down>_A |k up, n down>_B,
//   C_n = (-i tanh t)^n / cosh t,
// with t the squeezing time in units of the inverse coupling.

/// p_N = tanh^(2N)(t) (N+1) / cosh^4(t): probability of N particles per region.
double pair_probability(double t, std::int64_t n_pairs);

struct PairDistribution {
  double t = 0.0;
  std::int64_t max_n = 0;
  std::vector<double> probabilities;  // p_0 .. p_max_n
  /// Closed-form mass beyond max_n.
  double tail_bound = 0.0;
};

/// Closed-form tail sum_{N > M} p_N = x^(M+1) ((M+2) - (M+1) x), x = tanh^2 t.
double pair_tail(double t, std::int64_t max_n);

/// Smallest truncation whose closed-form tail is at most epsilon.
PairDistribution build_distribution(double t, double epsilon = 1e-15);

/// ln[(sinh t cosh t)^(4m) (m!)^4]: |<J+^(A)m J-^(B)m>|^2 on the full state.
LogScalar analytic_full_correlator(double t, std::int64_t m);

/// <J+^(A)m J-^(B)m> on the full state, summed over the Fock amplitudes with
/// their phases. The square cutoff on both occupation numbers doubles until the
/// relative change falls below tolerance. Returned as |.|^2.
LogScalar numeric_full_correlator(double t, std::int64_t m, double tolerance = 1e-14);

/// ln f_mk with f_mk = sum_{N >= max(m,k)} p_N (N!/(N-m)! N!/(N-k)!)^2.
/// Summation runs past the distribution's truncation, recomputing p_N, until
/// the ratio-test estimate of the remaining tail is below tolerance / 10 of the
/// partial sum and terms are decreasing.
double f_factor_log(const PairDistribution& distribution, std::int64_t m, std::int64_t k,
                    double tolerance = 1e-14);

/// Full-state correlator against the fluctuation-averaged bound 2^(-2m) f_mm.
CorrelatorReport full_state_report(double t, std::int64_t m, double tolerance = 1e-14);

/// sum_n a_n |n, N-n>_A |N-n, n>_B.
class FixedNTwoRegionState {
 public:
  /// amplitudes must have N+1 entries and unit norm (within 1e-12).
  FixedNTwoRegionState(std::int64_t n_per_region, std::vector<std::complex<double>> amplitudes);

  std::int64_t n_per_region() const { return n_per_region_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amplitudes_; }

 private:
  std::int64_t n_per_region_;
  std::vector<std::complex<double>> amplitudes_;
};

/// Uniform amplitudes 1/sqrt(N+1): the fixed-N sector of the pair state.
FixedNTwoRegionState fixed_n_state(std::int64_t n_per_region);

/// <psi|J+^(A)m J-^(B)m|psi> by repeated paired shifts n -> n+1, each weighted
/// by sqrt((n+1)(N-n)) on both regions.
LogComplex fixed_n_expectation(const FixedNTwoRegionState& state, std::int64_t m);

/// |<J+^(A)m J-^(B)m>|^2 against (N!/(N-m)!)^4 2^(-2m). Throws if m > N.
CorrelatorReport fixed_n_correlator(const FixedNTwoRegionState& state, std::int64_t m);

enum class Region { kA, kB };

/// |Tr[J+^m rho_region]| where rho_region is obtained by tracing the other
/// region out of the pair state.
LogScalar reduced_region_moment(const FixedNTwoRegionState& state, std::int64_t m, Region region);
LogScalar reduced_region_moment(std::int64_t n_per_region, std::int64_t m);

/// Single-region report |Tr[J+^m rho_region]|^2 against bound_single_log(N, m).
CorrelatorReport fixed_n_region_report(const FixedNTwoRegionState& state, std::int64_t m, Region region);

struct MixtureCheck {
  std::complex<double> pure_value;     // pure truncated state, sum over Fock amplitudes
  std::complex<double> mixture_value;  // sum_N p_N <psi_N|O|psi_N>
  double abs_discrepancy = 0.0;
  double rel_discrepancy = 0.0;
};

/// Compares <J+^(A)m J-^(B)m> on the pure state truncated to N <= max_pairs
/// with the incoherent mixture of fixed-N sectors up to the same N.
MixtureCheck mixture_equivalence_check(double t, std::int64_t m, std::int64_t max_pairs);

}  // namespace bellcorr
