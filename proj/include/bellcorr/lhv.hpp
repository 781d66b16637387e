#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace bellcorr {

/// Deterministic outcomes of one party: sigma1, sigma2 in {-1,+1} and the
/// chosen sign s in {-1,+1}. The party contributes (sigma1 + i s sigma2)/2.
struct PartyChoice {
  int sigma1 = 1;
  int sigma2 = 1;
  int s = 1;
};

/// A deterministic local-hidden-variable strategy for m parties.
class LhvStrategy {
 public:
  explicit LhvStrategy(std::vector<PartyChoice> parties);

  /// Strategy number `index` in [0, 8^m): party p reads the three bits
  /// (index >> 3p) & 7 as (sigma1, sigma2, s), a set bit meaning -1.
  /// Throws unless 1 <= m <= 21 and index < 8^m.
  static LhvStrategy from_index(std::int64_t m, std::uint64_t index);

  std::size_t parties() const { return parties_.size(); }
  const std::vector<PartyChoice>& choices() const { return parties_; }

 private:
  std::vector<PartyChoice> parties_;
};

/// Gaussian integer re + i im. Products of (sigma1 + i s sigma2) stay exact in
/// this form; the physical value carries an extra 2^-m.
struct GaussianInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  friend GaussianInt operator*(GaussianInt a, GaussianInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  std::int64_t norm() const { return re * re + im * im; }
  friend bool operator==(const GaussianInt&, const GaussianInt&) = default;
};

/// 2^m <Sigma_m> for a deterministic strategy, exact.
GaussianInt strategy_correlator_scaled(const LhvStrategy& strategy);

/// prod_k (sigma1 + i s_k sigma2)/2.
std::complex<double> strategy_correlator(const LhvStrategy& strategy);

class LhvMixture {
 public:
  /// Weights must be nonnegative and sum to 1 within 1e-12; all strategies
  /// must have the same party count.
  LhvMixture(std::vector<LhvStrategy> strategies, std::vector<double> weights);

  const std::vector<LhvStrategy>& strategies() const { return strategies_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t parties() const { return strategies_.front().parties(); }

 private:
  std::vector<LhvStrategy> strategies_;
  std::vector<double> weights_;
};

/// |sum_j w_j <Sigma_m>_j|^2.
double mixture_correlator_sq(const LhvMixture& mixture);

struct BruteForceResult {
  std::int64_t parties = 0;
  std::uint64_t strategies_enumerated = 0;
  /// Largest and smallest |2^m <Sigma_m>|^2 over all deterministic strategies.
  std::int64_t max_scaled_norm = 0;
  std::int64_t min_scaled_norm = 0;
  /// max_scaled_norm / 4^m.
  double max_value = 0.0;

  bool all_strategies_tie() const { return max_scaled_norm == min_scaled_norm; }
};

inline constexpr std::int64_t kMaxBruteForceParties = 16;

/// Enumerates all 8^m deterministic strategies. Mixtures are convex
/// combinations, so the maximum over vertices is the LHV maximum.
/// Throws std::invalid_argument unless 1 <= m <= 16.
BruteForceResult brute_force_enumerate(std::int64_t m, unsigned threads = 0);
double brute_force_max(std::int64_t m);

}  // namespace bellcorr
