#include "bellcorr/lhv.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace bellcorr {

namespace {

GaussianInt party_factor(const PartyChoice& p) { return {p.sigma1, p.s * p.sigma2}; }

PartyChoice choice_from_bits(unsigned bits) {
  return {(bits & 1U) ? -1 : 1, (bits & 2U) ? -1 : 1, (bits & 4U) ? -1 : 1};
}

const std::array<GaussianInt, 8>& factor_table() {
  static const std::array<GaussianInt, 8> table = [] {
    std::array<GaussianInt, 8> t{};
    for (unsigned b = 0; b < 8; ++b) t[b] = party_factor(choice_from_bits(b));
    return t;
  }();
  return table;
}

struct Extremes {
  std::int64_t max_norm = std::numeric_limits<std::int64_t>::min();
  std::int64_t min_norm = std::numeric_limits<std::int64_t>::max();
  std::uint64_t leaves = 0;

  void merge(const Extremes& o) {
    max_norm = std::max(max_norm, o.max_norm);
    min_norm = std::min(min_norm, o.min_norm);
    leaves += o.leaves;
  }
};

void enumerate_from(GaussianInt partial, std::int64_t remaining, Extremes& out) {
  const auto& table = factor_table();
  if (remaining == 1) {
    for (const auto& f : table) {
      const std::int64_t n = (partial * f).norm();
      out.max_norm = std::max(out.max_norm, n);
      out.min_norm = std::min(out.min_norm, n);
    }
    out.leaves += table.size();
    return;
  }
  for (const auto& f : table) enumerate_from(partial * f, remaining - 1, out);
}

}  // namespace

LhvStrategy::LhvStrategy(std::vector<PartyChoice> parties) : parties_(std::move(parties)) {
  if (parties_.empty()) throw std::invalid_argument("LhvStrategy: need at least one party");
  for (const auto& p : parties_) {
    for (int v : {p.sigma1, p.sigma2, p.s}) {
      if (v != 1 && v != -1) throw std::invalid_argument("LhvStrategy: entries must be +1 or -1");
    }
  }
}

LhvStrategy LhvStrategy::from_index(std::int64_t m, std::uint64_t index) {
  if (m < 1 || m > 21) throw std::invalid_argument("LhvStrategy::from_index: need 1 <= m <= 21");
  if ((index >> (3 * m)) != 0) throw std::invalid_argument("LhvStrategy::from_index: index >= 8^m");
  std::vector<PartyChoice> parties;
  parties.reserve(static_cast<std::size_t>(m));
  for (std::int64_t p = 0; p < m; ++p) parties.push_back(choice_from_bits((index >> (3 * p)) & 7U));
  return LhvStrategy(std::move(parties));
}

GaussianInt strategy_correlator_scaled(const LhvStrategy& strategy) {
  if (strategy.parties() > 60) throw std::overflow_error("strategy_correlator_scaled: too many parties");
  GaussianInt z{1, 0};
  for (const auto& p : strategy.choices()) z = z * party_factor(p);
  return z;
}

std::complex<double> strategy_correlator(const LhvStrategy& strategy) {
  std::complex<double> z{1.0, 0.0};
  for (const auto& p : strategy.choices()) {
    z *= std::complex<double>(0.5 * p.sigma1, 0.5 * p.s * p.sigma2);
  }
  return z;
}

LhvMixture::LhvMixture(std::vector<LhvStrategy> strategies, std::vector<double> weights)
    : strategies_(std::move(strategies)), weights_(std::move(weights)) {
  if (strategies_.empty()) throw std::invalid_argument("LhvMixture: empty mixture");
  if (strategies_.size() != weights_.size()) {
    throw std::invalid_argument("LhvMixture: one weight per strategy required");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (!(weights_[j] >= 0.0)) throw std::invalid_argument("LhvMixture: negative weight");
    if (strategies_[j].parties() != strategies_.front().parties()) {
      throw std::invalid_argument("LhvMixture: strategies disagree on party count");
    }
    total += weights_[j];
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("LhvMixture: weights must sum to 1");
}

double mixture_correlator_sq(const LhvMixture& mixture) {
  std::complex<double> mean{};
  for (std::size_t j = 0; j < mixture.strategies().size(); ++j) {
    mean += mixture.weights()[j] * strategy_correlator(mixture.strategies()[j]);
  }
  return std::norm(mean);
}

BruteForceResult brute_force_enumerate(std::int64_t m, unsigned threads) {
  if (m < 1 || m > kMaxBruteForceParties) {
    throw std::invalid_argument("brute_force_enumerate: need 1 <= m <= " + std::to_string(kMaxBruteForceParties) +
                                ", got " + std::to_string(m));
  }
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());

  // Work items fix the first one or two parties.
  const std::int64_t prefix_parties = m >= 2 ? 2 : 1;
  const std::uint64_t prefixes = std::uint64_t{1} << (3 * prefix_parties);
  std::atomic<std::uint64_t> next{0};
  Extremes total;
  std::mutex total_mutex;

  auto worker = [&] {
    Extremes local;
    const auto& table = factor_table();
    for (std::uint64_t item = next++; item < prefixes; item = next++) {
      GaussianInt z = table[item & 7U];
      if (prefix_parties == 2) z = z * table[(item >> 3) & 7U];
      if (m == prefix_parties) {
        const std::int64_t n = z.norm();
        local.max_norm = std::max(local.max_norm, n);
        local.min_norm = std::min(local.min_norm, n);
        ++local.leaves;
      } else {
        enumerate_from(z, m - prefix_parties, local);
      }
    }
    std::lock_guard lock(total_mutex);
    total.merge(local);
  };

  const unsigned n_threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, prefixes));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  BruteForceResult result;
  result.parties = m;
  result.strategies_enumerated = total.leaves;
  result.max_scaled_norm = total.max_norm;
  result.min_scaled_norm = total.min_norm;
  result.max_value = std::ldexp(static_cast<double>(total.max_norm), static_cast<int>(-2 * m));
  return result;
}

double brute_force_max(std::int64_t m) { return brute_force_enumerate(m).max_value; }

}  // namespace bellcorr
