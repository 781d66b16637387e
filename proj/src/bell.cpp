#include "bellcorr/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellcorr {

namespace {

constexpr double kRatioRoundingTolerance = 1e-13;

double snapped_difference(double a, double b) {
  const double diff = a - b;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(diff) <= kRatioRoundingTolerance * scale ? 0.0 : diff;
}

void require_order(std::int64_t n, std::int64_t m, const char* who) {
  if (n < 0 || m < 0 || m > n) {
    throw std::invalid_argument(std::string(who) + ": order " + std::to_string(m) +
                                " outside [0, " + std::to_string(n) + "]");
  }
}

}  // namespace

double CorrelatorReport::ratio() const { return std::exp(log_ratio); }

CorrelatorReport make_report(std::int64_t order_m, LogScalar log_correlator, double log_bound,
                             std::int64_t total_order) {
  CorrelatorReport r;
  r.order_m = order_m;
  r.log_correlator = log_correlator;
  r.log_bound = log_bound;
  if (log_correlator.is_zero()) {
    r.log_ratio = -std::numeric_limits<double>::infinity();
    return r;
  }
  const double log_corr = log_correlator.log_magnitude();
  r.log_ratio = snapped_difference(log_corr, log_bound);
  const double log_entanglement = log_bound - static_cast<double>(total_order) * std::numbers::ln2;
  const bool positive = log_correlator.sign() > 0;
  r.violates_bell = positive && r.log_ratio > 0.0;
  r.violates_entanglement_threshold = positive && snapped_difference(log_corr, log_entanglement) > 0.0;
  return r;
}

double bound_single_log(std::int64_t n_particles, std::int64_t m) {
  require_order(n_particles, m, "bound_single_log");
  return 2.0 * log_falling_factorial(n_particles, m) - static_cast<double>(m) * std::numbers::ln2;
}

double bound_two_region_log(std::int64_t n_a, std::int64_t n_b, std::int64_t m, std::int64_t k) {
  require_order(n_a, m, "bound_two_region_log (region A)");
  require_order(n_b, k, "bound_two_region_log (region B)");
  return 2.0 * log_falling_factorial(n_a, m) + 2.0 * log_falling_factorial(n_b, k) -
         static_cast<double>(m + k) * std::numbers::ln2;
}

CorrelatorReport correlator_single(const DickeVector& state, std::int64_t m) {
  require_order(state.n_particles(), m, "correlator_single");
  const LogScalar value = expectation_j_plus_power(state, m).squared_modulus();
  return make_report(m, value, bound_single_log(state.n_particles(), m), m);
}

CorrelatorReport correlator_two_region_product(const DickeVector& region_a, std::int64_t m,
                                               const DickeVector& region_b, std::int64_t k) {
  require_order(region_a.n_particles(), m, "correlator_two_region_product (region A)");
  require_order(region_b.n_particles(), k, "correlator_two_region_product (region B)");
  const LogComplex joint = expectation_j_plus_power(region_a, m) * expectation_j_plus_power(region_b, k);
  return make_report(m, joint.squared_modulus(),
                     bound_two_region_log(region_a.n_particles(), region_b.n_particles(), m, k), m + k);
}

double ghz_addressable_correlator(std::int64_t n_qubits, std::int64_t m) {
  if (n_qubits < 1 || m < 1 || m > n_qubits) {
    throw std::invalid_argument("ghz_addressable_correlator: need 1 <= m <= N");
  }
  using Bits = std::vector<std::uint8_t>;  // 1 = up
  // Both branch amplitudes are 1/sqrt(2); their product is exactly 1/2.
  const double branch_product = 0.5;
  const std::vector<Bits> branches = {Bits(n_qubits, 0), Bits(n_qubits, 1)};

  double expectation = 0.0;
  for (const Bits& ket : branches) {
    Bits image = ket;
    bool annihilated = false;
    for (std::int64_t q = 0; q < m; ++q) {
      if (image[q] == 1) {
        annihilated = true;
        break;
      }
      image[q] = 1;
    }
    if (annihilated) continue;
    for (const Bits& bra : branches) {
      if (bra == image) expectation += branch_product;
    }
  }
  return expectation * expectation;
}

GhzPlusSingleReports ghz_plus_single_reports(std::int64_t n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("ghz_plus_single: need N >= 1");
  const DickeVector region_a = noon_state(n_qubits);
  const DickeVector region_b = css_x(1);
  return {correlator_single(region_a, n_qubits), correlator_single(region_b, 1),
          correlator_two_region_product(region_a, n_qubits, region_b, 1)};
}

CorrelatorReport ghz_plus_single_correlator(std::int64_t n_qubits) {
  return ghz_plus_single_reports(n_qubits).combined;
}

std::string_view to_string(CrossRegionVerdict verdict) {
  switch (verdict) {
    case CrossRegionVerdict::kGenuineCrossRegion:
      return "genuine cross-region";
    case CrossRegionVerdict::kLocalOrigin:
      return "local-origin";
    case CrossRegionVerdict::kNoViolation:
      return "no violation";
  }
  return "unknown";
}

CrossRegionVerdict cross_region_guard(const CorrelatorReport& region_a, const CorrelatorReport& region_b,
                                      const CorrelatorReport& combined) {
  if (!combined.violates_bell) return CrossRegionVerdict::kNoViolation;
  if (region_a.violates_bell || region_b.violates_bell) return CrossRegionVerdict::kLocalOrigin;
  return CrossRegionVerdict::kGenuineCrossRegion;
}

std::string PauliWord::text() const {
  std::string s;
  s.reserve(letters.size());
  for (auto l : letters) s.push_back(static_cast<char>(l));
  return s;
}

std::vector<PauliWord> expand_plus_power(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("expand_plus_power: need m >= 1");
  if (m > 30) throw std::invalid_argument("expand_plus_power: m > 30 would list over 2^30 words");
  static constexpr std::complex<double> kPowersOfI[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::uint64_t count = std::uint64_t{1} << m;
  std::vector<PauliWord> words;
  words.reserve(count);
  for (std::uint64_t j = 0; j < count; ++j) {
    PauliWord w;
    w.letters.resize(static_cast<std::size_t>(m));
    for (std::int64_t p = 0; p < m; ++p) {
      const bool is_y = (j >> (m - 1 - p)) & 1U;
      w.letters[p] = is_y ? PauliLetter::kY : PauliLetter::kX;
      w.y_count += is_y ? 1 : 0;
    }
    w.coefficient = kPowersOfI[w.y_count % 4];
    words.push_back(std::move(w));
  }
  return words;
}

std::string coefficient_text(const PauliWord& word) {
  static constexpr const char* kText[] = {"+1", "+i", "-1", "-i"};
  return kText[word.y_count % 4];
}

}  // namespace bellcorr
