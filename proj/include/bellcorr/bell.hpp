#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bellcorr/dicke.hpp"
#include "bellcorr/numerics.hpp"

namespace bellcorr {

/// A Bell correlator next to its local-realistic bound, all in natural logs.
///
/// log_ratio = log_correlator - log_bound, with -inf for a vanishing
/// correlator. A ratio within rounding of zero (relative 1e-13 of the operand
/// magnitudes) is reported as exactly zero, so states sitting on the bound do
/// not flip on the last bit.
///
/// The entanglement threshold is the per-qubit 4^-k threshold carried through
/// the same symmetrization factor as the Bell bound: log_bound - k ln 2 where k
/// is the total number of raising operators.
struct CorrelatorReport {
  std::int64_t order_m = 0;
  LogScalar log_correlator;
  double log_bound = 0.0;
  double log_ratio = 0.0;
  bool violates_bell = false;
  bool violates_entanglement_threshold = false;

  /// Bell ratio on a linear scale, e^log_ratio.
  double ratio() const;
};

/// Builds a report from its parts. total_order is the number of ladder
/// operators in the correlator (m for one region, m + k for two).
CorrelatorReport make_report(std::int64_t order_m, LogScalar log_correlator, double log_bound,
                             std::int64_t total_order);

/// ln[(N!/(N-m)!)^2 2^-m]. Throws std::invalid_argument unless 0 <= m <= N.
double bound_single_log(std::int64_t n_particles, std::int64_t m);

/// ln[(N_A!/(N_A-m)!)^2 (N_B!/(N_B-k)!)^2 2^-(m+k)].
double bound_two_region_log(std::int64_t n_a, std::int64_t n_b, std::int64_t m, std::int64_t k);

/// |<J+^m>|^2 against the permutation-invariant bound. Throws if m > N.
CorrelatorReport correlator_single(const DickeVector& state, std::int64_t m);

/// |<J+^(A)m J+^(B)k>|^2 for a product state psi_A (x) psi_B against the
/// two-region bound.
CorrelatorReport correlator_two_region_product(const DickeVector& region_a, std::int64_t m,
                                               const DickeVector& region_b, std::int64_t k);

/// |<sigma+^(1) ... sigma+^(m)>|^2 on the N-qubit GHZ state with individually
/// addressed qubits. Evaluated on the two GHZ branches directly.
double ghz_addressable_correlator(std::int64_t n_qubits, std::int64_t m);

/// Reports for an N-qubit GHZ state in region A next to one uncorrelated qubit
/// in (|up> + |down>)/sqrt(2) in region B.
struct GhzPlusSingleReports {
  CorrelatorReport region_a;   // |<J+^(A)N>|^2
  CorrelatorReport region_b;   // |<J+^(B)>|^2
  CorrelatorReport combined;   // |<J+^(A)N J+^(B)>|^2
};
GhzPlusSingleReports ghz_plus_single_reports(std::int64_t n_qubits);
CorrelatorReport ghz_plus_single_correlator(std::int64_t n_qubits);

enum class CrossRegionVerdict { kGenuineCrossRegion, kLocalOrigin, kNoViolation };
std::string_view to_string(CrossRegionVerdict verdict);

/// A cross-region violation only certifies A/B nonlocality when neither region
/// violates on its own.
CrossRegionVerdict cross_region_guard(const CorrelatorReport& region_a, const CorrelatorReport& region_b,
                                      const CorrelatorReport& combined);

enum class PauliLetter : char { kX = 'X', kY = 'Y' };

/// One ordered product of Jx / Jy from expanding J+^m = (Jx + i Jy)^m.
struct PauliWord {
  std::vector<PauliLetter> letters;
  /// i^(number of Y letters), always one of 1, i, -1, -i.
  std::complex<double> coefficient;
  int y_count = 0;

  std::string text() const;
};

/// All 2^m words, leftmost letter first. Word j takes letter Y at position p
/// when bit (m-1-p) of j is set, so XX..X comes first and YY..Y last.
std::vector<PauliWord> expand_plus_power(std::int64_t m);

/// Coefficient rendered as "+1", "+i", "-1" or "-i".
std::string coefficient_text(const PauliWord& word);

}  // namespace bellcorr
