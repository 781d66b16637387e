#include "doctest.h"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bellcorr/bell.hpp"
#include "bellcorr/numerics.hpp"
#include "oracles.hpp"

using namespace bellcorr;

namespace {

const double kLn2 = std::numbers::ln2;

DickeVector with_phase(const DickeVector& v, std::complex<double> phase) {
  std::vector<Amplitude> amps = v.amplitudes();
  for (auto& a : amps) a *= phase;
  return {v.n_particles(), amps, v.log_scale()};
}

}  // namespace

TEST_CASE("single-region bound values") {
  CHECK(bound_single_log(1, 1) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  CHECK(std::abs(bound_single_log(2, 2)) <= 1e-15);
  CHECK(bound_single_log(5, 0) == 0.0);
  CHECK(bound_single_log(100, 100) == doctest::Approx(658.1640330551324).epsilon(1e-15));
  CHECK_THROWS_AS(bound_single_log(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(bound_single_log(3, -1), std::invalid_argument);
}

TEST_CASE("single-region bound recurrence") {
  for (std::int64_t n : {1, 7, 100, 2000}) {
    for (std::int64_t m = 1; m <= n; m += std::max<std::int64_t>(1, n / 50)) {
      const double step = bound_single_log(n, m) - bound_single_log(n, m - 1);
      const double expected = 2.0 * std::log(static_cast<double>(n - m + 1)) - kLn2;
      // Rounding is set by the ln N! operands, not by the (possibly small) bound.
      const double ulps = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, 2.0 * log_factorial(n));
      CHECK(std::abs(step - expected) <= ulps);
    }
  }
}

TEST_CASE("two-region bound values") {
  for (std::int64_t n = 1; n <= 20; ++n) {
    CHECK(bound_two_region_log(n, 1, n, 1) ==
          doctest::Approx(2.0 * log_factorial(n) - (n + 1) * kLn2).epsilon(1e-14));
  }
  CHECK(bound_two_region_log(1, 1, 1, 1) == doctest::Approx(-2.0 * kLn2).epsilon(1e-15));
  CHECK(std::abs(bound_two_region_log(2, 2, 2, 2)) <= 1e-15);
  CHECK_THROWS_AS(bound_two_region_log(2, 2, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(bound_two_region_log(2, 2, 1, 3), std::invalid_argument);
}

TEST_CASE("N00N correlators") {
  for (std::int64_t n = 1; n <= 40; ++n) {
    const CorrelatorReport r = correlator_single(noon_state(n), n);
    CHECK(r.order_m == n);
    CHECK(r.log_correlator.sign() == 1);
    CHECK(r.log_correlator.log_magnitude() == doctest::Approx(2.0 * log_factorial(n) - std::log(4.0)).epsilon(1e-13));
    CHECK(r.log_ratio == doctest::Approx((n - 2) * kLn2).epsilon(1e-12));
    CHECK(r.violates_bell == (n >= 3));
    CHECK(r.violates_entanglement_threshold == (n >= 2));
    // The symmetrization factor (N!)^2 links the collective and addressed values.
    CHECK(std::exp(r.log_correlator.log_magnitude() - 2.0 * log_factorial(n)) ==
          doctest::Approx(ghz_addressable_correlator(n, n)).epsilon(1e-12));
  }
  // N = 2 sits exactly on the bound.
  const CorrelatorReport on_bound = correlator_single(noon_state(2), 2);
  CHECK(on_bound.log_ratio == 0.0);
  CHECK_FALSE(on_bound.violates_bell);
}

TEST_CASE("coherent-state correlator at first order") {
  for (std::int64_t n : {1, 2, 9, 100}) {
    const CorrelatorReport r = correlator_single(css_x(n), 1);
    CHECK(std::exp(r.log_correlator.log_magnitude()) == doctest::Approx(n * n / 4.0).epsilon(1e-12));
    CHECK(std::exp(r.log_bound) == doctest::Approx(n * n / 2.0).epsilon(1e-12));
    CHECK(r.log_ratio == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    CHECK_FALSE(r.violates_bell);
    CHECK_FALSE(r.violates_entanglement_threshold);
  }
}

TEST_CASE("vanishing and trivial correlators") {
  const CorrelatorReport zero = correlator_single(noon_state(5), 3);
  CHECK(zero.log_correlator.is_zero());
  CHECK(zero.log_ratio == -std::numeric_limits<double>::infinity());
  CHECK(zero.ratio() == 0.0);
  CHECK_FALSE(zero.violates_bell);
  CHECK_FALSE(zero.violates_entanglement_threshold);

  const CorrelatorReport empty = correlator_single(css_x(4), 0);
  CHECK(std::abs(empty.log_correlator.log_magnitude()) <= 1e-15);
  CHECK(empty.log_bound == 0.0);
  CHECK(empty.log_ratio == 0.0);
  CHECK_FALSE(empty.violates_bell);

  CHECK_THROWS_AS(correlator_single(css_x(4), 5), std::invalid_argument);
}

TEST_CASE("make_report flags follow the fields") {
  const CorrelatorReport above = make_report(2, LogScalar::from_log(1.0), 0.5, 2);
  CHECK(above.log_ratio == doctest::Approx(0.5));
  CHECK(above.violates_bell);
  CHECK(above.violates_entanglement_threshold);

  const CorrelatorReport between = make_report(2, LogScalar::from_log(0.0), 0.5, 2);
  CHECK_FALSE(between.violates_bell);
  CHECK(between.violates_entanglement_threshold);

  const CorrelatorReport negative = make_report(1, LogScalar(-1, 3.0), 0.0, 1);
  CHECK_FALSE(negative.violates_bell);
  CHECK_FALSE(negative.violates_entanglement_threshold);

  // Values within rounding of the bound snap to exactly zero.
  const CorrelatorReport snapped = make_report(1, LogScalar::from_log(600.0 + 1e-12), 600.0, 1);
  CHECK(snapped.log_ratio == 0.0);
  CHECK_FALSE(snapped.violates_bell);
  const CorrelatorReport resolved = make_report(1, LogScalar::from_log(600.0 + 1e-9), 600.0, 1);
  CHECK(resolved.log_ratio > 0.0);
  CHECK(resolved.violates_bell);
}

TEST_CASE("correlator is invariant under a global phase") {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 10; ++n) {
    const DickeVector state = oracle::random_state(n, rng);
    for (int m = 1; m <= n; ++m) {
      const CorrelatorReport base = correlator_single(state, m);
      // Multiplying by a power of i is exact in floating point.
      for (const std::complex<double> phase : {std::complex<double>(0, 1), {-1, 0}, {0, -1}}) {
        CHECK(correlator_single(with_phase(state, phase), m).log_correlator == base.log_correlator);
      }
      const CorrelatorReport rotated = correlator_single(with_phase(state, std::polar(1.0, 0.7)), m);
      CHECK(rotated.log_correlator.log_magnitude() ==
            doctest::Approx(base.log_correlator.log_magnitude()).epsilon(1e-12));
    }
  }
}

TEST_CASE("J+ and J- give the same modulus on real states") {
  std::mt19937_64 rng(9);
  for (int n = 1; n <= 10; ++n) {
    const DickeVector state = oracle::random_state(n, rng, true);
    for (int m = 1; m <= n; ++m) {
      const double plus = std::norm(expectation_j_plus_power(state, m).to_complex());
      const double minus = std::norm(expectation_j_minus_power(state, m).to_complex());
      CHECK(std::abs(plus - minus) <= 1e-12 * plus);
    }
  }
}

TEST_CASE("two-region product correlator against a dense Kronecker oracle") {
  std::mt19937_64 rng(10);
  for (int na = 1; na <= 4; ++na) {
    for (int nb = 1; nb <= 3; ++nb) {
      const DickeVector a = oracle::random_state(na, rng);
      const DickeVector b = oracle::random_state(nb, rng);
      const oracle::Vector psi = Eigen::kroneckerProduct(oracle::to_eigen(a), oracle::to_eigen(b));
      for (int m = 0; m <= na; ++m) {
        for (int k = 0; k <= nb; ++k) {
          const oracle::Matrix op = Eigen::kroneckerProduct(oracle::matrix_power(oracle::dense_j_plus(na), m),
                                                            oracle::matrix_power(oracle::dense_j_plus(nb), k));
          const double dense = std::norm(oracle::dense_expectation(psi, op));
          const CorrelatorReport r = correlator_two_region_product(a, m, b, k);
          CHECK(std::exp(r.log_correlator.log_magnitude()) == doctest::Approx(dense).epsilon(1e-12));
          CHECK(r.log_bound == bound_two_region_log(na, nb, m, k));
        }
      }
    }
  }
  CHECK_THROWS_AS(correlator_two_region_product(css_x(2), 3, css_x(1), 1), std::invalid_argument);
}

TEST_CASE("addressed GHZ correlator") {
  CHECK(ghz_addressable_correlator(5, 5) == 0.25);
  CHECK(ghz_addressable_correlator(5, 3) == 0.0);
  for (std::int64_t n = 1; n <= 20; ++n) {
    CHECK(ghz_addressable_correlator(n, n) == 0.25);
    for (std::int64_t m = 1; m < n; ++m) CHECK(ghz_addressable_correlator(n, m) == 0.0);
  }
  CHECK_THROWS_AS(ghz_addressable_correlator(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(ghz_addressable_correlator(3, 0), std::invalid_argument);
}

TEST_CASE("GHZ plus an uncorrelated qubit") {
  const CorrelatorReport n3 = ghz_plus_single_correlator(3);
  CHECK(n3.log_ratio == 0.0);
  CHECK_FALSE(n3.violates_bell);
  const CorrelatorReport n4 = ghz_plus_single_correlator(4);
  CHECK(n4.log_ratio == doctest::Approx(kLn2).epsilon(1e-13));
  CHECK(n4.violates_bell);
  CHECK(ghz_plus_single_correlator(1).log_ratio == doctest::Approx(-2.0 * kLn2).epsilon(1e-13));
  for (std::int64_t n = 1; n <= 25; ++n) {
    const GhzPlusSingleReports r = ghz_plus_single_reports(n);
    CHECK(r.combined.log_correlator.log_magnitude() ==
          doctest::Approx(2.0 * log_factorial(n) - 4.0 * kLn2).epsilon(1e-13));
    CHECK(r.combined.log_bound == bound_two_region_log(n, 1, n, 1));
    CHECK(r.combined.log_ratio == doctest::Approx((n - 3) * kLn2).epsilon(1e-12));
    CHECK_FALSE(r.region_b.violates_bell);
    if (n > 3) CHECK(cross_region_guard(r.region_a, r.region_b, r.combined) == CrossRegionVerdict::kLocalOrigin);
  }
  CHECK_THROWS_AS(ghz_plus_single_reports(0), std::invalid_argument);
}

TEST_CASE("cross-region guard") {
  const CorrelatorReport below = make_report(1, LogScalar::from_log(-1.0), 0.0, 1);
  const CorrelatorReport above = make_report(1, LogScalar::from_log(1.0), 0.0, 1);
  const CorrelatorReport zero = make_report(1, LogScalar{}, 0.0, 1);
  CHECK(cross_region_guard(zero, zero, above) == CrossRegionVerdict::kGenuineCrossRegion);
  CHECK(cross_region_guard(below, below, above) == CrossRegionVerdict::kGenuineCrossRegion);
  CHECK(cross_region_guard(above, below, above) == CrossRegionVerdict::kLocalOrigin);
  CHECK(cross_region_guard(below, above, above) == CrossRegionVerdict::kLocalOrigin);
  CHECK(cross_region_guard(above, above, below) == CrossRegionVerdict::kNoViolation);
  CHECK(cross_region_guard(below, below, below) == CrossRegionVerdict::kNoViolation);
  CHECK(to_string(CrossRegionVerdict::kGenuineCrossRegion) == "genuine cross-region");
  CHECK(to_string(CrossRegionVerdict::kLocalOrigin) == "local-origin");
  CHECK(to_string(CrossRegionVerdict::kNoViolation) == "no violation");
}

TEST_CASE("expansion of J+^m into X/Y words") {
  const auto w1 = expand_plus_power(1);
  REQUIRE(w1.size() == 2);
  CHECK(w1[0].text() == "X");
  CHECK(w1[0].coefficient == std::complex<double>(1, 0));
  CHECK(w1[1].text() == "Y");
  CHECK(w1[1].coefficient == std::complex<double>(0, 1));

  const auto w2 = expand_plus_power(2);
  REQUIRE(w2.size() == 4);
  CHECK(w2[0].text() == "XX");
  CHECK(coefficient_text(w2[0]) == "+1");
  CHECK(w2[1].text() == "XY");
  CHECK(coefficient_text(w2[1]) == "+i");
  CHECK(w2[2].text() == "YX");
  CHECK(coefficient_text(w2[2]) == "+i");
  CHECK(w2[3].text() == "YY");
  CHECK(coefficient_text(w2[3]) == "-1");

  // Real part XXX - YXY - YYX - XYY, imaginary part XYX + XXY + YXX - YYY.
  std::vector<std::string> real_part;
  std::vector<std::string> imag_part;
  for (const PauliWord& w : expand_plus_power(3)) {
    const std::string signed_word = (w.coefficient.real() + w.coefficient.imag() > 0 ? "+" : "-") + w.text();
    (w.coefficient.imag() == 0.0 ? real_part : imag_part).push_back(signed_word);
  }
  CHECK(real_part == std::vector<std::string>{"+XXX", "-XYY", "-YXY", "-YYX"});
  CHECK(imag_part == std::vector<std::string>{"+XXY", "+XYX", "+YXX", "-YYY"});

  for (std::int64_t m = 1; m <= 12; ++m) {
    const auto words = expand_plus_power(m);
    CHECK(words.size() == (std::size_t{1} << m));
    for (const PauliWord& w : words) {
      CHECK(std::abs(w.coefficient) == 1.0);
      CHECK(static_cast<std::int64_t>(w.letters.size()) == m);
      CHECK(w.y_count == static_cast<int>(std::count(w.letters.begin(), w.letters.end(), PauliLetter::kY)));
    }
  }
  CHECK_THROWS_AS(expand_plus_power(0), std::invalid_argument);
  CHECK_THROWS_AS(expand_plus_power(31), std::invalid_argument);
}

TEST_CASE("word sums reproduce <J+^m> on random states") {
  std::mt19937_64 rng(12);
  for (int n = 1; n <= 6; ++n) {
    const oracle::Matrix jx = oracle::dense_jx(n);
    const oracle::Matrix jy = oracle::dense_jy(n);
    for (int m = 1; m <= 4; ++m) {
      const DickeVector state = oracle::random_state(n, rng);
      const oracle::Vector psi = oracle::to_eigen(state);
      std::complex<double> sum = 0.0;
      for (const PauliWord& w : expand_plus_power(m)) {
        oracle::Matrix op = oracle::Matrix::Identity(n + 1, n + 1);
        for (PauliLetter l : w.letters) op = op * (l == PauliLetter::kX ? jx : jy);
        sum += w.coefficient * oracle::dense_expectation(psi, op);
      }
      CHECK(std::abs(sum - expectation_j_plus_power(state, m).to_complex()) <= 1e-10);
    }
  }
}
