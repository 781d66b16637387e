#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>

namespace bellcorr {

/// Signed real number stored as (sign, ln|x|).
///
/// Bell bounds for a hundred particles reach e^650 and beyond, so every
/// correlator and bound in the library travels in this form and is only
/// exponentiated at the presentation boundary. The logarithm is kept as an
/// unevaluated sum hi + lo, so a round trip through from_real stays within a
/// few ulps of x even when ln|x| is in the hundreds.
class LogScalar {
 public:
  /// The canonical zero: sign 0, magnitude -inf.
  constexpr LogScalar() = default;

  /// sign must be -1, 0 or +1. A zero sign or a -inf magnitude both yield the
  /// canonical zero.
  LogScalar(int sign, double log_magnitude);

  static LogScalar zero() { return {}; }
  static LogScalar one() { return {1, 0.0}; }
  static LogScalar from_real(double x);
  /// e^log_magnitude with a positive sign.
  static LogScalar from_log(double log_magnitude) { return {1, log_magnitude}; }

  int sign() const { return sign_; }
  double log_magnitude() const { return log_hi_; }
  bool is_zero() const { return sign_ == 0; }

  /// Overflows to +-inf and underflows to 0 the same way std::exp does.
  double to_real() const;

  LogScalar operator-() const {
    LogScalar r = *this;
    r.sign_ = -sign_;
    return r;
  }
  friend LogScalar operator*(LogScalar a, LogScalar b);
  friend LogScalar operator/(LogScalar a, LogScalar b);
  friend LogScalar operator+(LogScalar a, LogScalar b);
  friend LogScalar operator-(LogScalar a, LogScalar b) { return a + (-b); }

  friend bool operator==(const LogScalar&, const LogScalar&) = default;

 private:
  friend LogScalar log_sum_exp_signed(std::span<const LogScalar> terms);
  static LogScalar from_parts(int sign, double hi, double lo);

  int sign_ = 0;
  double log_hi_ = -std::numeric_limits<double>::infinity();
  double log_lo_ = 0.0;
};

/// Complex number stored as (ln|z|, arg z). Holds <J+^m> before |.|^2.
class LogComplex {
 public:
  constexpr LogComplex() = default;
  /// phase is wrapped into (-pi, pi].
  LogComplex(double log_magnitude, double phase);

  static LogComplex zero() { return {}; }
  /// Magnitude and phase of z times e^log_scale.
  static LogComplex from_complex(std::complex<double> z, double log_scale = 0.0);

  double log_magnitude() const { return log_magnitude_; }
  double phase() const { return phase_; }
  bool is_zero() const { return log_magnitude_ == -std::numeric_limits<double>::infinity(); }

  LogComplex conj() const { return is_zero() ? LogComplex{} : LogComplex{log_magnitude_, -phase_}; }
  std::complex<double> to_complex() const;
  /// |z|^2; the phase is dropped.
  LogScalar squared_modulus() const;

  friend LogComplex operator*(LogComplex a, LogComplex b);

 private:
  double log_magnitude_ = -std::numeric_limits<double>::infinity();
  double phase_ = 0.0;
};

/// ln(n!). Exact cumulative sums (compensated) for n <= kLogFactorialTableSize,
/// lgamma beyond.
inline constexpr std::int64_t kLogFactorialTableSize = 1'000'000;
double log_factorial(std::int64_t n);

/// ln C(n, k). Throws std::invalid_argument unless 0 <= k <= n.
double log_binomial(std::int64_t n, std::int64_t k);

/// ln(n!/(n-k)!), the number of ordered k-subsets. Throws unless 0 <= k <= n.
double log_falling_factorial(std::int64_t n, std::int64_t k);

/// Signed sum of log-domain terms. The largest magnitude is factored out before
/// summing. Results that cancel to within rounding of the summed magnitudes
/// come back as the canonical zero.
LogScalar log_sum_exp_signed(std::span<const LogScalar> terms);

/// ln(e^a + e^b) for a, b possibly -inf.
double log_add_exp(double a, double b);

}  // namespace bellcorr
