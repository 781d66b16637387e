#include "bellcorr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bellcorr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Error-free transformation: s + e == a + b exactly.
std::pair<double, double> two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

double wrap_phase(double phase) {
  if (phase > -std::numbers::pi && phase <= std::numbers::pi) return phase;
  double wrapped = std::remainder(phase, 2.0 * std::numbers::pi);
  if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
  return wrapped;
}

const std::vector<double>& log_factorial_table() {
  // Built on first use; initialization of a function-local static is
  // thread-safe.
  static const std::vector<double> table = [] {
    std::vector<double> t(static_cast<std::size_t>(kLogFactorialTableSize) + 1);
    t[0] = 0.0;
    // Neumaier summation keeps ln(n!) within an ulp or two of the exact sum.
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
      const double term = std::log(static_cast<double>(k));
      const double next = sum + term;
      if (std::abs(sum) >= std::abs(term)) {
        carry += (sum - next) + term;
      } else {
        carry += (term - next) + sum;
      }
      sum = next;
      t[k] = sum + carry;
    }
    return t;
  }();
  return table;
}

}  // namespace

LogScalar::LogScalar(int sign, double log_magnitude) {
  if (sign < -1 || sign > 1) throw std::invalid_argument("LogScalar sign must be -1, 0 or +1");
  if (std::isnan(log_magnitude)) throw std::invalid_argument("LogScalar magnitude is NaN");
  if (sign == 0 || log_magnitude == kNegInf) return;
  sign_ = sign;
  log_hi_ = log_magnitude;
}

LogScalar LogScalar::from_parts(int sign, double hi, double lo) {
  LogScalar r(sign, hi);
  if (r.is_zero() || !std::isfinite(hi) || !std::isfinite(lo)) return r;
  const auto [s, e] = two_sum(hi, lo);
  r.log_hi_ = s;
  r.log_lo_ = e;
  return r;
}

LogScalar LogScalar::from_real(double x) {
  if (std::isnan(x)) throw std::invalid_argument("LogScalar::from_real: NaN");
  if (x == 0.0) return {};
  const double ax = std::abs(x);
  const double hi = std::log(ax);
  // ln|x| - hi, recovered through the same exp that to_real applies.
  const double e_hi = std::exp(hi);
  const double lo = std::isfinite(e_hi) && e_hi > 0.0 ? std::log(ax / e_hi) : 0.0;
  return from_parts(x > 0 ? 1 : -1, hi, lo);
}

double LogScalar::to_real() const {
  if (sign_ == 0) return 0.0;
  return sign_ * (std::exp(log_hi_) * std::exp(log_lo_));
}

LogScalar operator*(LogScalar a, LogScalar b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto [s, e] = two_sum(a.log_hi_, b.log_hi_);
  return LogScalar::from_parts(a.sign_ * b.sign_, s, e + a.log_lo_ + b.log_lo_);
}

LogScalar operator/(LogScalar a, LogScalar b) {
  if (b.is_zero()) throw std::domain_error("LogScalar division by zero");
  if (a.is_zero()) return {};
  const auto [s, e] = two_sum(a.log_hi_, -b.log_hi_);
  return LogScalar::from_parts(a.sign_ * b.sign_, s, e + a.log_lo_ - b.log_lo_);
}

LogScalar operator+(LogScalar a, LogScalar b) {
  const LogScalar terms[] = {a, b};
  return log_sum_exp_signed(terms);
}

LogComplex::LogComplex(double log_magnitude, double phase) {
  if (std::isnan(log_magnitude) || std::isnan(phase)) throw std::invalid_argument("LogComplex: NaN");
  if (log_magnitude == kNegInf) return;
  log_magnitude_ = log_magnitude;
  phase_ = wrap_phase(phase);
}

LogComplex LogComplex::from_complex(std::complex<double> z, double log_scale) {
  if (z == std::complex<double>{}) return {};
  return {std::log(std::abs(z)) + log_scale, std::arg(z)};
}

std::complex<double> LogComplex::to_complex() const {
  if (is_zero()) return {};
  return std::polar(std::exp(log_magnitude_), phase_);
}

LogScalar LogComplex::squared_modulus() const {
  if (is_zero()) return {};
  return LogScalar::from_log(2.0 * log_magnitude_);
}

LogComplex operator*(LogComplex a, LogComplex b) {
  if (a.is_zero() || b.is_zero()) return {};
  return {a.log_magnitude_ + b.log_magnitude_, a.phase_ + b.phase_};
}

double log_factorial(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument " + std::to_string(n));
  if (n <= kLogFactorialTableSize) return log_factorial_table()[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::invalid_argument("log_binomial: need 0 <= k <= n, got n=" + std::to_string(n) +
                                " k=" + std::to_string(k));
  }
  // The bracket is a commutative sum, so C(n,k) and C(n,n-k) agree bit for bit.
  return log_factorial(n) - (log_factorial(k) + log_factorial(n - k));
}

double log_falling_factorial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::invalid_argument("log_falling_factorial: need 0 <= k <= n, got n=" +
                                std::to_string(n) + " k=" + std::to_string(k));
  }
  return log_factorial(n) - log_factorial(n - k);
}

LogScalar log_sum_exp_signed(std::span<const LogScalar> terms) {
  const LogScalar* largest = nullptr;
  std::size_t nonzero = 0;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    if (largest == nullptr || t.log_hi_ > largest->log_hi_) largest = &t;
    ++nonzero;
  }
  if (nonzero == 0) return {};
  if (largest->log_hi_ == std::numeric_limits<double>::infinity()) {
    throw std::overflow_error("log_sum_exp_signed: infinite magnitude");
  }
  const double max_hi = largest->log_hi_;
  const double max_lo = largest->log_lo_;

  double sum = 0.0;
  double carry = 0.0;
  double abs_sum = 0.0;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    const double scaled = std::exp((t.log_hi_ - max_hi) + (t.log_lo_ - max_lo));
    const double term = t.sign_ * scaled;
    abs_sum += scaled;
    const auto [next, err] = two_sum(sum, term);
    carry += err;
    sum = next;
  }
  sum += carry;

  const double cancellation_floor =
      4.0 * static_cast<double>(nonzero) * std::numeric_limits<double>::epsilon() * abs_sum;
  if (std::abs(sum) <= cancellation_floor) return {};
  return LogScalar::from_parts(sum > 0 ? 1 : -1, max_hi, max_lo + std::log(std::abs(sum)));
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace bellcorr
