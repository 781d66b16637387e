#include "bellcorr/dicke.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellcorr {

namespace {

void require_particles(std::int64_t n_particles, const char* who) {
  if (n_particles < 0) {
    throw std::invalid_argument(std::string(who) + ": negative particle count");
  }
}

// Rescales raw to unit norm, adding ln(norm) to log_scale.
DickeVector renormalized(std::int64_t n_particles, std::vector<Amplitude> raw, double log_scale) {
  double norm_sq = 0.0;
  double max_abs = 0.0;
  for (const auto& a : raw) max_abs = std::max(max_abs, std::abs(a));
  if (max_abs == 0.0) return DickeVector::zero(n_particles);
  for (const auto& a : raw) norm_sq += std::norm(a / max_abs);
  const double norm = max_abs * std::sqrt(norm_sq);
  for (auto& a : raw) a /= norm;
  return {n_particles, std::move(raw), log_scale + std::log(norm)};
}

template <bool Raise>
DickeVector apply_ladder(const DickeVector& state) {
  if (state.is_zero()) return state;
  const auto N = state.n_particles();
  const auto& in = state.amplitudes();
  std::vector<Amplitude> out(in.size());
  for (std::int64_t n = 0; n <= N; ++n) {
    if constexpr (Raise) {
      if (n == N) continue;
      out[n + 1] = std::sqrt(static_cast<double>((n + 1) * (N - n))) * in[n];
    } else {
      if (n == 0) continue;
      out[n - 1] = std::sqrt(static_cast<double>(n * (N - n + 1))) * in[n];
    }
  }
  return renormalized(N, std::move(out), state.log_scale());
}

template <bool Raise>
LogComplex expectation_ladder_power(const DickeVector& state, std::int64_t m) {
  if (m < 0) throw std::invalid_argument("ladder power: negative order");
  if (m > state.n_particles()) return LogComplex::zero();
  DickeVector shifted = state;
  for (std::int64_t step = 0; step < m && !shifted.is_zero(); ++step) {
    shifted = apply_ladder<Raise>(shifted);
  }
  return inner_product(state, shifted);
}

}  // namespace

DickeVector::DickeVector(std::int64_t n_particles, std::vector<Amplitude> amplitudes, double log_scale)
    : n_particles_(n_particles), amplitudes_(std::move(amplitudes)), log_scale_(log_scale) {
  require_particles(n_particles, "DickeVector");
  if (amplitudes_.size() != static_cast<std::size_t>(n_particles) + 1) {
    throw std::invalid_argument("DickeVector: expected " + std::to_string(n_particles + 1) +
                                " amplitudes, got " + std::to_string(amplitudes_.size()));
  }
  if (std::isnan(log_scale_)) throw std::invalid_argument("DickeVector: NaN log_scale");
  is_zero_ = true;
  for (const auto& a : amplitudes_) {
    if (a != Amplitude{}) {
      is_zero_ = false;
      break;
    }
  }
  if (is_zero_) log_scale_ = 0.0;
}

DickeVector DickeVector::zero(std::int64_t n_particles) {
  require_particles(n_particles, "DickeVector::zero");
  return {n_particles, std::vector<Amplitude>(static_cast<std::size_t>(n_particles) + 1)};
}

double DickeVector::amplitude_norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return std::sqrt(s);
}

DickeVector DickeVector::normalized() const {
  if (is_zero_) throw std::domain_error("cannot normalize the zero vector");
  DickeVector unit = renormalized(n_particles_, amplitudes_, 0.0);
  return {n_particles_, unit.amplitudes(), 0.0};
}

DickeVector basis_state(std::int64_t n_particles, std::int64_t n_up) {
  require_particles(n_particles, "basis_state");
  if (n_up < 0 || n_up > n_particles) {
    throw std::invalid_argument("basis_state: up-count " + std::to_string(n_up) +
                                " outside [0, " + std::to_string(n_particles) + "]");
  }
  std::vector<Amplitude> amps(static_cast<std::size_t>(n_particles) + 1);
  amps[n_up] = 1.0;
  return {n_particles, std::move(amps)};
}

DickeVector noon_state(std::int64_t n_particles) {
  if (n_particles < 1) throw std::invalid_argument("noon_state: need N >= 1");
  std::vector<Amplitude> amps(static_cast<std::size_t>(n_particles) + 1);
  amps.front() = std::numbers::sqrt2 / 2.0;
  amps.back() = std::numbers::sqrt2 / 2.0;
  return {n_particles, std::move(amps)};
}

DickeVector css_x(std::int64_t n_particles) {
  if (n_particles < 1) throw std::invalid_argument("css_x: need N >= 1");
  std::vector<Amplitude> amps(static_cast<std::size_t>(n_particles) + 1);
  const double half_log_norm = 0.5 * static_cast<double>(n_particles) * std::numbers::ln2;
  for (std::int64_t n = 0; n <= n_particles; ++n) {
    amps[n] = std::exp(0.5 * log_binomial(n_particles, n) - half_log_norm);
  }
  return {n_particles, std::move(amps)};
}

DickeVector apply_j_plus(const DickeVector& state) { return apply_ladder<true>(state); }
DickeVector apply_j_minus(const DickeVector& state) { return apply_ladder<false>(state); }

LogComplex inner_product(const DickeVector& bra, const DickeVector& ket) {
  if (bra.n_particles() != ket.n_particles()) {
    throw std::invalid_argument("inner_product: particle numbers differ");
  }
  if (bra.is_zero() || ket.is_zero()) return LogComplex::zero();
  Amplitude sum{};
  for (std::size_t n = 0; n < bra.dimension(); ++n) {
    sum += std::conj(bra.amplitudes()[n]) * ket.amplitudes()[n];
  }
  return LogComplex::from_complex(sum, bra.log_scale() + ket.log_scale());
}

LogComplex expectation_j_plus_power(const DickeVector& state, std::int64_t m) {
  return expectation_ladder_power<true>(state, m);
}

LogComplex expectation_j_minus_power(const DickeVector& state, std::int64_t m) {
  return expectation_ladder_power<false>(state, m);
}

}  // namespace bellcorr
