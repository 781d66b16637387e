#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bellcorr/numerics.hpp"

namespace bellcorr {

using Amplitude = std::complex<double>;

/// N bosonic qubits in the symmetric basis. Index n of the amplitude array is
/// |n up, N-n down>. The physical vector is e^log_scale * amplitudes, which
/// lets repeated J+ applications run without overflow.
class DickeVector {
 public:
  /// Takes amplitudes of length N+1 as given; no normalization happens here.
  DickeVector(std::int64_t n_particles, std::vector<Amplitude> amplitudes, double log_scale = 0.0);

  /// The distinguished zero vector of the N-particle space.
  static DickeVector zero(std::int64_t n_particles);

  std::int64_t n_particles() const { return n_particles_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
  Amplitude amplitude(std::size_t n) const { return amplitudes_.at(n); }
  double log_scale() const { return log_scale_; }
  bool is_zero() const { return is_zero_; }

  /// Euclidean norm of the amplitude array (log_scale excluded).
  double amplitude_norm() const;
  /// Unit vector with log_scale 0. Throws std::domain_error on the zero vector.
  DickeVector normalized() const;

 private:
  std::int64_t n_particles_;
  std::vector<Amplitude> amplitudes_;
  double log_scale_;
  bool is_zero_;
};

DickeVector basis_state(std::int64_t n_particles, std::int64_t n_up);
/// (|N,0> + |0,N>)/sqrt(2).
DickeVector noon_state(std::int64_t n_particles);
/// Coherent spin state polarized along +x: amplitudes sqrt(C(N,n)) / 2^(N/2).
DickeVector css_x(std::int64_t n_particles);

/// J+ = a^dagger b; maps index n to n+1 with weight sqrt((n+1)(N-n)).
/// The result is renormalized to a unit amplitude array and its norm is folded
/// into log_scale. J+ on |N,0> gives the zero vector.
DickeVector apply_j_plus(const DickeVector& state);
/// J- = a b^dagger, the adjoint of J+; maps n to n-1 with weight sqrt(n(N-n+1)).
DickeVector apply_j_minus(const DickeVector& state);

/// <psi|phi> including both log scales.
LogComplex inner_product(const DickeVector& bra, const DickeVector& ket);

/// <psi|J+^m|psi> by m matrix-free applications. m > N is an exact zero.
LogComplex expectation_j_plus_power(const DickeVector& state, std::int64_t m);
LogComplex expectation_j_minus_power(const DickeVector& state, std::int64_t m);

}  // namespace bellcorr
