#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bellcorr/dicke.hpp"

namespace bellcorr {

/// Real symmetric tridiagonal matrix. off_diagonal[i] couples rows i and i+1.
class TridiagonalOperator {
 public:
  TridiagonalOperator(std::vector<double> diagonal, std::vector<double> off_diagonal);

  std::size_t dimension() const { return diagonal_.size(); }
  const std::vector<double>& diagonal() const { return diagonal_; }
  const std::vector<double>& off_diagonal() const { return off_diagonal_; }

  std::vector<double> apply(std::span<const double> v) const;
  /// Number of eigenvalues strictly below x (Sturm sequence count).
  std::size_t count_below(double x) const;
  /// True when the matrix commutes with the index reflection i <-> d-1-i.
  bool is_reflection_symmetric() const;

 private:
  std::vector<double> diagonal_;
  std::vector<double> off_diagonal_;
};

/// Raised when an iterative solver exhausts its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroundStateResult {
  double energy;
  DickeVector state;
  double residual_norm;
};

/// H = -Jx + (U/N) Jz^2 in the Jz eigenbasis |n, N-n>:
/// diagonal (U/N)(n - N/2)^2, off-diagonal -sqrt((n+1)(N-n))/2.
TridiagonalOperator build_bose_hubbard(std::int64_t n_particles, double interaction);

inline constexpr double kDefaultEigenTolerance = 1e-12;

/// Lowest eigenpair by Sturm bisection and inverse iteration.
///
/// The eigenvector is normalized with its largest component positive. When H
/// is reflection symmetric with strictly negative off-diagonals the ground
/// state is the reflection-even Perron vector, and the solve is carried out in
/// the even sector. That keeps the exponentially split cat doublet at strong
/// attraction from mixing.
///
/// Throws ConvergenceError if the bracket or the residual check
/// (||Hv - Ev|| <= 1e-10 max(1, |E|)) fails.
GroundStateResult ground_state(const TridiagonalOperator& hamiltonian,
                               double tolerance = kDefaultEigenTolerance);

}  // namespace bellcorr
