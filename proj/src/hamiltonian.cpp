#include "bellcorr/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bellcorr {

namespace {

constexpr int kMaxBisectionSteps = 4000;
constexpr int kMaxInverseIterations = 50;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Eigenpair {
  double value;
  std::vector<double> vector;
};

// Smallest eigenvalue bracket [lo, hi] by bisection on the Sturm count.
std::pair<double, double> bracket_lowest(const TridiagonalOperator& t, double tolerance) {
  const auto& d = t.diagonal();
  const auto& e = t.off_diagonal();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(e[i - 1]);
    if (i + 1 < d.size()) radius += std::abs(e[i]);
    lo = std::min(lo, d[i] - radius);
    hi = std::max(hi, d[i] + radius);
  }
  // Gershgorin discs are closed; nudge hi so the count at hi includes everything.
  hi += std::max(1.0, std::abs(hi)) * 1e-12;
  for (int step = 0; step < kMaxBisectionSteps; ++step) {
    const double width_floor =
        std::max(tolerance, 4.0 * std::numeric_limits<double>::epsilon() *
                                std::max(std::abs(lo), std::abs(hi)));
    if (hi - lo <= width_floor) return {lo, hi};
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) return {lo, hi};
    if (t.count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw ConvergenceError("ground_state: eigenvalue bisection did not converge");
}

// Solves (T - shift) y = rhs for the positive definite case shift < lambda_min.
std::vector<double> shifted_solve(const TridiagonalOperator& t, double shift,
                                  std::span<const double> rhs) {
  const auto& d = t.diagonal();
  const auto& e = t.off_diagonal();
  const std::size_t n = d.size();
  const double tiny = std::numeric_limits<double>::epsilon() *
                      std::max(1.0, std::abs(shift)) * std::numeric_limits<double>::epsilon();
  std::vector<double> pivot(n);
  std::vector<double> y(rhs.begin(), rhs.end());
  pivot[0] = d[0] - shift;
  if (std::abs(pivot[0]) < tiny) pivot[0] = tiny;
  for (std::size_t i = 1; i < n; ++i) {
    const double l = e[i - 1] / pivot[i - 1];
    pivot[i] = d[i] - shift - l * e[i - 1];
    if (std::abs(pivot[i]) < tiny) pivot[i] = tiny;
    y[i] -= l * y[i - 1];
  }
  y[n - 1] /= pivot[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    y[i] = (y[i] - e[i] * y[i + 1]) / pivot[i];
  }
  return y;
}

Eigenpair lowest_eigenpair(const TridiagonalOperator& t, double tolerance) {
  if (t.dimension() == 1) return {t.diagonal()[0], {1.0}};
  const auto [lo, hi] = bracket_lowest(t, tolerance);
  // Shifting to the lower bracket end keeps T - shift positive semidefinite.
  const double shift = lo;
  std::vector<double> v(t.dimension(), 1.0 / std::sqrt(static_cast<double>(t.dimension())));
  for (int it = 0; it < kMaxInverseIterations; ++it) {
    std::vector<double> next = shifted_solve(t, shift, v);
    const double n = norm2(next);
    if (!std::isfinite(n) || n == 0.0) {
      throw ConvergenceError("ground_state: inverse iteration broke down");
    }
    for (double& x : next) x /= n;
    if (dot(next, v) < 0.0) {
      for (double& x : next) x = -x;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) change = std::max(change, std::abs(next[i] - v[i]));
    v = std::move(next);
    if (change <= 1e-15 && it >= 1) break;
  }
  const auto hv = t.apply(v);
  return {dot(v, hv), std::move(v)};
}

}  // namespace

TridiagonalOperator::TridiagonalOperator(std::vector<double> diagonal, std::vector<double> off_diagonal)
    : diagonal_(std::move(diagonal)), off_diagonal_(std::move(off_diagonal)) {
  if (diagonal_.empty()) throw std::invalid_argument("TridiagonalOperator: empty diagonal");
  if (off_diagonal_.size() + 1 != diagonal_.size()) {
    throw std::invalid_argument("TridiagonalOperator: off-diagonal must have dimension - 1 entries");
  }
}

std::vector<double> TridiagonalOperator::apply(std::span<const double> v) const {
  if (v.size() != dimension()) throw std::invalid_argument("TridiagonalOperator::apply: size mismatch");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double s = diagonal_[i] * v[i];
    if (i > 0) s += off_diagonal_[i - 1] * v[i - 1];
    if (i + 1 < v.size()) s += off_diagonal_[i] * v[i + 1];
    out[i] = s;
  }
  return out;
}

std::size_t TridiagonalOperator::count_below(double x) const {
  double max_e2 = 1.0;
  for (double e : off_diagonal_) max_e2 = std::max(max_e2, e * e);
  const double pivmin = std::numeric_limits<double>::min() * max_e2;
  std::size_t count = 0;
  double q = diagonal_[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < diagonal_.size(); ++i) {
    q = diagonal_[i] - x - off_diagonal_[i - 1] * off_diagonal_[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
  }
  return count;
}

bool TridiagonalOperator::is_reflection_symmetric() const {
  const std::size_t d = diagonal_.size();
  for (std::size_t i = 0; i < d / 2; ++i) {
    if (diagonal_[i] != diagonal_[d - 1 - i]) return false;
  }
  const std::size_t o = off_diagonal_.size();
  for (std::size_t i = 0; i < o / 2; ++i) {
    if (off_diagonal_[i] != off_diagonal_[o - 1 - i]) return false;
  }
  return true;
}

TridiagonalOperator build_bose_hubbard(std::int64_t n_particles, double interaction) {
  if (n_particles < 1) throw std::invalid_argument("build_bose_hubbard: need N >= 1");
  if (!std::isfinite(interaction)) throw std::invalid_argument("build_bose_hubbard: U must be finite");
  const auto N = n_particles;
  const double coupling = interaction / static_cast<double>(N);
  std::vector<double> diag(static_cast<std::size_t>(N) + 1);
  std::vector<double> off(static_cast<std::size_t>(N));
  for (std::int64_t n = 0; n <= N; ++n) {
    // 2 Jz = 2n - N is an exact integer, which keeps the diagonal palindromic.
    const double two_jz = static_cast<double>(2 * n - N);
    diag[n] = coupling * (two_jz * two_jz) / 4.0;
  }
  for (std::int64_t n = 0; n < N; ++n) {
    off[n] = -0.5 * std::sqrt(static_cast<double>((n + 1) * (N - n)));
  }
  return {std::move(diag), std::move(off)};
}

GroundStateResult ground_state(const TridiagonalOperator& hamiltonian, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("ground_state: tolerance must be positive");
  const std::size_t d = hamiltonian.dimension();
  const auto& diag = hamiltonian.diagonal();
  const auto& off = hamiltonian.off_diagonal();

  const bool perron = std::all_of(off.begin(), off.end(), [](double e) { return e < 0.0; });
  std::vector<double> vec;
  if (d >= 2 && perron && hamiltonian.is_reflection_symmetric()) {
    // Reflection-even sector: s_i = (e_i + e_{d-1-i})/sqrt(2), plus the centre
    // e_{d/2} when d is odd.
    const std::size_t pairs = d / 2;
    const bool has_centre = (d % 2) == 1;
    const std::size_t sector_dim = pairs + (has_centre ? 1 : 0);
    std::vector<double> sd(sector_dim);
    std::vector<double> so(sector_dim - 1);
    for (std::size_t i = 0; i < pairs; ++i) sd[i] = diag[i];
    for (std::size_t i = 0; i + 1 < pairs; ++i) so[i] = off[i];
    if (has_centre) {
      sd[pairs] = diag[pairs];
      so[pairs - 1] = std::numbers::sqrt2 * off[pairs - 1];
    } else {
      sd[pairs - 1] += off[pairs - 1];
    }
    const auto sector = lowest_eigenpair(TridiagonalOperator(std::move(sd), std::move(so)), tolerance);
    vec.assign(d, 0.0);
    for (std::size_t i = 0; i < pairs; ++i) {
      vec[i] = sector.vector[i] / std::numbers::sqrt2;
      vec[d - 1 - i] = vec[i];
    }
    if (has_centre) vec[pairs] = sector.vector[pairs];
  } else {
    vec = lowest_eigenpair(hamiltonian, tolerance).vector;
  }

  const double n = norm2(vec);
  for (double& x : vec) x /= n;
  const auto largest = std::max_element(vec.begin(), vec.end(),
                                        [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*largest < 0.0) {
    for (double& x : vec) x = -x;
  }

  const auto hv = hamiltonian.apply(vec);
  const double energy = dot(vec, hv);
  double res = 0.0;
  for (std::size_t i = 0; i < d; ++i) res += (hv[i] - energy * vec[i]) * (hv[i] - energy * vec[i]);
  res = std::sqrt(res);
  if (!(res <= 1e-10 * std::max(1.0, std::abs(energy)))) {
    throw ConvergenceError("ground_state: residual " + std::to_string(res) +
                           " exceeds bound at energy " + std::to_string(energy));
  }

  std::vector<Amplitude> amps(vec.begin(), vec.end());
  return {energy, DickeVector(static_cast<std::int64_t>(d) - 1, std::move(amps)), res};
}

}  // namespace bellcorr
