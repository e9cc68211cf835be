// Algorithmic primitives: phase estimation (simulated circuit mode with query
// accounting, plus an exact spectral mode for validation), reflection about a
// span, amplitude amplification, and a numerical checker for the effective
// spectral gap lemma.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "qpd/linalg.hpp"
#include "qpd/rng.hpp"

namespace qpd {

enum class PhaseEstimateMode { circuit, spectral };

/// Charged once per controlled application of the estimated unitary.
using QueryCharge = std::function<void(std::int64_t)>;

struct PhaseEstimateResult {
  double phase = 0.0;                       // radians in [0, 2pi)
  std::int64_t controlled_applications = 0; // circuit mode only

  // Budget constant: `kappa = 8 * rounds`, so that
  // controlled_applications <= ceil(kappa / delta) for every delta.
  static constexpr double kBudgetPerRound = 8.0;
};

namespace detail {

inline double wrap_phase(double w) {
  w = std::fmod(w, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w;
}

/// Distance on the phase circle.
inline double circular_distance(double a, double b) {
  double d = std::abs(wrap_phase(a) - wrap_phase(b));
  return std::min(d, kTwoPi - d);
}

/// Median of angles: unwrap around the mean direction, then take the middle
/// order statistic.
inline double circular_median(std::vector<double> ws) {
  Complex dir = 0.0;
  for (double w : ws) dir += std::polar(1.0, w);
  double ref = (std::abs(dir) > 0) ? std::arg(dir) : 0.0;
  for (double& w : ws) {
    double d = std::remainder(w - ref, kTwoPi);
    w = ref + d;
  }
  auto mid = ws.begin() + static_cast<std::ptrdiff_t>(ws.size() / 2);
  std::nth_element(ws.begin(), mid, ws.end());
  return wrap_phase(*mid);
}

/// Counter-measurement distribution of one textbook phase-estimation round
/// over a register of modulus M: prepare sum_k |k> U^k |input> / sqrt(M),
/// apply the inverse DFT on the counter, measure. A physical round costs M-1
/// applications of U; the distribution itself is round-independent.
inline std::vector<double> qpe_distribution(const Matrix& u, const Vector& input,
                                            Index modulus) {
  const Index d = input.size();
  Matrix blocks(d, modulus);
  blocks.col(0) = input;
  for (Index k = 1; k < modulus; ++k) blocks.col(k) = u * blocks.col(k - 1);

  // Inverse DFT over the counter index: out(:, m) = sum_k w^{-mk} blocks(:, k).
  Matrix dft(modulus, modulus);
  const double step = -kTwoPi / static_cast<double>(modulus);
  for (Index m = 0; m < modulus; ++m)
    for (Index k = 0; k < modulus; ++k)
      dft(m, k) = std::polar(1.0, step * static_cast<double>((m * k) % modulus));
  Matrix out = blocks * dft.transpose();

  // amplitude(m, i) = out(i, m) / M, so P[m] = ||out.col(m)||^2 / M^2.
  std::vector<double> pmf(static_cast<std::size_t>(modulus));
  const double scale = 1.0 / static_cast<double>(modulus);
  for (Index m = 0; m < modulus; ++m)
    pmf[static_cast<std::size_t>(m)] = out.col(m).squaredNorm() * scale * scale;
  return pmf;
}

}  // namespace detail

/// Estimate an eigenphase of `u` from `input` to precision `delta` (radians).
///
/// Circuit mode simulates phase estimation on a counter register of modulus
/// M = ceil(8/delta) (ceil(log2 M) <= ceil(log2(1/delta)) + 3 qubits), boosted
/// by a median over `rounds` independent repetitions; each controlled
/// application of `u` is counted and reported through `charge`. Spectral mode
/// diagonalizes `u` and returns the eigenphase of the dominant eigencomponent
/// of `input`; it performs no query accounting.
inline PhaseEstimateResult phase_estimate(const UnitaryMatrix& u, const StateVector& input,
                                          double delta, PhaseEstimateMode mode, Rng& rng,
                                          const QueryCharge& charge = {}, int rounds = 5) {
  if (delta <= 0) throw std::invalid_argument("phase_estimate: delta must be positive");
  if (u.dim() != input.dim()) throw std::invalid_argument("phase_estimate: dimension mismatch");
  if (rounds < 1) throw std::invalid_argument("phase_estimate: rounds must be >= 1");

  PhaseEstimateResult result;
  if (mode == PhaseEstimateMode::spectral) {
    Eigen::ComplexSchur<Matrix> schur(u.entries);
    const Matrix& q = schur.matrixU();
    const Matrix& t = schur.matrixT();
    // Unitary => normal => T is diagonal and the Schur basis is an
    // orthonormal eigenbasis. Pick the eigenvalue carrying the most overlap.
    double best = -1.0;
    Complex best_eig = 1.0;
    for (Index j = 0; j < u.dim(); ++j) {
      double w = std::norm(q.col(j).dot(input.amps));
      if (w > best) {
        best = w;
        best_eig = t(j, j);
      }
    }
    result.phase = detail::wrap_phase(std::arg(best_eig));
    return result;
  }

  const Index modulus = std::max<Index>(8, static_cast<Index>(std::ceil(8.0 / delta)));
  const std::vector<double> pmf = detail::qpe_distribution(u.entries, input.amps, modulus);
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(rounds));
  for (int r = 0; r < rounds; ++r) {
    int m = rng.sample_index(pmf);
    samples.push_back(kTwoPi * static_cast<double>(m) / static_cast<double>(modulus));
    result.controlled_applications += modulus - 1;
    if (charge) charge(modulus - 1);
  }
  result.phase = detail::circular_median(std::move(samples));
  return result;
}

/// Reflection through the span of `vectors` in dimension `dim`:
/// +1 on the span, -1 on its orthogonal complement. An empty list gives -I.
inline UnitaryMatrix reflect_about_span(const std::vector<StateVector>& vectors, Index dim) {
  if (dim <= 0) throw std::invalid_argument("reflect_about_span: empty dimension");
  std::vector<Vector> raw;
  raw.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.dim() != dim) throw std::invalid_argument("reflect_about_span: dimension mismatch");
    raw.push_back(v.amps);
  }
  std::vector<Vector> basis = orthonormalize(raw);
  Matrix r = -Matrix::Identity(dim, dim);
  for (const auto& q : basis) r += 2.0 * (q * q.adjoint());
  return UnitaryMatrix(std::move(r));
}

/// Amplitude amplification: returns the state after `rounds` Grover iterates
/// applied to setup*e0. If the initial target amplitude is sin(a), the final
/// target amplitude is sin((2*rounds+1) a). Charges 1 for the initial setup
/// application and 2 per round (one forward, one inverse application).
inline StateVector amplitude_amplify(const UnitaryMatrix& setup, const Projector& target,
                                     int rounds, const QueryCharge& charge = {}) {
  if (setup.dim() != target.dim())
    throw std::invalid_argument("amplitude_amplify: dimension mismatch");
  if (rounds < 0) throw std::invalid_argument("amplitude_amplify: negative rounds");
  const Index d = setup.dim();
  Vector s = setup.entries.col(0);  // setup * e0
  if (charge) charge(1);
  Vector v = s;
  for (int k = 0; k < rounds; ++k) {
    v -= 2.0 * (target.entries * v);      // reflect about the bad subspace
    v = 2.0 * s * s.dot(v) - v;           // reflect about the initial state
    if (charge) charge(2);
  }
  (void)d;
  return StateVector(std::move(v), false);
}

struct EsglReport {
  double lhs = 0.0;    // || P_delta Pi_B w ||
  double bound = 0.0;  // (delta / 2) * || w ||
  bool holds = false;
};

/// Effective spectral gap check: for w in ker(Pi_A), the overlap of Pi_B w
/// with the low-phase eigenspace of R_B R_A is at most (delta/2) ||w||.
/// Computed by exact eigendecomposition (Schur) of the product of reflections.
inline EsglReport esgl_check(const Projector& pi_a, const Projector& pi_b,
                             const StateVector& w, double delta) {
  if (pi_a.dim() != pi_b.dim() || pi_a.dim() != w.dim())
    throw std::invalid_argument("esgl_check: dimension mismatch");
  if (delta < 0) throw std::invalid_argument("esgl_check: delta must be nonnegative");
  const double residual = (pi_a.entries * w.amps).norm();
  if (residual > kTolAssert)
    throw std::invalid_argument("esgl_check: w is not in the kernel of Pi_A (||Pi_A w|| = " +
                                std::to_string(residual) + ")");

  const Index d = pi_a.dim();
  Matrix ra = 2.0 * pi_a.entries - Matrix::Identity(d, d);
  Matrix rb = 2.0 * pi_b.entries - Matrix::Identity(d, d);
  Eigen::ComplexSchur<Matrix> schur(rb * ra);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();

  Vector target = pi_b.entries * w.amps;
  double acc = 0.0;
  for (Index j = 0; j < d; ++j) {
    double theta = std::arg(t(j, j));  // in (-pi, pi]
    if (std::abs(theta) <= delta) acc += std::norm(q.col(j).dot(target));
  }
  EsglReport report;
  report.lhs = std::sqrt(acc);
  report.bound = 0.5 * delta * w.amps.norm();
  report.holds = report.lhs <= report.bound + kTolAssert;
  return report;
}

}  // namespace qpd
