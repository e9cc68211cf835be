// Dense complex linear algebra value types and small helpers shared by all
// modules. Everything is double-precision; identities are expected to hold to
// 1e-12 and derived facts to 1e-9 (kTolExact / kTolAssert).
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpd/rng.hpp"

namespace qpd {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kTolExact = 1e-12;   // identities that hold up to float error
inline constexpr double kTolAssert = 1e-9;   // derived numerical facts
inline constexpr double kTolUnitary = 1e-10; // construction-time structure checks
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_unitary(const Matrix& m, double tol = kTolUnitary) {
  if (m.rows() != m.cols()) return false;
  const Index d = m.rows();
  if (d <= 256) return max_abs(m.adjoint() * m - Matrix::Identity(d, d)) <= tol;
  // Large matrices: probe U*U = I on a few deterministic pseudo-random
  // vectors instead of forming the full product.
  Rng rng(0x15A11, static_cast<std::uint64_t>(d));
  for (int probe = 0; probe < 8; ++probe) {
    Vector v(d);
    for (Index i = 0; i < d; ++i) v(i) = rng.normal_complex();
    v /= v.norm();
    if ((m.adjoint() * (m * v) - v).norm() > tol * std::sqrt(static_cast<double>(d))) return false;
  }
  return true;
}

inline bool is_projector(const Matrix& m, double tol = kTolUnitary) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m * m - m) <= tol && max_abs(m.adjoint() - m) <= tol;
}

/// Unit-norm (when flagged) complex amplitude vector.
struct StateVector {
  Vector amps;
  bool normalized = true;

  StateVector() = default;
  explicit StateVector(Vector a, bool require_normalized = true)
      : amps(std::move(a)), normalized(require_normalized) {
    if (amps.size() <= 0) throw std::invalid_argument("StateVector: empty dimension");
    if (normalized && std::abs(amps.norm() - 1.0) > kTolUnitary)
      throw std::invalid_argument("StateVector: not normalized (norm = " +
                                  std::to_string(amps.norm()) + ")");
  }

  Index dim() const { return amps.size(); }
  double norm() const { return amps.norm(); }
};

inline StateVector basis_state(Index dim, Index k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

struct UnitaryMatrix {
  Matrix entries;

  UnitaryMatrix() = default;
  explicit UnitaryMatrix(Matrix m) : entries(std::move(m)) {
    if (entries.rows() == 0 || entries.rows() != entries.cols())
      throw std::invalid_argument("UnitaryMatrix: not square");
    if (!is_unitary(entries))
      throw std::invalid_argument("UnitaryMatrix: U*U != I beyond tolerance");
  }

  Index dim() const { return entries.rows(); }
};

struct Projector {
  Matrix entries;

  Projector() = default;
  explicit Projector(Matrix m) : entries(std::move(m)) {
    if (entries.rows() == 0 || entries.rows() != entries.cols())
      throw std::invalid_argument("Projector: not square");
    if (!is_projector(entries))
      throw std::invalid_argument("Projector: P^2 != P or P* != P beyond tolerance");
  }

  Index dim() const { return entries.rows(); }
  // trace of an orthogonal projector equals its rank
  Index rank() const { return static_cast<Index>(std::lround(entries.trace().real())); }
};

inline Projector projector_onto(const std::vector<Vector>& orthonormal, Index dim) {
  Matrix p = Matrix::Zero(dim, dim);
  for (const auto& q : orthonormal) p += q * q.adjoint();
  return Projector(std::move(p));
}

/// Pivoted Gram-Schmidt. Returns an orthonormal basis of span(vectors);
/// vectors with residual below `tol` are dropped.
inline std::vector<Vector> orthonormalize(const std::vector<Vector>& vectors,
                                          double tol = 1e-10) {
  std::vector<Vector> basis;
  for (const auto& v : vectors) {
    Vector r = v;
    for (const auto& q : basis) r -= q * (q.dot(r));
    for (const auto& q : basis) r -= q * (q.dot(r));  // second pass for stability
    double n = r.norm();
    if (n > tol) basis.push_back(r / n);
  }
  return basis;
}

/// Largest singular value.
inline double spectral_norm(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Haar-distributed random unitary (QR of a complex Ginibre matrix with the
/// usual phase fix on the R diagonal).
inline Matrix random_unitary(Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = rng.normal_complex();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    double a = std::abs(d);
    q.col(j) *= (a > 0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

inline Vector random_state_vector(Index dim, Rng& rng) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = rng.normal_complex();
  double n = v.norm();
  if (n == 0.0) { v(0) = 1.0; n = 1.0; }
  return v / n;
}

}  // namespace qpd
