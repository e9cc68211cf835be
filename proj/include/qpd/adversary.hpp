// Upper-bound witness construction and verification for the state-generating
// adversary bound, and the lower-bound certificate built from the rotation
// matrix G with G mu_q = mu_p.
#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpd/distributions.hpp"
#include "qpd/linalg.hpp"
#include "qpd/oracles.hpp"

namespace qpd {

/// Weights minimizing the discrimination objective:
/// c_a = (sqrt(p_a) - sqrt(q_a)) / (sqrt(p_a) + sqrt(q_a)), with c_a = 0 when
/// p_a = q_a = 0. Always in [-1, 1].
inline std::vector<double> optimal_weights(const ProbDist& p, const ProbDist& q) {
  if (p.alphabet_size() != q.alphabet_size())
    throw std::invalid_argument("optimal_weights: alphabet mismatch");
  if (p == q) throw std::invalid_argument("optimal_weights: p and q must differ");
  std::vector<double> c(p.alphabet_size(), 0.0);
  for (std::size_t a = 0; a < c.size(); ++a) {
    const double sp = std::sqrt(p[a]), sq = std::sqrt(q[a]);
    if (sp + sq > 0.0) c[a] = (sp - sq) / (sp + sq);
  }
  return c;
}

/// Feasible point of the two-point adversary optimisation problem. The
/// one-dimensional W-space witnesses are the scalars u_p / u_q; v_p / v_q live
/// in the oracle's X register (zero e0 component). `swapped` records that the
/// builder reoriented the labels to make s = sum_a c_a (p_a - q_a) positive.
struct Gamma2Witness {
  std::vector<double> weights;
  double u_p = 0.0;
  double u_q = 0.0;
  StateVector v_p;
  StateVector v_q;
  double objective = 0.0;  // T
  bool swapped = false;

  // Scalars consumed by the discriminator's reflection construction; all are
  // independent of the garbage directions.
  double s = 0.0;
  double sum_c2p = 0.0;
  double sum_c2q = 0.0;
  RegisterLayout layout;
};

/// Build the witness from the weighted per-symbol identity
/// <c sqrt(p) psi, .> + <., c sqrt(q) phi> = c (p - q): the fourth-root
/// factors of the weighted sums are split between the u-scalars and the
/// v-vectors exactly as in the displayed combination, then everything is
/// scaled by 1/sqrt(s) so the bilinear constraint evaluates to 1.
inline Gamma2Witness build_witness(const ProbDist& p, const ProbDist& q,
                                   const std::vector<Vector>& psi_a,
                                   const std::vector<Vector>& phi_a,
                                   const std::vector<double>& c) {
  const std::size_t alphabet = p.alphabet_size();
  if (q.alphabet_size() != alphabet || psi_a.size() != alphabet || phi_a.size() != alphabet ||
      c.size() != alphabet)
    throw std::invalid_argument("build_witness: alphabet mismatch");
  if (alphabet == 0) throw std::invalid_argument("build_witness: empty alphabet");
  const Index d_f = psi_a[0].size();
  for (const auto& g : psi_a)
    if (g.size() != d_f) throw std::invalid_argument("build_witness: ragged garbage dims");
  for (const auto& g : phi_a)
    if (g.size() != d_f) throw std::invalid_argument("build_witness: ragged garbage dims");

  double s = 0.0;
  for (std::size_t a = 0; a < alphabet; ++a) s += c[a] * (p[a] - q[a]);

  Gamma2Witness w;
  w.weights = c;
  w.swapped = s < 0.0;
  const ProbDist& dp = w.swapped ? q : p;
  const ProbDist& dq = w.swapped ? p : q;
  const auto& gp = w.swapped ? phi_a : psi_a;
  const auto& gq = w.swapped ? psi_a : phi_a;
  s = std::abs(s);
  if (s <= 1e-14)
    throw std::invalid_argument("build_witness: sum c (p - q) vanishes after orientation");
  w.s = s;

  for (std::size_t a = 0; a < alphabet; ++a) {
    w.sum_c2p += c[a] * c[a] * dp[a];
    w.sum_c2q += c[a] * c[a] * dq[a];
  }
  const double root_s = std::sqrt(s);
  const double quart_p = std::pow(w.sum_c2p, 0.25);
  const double quart_q = std::pow(w.sum_c2q, 0.25);
  // u_q pairs with v_p in the first inner product, so it carries the p-sum
  // factor; symmetrically for u_p.
  w.u_p = quart_q / root_s;
  w.u_q = quart_p / root_s;

  w.layout = RegisterLayout::state_layout(static_cast<Index>(alphabet), d_f);
  Vector vp = Vector::Zero(w.layout.total_dim());
  Vector vq = Vector::Zero(w.layout.total_dim());
  for (std::size_t a = 0; a < alphabet; ++a) {
    const double coeff_p =
        w.sum_c2p > 0.0 ? c[a] * std::sqrt(dp[a]) / (quart_p * root_s) : 0.0;
    const double coeff_q =
        w.sum_c2q > 0.0 ? c[a] * std::sqrt(dq[a]) / (quart_q * root_s) : 0.0;
    for (Index g = 0; g < d_f; ++g) {
      const Index idx = w.layout.state_index(static_cast<Index>(a), g);
      vp(idx) = coeff_p * gp[a](g);
      vq(idx) = coeff_q * gq[a](g);
    }
  }
  w.v_p = StateVector(std::move(vp), false);
  w.v_q = StateVector(std::move(vq), false);
  w.objective = std::max(w.u_p * w.u_p + w.v_p.amps.squaredNorm(),
                         w.u_q * w.u_q + w.v_q.amps.squaredNorm());
  return w;
}

/// Convenience: witness with optimal weights and the garbage both encoded
/// states carry.
inline Gamma2Witness build_witness(const ProbDist& p, const ProbDist& q,
                                   const GarbageSpec& garbage_p, const GarbageSpec& garbage_q) {
  const Index alphabet = static_cast<Index>(p.alphabet_size());
  return build_witness(p, q, garbage_vectors(garbage_p, alphabet),
                       garbage_vectors(garbage_q, alphabet), optimal_weights(p, q));
}

/// Residual |bilinear - 1| of the feasibility constraint
/// <v_x, (psi - phi) u_y> + <(psi - phi) u_x, v_y> = 1, evaluated on the
/// encoded states the witness was built for (given in build order; the
/// builder's label orientation is applied internally).
inline double verify_witness(const Gamma2Witness& w, const StateVector& psi,
                             const StateVector& phi) {
  if (psi.dim() != w.layout.total_dim() || phi.dim() != w.layout.total_dim())
    throw std::invalid_argument("verify_witness: dimension mismatch");
  const Vector& sp = w.swapped ? phi.amps : psi.amps;
  const Vector& sq = w.swapped ? psi.amps : phi.amps;
  Vector diff = sp - sq;
  const Complex bilinear =
      w.v_p.amps.dot(diff) * w.u_q + diff.dot(w.v_q.amps) * w.u_p;
  return std::abs(bilinear - Complex(1.0, 0.0));
}

/// tau(s_P, s_Q) = sqrt(s_P s_Q) + sqrt((1-s_P)(1-s_Q)).
inline double tau(double s_p, double s_q) {
  if (s_p < 0.0 || s_p > 1.0 || s_q < 0.0 || s_q > 1.0)
    throw std::invalid_argument("tau: acceptance probabilities must be in [0, 1]");
  return std::sqrt(s_p * s_q) + std::sqrt((1.0 - s_p) * (1.0 - s_q));
}

/// Lower-bound certificate: G is rotation by alpha in the plane spanned by
/// mu_q and mu_p and homothety with coefficient cos(alpha) on the orthogonal
/// complement, so G mu_q = mu_p, ||G|| = 1, and the off-diagonal mask obeys
/// ||G o Delta|| <= 2 sin(alpha).
struct LowerBoundCertificate {
  Eigen::MatrixXd g;
  double alpha = 0.0;
  double norm_g = 0.0;
  double norm_g_hadamard = 0.0;  // || G o Delta ||
  double residual_g_mu = 0.0;    // || G mu_q - mu_p ||

  struct TensorCheck {
    int n = 0;
    double s_p = 0.0;
    double s_q = 0.0;
    double bilinear = 0.0;                     // delta_P^T Gamma delta_Q
    std::vector<double> per_coordinate_norms;  // || Gamma o Delta_j ||
    double value = 0.0;                        // (1 - tau) / ||G o Delta||, raw ratio
  } tensor;
};

inline LowerBoundCertificate lower_bound_certificate(const ProbDist& p, const ProbDist& q,
                                                     int n, double s_p, double s_q) {
  if (p.alphabet_size() != q.alphabet_size())
    throw std::invalid_argument("lower_bound_certificate: alphabet mismatch");
  if (p == q) throw std::invalid_argument("lower_bound_certificate: p and q must differ");
  if (n < 1 || n > 4) throw std::invalid_argument("lower_bound_certificate: n must be in [1, 4]");
  const Index d = static_cast<Index>(p.alphabet_size());
  double tensor_dim = 1.0;
  for (int j = 0; j < n; ++j) tensor_dim *= static_cast<double>(d);
  if (tensor_dim > 4096.0)
    throw std::invalid_argument("lower_bound_certificate: |A|^n too large for the tensor check");

  Eigen::VectorXd mu_p(d), mu_q(d);
  for (Index a = 0; a < d; ++a) {
    mu_p(a) = std::sqrt(p[static_cast<std::size_t>(a)]);
    mu_q(a) = std::sqrt(q[static_cast<std::size_t>(a)]);
  }
  const double cos_a = std::clamp(mu_p.dot(mu_q), -1.0, 1.0);
  const double alpha = std::acos(cos_a);
  const double sin_a = std::sin(alpha);
  if (sin_a <= 1e-12)
    throw std::invalid_argument("lower_bound_certificate: distributions are (numerically) equal");

  // Orthonormal basis whose first two vectors span the mu_q / mu_p plane;
  // Gram-Schmidt with pivoting over the standard basis fills the rest.
  Eigen::MatrixXd basis(d, d);
  basis.col(0) = mu_q;
  basis.col(1) = (mu_p - cos_a * mu_q) / (mu_p - cos_a * mu_q).norm();
  Index have = 2;
  for (Index pivot = 0; pivot < d && have < d; ++pivot) {
    Eigen::VectorXd cand = Eigen::VectorXd::Unit(d, pivot);
    for (Index j = 0; j < have; ++j) cand -= basis.col(j) * basis.col(j).dot(cand);
    for (Index j = 0; j < have; ++j) cand -= basis.col(j) * basis.col(j).dot(cand);
    if (cand.norm() > 1e-8) basis.col(have++) = cand / cand.norm();
  }
  if (have != d) throw std::runtime_error("lower_bound_certificate: basis completion failed");

  Eigen::MatrixXd g_in_basis = Eigen::MatrixXd::Identity(d, d) * cos_a;
  g_in_basis(0, 0) = cos_a;
  g_in_basis(0, 1) = -sin_a;
  g_in_basis(1, 0) = sin_a;
  g_in_basis(1, 1) = cos_a;

  LowerBoundCertificate cert;
  cert.g = basis * g_in_basis * basis.transpose();
  cert.alpha = alpha;
  cert.residual_g_mu = (cert.g * mu_q - mu_p).norm();
  cert.norm_g = Eigen::JacobiSVD<Eigen::MatrixXd>(cert.g).singularValues()(0);
  Eigen::MatrixXd masked = cert.g;
  masked.diagonal().setZero();
  cert.norm_g_hadamard = Eigen::JacobiSVD<Eigen::MatrixXd>(masked).singularValues()(0);

  // Explicit tensor check: Gamma = G^{tensor n}, delta_P = mu_p^{tensor n}.
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Ones(1, 1);
  Eigen::VectorXd delta_p = Eigen::VectorXd::Ones(1), delta_q = Eigen::VectorXd::Ones(1);
  auto kron_d = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  for (int j = 0; j < n; ++j) {
    gamma = kron_d(gamma, cert.g);
    delta_p = kron_d(delta_p, mu_p);
    delta_q = kron_d(delta_q, mu_q);
  }

  cert.tensor.n = n;
  cert.tensor.s_p = s_p;
  cert.tensor.s_q = s_q;
  cert.tensor.bilinear = delta_p.dot(gamma * delta_q);
  const Index total = gamma.rows();
  for (int j = 0; j < n; ++j) {
    // Delta_j masks entries whose j-th coordinate agrees. Coordinate j of a
    // row-major multi-index x is (x / d^{n-1-j}) % d.
    Index stride = 1;
    for (int k = 0; k < n - 1 - j; ++k) stride *= d;
    Eigen::MatrixXd masked_j = gamma;
    for (Index x = 0; x < total; ++x)
      for (Index y = 0; y < total; ++y)
        if ((x / stride) % d == (y / stride) % d) masked_j(x, y) = 0.0;
    cert.tensor.per_coordinate_norms.push_back(
        Eigen::JacobiSVD<Eigen::MatrixXd>(masked_j).singularValues()(0));
  }
  cert.tensor.value = (1.0 - tau(s_p, s_q)) / cert.norm_g_hadamard;
  return cert;
}

// ---------------------------------------------------------------------------
// Report serialization (consumed by the CLI)

inline nlohmann::json witness_to_json(const Gamma2Witness& w, double residual) {
  nlohmann::json j;
  j["weights"] = w.weights;
  j["u_P"] = w.u_p;
  j["u_Q"] = w.u_q;
  j["v_P_norm"] = w.v_p.amps.norm();
  j["v_Q_norm"] = w.v_q.amps.norm();
  j["objective_T"] = w.objective;
  j["swapped"] = w.swapped;
  j["normalizer_S"] = w.s;
  j["feasibility_residual"] = residual;
  return j;
}

inline nlohmann::json certificate_to_json(const LowerBoundCertificate& cert) {
  nlohmann::json j;
  j["alpha"] = cert.alpha;
  j["norm_G"] = cert.norm_g;
  j["norm_G_hadamard"] = cert.norm_g_hadamard;
  j["two_sin_alpha"] = 2.0 * std::sin(cert.alpha);
  j["residual_G_mu"] = cert.residual_g_mu;
  j["tensor"] = {{"n", cert.tensor.n},
                 {"s_P", cert.tensor.s_p},
                 {"s_Q", cert.tensor.s_q},
                 {"bilinear", cert.tensor.bilinear},
                 {"per_coordinate_norms", cert.tensor.per_coordinate_norms},
                 {"value", cert.tensor.value}};
  return j;
}

}  // namespace qpd
