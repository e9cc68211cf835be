// Discrimination algorithms: amplitude amplification in model (iii), the
// adversary-witness phase-estimation algorithm in model (iv), the
// rejection-sampling comparator, and the classical sampling baseline.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "qpd/adversary.hpp"
#include "qpd/distributions.hpp"
#include "qpd/linalg.hpp"
#include "qpd/oracles.hpp"
#include "qpd/qcore.hpp"
#include "qpd/rng.hpp"

namespace qpd {

/// A discrimination task: both distributions are known to the algorithm; the
/// oracle encodes exactly one of them (recorded in its hidden label, which
/// discriminators never read).
struct DiscriminationInstance {
  ProbDist p;
  ProbDist q;
  OracleInstance oracle;
  GarbageSpec garbage_p;  // candidate garbage recipes, part of the task description
  GarbageSpec garbage_q;
};

struct AlgoParams {
  double epsilon = 0.5;           // error parameter in (0, 1)
  double kappa = 1.0;             // phase-estimation precision constant: delta = kappa eps^2 / T
  int pe_rounds = 5;              // median-boosting rounds
  int rounds_override = -1;       // model (iii): fixed amplification rounds if >= 0
  bool blockwise_lambda = false;  // use the block-decomposed Lambda reflection
  std::optional<Gamma2Witness> witness;

  void validate() const {
    if (epsilon <= 0.0 || epsilon >= 1.0)
      throw std::invalid_argument("AlgoParams: epsilon must be in (0, 1)");
    if (kappa <= 0.0) throw std::invalid_argument("AlgoParams: kappa must be positive");
    if (pe_rounds < 1) throw std::invalid_argument("AlgoParams: pe_rounds must be >= 1");
  }
};

struct DiscriminationOutcome {
  HiddenLabel decision = HiddenLabel::P;
  std::int64_t queries_used = 0;
  double auxiliary = 0.0;  // measured phase / amplitude estimate / flag probability
};

/// Instance with a freshly prepared oracle encoding `hidden`. The garbage
/// recipes use slots 0 (P) and 1 (Q) so the adversarial kind gives the two
/// candidates orthogonal garbage.
inline DiscriminationInstance make_instance(const ProbDist& p, const ProbDist& q,
                                            OracleModel model, GarbageKind kind, Index d_f,
                                            HiddenLabel hidden, std::uint64_t seed,
                                            bool randomize_completion = false) {
  if (model == OracleModel::model_iii) {  // model (iii) carries no garbage register
    kind = GarbageKind::trivial;
    d_f = 1;
  }
  DiscriminationInstance inst{p, q, OracleInstance{}, GarbageSpec{kind, d_f, seed, 0},
                              GarbageSpec{kind, d_f, seed, 1}};
  const ProbDist& encoded = hidden == HiddenLabel::P ? p : q;
  const GarbageSpec& garbage = hidden == HiddenLabel::P ? inst.garbage_p : inst.garbage_q;
  inst.oracle = prepare_oracle(model, encoded, garbage, hidden,
                               randomize_completion ? std::optional<std::uint64_t>(seed)
                                                    : std::nullopt);
  return inst;
}

// ---------------------------------------------------------------------------
// Model (iii): amplitude amplification

/// Rotates the mu_p / mu_q plane onto two designated flag states, then
/// amplifies the flag that only the q-state populates. A p-instance has flag
/// amplitude exactly zero, so it is never mislabeled; a q-instance is caught
/// with probability sin^2((2k+1) alpha) at k = round(pi/(4 alpha) - 1/2).
inline DiscriminationOutcome discriminate_model3(DiscriminationInstance& inst, Rng& rng,
                                                 const AlgoParams& params = {}) {
  params.validate();
  if (inst.oracle.model != OracleModel::model_iii)
    throw std::invalid_argument("discriminate_model3: needs a model (iii) oracle");
  const DistMetrics m = metrics(inst.p, inst.q);
  if (m.angle <= 1e-12) throw std::invalid_argument("discriminate_model3: p = q (alpha = 0)");

  const RegisterLayout& layout = inst.oracle.layout;
  const Index d = layout.total_dim();
  const Vector mu_p = encoded_state(inst.p, garbage_vectors(inst.garbage_p, layout.alphabet),
                                    layout);
  const Vector mu_q = encoded_state(inst.q, garbage_vectors(inst.garbage_q, layout.alphabet),
                                    layout);

  // U maps mu_p -> f0 and the unit vector completing the plane -> f1, so
  // U mu_q = cos(alpha) f0 + sin(alpha) f1.
  Vector plane2 = mu_q - Complex(m.bhattacharyya) * mu_p;
  plane2 /= plane2.norm();
  std::vector<Vector> from{mu_p, plane2};
  std::vector<Vector> to{Vector::Unit(d, 1), Vector::Unit(d, 2)};
  for (Index k = 0; k < d && from.size() < static_cast<std::size_t>(d); ++k) {
    from.push_back(Vector::Unit(d, k));
    to.push_back(Vector::Unit(d, k));
  }
  const std::vector<Vector> from_basis = orthonormalize(from);
  const std::vector<Vector> to_basis = orthonormalize(to);
  if (from_basis.size() != static_cast<std::size_t>(d) ||
      to_basis.size() != static_cast<std::size_t>(d))
    throw std::runtime_error("discriminate_model3: basis completion failed");
  Matrix u = Matrix::Zero(d, d);
  for (Index j = 0; j < d; ++j)
    u += to_basis[static_cast<std::size_t>(j)] * from_basis[static_cast<std::size_t>(j)].adjoint();

  const UnitaryMatrix setup(u * inst.oracle.unitary.entries);
  Matrix flag = Matrix::Zero(d, d);
  flag(2, 2) = 1.0;
  const Projector target(std::move(flag));

  int k = params.rounds_override >= 0
              ? params.rounds_override
              : std::max<int>(0, static_cast<int>(std::lround(kPi / (4.0 * m.angle) - 0.5)));
  const std::int64_t before = inst.oracle.query_count;
  const StateVector final_state = amplitude_amplify(
      setup, target, k, [&inst](std::int64_t n) { inst.oracle.charge(n); });

  double flag_prob = std::norm(final_state.amps(2));
  if (flag_prob < 1e-24) flag_prob = 0.0;  // roundoff of an exactly empty flag

  DiscriminationOutcome out;
  out.decision = rng.bernoulli(flag_prob) ? HiddenLabel::Q : HiddenLabel::P;
  out.queries_used = inst.oracle.query_count - before;
  out.auxiliary = flag_prob;
  return out;
}

// ---------------------------------------------------------------------------
// Model (iv): adversary-witness phase estimation

namespace detail {

/// Layout bookkeeping for the algorithm space A + (B tensor C tensor X); the
/// one-dimensional W register is implicit.
struct AlgoSpace {
  Index dim_x = 0;
  Index total = 0;
  Index slot(Index b, Index c, Index x) const { return 1 + (b * 2 + c) * dim_x + x; }
};

/// Garbage- and completion-independent scalars of the positive-side witness,
/// taken in the witness's own label orientation.
struct LambdaScalars {
  std::vector<double> block_c;   // per-symbol v-coefficient c_a sqrt(p_a) / (S^(1/2) (sum c^2 p)^(1/4))
  std::vector<double> block_u;   // per-symbol u-coefficient u_P sqrt(p_a)
  double beta = 0.0;             // <psi, v_P>
  double u_p = 0.0;
};

inline LambdaScalars lambda_scalars(const Gamma2Witness& w, const ProbDist& p,
                                    const ProbDist& q) {
  const ProbDist& dp = w.swapped ? q : p;
  LambdaScalars ls;
  ls.u_p = w.u_p;
  const double quart_p = std::pow(w.sum_c2p, 0.25);
  const double root_s = std::sqrt(w.s);
  ls.block_c.resize(dp.alphabet_size());
  ls.block_u.resize(dp.alphabet_size());
  for (std::size_t a = 0; a < dp.alphabet_size(); ++a) {
    const double sp = std::sqrt(dp[a]);
    ls.block_c[a] = w.sum_c2p > 0.0 ? w.weights[a] * sp / (quart_p * root_s) : 0.0;
    ls.block_u[a] = w.u_p * sp;
    ls.beta += w.weights[a] * dp[a];
  }
  ls.beta = w.sum_c2p > 0.0 ? ls.beta / (quart_p * root_s) : 0.0;
  return ls;
}

/// Spanning set of the positive eigenspace Lambda: the base vector carrying
/// the A register, one BC-direction per symbol tensored with the full garbage
/// register, and the B=0, C=0 copy of the non-reference oracle space (which
/// absorbs the unitary completion's freedom). Spanning Lambda this way makes
/// the algorithm's operator insensitive to both the garbage directions and
/// the completion of the input oracle.
inline std::vector<StateVector> lambda_span_vectors(const Gamma2Witness& w,
                                                    const LambdaScalars& ls,
                                                    const AlgoSpace& space, double epsilon) {
  const RegisterLayout& xl = w.layout;
  const double scale = epsilon / std::sqrt(w.objective);
  std::vector<StateVector> vectors;

  Vector mu0 = Vector::Zero(space.total);
  mu0(0) = 1.0;
  mu0(space.slot(0, 0, xl.e0())) = scale * ls.beta;
  mu0(space.slot(1, 0, xl.e0())) = scale * ls.u_p;
  vectors.emplace_back(mu0 / mu0.norm());

  for (Index a = 0; a < xl.alphabet; ++a) {
    const double vc = ls.block_c[static_cast<std::size_t>(a)];
    const double uc = ls.block_u[static_cast<std::size_t>(a)];
    const double nrm = std::hypot(vc, uc);
    if (nrm <= 0.0) continue;
    for (Index g = 0; g < xl.d_f; ++g) {
      Vector v = Vector::Zero(space.total);
      v(space.slot(0, 1, xl.state_index(a, g))) = vc / nrm;
      v(space.slot(1, 1, xl.state_index(a, g))) = uc / nrm;
      vectors.emplace_back(std::move(v));
    }
  }
  for (Index a = 0; a < xl.alphabet; ++a)
    for (Index g = 0; g < xl.d_f; ++g) {
      Vector v = Vector::Zero(space.total);
      v(space.slot(0, 0, xl.state_index(a, g))) = 1.0;
      vectors.emplace_back(std::move(v));
    }
  return vectors;
}

/// The same reflection assembled blockwise from the orthogonal pieces of
/// Lambda (no orthonormalization pass).
inline UnitaryMatrix lambda_reflection_blockwise(const Gamma2Witness& w,
                                                 const LambdaScalars& ls,
                                                 const AlgoSpace& space, double epsilon) {
  const RegisterLayout& xl = w.layout;
  const double scale = epsilon / std::sqrt(w.objective);
  Matrix r = -Matrix::Identity(space.total, space.total);

  Vector mu0 = Vector::Zero(space.total);
  mu0(0) = 1.0;
  mu0(space.slot(0, 0, xl.e0())) = scale * ls.beta;
  mu0(space.slot(1, 0, xl.e0())) = scale * ls.u_p;
  mu0 /= mu0.norm();
  r += 2.0 * (mu0 * mu0.adjoint());

  for (Index a = 0; a < xl.alphabet; ++a) {
    const double vc = ls.block_c[static_cast<std::size_t>(a)];
    const double uc = ls.block_u[static_cast<std::size_t>(a)];
    const double nrm2 = vc * vc + uc * uc;
    if (nrm2 <= 0.0) continue;
    for (Index g = 0; g < xl.d_f; ++g) {
      const Index i01 = space.slot(0, 1, xl.state_index(a, g));
      const Index i11 = space.slot(1, 1, xl.state_index(a, g));
      r(i01, i01) += 2.0 * vc * vc / nrm2;
      r(i01, i11) += 2.0 * vc * uc / nrm2;
      r(i11, i01) += 2.0 * vc * uc / nrm2;
      r(i11, i11) += 2.0 * uc * uc / nrm2;
    }
  }
  for (Index a = 0; a < xl.alphabet; ++a)
    for (Index g = 0; g < xl.d_f; ++g) {
      const Index i = space.slot(0, 0, xl.state_index(a, g));
      r(i, i) += 2.0;
    }
  return UnitaryMatrix(std::move(r));
}

/// Reflection 2 Pi_z - I about the complement of
/// span{ |0>_C |phi> - |1>_C |O_z phi> }: it maps |0>_C |phi> to
/// |1>_C |O_z phi> and |1>_C |chi> to |0>_C |O_z* chi>, which costs one
/// application of O_z and one of O_z*, i.e. two queries.
inline Matrix pi_reflection(const OracleInstance& oracle, const AlgoSpace& space) {
  const Matrix& o = oracle.unitary.entries;
  Matrix r = Matrix::Zero(space.total, space.total);
  r(0, 0) = 1.0;
  for (Index b = 0; b < 2; ++b)
    for (Index xr = 0; xr < space.dim_x; ++xr)
      for (Index xc = 0; xc < space.dim_x; ++xc) {
        r(space.slot(b, 1, xr), space.slot(b, 0, xc)) = o(xr, xc);
        r(space.slot(b, 0, xr), space.slot(b, 1, xc)) = std::conj(o(xc, xr));
      }
  return r;
}

}  // namespace detail

/// Positive-side witness vector mu_x of the phase-estimation algorithm, built
/// from a concrete oracle realizing the witness's D0-side state (exact
/// +1-eigenvector of the walk operator when that oracle is the input).
inline StateVector model4_positive_vector(const Gamma2Witness& w, const OracleInstance& oracle,
                                          double epsilon) {
  detail::AlgoSpace space{w.layout.total_dim(), 1 + 4 * w.layout.total_dim()};
  if (oracle.dim() != space.dim_x)
    throw std::invalid_argument("model4_positive_vector: layout mismatch");
  const double scale = epsilon / std::sqrt(w.objective);
  const Vector psi = oracle.prepared_state();
  const Vector ov = oracle.unitary.entries.adjoint() * w.v_p.amps;
  Vector mu = Vector::Zero(space.total);
  mu(0) = 1.0;
  for (Index x = 0; x < space.dim_x; ++x) {
    mu(space.slot(0, 0, x)) = scale * ov(x);
    mu(space.slot(0, 1, x)) = scale * w.v_p.amps(x);
    mu(space.slot(1, 1, x)) = scale * w.u_p * psi(x);
  }
  mu(space.slot(1, 0, w.layout.e0())) = scale * w.u_p;
  return StateVector(std::move(mu), false);
}

/// Negative-side witness w_y for the effective-spectral-gap analysis, built
/// from a concrete oracle realizing the witness's D1-side state.
inline StateVector model4_negative_vector(const Gamma2Witness& w, const OracleInstance& oracle,
                                          double epsilon) {
  detail::AlgoSpace space{w.layout.total_dim(), 1 + 4 * w.layout.total_dim()};
  if (oracle.dim() != space.dim_x)
    throw std::invalid_argument("model4_negative_vector: layout mismatch");
  const double scale = std::sqrt(w.objective) / epsilon;
  const Vector phi = oracle.prepared_state();
  const Vector ov = oracle.unitary.entries.adjoint() * w.v_q.amps;
  Vector wy = Vector::Zero(space.total);
  wy(0) = 1.0;
  wy(space.slot(0, 0, w.layout.e0())) = -scale * w.u_q;
  for (Index x = 0; x < space.dim_x; ++x) {
    wy(space.slot(0, 1, x)) = scale * w.u_q * phi(x);
    wy(space.slot(1, 0, x)) = scale * ov(x);
    wy(space.slot(1, 1, x)) = -scale * w.v_q.amps(x);
  }
  return StateVector(std::move(wy), false);
}

/// Walk operator (2 Lambda - I)(2 Pi_z - I) for an instance and witness.
/// Exposed for the structural tests; `blockwise` selects the optimized
/// Lambda-reflection path.
inline UnitaryMatrix model4_walk_operator(const DiscriminationInstance& inst,
                                          const Gamma2Witness& w, double epsilon,
                                          bool blockwise = false) {
  detail::AlgoSpace space{w.layout.total_dim(), 1 + 4 * w.layout.total_dim()};
  if (inst.oracle.dim() != space.dim_x)
    throw std::invalid_argument("model4_walk_operator: layout mismatch");
  const detail::LambdaScalars ls = detail::lambda_scalars(w, inst.p, inst.q);
  const UnitaryMatrix r_lambda =
      blockwise ? detail::lambda_reflection_blockwise(w, ls, space, epsilon)
                : reflect_about_span(detail::lambda_span_vectors(w, ls, space, epsilon),
                                     space.total);
  return UnitaryMatrix(r_lambda.entries * detail::pi_reflection(inst.oracle, space));
}

/// Phase estimation on the adversary walk operator from |0>_A with precision
/// delta = kappa eps^2 / T; accept (decide the witness's D0 side) iff the
/// estimated phase is within delta/2 of zero, ties toward acceptance. Every
/// application of the walk operator costs two queries (the Pi_z reflection).
inline DiscriminationOutcome discriminate_model4(DiscriminationInstance& inst, Rng& rng,
                                                 const AlgoParams& params = {}) {
  params.validate();
  if (inst.oracle.layout.kind != RegisterLayout::Kind::state)
    throw std::invalid_argument("discriminate_model4: needs a state-generating oracle");
  if (metrics(inst.p, inst.q).hellinger <= 1e-12)
    throw std::invalid_argument("discriminate_model4: p = q (alpha = 0)");

  const Gamma2Witness witness =
      params.witness ? *params.witness
                     : build_witness(inst.p, inst.q,
                                     GarbageSpec{GarbageKind::trivial, inst.oracle.layout.d_f,
                                                 0, 0},
                                     GarbageSpec{GarbageKind::trivial, inst.oracle.layout.d_f,
                                                 0, 1});
  if (witness.layout.total_dim() != inst.oracle.dim())
    throw std::invalid_argument("discriminate_model4: witness layout mismatch");

  const double t_value = witness.objective;
  const double delta = params.kappa * params.epsilon * params.epsilon / t_value;
  const UnitaryMatrix walk =
      model4_walk_operator(inst, witness, params.epsilon, params.blockwise_lambda);

  const std::int64_t before = inst.oracle.query_count;
  const PhaseEstimateResult pe = phase_estimate(
      walk, basis_state(walk.dim(), 0), delta, PhaseEstimateMode::circuit, rng,
      [&inst](std::int64_t n) { inst.oracle.charge(2 * n); }, params.pe_rounds);

  const bool accept = detail::circular_distance(pe.phase, 0.0) <= delta / 2.0 + 1e-15;
  DiscriminationOutcome out;
  const bool d0_is_p = !witness.swapped;
  out.decision = accept == d0_is_p ? HiddenLabel::P : HiddenLabel::Q;
  out.queries_used = inst.oracle.query_count - before;
  out.auxiliary = pe.phase;
  return out;
}

// ---------------------------------------------------------------------------
// Standard-method comparator (rejection sampling + amplitude estimation)

/// Raw cost expression sqrt(S_p) / (S_p - S_q) of the flag-rotation method.
inline double standard_method_cost(const ProbDist& p, const ProbDist& q,
                                   const std::vector<double>& c) {
  if (c.size() != p.alphabet_size() || p.alphabet_size() != q.alphabet_size())
    throw std::invalid_argument("standard_method_cost: alphabet mismatch");
  double sp = 0.0, sq = 0.0;
  for (std::size_t a = 0; a < c.size(); ++a) {
    if (c[a] < 0.0 || c[a] > 1.0)
      throw std::invalid_argument("standard_method_cost: c_a must be in [0, 1]");
    sp += c[a] * p[a];
    sq += c[a] * q[a];
  }
  if (std::abs(sp - sq) <= 1e-12)
    throw std::invalid_argument("standard_method_cost: S_p = S_q, flags cannot distinguish");
  return std::sqrt(std::max(sp, sq)) / std::abs(sp - sq);
}

/// Append the flag rotation sqrt(1-c_a)|0> + sqrt(c_a)|1> and estimate the
/// flag probability by (simulated) amplitude estimation; decide by which of
/// S_p, S_q the estimate is closer to. The estimation distribution is the
/// exact counter-measurement law of amplitude estimation with
/// M = ceil(4 pi sqrt(max S) / |S_p - S_q|) oracle applications.
inline DiscriminationOutcome standard_method(DiscriminationInstance& inst,
                                             const std::vector<double>& c, Rng& rng) {
  if (inst.oracle.layout.kind != RegisterLayout::Kind::state)
    throw std::invalid_argument("standard_method: needs a state-generating oracle");
  const double cost = standard_method_cost(inst.p, inst.q, c);  // validates c and S_p != S_q

  double sp = 0.0, sq = 0.0;
  for (std::size_t a = 0; a < c.size(); ++a) {
    sp += c[a] * inst.p[a];
    sq += c[a] * inst.q[a];
  }

  // True flag probability of the encoded state: per-symbol block mass of the
  // prepared state weighted by c.
  const Vector state = inst.oracle.prepared_state();
  const RegisterLayout& xl = inst.oracle.layout;
  double s_true = 0.0;
  for (Index a = 0; a < xl.alphabet; ++a) {
    double mass = 0.0;
    for (Index g = 0; g < xl.d_f; ++g) mass += std::norm(state(xl.state_index(a, g)));
    s_true += c[static_cast<std::size_t>(a)] * mass;
  }

  const auto m_apps = static_cast<Index>(
      std::max<double>(2.0, std::ceil(4.0 * kPi * cost)));
  const double phase_true = std::asin(std::clamp(std::sqrt(s_true), 0.0, 1.0)) / kPi;

  // Counter-measurement law of amplitude estimation: mixture of the two
  // Grover eigenphase kernels.
  auto kernel = [m_apps](double x) {
    x -= std::floor(x + 0.5);  // reduce to [-1/2, 1/2)
    const double mx = static_cast<double>(m_apps) * x;
    if (std::abs(x) < 1e-15) return 1.0;
    const double num = std::sin(kPi * mx);
    const double den = static_cast<double>(m_apps) * std::sin(kPi * x);
    return (num * num) / (den * den);
  };
  std::vector<double> pmf(static_cast<std::size_t>(m_apps));
  double total = 0.0;
  for (Index y = 0; y < m_apps; ++y) {
    const double frac = static_cast<double>(y) / static_cast<double>(m_apps);
    pmf[static_cast<std::size_t>(y)] =
        0.5 * (kernel(frac - phase_true) + kernel(frac + phase_true));
    total += pmf[static_cast<std::size_t>(y)];
  }
  for (double& v : pmf) v /= total;

  const int y = rng.sample_index(pmf);
  const double theta = kPi * static_cast<double>(y) / static_cast<double>(m_apps);
  const double estimate = std::sin(theta) * std::sin(theta);

  inst.oracle.charge(m_apps);
  DiscriminationOutcome out;
  out.decision = std::abs(estimate - sp) <= std::abs(estimate - sq) ? HiddenLabel::P
                                                                    : HiddenLabel::Q;
  out.queries_used = m_apps;
  out.auxiliary = estimate;
  return out;
}

// ---------------------------------------------------------------------------
// Classical baseline

struct ClassicalOutcome {
  HiddenLabel decision = HiddenLabel::P;
  std::int64_t samples_used = 0;
};

/// Fixed sample size of the likelihood-ratio test: the Bhattacharyya bound
/// gives error <= (1/2) BC^n, so n = ln(1 / (2 target)) / (-ln BC) suffices.
inline std::int64_t classical_sample_size(const ProbDist& p, const ProbDist& q,
                                          double target_error) {
  if (target_error <= 0.0 || target_error >= 0.5)
    throw std::invalid_argument("classical_sample_size: target error must be in (0, 0.5)");
  const double bc = metrics(p, q).bhattacharyya;
  if (bc >= 1.0) throw std::invalid_argument("classical_sample_size: p = q");
  if (bc <= 0.0) return 1;  // disjoint supports
  return std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::log(1.0 / (2.0 * target_error)) /
                                             (-std::log(bc)))));
}

/// Log-likelihood-ratio test over a fixed number of samples from the hidden
/// distribution. A sample outside one support decides immediately (the +-inf
/// branch of the ratio).
inline ClassicalOutcome classical_discriminate(const ProbDist& p, const ProbDist& q,
                                               const std::function<int()>& sampler,
                                               double target_error, Rng& rng) {
  if (p == q) throw std::invalid_argument("classical_discriminate: p = q");
  const std::int64_t n = classical_sample_size(p, q, target_error);
  double llr = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const int x = sampler();
    const double px = p[static_cast<std::size_t>(x)];
    const double qx = q[static_cast<std::size_t>(x)];
    if (px <= 0.0) return {HiddenLabel::Q, i + 1};
    if (qx <= 0.0) return {HiddenLabel::P, i + 1};
    llr += std::log(px / qx);
  }
  if (llr == 0.0) return {rng.bernoulli(0.5) ? HiddenLabel::P : HiddenLabel::Q, n};
  return {llr > 0.0 ? HiddenLabel::P : HiddenLabel::Q, n};
}

// ---------------------------------------------------------------------------
// Tiered-family separation bounds

struct SeparationBounds {
  double unconstrained = 0.0;  // 1 / (sqrt(alpha) ||w||), attained at u = w
  double constrained = 0.0;    // min over prefix vectors of ||u|| / (sqrt(alpha) <u, w>)
  int best_prefix = 0;
};

/// Closed-form vs prefix-constrained optimum of ||u|| / (sqrt(alpha) <u, w>)
/// for the tiered weight vector w (t groups of lengths 4^{i-1} with values
/// 2^{1-i}); the constrained scan is exact over all n prefixes.
inline SeparationBounds separation_bounds(int t) {
  if (t < 1 || t > 8) throw std::invalid_argument("separation_bounds: t must be in [1, 8]");
  const std::int64_t pow4 = std::int64_t{1} << (2 * t);
  const std::int64_t pow2 = std::int64_t{1} << t;
  const double alpha = 3.0 / static_cast<double>(2 * pow4 - 3 * pow2 + 1);
  const std::int64_t n = (pow4 - 1) / 3;

  std::vector<double> w(static_cast<std::size_t>(n));
  std::size_t idx = 0;
  for (int i = 1; i <= t; ++i) {
    const std::int64_t len = std::int64_t{1} << (2 * (i - 1));
    const double value = std::pow(2.0, 1 - i);
    for (std::int64_t j = 0; j < len; ++j) w[idx++] = value;
  }

  SeparationBounds out;
  const double norm_w = std::sqrt(static_cast<double>(t));  // each group contributes 1
  out.unconstrained = 1.0 / (std::sqrt(alpha) * norm_w);

  double best = std::numeric_limits<double>::infinity();
  double inner = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    inner += w[static_cast<std::size_t>(k - 1)];
    const double value = std::sqrt(static_cast<double>(k)) / (std::sqrt(alpha) * inner);
    if (value < best) {
      best = value;
      out.best_prefix = static_cast<int>(k);
    }
  }
  out.constrained = best;
  return out;
}

}  // namespace qpd
