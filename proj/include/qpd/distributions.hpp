// Probability distributions over finite alphabets, the Hellinger /
// Bhattacharyya / angle metrics, the distribution families used by the test
// constructions, and classical sampling.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpd/linalg.hpp"
#include "qpd/rng.hpp"

namespace qpd {

/// Finite probability vector. Raw nonnegative weights are renormalized at
/// construction; zero-probability symbols stay in the alphabet.
class ProbDist {
 public:
  explicit ProbDist(std::vector<double> weights) : probs_(std::move(weights)) {
    if (probs_.empty()) throw std::invalid_argument("ProbDist: empty alphabet");
    double sum = 0.0;
    for (double w : probs_) {
      if (w < 0.0 || !std::isfinite(w))
        throw std::invalid_argument("ProbDist: negative or non-finite weight");
      sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("ProbDist: weights sum to zero");
    for (double& w : probs_) w /= sum;
  }

  std::size_t alphabet_size() const { return probs_.size(); }
  double operator[](std::size_t a) const { return probs_[a]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const ProbDist& other) const { return probs_ == other.probs_; }

 private:
  std::vector<double> probs_;
};

struct DistMetrics {
  double hellinger = 0.0;      // d_H in [0, 1]
  double bhattacharyya = 0.0;  // BC = <mu_p, mu_q> in [0, 1]
  double angle = 0.0;          // arccos(BC), radians in [0, pi/2]
  double mu_distance = 0.0;    // || mu_p - mu_q ||
};

/// d_H = sqrt(1/2 sum_a (sqrt(p_a) - sqrt(q_a))^2), BC = sum_a sqrt(p_a q_a),
/// angle between the amplitude vectors, and their Euclidean distance.
inline DistMetrics metrics(const ProbDist& p, const ProbDist& q) {
  if (p.alphabet_size() != q.alphabet_size())
    throw std::invalid_argument("metrics: alphabet mismatch");
  double sq_diff = 0.0, bc = 0.0;
  for (std::size_t a = 0; a < p.alphabet_size(); ++a) {
    const double sp = std::sqrt(p[a]), sq = std::sqrt(q[a]);
    sq_diff += (sp - sq) * (sp - sq);
    bc += sp * sq;
  }
  DistMetrics m;
  m.hellinger = std::sqrt(0.5 * sq_diff);
  m.bhattacharyya = std::min(1.0, bc);
  m.angle = std::acos(std::clamp(m.bhattacharyya, 0.0, 1.0));
  m.mu_distance = std::sqrt(sq_diff);
  return m;
}

/// mu_p = boxplus_a sqrt(p_a): the unit amplitude vector encoding p.
inline StateVector mu_state(const ProbDist& p) {
  Vector amps(static_cast<Index>(p.alphabet_size()));
  for (std::size_t a = 0; a < p.alphabet_size(); ++a)
    amps(static_cast<Index>(a)) = std::sqrt(p[a]);
  return StateVector(std::move(amps));
}

/// Collision pair on [n]: p uniform on all n symbols, q uniform on the first
/// n/2. BC = 1/sqrt(2) independently of n.
inline std::pair<ProbDist, ProbDist> collision_pair(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("collision_pair: n must be even, >= 2");
  std::vector<double> p(static_cast<std::size_t>(n), 1.0);
  std::vector<double> q(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n / 2; ++a) q[static_cast<std::size_t>(a)] = 1.0;
  return {ProbDist(std::move(p)), ProbDist(std::move(q))};
}

/// Tiered pair on [2n] with n = (4^t - 1)/3. On the first half p is flat with
/// value alpha and q has t consecutive groups of lengths 1, 4, ..., 4^{t-1}
/// with value (1 - 2^{1-i}) alpha on group i; the second half swaps the roles.
/// alpha = 3 / (2*4^t - 3*2^t + 1), computed in exact integer arithmetic.
inline std::pair<ProbDist, ProbDist> tiered_pair(int t) {
  if (t < 1 || t > 8) throw std::invalid_argument("tiered_pair: t must be in [1, 8]");
  const std::int64_t pow4 = std::int64_t{1} << (2 * t);
  const std::int64_t pow2 = std::int64_t{1} << t;
  const std::int64_t denom = 2 * pow4 - 3 * pow2 + 1;  // alpha = 3 / denom
  const std::int64_t n = (pow4 - 1) / 3;

  std::vector<double> ph(static_cast<std::size_t>(n));  // first-half p values
  std::vector<double> qh(static_cast<std::size_t>(n));  // first-half q values
  std::size_t idx = 0;
  for (int i = 1; i <= t; ++i) {
    const std::int64_t len = std::int64_t{1} << (2 * (i - 1));
    const std::int64_t half = std::int64_t{1} << (i - 1);  // 2^{i-1}
    // (1 - 2^{1-i}) * 3/denom = 3 (2^{i-1} - 1) / (2^{i-1} denom)
    const double qv = 3.0 * static_cast<double>(half - 1) /
                      (static_cast<double>(half) * static_cast<double>(denom));
    for (std::int64_t j = 0; j < len; ++j, ++idx) {
      ph[idx] = 3.0 / static_cast<double>(denom);
      qh[idx] = qv;
    }
  }

  std::vector<double> p(ph), q(qh);
  p.insert(p.end(), qh.begin(), qh.end());  // p_{a+n} = q_a
  q.insert(q.end(), ph.begin(), ph.end());  // q_{a+n} = p_a
  return {ProbDist(std::move(p)), ProbDist(std::move(q))};
}

/// Two-symbol pair (theta, 1-theta) for each parameter.
inline std::pair<ProbDist, ProbDist> bernoulli_pair(double theta_p, double theta_q) {
  if (theta_p <= 0.0 || theta_p >= 1.0 || theta_q <= 0.0 || theta_q >= 1.0)
    throw std::invalid_argument("bernoulli_pair: parameters must be in (0, 1)");
  return {ProbDist({theta_p, 1.0 - theta_p}), ProbDist({theta_q, 1.0 - theta_q})};
}

/// One draw from p. Deterministic given the generator state.
inline int sample(const ProbDist& p, Rng& rng) {
  return rng.sample_index(p.probs());
}

// ---------------------------------------------------------------------------
// Family specifications (shared by the CLI and the experiment harness)

enum class FamilyKind { collision, tiered, bernoulli, custom };

struct FamilySpec {
  FamilyKind kind = FamilyKind::bernoulli;
  int n = 4;                    // collision
  int t = 2;                    // tiered
  double theta_p = 0.5;         // bernoulli
  double theta_q = 0.8;         // bernoulli
  std::vector<double> custom_p; // custom
  std::vector<double> custom_q;

  std::string label() const {
    std::ostringstream os;
    switch (kind) {
      case FamilyKind::collision: os << "collision(" << n << ")"; break;
      case FamilyKind::tiered: os << "tiered(" << t << ")"; break;
      case FamilyKind::bernoulli: os << "bernoulli(" << theta_p << "," << theta_q << ")"; break;
      case FamilyKind::custom: os << "custom"; break;
    }
    return os.str();
  }
};

inline std::pair<ProbDist, ProbDist> generate(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::collision: return collision_pair(spec.n);
    case FamilyKind::tiered: return tiered_pair(spec.t);
    case FamilyKind::bernoulli: return bernoulli_pair(spec.theta_p, spec.theta_q);
    case FamilyKind::custom: return {ProbDist(spec.custom_p), ProbDist(spec.custom_q)};
  }
  throw std::logic_error("generate: unknown family kind");
}

/// Parse "collision(4)", "tiered(2)" or "bernoulli(0.5,0.8)".
inline FamilySpec parse_family(const std::string& text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("parse_family: expected kind(args): " + text);
  const std::string kind = text.substr(0, open);
  const std::string args = text.substr(open + 1, close - open - 1);
  FamilySpec spec;
  std::istringstream in(args);
  char comma = 0;
  if (kind == "collision") {
    spec.kind = FamilyKind::collision;
    if (!(in >> spec.n)) throw std::invalid_argument("parse_family: bad collision args");
  } else if (kind == "tiered") {
    spec.kind = FamilyKind::tiered;
    if (!(in >> spec.t)) throw std::invalid_argument("parse_family: bad tiered args");
  } else if (kind == "bernoulli") {
    spec.kind = FamilyKind::bernoulli;
    if (!(in >> spec.theta_p >> comma >> spec.theta_q) || comma != ',')
      throw std::invalid_argument("parse_family: bad bernoulli args");
  } else {
    throw std::invalid_argument("parse_family: unknown family kind: " + kind);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Pair-file serialization: {"p": [...], "q": [...]}

inline nlohmann::json pair_to_json(const ProbDist& p, const ProbDist& q) {
  return nlohmann::json{{"p", p.probs()}, {"q", q.probs()}};
}

inline std::pair<ProbDist, ProbDist> pair_from_json(const nlohmann::json& j) {
  return {ProbDist(j.at("p").get<std::vector<double>>()),
          ProbDist(j.at("q").get<std::vector<double>>())};
}

}  // namespace qpd
