// The oracle access models as explicit unitaries with register layouts and
// query accounting. A state-generating oracle's only contract is e0 -> state;
// its completion elsewhere is a deterministic Householder reflection unless a
// randomized completion is requested (used to test that algorithms do not
// depend on it).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpd/distributions.hpp"
#include "qpd/linalg.hpp"
#include "qpd/rng.hpp"

namespace qpd {

enum class OracleModel { model_i, model_ii, model_iii, model_iv, standard_string };

inline std::string to_string(OracleModel m) {
  switch (m) {
    case OracleModel::model_i: return "i";
    case OracleModel::model_ii: return "ii";
    case OracleModel::model_iii: return "iii";
    case OracleModel::model_iv: return "iv";
    case OracleModel::standard_string: return "standard_string";
  }
  return "?";
}

/// Register layout of an oracle's space.
///
/// State oracles act on X = D + (E tensor F): D is the one-dimensional
/// reference register spanned by e0 (index 0), E indexes the alphabet and F
/// holds the garbage vectors (dim d_f). String oracles act on the index
/// register (dim n) tensored with a value register of dim |A|+1 whose basis
/// state 0 is the blank.
struct RegisterLayout {
  enum class Kind { state, string };
  Kind kind = Kind::state;
  Index alphabet = 0;
  Index d_f = 1;
  Index length = 0;

  static RegisterLayout state_layout(Index alphabet, Index d_f) {
    if (alphabet <= 0 || d_f <= 0)
      throw std::invalid_argument("RegisterLayout: alphabet and d_f must be positive");
    return {Kind::state, alphabet, d_f, 0};
  }
  static RegisterLayout string_layout(Index alphabet, Index length) {
    if (alphabet <= 0 || length <= 0)
      throw std::invalid_argument("RegisterLayout: alphabet and length must be positive");
    return {Kind::string, alphabet, 1, length};
  }

  Index total_dim() const {
    return kind == Kind::state ? 1 + alphabet * d_f : length * (alphabet + 1);
  }
  Index e0() const { return 0; }
  Index state_index(Index a, Index g) const { return 1 + a * d_f + g; }
  Index string_index(Index i, Index value) const { return i * (alphabet + 1) + value; }

  nlohmann::json to_json() const {
    if (kind == Kind::state)
      return {{"kind", "state"}, {"registers", {{"D", 1}, {"E", alphabet}, {"F", d_f}}}};
    return {{"kind", "string"}, {"registers", {{"I", length}, {"V", alphabet + 1}}}};
  }
};

enum class HiddenLabel { P, Q };

inline std::string to_string(HiddenLabel h) { return h == HiddenLabel::P ? "P" : "Q"; }

/// An input oracle: the unitary, its layout, and a query counter. The hidden
/// label records which distribution the oracle encodes; it exists for harness
/// bookkeeping and must never be read by a discriminator.
struct OracleInstance {
  OracleModel model = OracleModel::model_iii;
  UnitaryMatrix unitary;
  RegisterLayout layout;
  HiddenLabel hidden_label = HiddenLabel::P;
  std::int64_t query_count = 0;

  Index dim() const { return unitary.dim(); }
  void charge(std::int64_t queries) { query_count += queries; }

  Vector apply(const Vector& v) {
    charge(1);
    return unitary.entries * v;
  }
  Vector apply_adjoint(const Vector& v) {
    charge(1);
    return unitary.entries.adjoint() * v;
  }

  /// The state the oracle prepares from e0 (no charge; test/bookkeeping use).
  Vector prepared_state() const { return unitary.entries.col(0); }

  OracleInstance clone_reset() const {
    OracleInstance copy = *this;
    copy.query_count = 0;
    return copy;
  }
};

// ---------------------------------------------------------------------------
// Garbage states

enum class GarbageKind { trivial, haar_random, orthogonal_adversarial };

inline std::string to_string(GarbageKind k) {
  switch (k) {
    case GarbageKind::trivial: return "trivial";
    case GarbageKind::haar_random: return "haar";
    case GarbageKind::orthogonal_adversarial: return "adversarial";
  }
  return "?";
}

/// Recipe for the per-symbol unit vectors psi_a of a model-(iv) state.
/// `slot` distinguishes the two sides of a discrimination pair so that the
/// adversarial kind hands orthogonal garbage to the P- and Q-oracles.
struct GarbageSpec {
  GarbageKind kind = GarbageKind::trivial;
  Index d_f = 1;
  std::uint64_t seed = 0;
  int slot = 0;
};

inline std::vector<Vector> garbage_vectors(const GarbageSpec& spec, Index alphabet) {
  if (spec.d_f <= 0) throw std::invalid_argument("garbage_vectors: d_f must be positive");
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(alphabet));
  for (Index a = 0; a < alphabet; ++a) {
    switch (spec.kind) {
      case GarbageKind::trivial: {
        Vector v = Vector::Zero(spec.d_f);
        v(0) = 1.0;
        out.push_back(std::move(v));
        break;
      }
      case GarbageKind::haar_random: {
        Rng rng(spec.seed, static_cast<std::uint64_t>(2 * a + spec.slot));
        out.push_back(random_state_vector(spec.d_f, rng));
        break;
      }
      case GarbageKind::orthogonal_adversarial: {
        if (spec.d_f < 2)
          throw std::invalid_argument("garbage_vectors: adversarial kind needs d_f >= 2");
        Vector v = Vector::Zero(spec.d_f);
        v((2 * a + spec.slot) % spec.d_f) = 1.0;
        out.push_back(std::move(v));
        break;
      }
    }
  }
  return out;
}

/// boxplus_a sqrt(p_a) psi_a in the given state layout (zero e0 component).
inline Vector encoded_state(const ProbDist& p, const std::vector<Vector>& garbage,
                            const RegisterLayout& layout) {
  if (static_cast<Index>(p.alphabet_size()) != layout.alphabet ||
      garbage.size() != p.alphabet_size())
    throw std::invalid_argument("encoded_state: alphabet mismatch");
  Vector s = Vector::Zero(layout.total_dim());
  for (Index a = 0; a < layout.alphabet; ++a) {
    const auto& g = garbage[static_cast<std::size_t>(a)];
    if (g.size() != layout.d_f) throw std::invalid_argument("encoded_state: garbage dim mismatch");
    const double amp = std::sqrt(p[static_cast<std::size_t>(a)]);
    for (Index j = 0; j < layout.d_f; ++j) s(layout.state_index(a, j)) = amp * g(j);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Oracle constructors

/// Reflection through the orthogonal complement of e0 - psi: swaps e0 and psi
/// and fixes everything orthogonal to both. `psi` is given in the full oracle
/// space and must be a unit vector orthogonal to e0.
inline UnitaryMatrix reflection_oracle(const StateVector& psi) {
  if (std::abs(psi.amps(0)) > kTolUnitary)
    throw std::invalid_argument("reflection_oracle: psi must be orthogonal to e0");
  const Index d = psi.dim();
  Vector u = -psi.amps;
  u(0) += 1.0;  // u = e0 - psi, ||u||^2 = 2
  Matrix r = Matrix::Identity(d, d) - u * u.adjoint();
  return UnitaryMatrix(std::move(r));
}

namespace detail {
/// Unitary completion of e0 -> state. The deterministic completion is the
/// swap reflection; a seeded completion right-multiplies by a Haar unitary
/// acting on the complement of e0 (so O e0 = state still holds).
inline UnitaryMatrix complete_preparation(const Vector& state,
                                          std::optional<std::uint64_t> completion_seed) {
  const Index d = state.size();
  Matrix o = reflection_oracle(StateVector(state)).entries;
  if (completion_seed) {
    Rng rng(*completion_seed, 0x700F);
    Matrix w = Matrix::Identity(d, d);
    w.bottomRightCorner(d - 1, d - 1) = random_unitary(d - 1, rng);
    o = o * w;
  }
  return UnitaryMatrix(std::move(o));
}
}  // namespace detail

/// Model (iii) or (iv) state-generating oracle for p. Model (iii) ignores the
/// garbage spec (d_f = 1, psi_a = 1). The unitary maps e0 to the encoded
/// state; its action elsewhere is an arbitrary completion that discriminators
/// must not rely on (randomized when `completion_seed` is given).
inline OracleInstance prepare_oracle(OracleModel model, const ProbDist& p,
                                     const GarbageSpec& garbage,
                                     HiddenLabel label = HiddenLabel::P,
                                     std::optional<std::uint64_t> completion_seed = std::nullopt) {
  if (model != OracleModel::model_iii && model != OracleModel::model_iv)
    throw std::invalid_argument("prepare_oracle: model must be iii or iv");
  const Index alphabet = static_cast<Index>(p.alphabet_size());
  GarbageSpec effective = garbage;
  if (model == OracleModel::model_iii) effective = GarbageSpec{GarbageKind::trivial, 1, 0, 0};

  OracleInstance inst;
  inst.model = model;
  inst.layout = RegisterLayout::state_layout(alphabet, effective.d_f);
  inst.hidden_label = label;
  const Vector state = encoded_state(p, garbage_vectors(effective, alphabet), inst.layout);
  inst.unitary = detail::complete_preparation(state, completion_seed);
  return inst;
}

/// Standard input oracle for a string x over alphabet [A] (0-based symbols):
/// |i>|0> -> |i>|x_i>, extended as the involution swapping the blank with the
/// symbol value and fixing the other values.
inline OracleInstance standard_oracle(const std::vector<int>& x, Index alphabet) {
  if (x.empty()) throw std::invalid_argument("standard_oracle: empty string");
  const Index n = static_cast<Index>(x.size());
  RegisterLayout layout = RegisterLayout::string_layout(alphabet, n);
  const Index d = layout.total_dim();
  Matrix o = Matrix::Zero(d, d);
  for (Index i = 0; i < n; ++i) {
    const int sym = x[static_cast<std::size_t>(i)];
    if (sym < 0 || sym >= alphabet)
      throw std::invalid_argument("standard_oracle: symbol out of alphabet");
    for (Index v = 0; v <= alphabet; ++v) {
      Index image = v;
      if (v == 0) image = sym + 1;
      else if (v == sym + 1) image = 0;
      o(layout.string_index(i, image), layout.string_index(i, v)) = 1.0;
    }
  }
  OracleInstance inst;
  inst.model = OracleModel::standard_string;
  inst.layout = layout;
  inst.unitary = UnitaryMatrix(std::move(o));
  return inst;
}

/// String of length n whose symbol frequencies equal p. Requires every p_a to
/// be a multiple of 1/n.
inline std::vector<int> string_for_distribution(const ProbDist& p, Index n) {
  std::vector<int> x;
  x.reserve(static_cast<std::size_t>(n));
  Index total = 0;
  for (std::size_t a = 0; a < p.alphabet_size(); ++a) {
    const double count = p[a] * static_cast<double>(n);
    const auto rounded = static_cast<Index>(std::llround(count));
    if (std::abs(count - static_cast<double>(rounded)) > 1e-9)
      throw std::invalid_argument("string_for_distribution: p_a must be multiples of 1/n");
    for (Index k = 0; k < rounded; ++k) x.push_back(static_cast<int>(a));
    total += rounded;
  }
  if (total != n) throw std::invalid_argument("string_for_distribution: counts do not sum to n");
  return x;
}

/// Lift a string oracle to a model-(iv) state oracle: one standard-oracle
/// query prepares (1/sqrt(n)) sum_i |i>|x_i>, i.e. boxplus_a sqrt(freq_a)
/// tensored with the normalized index superposition as garbage (d_f = n).
inline OracleInstance lift_string_oracle(const std::vector<int>& x, Index alphabet,
                                         OracleModel tag = OracleModel::model_iv,
                                         HiddenLabel label = HiddenLabel::P,
                                         std::optional<std::uint64_t> completion_seed = std::nullopt) {
  if (x.empty()) throw std::invalid_argument("lift_string_oracle: empty string");
  const Index n = static_cast<Index>(x.size());
  RegisterLayout layout = RegisterLayout::state_layout(alphabet, n);
  Vector state = Vector::Zero(layout.total_dim());
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index i = 0; i < n; ++i) {
    const int sym = x[static_cast<std::size_t>(i)];
    if (sym < 0 || sym >= alphabet)
      throw std::invalid_argument("lift_string_oracle: symbol out of alphabet");
    state(layout.state_index(sym, i)) = amp;
  }
  OracleInstance inst;
  inst.model = tag;
  inst.layout = layout;
  inst.hidden_label = label;
  inst.unitary = detail::complete_preparation(state, completion_seed);
  return inst;
}

/// iid string of length n drawn from p, then lifted (model (ii) access).
inline OracleInstance lift_iid_oracle(const ProbDist& p, Index n, Rng& rng,
                                      HiddenLabel label = HiddenLabel::P) {
  std::vector<int> x;
  x.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) x.push_back(sample(p, rng));
  return lift_string_oracle(x, static_cast<Index>(p.alphabet_size()), OracleModel::model_ii,
                            label);
}

/// L_psi = psi e0* + e0 psi* for psi in C^m, embedded with e0 appended at
/// index 0 (an (m+1) x (m+1) Hermitian matrix).
inline Matrix L_matrix(const StateVector& psi) {
  const Index m = psi.dim();
  Matrix l = Matrix::Zero(m + 1, m + 1);
  l.col(0).tail(m) = psi.amps;
  l.row(0).tail(m) = psi.amps.conjugate();
  return l;
}

}  // namespace qpd
