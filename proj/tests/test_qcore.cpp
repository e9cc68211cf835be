#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qpd/linalg.hpp"
#include "qpd/qcore.hpp"
#include "qpd/rng.hpp"

using namespace qpd;

namespace {

Matrix diag2(Complex a, Complex b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// independent rank oracle for span tests
Index svd_rank(const std::vector<Vector>& vectors, Index dim) {
  Matrix stacked(dim, static_cast<Index>(vectors.size()));
  for (Index j = 0; j < stacked.cols(); ++j) stacked.col(j) = vectors[static_cast<std::size_t>(j)];
  auto svals = Eigen::JacobiSVD<Matrix>(stacked).singularValues();
  Index r = 0;
  for (Index i = 0; i < svals.size(); ++i)
    if (svals(i) > 1e-10) ++r;
  return r;
}

}  // namespace

TEST(PhaseEstimate, IdentityHasPhaseZero) {
  UnitaryMatrix u(Matrix::Identity(4, 4));
  Rng rng(7);
  for (Index k = 0; k < 4; ++k) {
    auto r = phase_estimate(u, basis_state(4, k), 0.1, PhaseEstimateMode::circuit, rng);
    EXPECT_NEAR(detail::circular_distance(r.phase, 0.0), 0.0, 1e-12);
  }
}

TEST(PhaseEstimate, DiagonalEigenphaseHalfPi) {
  UnitaryMatrix u(diag2(1.0, std::polar(1.0, kPi / 2)));
  const double delta = 0.01;
  int hits = 0;
  std::int64_t budget = 0;
  for (int seed = 0; seed < 1000; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    auto r = phase_estimate(u, basis_state(2, 1), delta, PhaseEstimateMode::circuit, rng);
    if (detail::circular_distance(r.phase, kPi / 2) <= delta) ++hits;
    budget = r.controlled_applications;
  }
  EXPECT_GE(hits, 900);  // at least 9/10
  // budget: kappa = 8 * rounds with the default 5 rounds
  EXPECT_LE(budget, static_cast<std::int64_t>(std::ceil(40.0 / delta)));
}

TEST(PhaseEstimate, SpectralModeIsExactOnEigenvectors) {
  UnitaryMatrix u(diag2(1.0, std::polar(1.0, 1.234)));
  Rng rng(3);
  auto r = phase_estimate(u, basis_state(2, 1), 0.1, PhaseEstimateMode::spectral, rng);
  EXPECT_NEAR(r.phase, 1.234, 1e-10);
  EXPECT_EQ(r.controlled_applications, 0);
}

TEST(PhaseEstimate, CircuitAgreesWithSpectralOnRandomUnitary) {
  Rng gen(21);
  const Index dim = 8;
  Matrix u_m = random_unitary(dim, gen);
  Eigen::ComplexSchur<Matrix> schur(u_m);
  UnitaryMatrix u(u_m);
  const double delta = 0.02;
  Rng rng(22);
  for (Index j = 0; j < dim; ++j) {
    StateVector eigvec{Vector(schur.matrixU().col(j))};
    auto circuit = phase_estimate(u, eigvec, delta, PhaseEstimateMode::circuit, rng);
    auto spectral = phase_estimate(u, eigvec, delta, PhaseEstimateMode::spectral, rng);
    EXPECT_LE(detail::circular_distance(circuit.phase, spectral.phase), delta);
  }
}

TEST(PhaseEstimate, CircuitSpectralAgreementSweep) {
  // 50 random unitaries of dim <= 16, all eigenvectors
  Rng gen(99);
  Rng rng(100);
  const double delta = 0.05;
  for (int trial = 0; trial < 50; ++trial) {
    const Index dim = 2 + static_cast<Index>(gen.uniform_index(15));
    Matrix u_m = random_unitary(dim, gen);
    Eigen::ComplexSchur<Matrix> schur(u_m);
    UnitaryMatrix u(u_m);
    for (Index j = 0; j < dim; ++j) {
      StateVector eigvec{Vector(schur.matrixU().col(j))};
      auto circuit = phase_estimate(u, eigvec, delta, PhaseEstimateMode::circuit, rng);
      const double truth = detail::wrap_phase(std::arg(schur.matrixT()(j, j)));
      EXPECT_LE(detail::circular_distance(circuit.phase, truth), delta)
          << "trial " << trial << " dim " << dim << " j " << j;
    }
  }
}

TEST(PhaseEstimate, ChargesAccountingCallback) {
  UnitaryMatrix u(Matrix::Identity(2, 2));
  Rng rng(5);
  std::int64_t charged = 0;
  auto r = phase_estimate(u, basis_state(2, 0), 0.25, PhaseEstimateMode::circuit, rng,
                          [&charged](std::int64_t n) { charged += n; });
  EXPECT_EQ(charged, r.controlled_applications);
  EXPECT_GT(charged, 0);
}

TEST(PhaseEstimate, RejectsBadArguments) {
  UnitaryMatrix u(Matrix::Identity(2, 2));
  Rng rng(1);
  EXPECT_THROW(phase_estimate(u, basis_state(3, 0), 0.1, PhaseEstimateMode::circuit, rng),
               std::invalid_argument);
  EXPECT_THROW(phase_estimate(u, basis_state(2, 0), 0.0, PhaseEstimateMode::circuit, rng),
               std::invalid_argument);
}

TEST(ReflectAboutSpan, SingleBasisVector) {
  auto r = reflect_about_span({basis_state(3, 0)}, 3);
  Matrix expect = -Matrix::Identity(3, 3);
  expect(0, 0) = 1.0;
  EXPECT_LE(max_abs(r.entries - expect), 1e-12);
}

TEST(ReflectAboutSpan, EmptyListIsMinusIdentity) {
  auto r = reflect_about_span({}, 3);
  EXPECT_LE(max_abs(r.entries + Matrix::Identity(3, 3)), 1e-12);
}

TEST(ReflectAboutSpan, EmptyDimensionThrows) {
  EXPECT_THROW(reflect_about_span({}, 0), std::invalid_argument);
}

TEST(ReflectAboutSpan, RandomSpanReflectionProperties) {
  Rng rng(11);
  const Index dim = 8;
  std::vector<StateVector> vecs;
  std::vector<Vector> raw;
  for (int i = 0; i < 3; ++i) {
    Vector v = random_state_vector(dim, rng);
    raw.push_back(v);
    vecs.emplace_back(v);
  }
  auto r = reflect_about_span(vecs, dim);
  EXPECT_LE(max_abs(r.entries * r.entries - Matrix::Identity(dim, dim)), 1e-9);
  // +1 eigenvalue multiplicity equals the rank of the span
  const double plus_multiplicity = (r.entries.trace().real() + static_cast<double>(dim)) / 2.0;
  EXPECT_NEAR(plus_multiplicity, static_cast<double>(svd_rank(raw, dim)), 1e-9);
}

TEST(ReflectAboutSpan, DependentVectorsDoNotInflateRank) {
  Rng rng(13);
  Vector v = random_state_vector(6, rng);
  std::vector<StateVector> vecs{StateVector(v), StateVector(v), StateVector(Vector(-v), false)};
  auto r = reflect_about_span(vecs, 6);
  const double plus_multiplicity = (r.entries.trace().real() + 6.0) / 2.0;
  EXPECT_NEAR(plus_multiplicity, 1.0, 1e-9);
}

namespace {

// 2-dim setup rotating e0 by `alpha`, target = second coordinate
std::pair<UnitaryMatrix, Projector> amplify_fixture(double alpha) {
  Matrix setup(2, 2);
  setup << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
  Matrix p = Matrix::Zero(2, 2);
  p(1, 1) = 1.0;
  return {UnitaryMatrix(setup), Projector(p)};
}

}  // namespace

TEST(AmplitudeAmplify, OneRoundAtPiOverSix) {
  auto [setup, target] = amplify_fixture(kPi / 6);
  auto out = amplitude_amplify(setup, target, 1);
  EXPECT_NEAR(std::norm(out.amps(1)), 1.0, 1e-12);
}

TEST(AmplitudeAmplify, ZeroRoundsAtPiOverFour) {
  auto [setup, target] = amplify_fixture(kPi / 4);
  auto out = amplitude_amplify(setup, target, 0);
  EXPECT_NEAR(std::norm(out.amps(1)), 0.5, 1e-12);
}

TEST(AmplitudeAmplify, ZeroAmplitudeStaysZero) {
  auto [setup, target] = amplify_fixture(0.0);
  for (int rounds : {0, 1, 2, 5}) {
    auto out = amplitude_amplify(setup, target, rounds);
    EXPECT_NEAR(std::norm(out.amps(1)), 0.0, 1e-12);
  }
}

TEST(AmplitudeAmplify, MatchesClosedFormOnGrid) {
  for (double alpha : {0.05, 0.2, 0.37, 0.6}) {
    auto [setup, target] = amplify_fixture(alpha);
    for (int k = 0; k <= 4; ++k) {
      auto out = amplitude_amplify(setup, target, k);
      const double expect = std::sin((2 * k + 1) * alpha);
      EXPECT_NEAR(std::norm(out.amps(1)), expect * expect, 1e-9);
    }
  }
}

TEST(AmplitudeAmplify, QueryAccounting) {
  auto [setup, target] = amplify_fixture(0.3);
  std::int64_t charged = 0;
  amplitude_amplify(setup, target, 3, [&charged](std::int64_t n) { charged += n; });
  EXPECT_EQ(charged, 1 + 2 * 3);
}

namespace {

Projector random_projector(Index dim, Index rank, Rng& rng) {
  Matrix u = random_unitary(dim, rng);
  Matrix p = Matrix::Zero(dim, dim);
  for (Index j = 0; j < rank; ++j) p += u.col(j) * u.col(j).adjoint();
  return Projector(std::move(p));
}

}  // namespace

TEST(EsglCheck, EqualProjectorsGiveZero) {
  Rng rng(31);
  auto p = random_projector(8, 3, rng);
  Vector w0 = random_state_vector(8, rng);
  Vector w = w0 - p.entries * w0;  // kernel of Pi_A
  auto report = esgl_check(p, p, StateVector(std::move(w), false), 0.1);
  EXPECT_NEAR(report.lhs, 0.0, 1e-10);
  EXPECT_TRUE(report.holds);
}

TEST(EsglCheck, FullCircleDeltaAlwaysHolds) {
  Rng rng(32);
  auto pa = random_projector(10, 4, rng);
  auto pb = random_projector(10, 5, rng);
  Vector w0 = random_state_vector(10, rng);
  Vector w = w0 - pa.entries * w0;
  auto report = esgl_check(pa, pb, StateVector(std::move(w), false), kTwoPi);
  EXPECT_TRUE(report.holds);
  EXPECT_GE(report.bound, report.lhs);
}

TEST(EsglCheck, RandomizedSweepNeverViolates) {
  Rng rng(33);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index dim = 4 + static_cast<Index>(rng.uniform_index(29));  // <= 32
    const Index ra = 1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(dim - 1)));
    const Index rb = 1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(dim - 1)));
    auto pa = random_projector(dim, ra, rng);
    auto pb = random_projector(dim, rb, rng);
    Vector w0 = random_state_vector(dim, rng);
    Vector w = w0 - pa.entries * w0;
    if (w.norm() < 1e-6) continue;
    for (double delta : {0.01, 0.1, 0.5}) {
      auto report = esgl_check(pa, pb, StateVector(w, false), delta);
      EXPECT_TRUE(report.holds) << "dim " << dim << " delta " << delta << " lhs " << report.lhs
                                << " bound " << report.bound;
      ++checked;
    }
  }
  EXPECT_GE(checked, 250);
}

TEST(EsglCheck, RejectsWitnessOutsideKernel) {
  Rng rng(34);
  auto pa = random_projector(6, 2, rng);
  auto pb = random_projector(6, 2, rng);
  Vector w = Vector(pa.entries.col(0));  // inside the range of Pi_A, not its kernel
  if (w.norm() < 1e-9) w = random_state_vector(6, rng);
  EXPECT_THROW(esgl_check(pa, pb, StateVector(w / w.norm()), 0.1), std::invalid_argument);
}

TEST(UnitaryMatrix, RejectsNonUnitary) {
  Matrix m = Matrix::Identity(3, 3) * 1.5;
  EXPECT_THROW(UnitaryMatrix{m}, std::invalid_argument);
}

TEST(Projector, RejectsNonProjector) {
  Matrix m = Matrix::Identity(3, 3) * 0.5;
  EXPECT_THROW(Projector{m}, std::invalid_argument);
}
