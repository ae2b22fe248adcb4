#include <gtest/gtest.h>

#include <cmath>

#include "ncprob/hilbert.hpp"
#include "support/random_fixtures.hpp"

using namespace ncprob;
using namespace ncprob::hilbert;

namespace {

void expect_pvm_axioms(const auto& pvm, double tol = 1e-10) {
  const Eigen::Index d = pvm.dim();
  Matrix total = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < pvm.size(); ++i) {
    const Matrix& p = pvm.projector(i);
    EXPECT_LE(max_abs(p - p.adjoint()), tol);
    EXPECT_LE(max_abs(p * p - p), tol);
    for (std::size_t j = 0; j < i; ++j) EXPECT_LE(max_abs(p * pvm.projector(j)), tol);
    total += p;
  }
  EXPECT_LE(max_abs(total - Matrix::Identity(d, d)), tol);
}

}  // namespace

TEST(Operators, Invariants) {
  Matrix m(2, 2);
  m << 1, 2, 0, 1;
  EXPECT_THROW(HermitianOperator{m}, InvariantError);
  EXPECT_THROW(DensityOperator(mats::diagonal({0.7, 0.7})), InvariantError);
  EXPECT_THROW(DensityOperator(mats::diagonal({1.5, -0.5})), InvariantError);
  EXPECT_THROW(PureState(Vector::Ones(2)), InvariantError);
  Matrix nan = Matrix::Zero(2, 2);
  nan(0, 0) = std::nan("");
  EXPECT_THROW(HermitianOperator{nan}, InvariantError);
}

TEST(ObservableFromDistribution, Die) {
  const auto obs = observable_from_distribution(classical::Distribution::uniform({1, 2, 3, 4, 5, 6}));
  EXPECT_LE(max_abs(obs.op.matrix() - mats::diagonal({1, 2, 3, 4, 5, 6})), 0.0);
  ASSERT_EQ(obs.pvm.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(obs.pvm.rank(i), 1.0, 1e-15);
    EXPECT_EQ(obs.pvm.label(i), SpectralCell::single(static_cast<double>(i + 1)));
  }
}

TEST(ObservableFromDistribution, SmallCases) {
  const auto one = observable_from_distribution(classical::Distribution::delta(7.0));
  EXPECT_EQ(one.op.dim(), 1);
  EXPECT_LE(max_abs(one.pvm.projector(0) - Matrix::Identity(1, 1)), 0.0);
  const auto bit = observable_from_distribution(classical::Distribution::uniform({0, 1}));
  EXPECT_LE(max_abs(bit.pvm.projector(0) - mats::diagonal({1, 0})), 0.0);
  EXPECT_LE(max_abs(bit.pvm.projector(1) - mats::diagonal({0, 1})), 0.0);
  EXPECT_THROW(observable_from_values({1.0, 2.0, 1.0}), InvariantError);
}

TEST(DensityFromDistribution, Examples) {
  const auto obs = observable_from_values({1, 2, 3, 4, 5, 6});
  const auto rho = density_from_distribution(classical::Distribution::uniform({1, 2, 3, 4, 5, 6}), obs.pvm);
  EXPECT_LE(max_abs(rho.matrix() - Matrix::Identity(6, 6) / 6.0), 1e-15);
  const auto delta = density_from_distribution(std::vector<double>{0, 0, 1, 0, 0, 0}, obs.pvm);
  EXPECT_LE(max_abs(delta.matrix() - obs.pvm.projector(2)), 0.0);
  const auto three = observable_from_values({1, 2, 3});
  const auto mixed = density_from_distribution(std::vector<double>{0.5, 0.25, 0.25}, three.pvm);
  EXPECT_LE(max_abs(mixed.matrix() - mats::diagonal({0.5, 0.25, 0.25})), 1e-15);
  EXPECT_THROW(density_from_distribution(std::vector<double>{0.5, 0.5}, three.pvm), ArgumentError);
}

TEST(SpectralPvm, DiagonalCases) {
  const auto p = spectral_pvm(HermitianOperator::diagonal({1, 2, 3}));
  ASSERT_EQ(p.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(p.label(i).representative(), static_cast<double>(i + 1), 1e-14);
    EXPECT_NEAR(p.rank(i), 1.0, 1e-14);
  }
  const auto q = spectral_pvm(HermitianOperator::diagonal({1, 1, 2}));
  ASSERT_EQ(q.size(), 2u);
  EXPECT_NEAR(q.rank(0), 2.0, 1e-14);
  EXPECT_NEAR(q.rank(1), 1.0, 1e-14);
  EXPECT_LE(max_abs(q.projector(0) - mats::diagonal({1, 1, 0})), 1e-14);
  EXPECT_THROW(spectral_pvm(HermitianOperator::diagonal({1, 2}), -1.0), ArgumentError);
}

TEST(SpectralPvm, ReconstructsRandomHermitian) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianOperator a(fixtures::random_hermitian(rng, 5));
    const auto pvm = spectral_pvm(a);
    expect_pvm_axioms(pvm);
    Matrix rebuilt = Matrix::Zero(5, 5);
    for (const auto& c : pvm.cells()) rebuilt += c.label.representative() * c.projector;
    EXPECT_LE(max_abs(rebuilt - a.matrix()), 1e-9);
  }
}

TEST(SpectralPvm, ClustersNearDegenerateEigenvalues) {
  Rng rng(29);
  const Matrix u = fixtures::random_unitary(rng, 4);
  const double tol = 1e-6;
  const HermitianOperator a(u * mats::diagonal({1.0, 1.0 + 4e-7, 2.0, 3.0}) * u.adjoint());
  const auto pvm = spectral_pvm(a, tol);
  ASSERT_EQ(pvm.size(), 3u);
  EXPECT_NEAR(pvm.rank(0), 2.0, 1e-12);
  Matrix rebuilt = Matrix::Zero(4, 4);
  for (const auto& c : pvm.cells()) rebuilt += c.label.representative() * c.projector;
  EXPECT_LE(operator_norm(rebuilt - a.matrix()), 4 * tol + 1e-9);
}

TEST(SpectralPvm, DeterministicPhase) {
  const HermitianOperator a(mats::pauli_x());
  const auto es = hermitian_eigensystem(a.matrix());
  for (Eigen::Index k = 0; k < 2; ++k) {
    // Both entries have equal magnitude; the lowest index is made real positive.
    EXPECT_GT(es.vectors(0, k).real(), 0.0);
    EXPECT_NEAR(es.vectors(0, k).imag(), 0.0, 1e-15);
  }
}

TEST(SpectralPvm, RoundTripFromDistribution) {
  const classical::Distribution d({-2.0, 0.5, 1.0, 4.0}, {0.1, 0.2, 0.3, 0.4});
  const auto obs = observable_from_distribution(d);
  const auto pvm = spectral_pvm(obs.op);
  ASSERT_EQ(pvm.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(pvm.label(i).representative(), d.support()[i], 1e-14);
}

TEST(ApplyFunction, Examples) {
  Rng rng(31);
  const HermitianOperator a(fixtures::random_hermitian(rng, 4));
  EXPECT_LE(max_abs(apply_function([](double x) { return x; }, a).matrix() - a.matrix()), 1e-10);
  EXPECT_LE(max_abs(apply_function([](double) { return 1.0; }, a).matrix() - Matrix::Identity(4, 4)), 1e-12);
  const HermitianOperator d = HermitianOperator::diagonal({1, 2, 3});
  const Matrix square = d.matrix() * d.matrix();
  EXPECT_LE(max_abs(apply_function([](double x) { return x * x; }, d).matrix() - square), 1e-12);
  EXPECT_LE(max_abs(square - mats::diagonal({1, 4, 9})), 0.0);
}

TEST(ApplyFunction, DomainError) {
  const HermitianOperator d = HermitianOperator::diagonal({-1, 2});
  EXPECT_THROW(apply_function([](double x) { return std::log(x); }, d), DomainError);
  EXPECT_THROW(apply_function([](double x) -> double {
                 if (x < 0) throw std::domain_error("negative");
                 return x;
               }, d),
               DomainError);
}

TEST(ApplyFunction, HomomorphismAndCommutation) {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianOperator a(fixtures::random_hermitian(rng, 5));
    auto f = [](double x) { return std::cos(x); };
    auto g = [](double x) { return x * x - 1.0; };
    const Matrix fa = apply_function(f, a).matrix();
    const Matrix ga = apply_function(g, a).matrix();
    const Matrix fga = apply_function([&](double x) { return f(x) * g(x); }, a).matrix();
    EXPECT_LE(max_abs(fga - fa * ga), 1e-9);
    EXPECT_LE(commutator_norm(fa, a.matrix()), 1e-9);
  }
}

TEST(SpectralMeasure, Examples) {
  const auto obs = observable_from_values({1, 2, 3, 4});
  const auto delta = spectral_measure(PureState::basis(4, 2), obs.pvm);
  EXPECT_EQ(delta.probs, (std::vector<double>{0, 0, 1, 0}));
  const auto uni = spectral_measure(PureState::uniform_superposition(4), obs.pvm);
  // |1/sqrt(4)|^2 = 1/4 per cell.
  for (double p : uni.probs) EXPECT_NEAR(p, 0.25, 1e-15);

  const classical::Distribution d({1, 2, 3, 4}, {0.1, 0.2, 0.3, 0.4});
  const auto rho = density_from_distribution(d, obs.pvm);
  const auto back = to_distribution(spectral_measure(rho, obs.pvm));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(back.probs()[i], d.probs()[i], 1e-12);
  EXPECT_EQ(back.support(), d.support());
  EXPECT_THROW(spectral_measure(PureState::basis(3, 0), obs.pvm), DimensionError);
}

TEST(TraceExpectation, MatchesClassicalExpectation) {
  const auto obs = observable_from_values({1, 2, 3, 4, 5, 6});
  const auto rho = DensityOperator::maximally_mixed(6);
  EXPECT_NEAR(trace_expectation(rho, obs.op), 3.5, 1e-15);

  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const classical::Distribution d({-1.5, 0.0, 1.0, 2.5, 4.0}, fixtures::random_probs(rng, 5));
    const auto o = observable_from_distribution(d);
    const auto r = density_from_distribution(d, o.pvm);
    const double a = rng.uniform(-2, 2);
    auto f = [a](double x) { return std::exp(a * x) - x * x; };
    EXPECT_NEAR(trace_expectation(r, apply_function(f, o.op)), classical::expectation(f, d), 1e-12);
  }
}

TEST(TraceExpectation, EigenvectorState) {
  Rng rng(43);
  const HermitianOperator a(fixtures::random_hermitian(rng, 4));
  const auto es = hermitian_eigensystem(a.matrix());
  const auto rho = DensityOperator::from_pure(PureState::normalized(es.vectors.col(2)));
  EXPECT_NEAR(trace_expectation(rho, a), es.values(2), 1e-12);
  EXPECT_THROW(trace_expectation(DensityOperator::maximally_mixed(3), a), DimensionError);
}

TEST(JointPvm, Examples) {
  const auto j = joint_pvm(HermitianOperator::diagonal({1, 2}), HermitianOperator::diagonal({3, 3}));
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j.label(0), (JointCell{SpectralCell::single(1), SpectralCell::single(3)}));
  EXPECT_EQ(j.label(1), (JointCell{SpectralCell::single(2), SpectralCell::single(3)}));
  EXPECT_NEAR(j.rank(0), 1.0, 1e-14);

  Rng rng(47);
  const HermitianOperator a(fixtures::random_hermitian(rng, 3));
  const auto same = joint_pvm(a, a);
  const auto pa = spectral_pvm(a);
  ASSERT_EQ(same.size(), pa.size());
  for (std::size_t i = 0; i < same.size(); ++i) {
    EXPECT_EQ(same.label(i).first, same.label(i).second);
    EXPECT_LE(max_abs(same.projector(i) - pa.projector(i)), 1e-10);
  }
}

TEST(JointPvm, NonCommutingPairRejected) {
  // [diag(0,1), X] = [[0,-1],[1,0]], singular values 1 and 1.
  Matrix c = commutator(mats::diagonal({0, 1}), mats::pauli_x());
  EXPECT_NEAR(operator_norm(c), 1.0, 1e-15);
  EXPECT_THROW(joint_pvm(HermitianOperator::diagonal({0, 1}), HermitianOperator(mats::pauli_x())),
               NonCommutingError);
}

TEST(JointPvm, Marginalization) {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const auto [a, b] = fixtures::random_commuting_pair(rng, 5);
    const auto joint = joint_pvm(a, b);
    expect_pvm_axioms(joint, 1e-9);
    const auto pa = spectral_pvm(a);
    for (const auto& ca : pa.cells()) {
      Matrix sum = Matrix::Zero(5, 5);
      for (const auto& cell : joint.cells()) {
        if (cell.label.first == ca.label) sum += cell.projector;
      }
      EXPECT_LE(max_abs(sum - ca.projector), 1e-9);
    }
  }
}

TEST(CommonRefiner, Examples) {
  const HermitianOperator a = HermitianOperator::diagonal({1, 2});
  const HermitianOperator b = HermitianOperator::diagonal({3, 4});
  const auto r = common_refiner(a, b);
  EXPECT_LE(max_abs(r.refiner.matrix() - mats::diagonal({0, 1})), 1e-14);
  EXPECT_EQ(r.first_values, (std::vector<double>{1, 2}));
  EXPECT_EQ(r.second_values, (std::vector<double>{3, 4}));

  const auto flat = common_refiner(HermitianOperator::diagonal({5, 5}), HermitianOperator::diagonal({5, 5}));
  EXPECT_LE(max_abs(flat.refiner.matrix()), 1e-14);
  EXPECT_EQ(flat.first_values, (std::vector<double>{5}));

  const auto withid = common_refiner(HermitianOperator::identity(3), HermitianOperator::diagonal({2, 7, 2}));
  EXPECT_EQ(withid.second_values, (std::vector<double>{2, 7}));
  EXPECT_THROW(common_refiner(HermitianOperator(mats::pauli_z()), HermitianOperator(mats::pauli_x())),
               NonCommutingError);
}

TEST(CommonRefiner, ReconstructsBothOperators) {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const auto [a, b] = fixtures::random_commuting_pair(rng, 4);
    const auto r = common_refiner(a, b);
    const auto fa = apply_function([&](double k) { return r.first(k); }, r.refiner);
    const auto fb = apply_function([&](double k) { return r.second(k); }, r.refiner);
    EXPECT_LE(max_abs(fa.matrix() - a.matrix()), 1e-9);
    EXPECT_LE(max_abs(fb.matrix() - b.matrix()), 1e-9);
  }
}

TEST(Dispersion, Examples) {
  const HermitianOperator d3 = HermitianOperator::diagonal({1, 2, 3});
  EXPECT_NEAR(dispersion(PureState::basis(3, 1), d3), 0.0, 1e-15);
  // Uniform superposition against diag(0,1): E[x^2] - E[x]^2 = 1/2 - 1/4.
  EXPECT_NEAR(dispersion(PureState::uniform_superposition(2), HermitianOperator::diagonal({0, 1})), 0.25, 1e-15);

  const HermitianOperator a = HermitianOperator::diagonal({1, 2});
  const HermitianOperator b = HermitianOperator::diagonal({7, 7});
  const auto psi = dispersion_free_state(a, b);
  const bool is_basis = std::abs(std::abs(psi.vector()(0)) - 1.0) < 1e-12 ||
                        std::abs(std::abs(psi.vector()(1)) - 1.0) < 1e-12;
  EXPECT_TRUE(is_basis);
  EXPECT_LE(dispersion(psi, a), 1e-10);
  EXPECT_LE(dispersion(psi, b), 1e-10);
  EXPECT_THROW(dispersion_free_state(HermitianOperator(mats::pauli_z()), HermitianOperator(mats::pauli_x())),
               NonCommutingError);
}

TEST(Dispersion, NonNegativeAndDispersionFreeExists) {
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const HermitianOperator a(fixtures::random_hermitian(rng, 4));
    EXPECT_GE(dispersion(fixtures::random_density(rng, 4), a), -1e-10);
    const auto [x, y] = fixtures::random_commuting_pair(rng, 4);
    const auto psi = dispersion_free_state(x, y);
    EXPECT_LE(dispersion(psi, x), 1e-10);
    EXPECT_LE(dispersion(psi, y), 1e-10);
  }
}

TEST(CommutatorNorm, Examples) {
  EXPECT_LE(commutator_norm(HermitianOperator::diagonal({1, 2, 3}), HermitianOperator::diagonal({4, 5, 6})), 1e-12);
  // [Z, X] = 2iY; |2iY| = 2.
  const Matrix direct = mats::pauli_z() * mats::pauli_x() - mats::pauli_x() * mats::pauli_z();
  EXPECT_LE(max_abs(direct - Complex(0, 2) * mats::pauli_y()), 0.0);
  EXPECT_NEAR(commutator_norm(HermitianOperator(mats::pauli_z()), HermitianOperator(mats::pauli_x())), 2.0, 1e-14);
  Rng rng(67);
  const HermitianOperator a(fixtures::random_hermitian(rng, 4));
  EXPECT_EQ(commutator_norm(a, a), 0.0);
  EXPECT_THROW(commutator_norm(a, HermitianOperator::identity(3)), DimensionError);
}
