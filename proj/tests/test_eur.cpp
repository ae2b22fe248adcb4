#include <gtest/gtest.h>

#include <cmath>

#include "ncprob/construct.hpp"
#include "ncprob/eur.hpp"
#include "support/oracles.hpp"
#include "support/random_fixtures.hpp"

using namespace ncprob;
using namespace ncprob::eur;
using hilbert::DensityOperator;
using hilbert::HermitianOperator;
using hilbert::PureState;

namespace {

const HermitianOperator kZ(mats::pauli_z());
const HermitianOperator kX(mats::pauli_x());

OptimizerConfig quick_config(std::uint64_t seed = kDefaultSeed) {
  OptimizerConfig c;
  c.restarts = 8;
  c.max_iterations = 300;
  c.seed = seed;
  return c;
}

// Random partition of the operator's spectrum into at most `max_cells` cells.
SpectrumPartition random_partition(Rng& rng, const HermitianOperator& a, std::size_t max_cells) {
  const auto ground = hilbert::spectrum(hilbert::spectral_pvm(a));
  std::vector<std::vector<double>> groups(max_cells);
  for (double g : ground) groups[static_cast<std::size_t>(rng.uniform() * max_cells)].push_back(g);
  std::erase_if(groups, [](const auto& c) { return c.empty(); });
  return {ground, groups};
}

// Coarsening of `fine` obtained by merging random pairs of its cells.
SpectrumPartition random_coarsening(Rng& rng, const SpectrumPartition& fine) {
  std::vector<std::vector<double>> groups;
  for (const auto& c : fine.cells()) {
    if (!groups.empty() && rng.uniform() < 0.5) {
      groups.back().insert(groups.back().end(), c.values.begin(), c.values.end());
    } else {
      groups.push_back(c.values);
    }
  }
  return {fine.ground(), groups};
}

}  // namespace

TEST(SpectrumPartition, Validation) {
  const std::vector<double> ground{1, 2, 3};
  EXPECT_THROW(SpectrumPartition(ground, {{1, 2}, {2, 3}}), InvariantError);
  EXPECT_THROW(SpectrumPartition(ground, {{1, 2}}), InvariantError);
  EXPECT_THROW(SpectrumPartition(ground, {{1, 2}, {3, 4}}), InvariantError);
  EXPECT_THROW(SpectrumPartition(ground, {}), InvariantError);
  const auto t = SpectrumPartition::from_thresholds(ground, {1.5, 10.0});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.cells()[1].values, (std::vector<double>{2, 3}));
}

TEST(PartitionProbabilities, Examples) {
  const auto obs = hilbert::observable_from_values({1, 2, 3, 4});
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const auto rho = hilbert::density_from_distribution(p, obs.pvm);
  const auto single = partition_probabilities(rho, obs.pvm, SpectrumPartition::singletons(obs.op));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(single.probs[i], p[i], 1e-15);
  const auto whole = partition_probabilities(rho, obs.pvm, SpectrumPartition::whole(obs.op));
  ASSERT_EQ(whole.probs.size(), 1u);
  EXPECT_NEAR(whole.probs[0], 1.0, 1e-15);
  // diag(1,2,3,4), uniform state: P({1,2}) = diag(1,1,0,0) carries 2/4.
  const auto halves = partition_probabilities(DensityOperator::maximally_mixed(4), obs.pvm,
                                              SpectrumPartition({1, 2, 3, 4}, {{1, 2}, {3, 4}}));
  EXPECT_NEAR(halves.probs[0], 0.5, 1e-15);
  EXPECT_NEAR(halves.probs[1], 0.5, 1e-15);
  EXPECT_THROW(partition_probabilities(rho, obs.pvm, SpectrumPartition::singletons(std::vector<double>{1, 2, 3})),
               InvariantError);
}

TEST(EpsilonEntropy, Examples) {
  const auto a = HermitianOperator::diagonal({1, 2, 3, 4, 5, 6});
  EXPECT_EQ(epsilon_entropy(PureState::basis(6, 3), a, SpectrumPartition::singletons(a)), 0.0);
  Rng rng(97);
  EXPECT_EQ(epsilon_entropy(fixtures::random_pure(rng, 6), a, SpectrumPartition::whole(a)), 0.0);
  EXPECT_NEAR(epsilon_entropy(DensityOperator::maximally_mixed(6), a, SpectrumPartition::singletons(a)),
              std::log(6.0), 1e-14);
}

TEST(IsFiner, Examples) {
  const std::vector<double> g{1, 2, 3};
  const auto single = SpectrumPartition::singletons(g);
  const auto whole = SpectrumPartition::whole(g);
  const SpectrumPartition a(g, {{1}, {2, 3}});
  const SpectrumPartition b(g, {{1, 2}, {3}});
  EXPECT_TRUE(is_finer(single, a));
  EXPECT_TRUE(is_finer(single, b));
  EXPECT_TRUE(is_finer(a, whole));
  EXPECT_TRUE(is_finer(b, whole));
  EXPECT_FALSE(is_finer(a, b));
  EXPECT_FALSE(is_finer(b, a));
  EXPECT_FALSE(is_finer(whole, single));
  EXPECT_THROW(is_finer(a, SpectrumPartition::singletons(std::vector<double>{1, 2})), ArgumentError);
}

TEST(MaassenUffink, Examples) {
  EXPECT_NEAR(maassen_uffink_bound(HermitianOperator::diagonal({1, 2, 3}), HermitianOperator::diagonal({3, 1, 2})),
              0.0, 1e-12);
  // Z and X eigenbases overlap in 1/sqrt 2.
  EXPECT_NEAR(-2.0 * std::log(1.0 / std::sqrt(2.0)), std::log(2.0), 1e-15);
  EXPECT_NEAR(maassen_uffink_bound(kZ, kX), std::log(2.0), 1e-12);

  const double max_entry = oracles::fourier_max_entry_modulus(6);
  EXPECT_NEAR(max_entry, 1.0 / std::sqrt(6.0), 1e-15);
  const auto d6 = classical::Distribution::uniform({1, 2, 3, 4, 5, 6});
  const auto pair = construct::build_pair(d6, d6, mats::fourier(6));
  EXPECT_NEAR(maassen_uffink_bound(pair.t_x, pair.t_y), -2.0 * std::log(max_entry), 1e-9);
  EXPECT_THROW(maassen_uffink_bound(kZ, HermitianOperator::identity(3)), DimensionError);
}

TEST(MaassenUffink, DegenerateOperatorsUseProjectorNorms) {
  // A = diag(1,1,2) and B = X (+) 5: |P_{1} Q_b| is 1 because span{e0,e1}
  // contains both X eigenvectors.
  Matrix b = Matrix::Zero(3, 3);
  b.topLeftCorner(2, 2) = mats::pauli_x();
  b(2, 2) = 5.0;
  EXPECT_NEAR(maassen_uffink_bound(HermitianOperator::diagonal({1, 1, 2}), HermitianOperator(b)), 0.0, 1e-12);
}

TEST(Partovi, Examples) {
  const auto ez = SpectrumPartition::singletons(kZ);
  const auto ex = SpectrumPartition::singletons(kX);
  const double s_oracle = oracles::rank_one_projector_sum_norm(1.0 / std::sqrt(2.0));
  EXPECT_NEAR(partovi_norm(kZ, kX, ez, ex), s_oracle, 1e-12);
  EXPECT_NEAR(partovi_bound(kZ, kX, ez, ex), 2.0 * std::log(2.0 / (1.0 + 1.0 / std::sqrt(2.0))), 1e-12);

  // Shared eigenvector e2 between the two operators.
  Matrix b = Matrix::Zero(3, 3);
  b.topLeftCorner(2, 2) = mats::pauli_x();
  b(2, 2) = 5.0;
  const auto a3 = HermitianOperator::diagonal({1, 2, 3});
  const HermitianOperator b3(b);
  EXPECT_NEAR(partovi_bound(a3, b3, SpectrumPartition::singletons(a3), SpectrumPartition::singletons(b3)), 0.0,
              1e-12);
  EXPECT_NEAR(partovi_norm(kZ, kX, SpectrumPartition::whole(kZ), ex), 2.0, 1e-12);
  EXPECT_NEAR(partovi_bound(kZ, kX, SpectrumPartition::whole(kZ), ex), 0.0, 1e-12);
}

TEST(MinEntropySum, CommutingPairReachesZero) {
  const auto a = HermitianOperator::diagonal({1, 2, 3});
  const auto b = HermitianOperator::diagonal({4, 4, 7});
  const auto r = min_entropy_sum(a, b, SpectrumPartition::singletons(a), SpectrumPartition::singletons(b),
                                 quick_config());
  EXPECT_LE(r.infimum, 1e-6);
  EXPECT_LE(hilbert::dispersion(r.argmin, a), 1e-5);
  EXPECT_LE(hilbert::dispersion(r.argmin, b), 1e-5);
}

TEST(MinEntropySum, PauliPairMatchesGridOracle) {
  const double grid = oracles::pauli_zx_grid_minimum(720, 720);
  EXPECT_NEAR(grid, std::log(2.0), 1e-12);
  const auto r = min_entropy_sum(kZ, kX, SpectrumPartition::singletons(kZ), SpectrumPartition::singletons(kX));
  EXPECT_NEAR(r.infimum, grid, 1e-4);
  EXPECT_GE(r.infimum, std::log(2.0) - 1e-9);
  EXPECT_EQ(r.evidence.restarts, 32);
}

TEST(MinEntropySum, SingleCellPartitionsGiveZero) {
  Rng rng(101);
  const HermitianOperator a(fixtures::random_hermitian(rng, 3));
  const HermitianOperator b(fixtures::random_hermitian(rng, 3));
  const auto r = min_entropy_sum(a, b, SpectrumPartition::whole(a), SpectrumPartition::whole(b), quick_config());
  EXPECT_EQ(r.infimum, 0.0);
}

TEST(MinEntropySum, ConfigValidation) {
  OptimizerConfig bad;
  bad.restarts = 0;
  const auto e = SpectrumPartition::singletons(kZ);
  EXPECT_THROW(min_entropy_sum(kZ, kX, e, SpectrumPartition::singletons(kX), bad), ArgumentError);
}

TEST(MinEntropySum, SerialAndParallelAgree) {
  Rng rng(103);
  const HermitianOperator a(fixtures::random_hermitian(rng, 3));
  const HermitianOperator b(fixtures::random_hermitian(rng, 3));
  auto cfg = quick_config(5);
  const auto serial = min_entropy_sum(a, b, SpectrumPartition::singletons(a), SpectrumPartition::singletons(b), cfg);
  cfg.parallel = true;
  const auto parallel = min_entropy_sum(a, b, SpectrumPartition::singletons(a), SpectrumPartition::singletons(b), cfg);
  EXPECT_EQ(serial.infimum, parallel.infimum);
  EXPECT_EQ(serial.evidence.best_restart, parallel.evidence.best_restart);
  EXPECT_EQ(serial.argmin.vector(), parallel.argmin.vector());
}

TEST(Certify, Examples) {
  const auto a = HermitianOperator::diagonal({1, 2, 3});
  const auto b = HermitianOperator::diagonal({3, 1, 2});
  const auto c = certify_noncommutativity(a, b, SpectrumPartition::singletons(a), SpectrumPartition::singletons(b),
                                          quick_config());
  EXPECT_EQ(c.verdict, Verdict::kInconclusive);
  EXPECT_NEAR(c.maassen_uffink, 0.0, 1e-12);
  EXPECT_NEAR(c.partovi, 0.0, 1e-12);
  EXPECT_EQ(c.commutator_norm, 0.0);

  const auto d6 = classical::Distribution::uniform({1, 2, 3, 4, 5, 6});
  const auto pair = construct::build_pair(d6, d6, mats::fourier(6));
  const auto f = certify_noncommutativity(pair.t_x, pair.t_y, SpectrumPartition::singletons(pair.t_x),
                                          SpectrumPartition::singletons(pair.t_y), quick_config(), "T_X", "T_Y");
  EXPECT_EQ(f.verdict, Verdict::kNoncommuting);
  EXPECT_NEAR(f.maassen_uffink, std::log(6.0), 1e-9);
  EXPECT_GT(f.commutator_norm, 1e-9);
  EXPECT_TRUE(f.consistent);

  // Coarsest partitions: no relation, although [Z, X] != 0.
  const auto p = certify_noncommutativity(kZ, kX, SpectrumPartition::whole(kZ), SpectrumPartition::whole(kX),
                                          quick_config());
  EXPECT_EQ(p.verdict, Verdict::kInconclusive);
  EXPECT_NEAR(p.best_bound(), 0.0, 1e-12);
  EXPECT_NEAR(p.commutator_norm, 2.0, 1e-12);
}

TEST(EurProperties, Concavity) {
  Rng rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 2 + trial % 4;
    const HermitianOperator a(fixtures::random_hermitian(rng, d));
    const auto part = random_partition(rng, a, 3);
    const auto r1 = fixtures::random_density(rng, d, 1 + trial % 2);
    const auto r2 = fixtures::random_density(rng, d);
    const double lambda = rng.uniform(0.01, 0.99);
    const DensityOperator mix(lambda * r1.matrix() + (1 - lambda) * r2.matrix());
    EXPECT_GE(epsilon_entropy(mix, a, part),
              lambda * epsilon_entropy(r1, a, part) + (1 - lambda) * epsilon_entropy(r2, a, part) - 1e-10);
  }
}

TEST(EurProperties, CoarseningMonotonicity) {
  Rng rng(109);
  for (int trial = 0; trial < 100; ++trial) {
    const HermitianOperator a(fixtures::random_hermitian(rng, 5));
    const auto fine = random_partition(rng, a, 5);
    const auto coarse = random_coarsening(rng, fine);
    ASSERT_TRUE(is_finer(fine, coarse));
    const auto psi = fixtures::random_pure(rng, 5);
    EXPECT_GE(epsilon_entropy(psi, a, fine), epsilon_entropy(psi, a, coarse) - 1e-12);
  }
}

TEST(EurProperties, MixedStatesDoNotBeatPureInfimum) {
  const auto ez = SpectrumPartition::singletons(kZ);
  const auto ex = SpectrumPartition::singletons(kX);
  const double pure = min_entropy_sum(kZ, kX, ez, ex, quick_config()).infimum;
  double mixed_min = std::numeric_limits<double>::infinity();
  const int n = 24;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      for (int k = 0; k <= n; ++k) {
        const double rx = -1 + 2.0 * i / n, ry = -1 + 2.0 * j / n, rz = -1 + 2.0 * k / n;
        if (rx * rx + ry * ry + rz * rz > 1.0) continue;
        const DensityOperator rho(
            (Matrix::Identity(2, 2) + rx * mats::pauli_x() + ry * mats::pauli_y() + rz * mats::pauli_z()) / 2.0);
        mixed_min = std::min(mixed_min, epsilon_entropy(rho, kZ, ez) + epsilon_entropy(rho, kX, ex));
      }
    }
  }
  EXPECT_GE(mixed_min, pure - 1e-6);
}

TEST(EurProperties, RefinementPersistence) {
  Rng rng(113);
  int certified = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const HermitianOperator a(fixtures::random_hermitian(rng, 4));
    const HermitianOperator b(fixtures::random_hermitian(rng, 4));
    const auto eps_fine = random_partition(rng, a, 4);
    const auto delta_fine = random_partition(rng, b, 4);
    const auto eps = random_coarsening(rng, eps_fine);
    const auto delta = random_coarsening(rng, delta_fine);
    ASSERT_TRUE(is_finer(eps_fine, eps) && is_finer(delta_fine, delta));

    const double coarse_mu = maassen_uffink_bound(a, b, eps, delta);
    const double fine_mu = maassen_uffink_bound(a, b, eps_fine, delta_fine);
    // Cell projectors only shrink under refinement, so the overlap bound grows.
    EXPECT_GE(fine_mu, coarse_mu - 1e-12);
    const double fine_p = partovi_bound(a, b, eps_fine, delta_fine);
    EXPECT_GE(fine_p, 0.0);
    if (partovi_bound(a, b, eps, delta) > kCertificationThreshold) {
      ++certified;
      EXPECT_GT(std::max(fine_mu, fine_p), kCertificationThreshold);
    }
  }
  EXPECT_GT(certified, 0);
}

TEST(EurProperties, SoundnessAndOptimizerNeverUndercuts) {
  Rng rng(127);
  auto cfg = quick_config();
  cfg.restarts = 4;
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    HermitianOperator a = HermitianOperator::zero(d), b = HermitianOperator::zero(d);
    if (trial % 2 == 0) {
      std::tie(a, b) = fixtures::random_commuting_pair(rng, d);
    } else {
      a = HermitianOperator(fixtures::random_hermitian(rng, d));
      b = HermitianOperator(fixtures::random_hermitian(rng, d));
    }
    const auto eps = SpectrumPartition::singletons(a);
    const auto delta = SpectrumPartition::singletons(b);
    const auto cert = certify_noncommutativity(a, b, eps, delta, cfg);
    if (cert.verdict == Verdict::kNoncommuting) {
      EXPECT_GT(cert.commutator_norm, 1e-9);
    }
    if (trial % 2 == 0) {
      EXPECT_EQ(cert.verdict, Verdict::kInconclusive);
    }
    EXPECT_GE(cert.numeric_infimum, cert.best_bound() - 1e-4);
    EXPECT_GE(cert.numeric_infimum, -1e-9);
    EXPECT_GE(cert.partovi_s, 1.0 - 1e-12);
    EXPECT_LE(cert.partovi_s, 2.0 + 1e-12);
  }
}
