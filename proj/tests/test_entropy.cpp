#include "test_util.hpp"

namespace qred {
namespace {

using test::near;

TEST(VonNeumannEntropy, MaximallyMixed) {
  for (std::size_t d : {2u, 3u, 5u}) EXPECT_TRUE(near(von_neumann_entropy(PositiveOperator::maximally_mixed({d})), std::log(d), 1e-12));
}

TEST(VonNeumannEntropy, HomogeneousExtensionOfScaledPureState) {
  EXPECT_TRUE(near(von_neumann_entropy(PositiveOperator::diagonal({0.5, 0.0})), 0.0, 1e-15));
  EXPECT_TRUE(near(von_neumann_entropy(PositiveOperator::zero({3})), 0.0, 0.0));
}

TEST(VonNeumannEntropy, DiagonalClosedForm) {
  const double oracle = test::shannon({0.75, 0.25});
  EXPECT_TRUE(near(von_neumann_entropy(PositiveOperator::diagonal({0.75, 0.25})), oracle, 1e-12));
  EXPECT_TRUE(near(von_neumann_entropy(PositiveOperator::diagonal({0.75, 0.25})), 0.562335, 1e-6));
}

TEST(RelativeEntropy, SelfDivergenceIsZero) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_positive(rng, Dims{3});
    EXPECT_TRUE(near(relative_entropy(rho, rho), 0.0, 1e-10));
  }
}

TEST(RelativeEntropy, ZeroFirstArgumentGivesTraceOfSecond) {
  Rng rng(22);
  const auto sigma = random_positive(rng, Dims{3});
  EXPECT_TRUE(near(relative_entropy(PositiveOperator::zero({3}), sigma), sigma.trace(), 1e-12));
}

TEST(RelativeEntropy, ClassicalClosedForm) {
  const double oracle = test::kl_oracle({0.5, 0.5}, {0.75, 0.25});
  const auto value = relative_entropy(PositiveOperator::diagonal({0.5, 0.5}), PositiveOperator::diagonal({0.75, 0.25}));
  EXPECT_TRUE(near(value, oracle, 1e-12));
  EXPECT_TRUE(near(value, 0.5 * std::log(4.0 / 3.0), 1e-12));
  EXPECT_TRUE(near(value, 0.143841, 1e-6));
}

TEST(RelativeEntropy, SupportViolationIsInfinite) {
  EXPECT_TRUE(relative_entropy(PositiveOperator::diagonal({0.75, 0.25}), PositiveOperator::diagonal({1.0, 0.0})).is_infinite());
  EXPECT_TRUE(relative_entropy(test::plus_state(), PositiveOperator::diagonal({1.0, 0.0})).is_infinite());
  // Contained support stays finite.
  EXPECT_FALSE(relative_entropy(PositiveOperator::diagonal({1.0, 0.0}), PositiveOperator::diagonal({0.5, 0.5})).is_infinite());
}

TEST(RelativeEntropy, LindbladExtensionOnUnnormalizedPairs) {
  // D(a rho||b sigma) = a D(rho||sigma) + a ln(a/b) + b - a for states.
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_state(rng, 3);
    const auto sigma = random_state(rng, 3);
    const double a = 0.3 + rng.uniform(), b = 0.3 + rng.uniform();
    const double base = relative_entropy(rho, sigma).value();
    EXPECT_TRUE(near(relative_entropy(a * rho, b * sigma), a * base + a * std::log(a / b) + b - a, 1e-10));
  }
}

TEST(RelativeEntropy, AgreesWithCrossEntropyRoute) {
  Rng rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_positive(rng, Dims{3});
    const auto sigma = random_positive(rng, Dims{3});
    EXPECT_TRUE(near(relative_entropy(rho, sigma), relative_entropy_via_cross_entropy(rho, sigma).value(), 1e-9));
  }
}

TEST(KlDivergence, Examples) {
  const std::vector<double> p{0.2, 0.8};
  EXPECT_TRUE(near(kl_divergence(p, p), 0.0, 0.0));
  EXPECT_TRUE(near(kl_divergence(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.5}), std::log(2.0), 1e-15));
  EXPECT_TRUE(kl_divergence(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}).is_infinite());
  EXPECT_THROW(kl_divergence(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}), std::invalid_argument);
}

TEST(HolevoChi, IdenticalStatesGiveZero) {
  Rng rng(25);
  const auto rho = random_state(rng, 3);
  const Ensemble e({{0.3, rho}, {0.7, rho}});
  EXPECT_TRUE(near(holevo_chi(e), 0.0, 1e-10));
}

TEST(HolevoChi, ClassicalOrthogonalPair) {
  const Ensemble e({{0.5, PositiveOperator::diagonal({1.0, 0.0})}, {0.5, PositiveOperator::diagonal({0.0, 1.0})}});
  EXPECT_TRUE(near(holevo_chi(e), std::log(2.0), 1e-12));
}

TEST(HolevoChi, DualFormulaAndBoundsOnRandomEnsembles) {
  Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = random_weights(rng, 3);
    std::vector<Ensemble::Item> items;
    for (double x : w) items.push_back({x, random_state(rng, 2)});
    const Ensemble e(items);
    const double chi = holevo_chi(e).value();
    EXPECT_NEAR(chi, holevo_chi_entropic(e).value(), 1e-9);
    EXPECT_LE(chi, std::log(3.0) + 1e-9);
    EXPECT_LE(chi, von_neumann_entropy(e.average()).value() + 1e-9);
  }
}

TEST(Ensemble, ValidatesWeightsAndDims) {
  const auto a = PositiveOperator::diagonal({1.0, 0.0});
  EXPECT_THROW(Ensemble({{0.4, a}, {0.4, a}}), std::invalid_argument);
  EXPECT_THROW(Ensemble({{-0.1, a}, {1.1, a}}), std::invalid_argument);
  EXPECT_THROW(Ensemble({{0.5, a}, {0.5, PositiveOperator::maximally_mixed({3})}}), std::invalid_argument);
}

TEST(GibbsState, QubitClosedForm) {
  const EnergyObservable h(HermitianOperator::diagonal({0.0, 1.0}));
  const auto g = gibbs_state(h, std::log(2.0));
  EXPECT_TRUE(test::matrix_near(g.matrix(), HermitianOperator::diagonal({2.0 / 3.0, 1.0 / 3.0}).matrix(), 1e-12));
}

TEST(GibbsState, LargeBetaApproachesGroundState) {
  const EnergyObservable h(HermitianOperator::diagonal({0.0, 1.0}));
  const auto g = gibbs_state(h, 60.0);
  EXPECT_NEAR(g.matrix()(0, 0).real(), 1.0, 1e-12);
  EXPECT_THROW(gibbs_state(h, 0.0), std::invalid_argument);
}

TEST(GibbsState, ZeroHamiltonianGivesMaximallyMixed) {
  const EnergyObservable h(HermitianOperator::zero({3}));
  EXPECT_TRUE(test::matrix_near(gibbs_state(h, 1.3).matrix(), PositiveOperator::maximally_mixed({3}).matrix(), 1e-15));
}

TEST(MeanEnergy, Examples) {
  const EnergyObservable h(HermitianOperator::diagonal({0.0, 1.0}));
  EXPECT_TRUE(near(mean_energy(h, PositiveOperator::diagonal({1.0, 0.0})), 0.0, 0.0));
  EXPECT_TRUE(near(mean_energy(h, gibbs_state(h, std::log(2.0))), 1.0 / 3.0, 1e-12));
  EXPECT_TRUE(near(mean_energy(h, PositiveOperator::maximally_mixed({2})), 0.5, 1e-15));
}

TEST(FreeEnergy, GibbsStateMinimizes) {
  const EnergyObservable h(HermitianOperator::diagonal({0.0, 1.0, 2.5}));
  const double beta = 0.8;
  const auto g = gibbs_state(h, beta);
  EXPECT_TRUE(near(free_energy(h, beta, g), -h.log_partition(beta) / beta, 1e-12));
}

TEST(FreeEnergy, GroundStateOfQubit) {
  const EnergyObservable h(HermitianOperator::diagonal({0.0, 1.0}));
  const auto f = free_energy(h, std::log(2.0), PositiveOperator::diagonal({1.0, 0.0}));
  EXPECT_TRUE(near(f, 0.0, 1e-12));
  EXPECT_TRUE(near(free_energy_entropic(h, std::log(2.0), PositiveOperator::diagonal({1.0, 0.0})), 0.0, 1e-12));
}

TEST(FreeEnergy, DivergenceRelationOnRandomStates) {
  Rng rng(27);
  const EnergyObservable h(HermitianOperator::diagonal({0.0, 0.7, 1.9}));
  const double beta = 1.4;
  const auto g = gibbs_state(h, beta);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_state(rng, 3);
    const double d = relative_entropy(rho, g).value();
    const double gap = free_energy(h, beta, rho).value() - free_energy(h, beta, g).value();
    EXPECT_NEAR(d, beta * gap, 1e-9);
    EXPECT_NEAR(free_energy(h, beta, rho).value(), free_energy_entropic(h, beta, rho).value(), 1e-9);
  }
}

TEST(MutualInformation, ProductStateIsZero) {
  Rng rng(28);
  const auto rho = tensor(random_state(rng, 2), random_state(rng, 3));
  EXPECT_TRUE(near(multipartite_mutual_info(rho, {{0}, {1}}), 0.0, 1e-10));
}

TEST(MutualInformation, BellAndGhz) {
  EXPECT_TRUE(near(multipartite_mutual_info(test::bell_state(), {{0}, {1}}), 2.0 * std::log(2.0), 1e-9));
  EXPECT_TRUE(near(multipartite_mutual_info(test::ghz_state(), {{0}, {1}, {2}}), 3.0 * std::log(2.0), 1e-9));
}

TEST(MutualInformation, DivergenceAndEntropyRoutesAgree) {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_state(rng, Dims{2, 2, 2});
    const std::vector<Part> parts{{0}, {1, 2}};
    EXPECT_TRUE(near(multipartite_mutual_info(rho, parts), mutual_info_entropic(rho, parts).value(), 1e-9));
  }
  EXPECT_THROW(multipartite_mutual_info(test::ghz_state(), {{0}, {0, 1}}), std::invalid_argument);
}

TEST(Qcmi, ProductAcrossACutIsZero) {
  Rng rng(30);
  const auto rho = tensor(random_state(rng, 2), random_state(rng, Dims{2, 2}));
  EXPECT_TRUE(near(qcmi(rho, {0}, {1}, {2}), 0.0, 1e-9));
}

TEST(Qcmi, GhzIsLnTwo) {
  EXPECT_TRUE(near(qcmi(test::ghz_state(), {0}, {1}, {2}), std::log(2.0), 1e-8));
}

TEST(Qcmi, StrongSubadditivityAndEntropyFormula) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_state(rng, Dims{2, 2, 2});
    const double v = qcmi(rho, {0}, {1}, {2}).value();
    EXPECT_GE(v, -1e-9);
    auto s = [&](std::initializer_list<std::size_t> keep) { return von_neumann_entropy(partial_trace(rho, keep)).value(); };
    const double oracle = s({0}) + s({1, 2}) - s({0, 1, 2}) - (s({0}) + s({2}) - s({0, 2}));
    EXPECT_NEAR(v, oracle, 1e-8);
  }
}

TEST(EntropyInequalities, MixtureUpperBound) {
  Rng rng(32);
  for (std::size_t d : {2u, 3u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = random_state(rng, d);
      const auto sigma = random_state(rng, d);
      for (int k = 1; k <= 9; ++k) {
        const double p = 0.1 * k;
        const double lhs = von_neumann_entropy(p * rho + (1 - p) * sigma).value();
        const double rhs = p * von_neumann_entropy(rho).value() + (1 - p) * von_neumann_entropy(sigma).value() +
                           binary_entropy(p);
        EXPECT_LE(lhs, rhs + 1e-9);
      }
    }
  }
}

TEST(EntropyInequalities, SumOfPositiveOperators) {
  Rng rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_positive(rng, Dims{3});
    const auto sigma = random_positive(rng, Dims{3});
    const double sr = von_neumann_entropy(rho).value(), ss = von_neumann_entropy(sigma).value();
    const double sum = von_neumann_entropy(rho + sigma).value();
    EXPECT_LE(sr + ss, sum + 1e-9);
    EXPECT_LE(sum, sr + ss + binary_entropy_ext(rho.trace(), sigma.trace()) + 1e-9);
  }
}

}  // namespace
}  // namespace qred
