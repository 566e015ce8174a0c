#include "test_util.hpp"

namespace qred {
namespace {

using test::near;

double d(const PositiveOperator& a, const PositiveOperator& b) { return relative_entropy(a, b).value(); }
double s(const PositiveOperator& a) { return von_neumann_entropy(a).value(); }

Ensemble random_ensemble(Rng& rng, std::size_t k, std::size_t dim) {
  const auto w = random_weights(rng, k);
  std::vector<Ensemble::Item> items;
  for (double x : w) items.push_back({x, random_state(rng, dim)});
  return Ensemble(items);
}

TEST(Delta, UnitaryChannelGivesZero) {
  Rng rng(61);
  const auto phi = channels::unitary(haar_unitary(rng, 3));
  const auto r = delta(phi, random_state(rng, 3), random_state(rng, 3));
  EXPECT_FALSE(r.out_of_domain());
  EXPECT_TRUE(near(r.value(), 0.0, 1e-10));
}

TEST(Delta, TraceToScalarGivesFullDivergence) {
  Rng rng(62);
  const auto rho = random_state(rng, 3);
  const auto sigma = random_state(rng, 3);
  const auto r = delta(channels::partial_trace({3}, std::vector<std::size_t>{}), rho, sigma);
  EXPECT_TRUE(near(r.value(), d(rho, sigma), 1e-10));
}

TEST(Delta, DephasingOnDiagonalPairsGivesZero) {
  Rng rng(63);
  const auto r = delta(channels::dephasing(4), random_diagonal_state(rng, 4), random_diagonal_state(rng, 4));
  EXPECT_TRUE(near(r.value(), 0.0, 1e-10));
}

TEST(Delta, InfiniteInputWithFiniteOutputIsInfinite) {
  const auto r = delta(channels::depolarizing(1.0), test::plus_state(), PositiveOperator::diagonal({1.0, 0.0}));
  EXPECT_FALSE(r.out_of_domain());
  EXPECT_TRUE(r.value().is_infinite());
}

TEST(Delta, InfiniteOutputIsOutOfDomain) {
  const auto r = delta(channels::identity({2}), PositiveOperator::diagonal({0.5, 0.5}), PositiveOperator::diagonal({1.0, 0.0}));
  EXPECT_TRUE(r.out_of_domain());
  EXPECT_THROW(r.value(), std::domain_error);
}

TEST(Delta, NonnegativeForRandomChannels) {
  Rng rng(64);
  for (int trial = 0; trial < 50; ++trial) {
    const auto phi = random_channel(rng, 3, 2, 2);
    EXPECT_GE(delta(phi, random_positive(rng, Dims{3}), random_positive(rng, Dims{3})).value().value(), -1e-9);
  }
}

TEST(Identities, DonaldDegenerateMixtureIsExact) {
  Rng rng(65);
  const auto c = donald_identity(random_state(rng, 3), random_state(rng, 3), random_state(rng, 3), 1.0);
  EXPECT_FALSE(c.skipped);
  EXPECT_LT(c.residual, 1e-12);
}

TEST(Identities, DonaldOnRandomQutritTriples) {
  Rng rng(66);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_state(rng, 3), sigma = random_state(rng, 3), omega = random_state(rng, 3);
    const auto c = donald_identity(rho, sigma, omega, 0.37);
    EXPECT_LT(c.residual, 1e-9);
    // Oracle: assemble both sides from plain relative entropies.
    const PositiveOperator m = 0.37 * rho + 0.63 * sigma;
    const double lhs = 0.37 * d(rho, omega) + 0.63 * d(sigma, omega);
    const double rhs = 0.37 * d(rho, m) + 0.63 * d(sigma, m) + d(m, omega);
    EXPECT_NEAR(lhs, rhs, 1e-9);
  }
}

TEST(Identities, PinchingDecompositionOnQubits) {
  Rng rng(67);
  const Projector p(HermitianOperator::diagonal({1.0, 0.0}));
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = pinching_decomposition(random_state(rng, 2), random_diagonal_state(rng, 2), p);
    EXPECT_LT(c.residual, 1e-9);
  }
  EXPECT_THROW(pinching_decomposition(random_state(rng, 2), random_state(rng, 2), p), std::invalid_argument);
}

TEST(Identities, ReDecompositionAndWeightedSum) {
  Rng rng(68);
  for (int trial = 0; trial < 30; ++trial) {
    const auto phi = random_channel(rng, 3, 2, 2);
    EXPECT_LT(re_decomposition(phi, random_positive(rng, Dims{3}), random_positive(rng, Dims{3})).residual, 1e-9);
    EXPECT_LT(weighted_sum_identity(random_ensemble(rng, 3, 3), random_ensemble(rng, 3, 3)).residual, 1e-9);
  }
}

TEST(Identities, MultipartiteChainOnFourQubits) {
  Rng rng(69);
  const std::vector<Part> parts{{0}, {1}, {2}, {3}};
  const std::vector<std::vector<std::size_t>> groups{{0, 2}, {1}, {3}};
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = multipartite_chain(random_state(rng, Dims{2, 2, 2, 2}), parts, groups);
    EXPECT_LT(c.residual, 1e-8);
  }
  const std::vector<std::vector<std::size_t>> bad{{0, 1}, {1, 2, 3}};
  EXPECT_THROW(multipartite_chain(random_state(rng, Dims{2, 2, 2, 2}), parts, bad), std::invalid_argument);
}

TEST(Identities, SumDifferenceProofSteps) {
  Rng rng(70);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_positive(rng, Dims{3}), sigma = random_positive(rng, Dims{3});
    const auto eta = random_positive(rng, Dims{3}), theta = random_positive(rng, Dims{3});
    EXPECT_LT(sf1_proof_one(rho, sigma, theta).residual, 1e-9);
    EXPECT_LT(sf1_proof_two(rho, eta, sigma).residual, 1e-9);
    const auto gap = sf_gap(SfKind::sf1, rho, sigma, eta, theta).value().value();
    EXPECT_NEAR(gap, sf1_via_proof(rho, sigma, eta, theta).value(), 1e-8);
    EXPECT_GE(gap, -theta.trace() - sigma.trace() - 1e-9);
  }
}

TEST(SfGap, ZeroPerturbationsGiveZero) {
  Rng rng(71);
  const auto rho = random_positive(rng, Dims{2}), sigma = random_positive(rng, Dims{2});
  const auto zero = PositiveOperator::zero({2});
  EXPECT_TRUE(near(sf_gap(SfKind::sf1, rho, sigma, zero, zero).value(), 0.0, 1e-12));
  EXPECT_TRUE(near(sf_gap(SfKind::sf2, rho, sigma, zero, zero).value(), 0.0, 1e-12));
}

TEST(CondRelEntropy, EqualStatesAndProductCase) {
  Rng rng(72);
  const auto rho = random_state(rng, Dims{2, 3});
  EXPECT_TRUE(near(cond_rel_entropy(rho, rho, {0}).value(), 0.0, 1e-10));
  const auto ra = random_state(rng, 2), sa = random_state(rng, 2), tau = random_state(rng, 3);
  EXPECT_TRUE(near(cond_rel_entropy(tensor(ra, tau), tensor(sa, tau), {0}).value(), d(ra, sa), 1e-9));
}

TEST(CondRelEntropy, NonnegativeOnRandomPairs) {
  Rng rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = cond_rel_entropy(random_state(rng, Dims{2, 2}), random_state(rng, Dims{2, 2}), {0});
    EXPECT_GE(v.value().value(), -1e-9);
  }
}

TEST(EntropicDisturbance, UnitaryAndFullDepolarizing) {
  Rng rng(74);
  const auto e = random_ensemble(rng, 3, 2);
  EXPECT_TRUE(near(entropic_disturbance(e, channels::unitary(haar_unitary(rng, 2))), 0.0, 1e-10));
  EXPECT_TRUE(near(entropic_disturbance(e, channels::depolarizing(1.0)), holevo_chi(e).value(), 1e-10));
}

TEST(EntropicDisturbance, QuantumClassicalCrossCheck) {
  Rng rng(75);
  const auto phi = channels::amplitude_damping(0.4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto e = random_ensemble(rng, 3, 2);
    const double direct = entropic_disturbance(e, phi).value();
    EXPECT_GE(direct, -1e-9);
    EXPECT_NEAR(direct, entropic_disturbance_qc(e, phi).value().value(), 1e-9);
  }
}

TEST(ChannelMutualInfo, IdentityAndReplacer) {
  const auto mixed = PositiveOperator::maximally_mixed({2});
  EXPECT_TRUE(near(channel_mutual_info(channels::identity({2}), mixed), 2.0 * std::log(2.0), 1e-9));
  Rng rng(76);
  const auto replace = channels::replacer(random_state(rng, 3), {2});
  EXPECT_TRUE(near(channel_mutual_info(replace, random_state(rng, 2)), 0.0, 1e-9));
}

TEST(ChannelMutualInfo, EntropicRouteAgrees) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = random_channel(rng, 2, 3, 2);
    const auto rho = random_state(rng, 2);
    EXPECT_NEAR(channel_mutual_info(phi, rho).value(), channel_mutual_info_entropic(phi, rho).value(), 1e-8);
  }
}

TEST(CoherentInfo, IdentityGivesEntropy) {
  Rng rng(78);
  const auto rho = random_state(rng, 3);
  EXPECT_TRUE(near(coherent_info(channels::identity({3}), rho), s(rho), 1e-9));
}

TEST(CoherentInfo, DegradableAmplitudeDamping) {
  Rng rng(79);
  const double t = 0.3;
  const auto phi = channels::amplitude_damping(t);
  const auto theta = amplitude_damping_degrading_map(t);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_state(rng, 2);
    EXPECT_NEAR(coherent_info(phi, rho).value(), coherent_info_degradable(phi, theta, rho).value(), 1e-8);
  }
  EXPECT_THROW(amplitude_damping_degrading_map(0.7), std::invalid_argument);
}

TEST(CoherentInfo, FullDepolarizingOnMaximallyMixed) {
  const auto v = coherent_info(channels::depolarizing(1.0), PositiveOperator::maximally_mixed({2}));
  EXPECT_TRUE(near(v, std::log(2.0) - 2.0 * std::log(2.0), 1e-9));
}

TEST(Discord, ProductBellAndRandom) {
  Rng rng(80);
  const auto povm = channels::computational_povm(2);
  const std::span<const PositiveOperator> m(povm);
  EXPECT_TRUE(near(discord_unoptimized(tensor(random_state(rng, 2), random_state(rng, 2)), m).value(), 0.0, 1e-9));
  EXPECT_TRUE(near(discord_unoptimized(test::bell_state(), m).value(), std::log(2.0), 1e-9));
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_state(rng, Dims{2, 2});
    const auto r = random_povm(rng, 2, 3);
    const double v = discord_unoptimized(rho, std::span<const PositiveOperator>(r)).value().value();
    EXPECT_GE(v, -1e-9);
    EXPECT_NEAR(v, discord_entropic(rho, std::span<const PositiveOperator>(r)).value(), 1e-8);
  }
}

TEST(EntropyGainPinching, Examples) {
  const auto ps = channels::computational_projectors(2);
  const std::span<const Projector> p(ps);
  EXPECT_TRUE(near(entropy_gain_pinching(PositiveOperator::diagonal({0.3, 0.7}), p), 0.0, 1e-12));
  EXPECT_TRUE(near(entropy_gain_pinching(test::plus_state(), p), std::log(2.0), 1e-12));
  Rng rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_state(rng, 2);
    const auto phi = channels::pinching(p);
    EXPECT_NEAR(entropy_gain_pinching(rho, p, random_diagonal_state(rng, 2)).value(), d(rho, phi(rho)), 1e-9);
  }
  EXPECT_THROW(entropy_gain_pinching(test::plus_state(), p, test::plus_state()), std::invalid_argument);
}

TEST(ChainRules, UnitarySecondChannel) {
  Rng rng(82);
  const auto phi = random_channel(rng, 2, 2, 2);
  const auto rho = random_state(rng, 2);
  const auto g = chain_rule_gaps(phi, channels::unitary(haar_unitary(rng, 2)), rho);
  EXPECT_TRUE(near(g.gap1, 0.0, 1e-9));
  // I(U, Phi rho) = 2 S(Phi rho), so the second gap is what Phi already lost.
  const double expected = 2.0 * s(phi(rho)) - channel_mutual_info(phi, rho).value();
  EXPECT_TRUE(near(g.gap2, expected, 1e-9));
}

TEST(ChainRules, FullyDepolarizingSecondChannel) {
  Rng rng(83);
  const auto phi = random_channel(rng, 2, 2, 2);
  const auto rho = random_state(rng, 2);
  const auto g = chain_rule_gaps(phi, channels::depolarizing(1.0), rho);
  EXPECT_TRUE(near(g.gap2, 0.0, 1e-9));
  EXPECT_TRUE(near(g.gap1, channel_mutual_info(phi, rho).value(), 1e-9));
}

TEST(ChainRules, DeltaFormsAgreeAndGapsAreNonnegative) {
  Rng rng(84);
  for (int trial = 0; trial < 30; ++trial) {
    const auto phi = random_channel(rng, 2, 2, 2);
    const auto psi = random_channel(rng, 2, 2, 2);
    const auto g = chain_rule_gaps(phi, psi, random_state(rng, 2));
    EXPECT_GE(g.gap1.value(), -1e-9);
    EXPECT_GE(g.gap2.value(), -1e-9);
    EXPECT_NEAR(g.gap1.value(), g.gap1_delta.value(), 1e-8);
    EXPECT_NEAR(g.gap2.value(), g.gap2_delta.value(), 1e-8);
  }
}

TEST(ConvexityModulus, IdenticalItemsAndOrthogonalBlocks) {
  Rng rng(85);
  const auto rho = random_state(rng, 3), sigma = random_state(rng, 3);
  const Ensemble same1({{0.4, rho}, {0.6, rho}}), same2({{0.4, sigma}, {0.6, sigma}});
  EXPECT_TRUE(near(convexity_modulus(same1, same2, WeightMode::shared).value(), 0.0, 1e-10));

  // Items supported on orthogonal blocks: joint convexity is an equality.
  auto block = [&](bool upper) {
    const auto a = random_state(rng, 2);
    Matrix m = Matrix::Zero(4, 4);
    m.block(upper ? 0 : 2, upper ? 0 : 2, 2, 2) = a.matrix();
    return PositiveOperator(HermitianOperator(m));
  };
  const Ensemble e1({{0.3, block(true)}, {0.7, block(false)}});
  const Ensemble e2({{0.5, block(true)}, {0.5, block(false)}});
  EXPECT_TRUE(near(convexity_modulus(e1, e2, WeightMode::shared).value(), 0.0, 1e-9));
  EXPECT_TRUE(near(convexity_modulus(e1, e2, WeightMode::separate).value(), 0.0, 1e-9));
}

TEST(ConvexityModulus, NonnegativeOnRandomEnsembles) {
  Rng rng(86);
  for (int trial = 0; trial < 30; ++trial) {
    const auto e1 = random_ensemble(rng, 4, 3), e2 = random_ensemble(rng, 4, 3);
    EXPECT_GE(convexity_modulus(e1, e2, WeightMode::shared).value().value(), -1e-9);
    EXPECT_GE(convexity_modulus(e1, e2, WeightMode::separate).value().value(), -1e-9);
  }
}

TEST(InformationGain, TrivialAndComputational) {
  const std::vector<PositiveOperator> trivial{PositiveOperator::identity({2})};
  Rng rng(87);
  EXPECT_TRUE(near(information_gain(trivial, random_state(rng, 2)), 0.0, 1e-10));
  const auto comp = channels::computational_povm(2);
  EXPECT_TRUE(near(information_gain(comp, PositiveOperator::maximally_mixed({2})), std::log(2.0), 1e-10));
}

TEST(InformationGain, LocalGapOnBellAndRandomStates) {
  const auto comp = channels::computational_povm(2);
  const auto bell = information_gain_local(comp, test::bell_state());
  EXPECT_GE(bell.gap.value(), -1e-9);
  EXPECT_NEAR(bell.gap.value(), bell.gap_delta.value(), 1e-8);
  Rng rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    const auto povm = random_povm(rng, 2, 3);
    const auto r = information_gain_local(povm, random_state(rng, Dims{2, 3}));
    EXPECT_GE(r.gap.value(), -1e-9);
    EXPECT_NEAR(r.gap.value(), r.gap_delta.value(), 1e-8);
  }
}

TEST(IdentityNames, RoundTrip) {
  for (auto name : identity_names) {
    const auto id = parse_identity_id(name);
    ASSERT_TRUE(id.has_value());
    EXPECT_EQ(to_string(*id), name);
  }
  EXPECT_FALSE(parse_identity_id("nonsense").has_value());
}

}  // namespace
}  // namespace qred
