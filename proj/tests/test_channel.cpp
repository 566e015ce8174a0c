#include "test_util.hpp"

namespace qred {
namespace {

using test::matrix_near;
using test::near;

/// Hermitian operators spanning all d x d matrices over the complex numbers.
std::vector<HermitianOperator> hermitian_basis(std::size_t d) {
  std::vector<HermitianOperator> out;
  const auto n = static_cast<Eigen::Index>(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      Matrix re = Matrix::Zero(n, n);
      re(i, j) += 1.0;
      re(j, i) += 1.0;
      out.emplace_back(re);
      if (i == j) continue;
      Matrix im = Matrix::Zero(n, n);
      im(i, j) = cplx(0.0, 1.0);
      im(j, i) = cplx(0.0, -1.0);
      out.emplace_back(im);
    }
  }
  return out;
}

::testing::AssertionResult same_action(const QuantumOperation& a, const QuantumOperation& b, double tol) {
  for (const auto& x : hermitian_basis(a.in_dim())) {
    const HermitianOperator xd(a.in_dims(), x.matrix());
    auto r = matrix_near(a.apply(xd).matrix(), b.apply(xd).matrix(), tol);
    if (!r) return r;
  }
  return ::testing::AssertionSuccess();
}

TEST(Apply, IdentityChannel) {
  Rng rng(41);
  const auto rho = random_state(rng, 3);
  EXPECT_TRUE(matrix_near(channels::identity({3})(rho).matrix(), rho.matrix(), 0.0));
}

TEST(Apply, FullDepolarizingGivesMaximallyMixed) {
  Rng rng(42);
  const auto out = channels::depolarizing(1.0)(random_state(rng, 2));
  EXPECT_TRUE(matrix_near(out.matrix(), 0.5 * Matrix::Identity(2, 2), 1e-14));
}

TEST(Apply, PinchingRemovesOffDiagonals) {
  const auto out = channels::dephasing(2)(test::plus_state());
  EXPECT_TRUE(matrix_near(out.matrix(), 0.5 * Matrix::Identity(2, 2), 1e-15));
}

TEST(Apply, DimensionMismatchThrows) {
  EXPECT_THROW(channels::identity({2})(PositiveOperator::maximally_mixed({3})), std::invalid_argument);
}

TEST(Validate, AmplitudeDampingIsChannel) {
  const auto r = validate(channels::amplitude_damping(0.3));
  EXPECT_TRUE(r.is_cp);
  EXPECT_TRUE(r.is_trace_nonincreasing);
  EXPECT_TRUE(r.is_channel);
}

TEST(Validate, ScaledIdentityIsOperationNotChannel) {
  const QuantumOperation half({Matrix::Identity(2, 2) / std::sqrt(2.0)}, Dims{2});
  const auto r = validate(half);
  EXPECT_TRUE(r.is_cp);
  EXPECT_TRUE(r.is_trace_nonincreasing);
  EXPECT_FALSE(r.is_channel);
  EXPECT_FALSE(half.is_channel());
}

TEST(Validate, TransposeIsNotCompletelyPositive) {
  const auto c = choi_from_action([](const Matrix& x) -> Matrix { return x.transpose(); }, Dims{2}, Dims{2});
  const auto r = validate(c);
  EXPECT_FALSE(r.is_cp);
  EXPECT_LT(r.min_choi_eigenvalue, -0.1);
  EXPECT_THROW(kraus_from_choi(c), std::invalid_argument);
}

TEST(QuantumOperation, RejectsTraceIncreasingKraus) {
  EXPECT_THROW(QuantumOperation({2.0 * Matrix::Identity(2, 2)}, Dims{2}), std::invalid_argument);
  EXPECT_THROW(QuantumOperation({Matrix::Identity(2, 3)}, Dims{2}), std::invalid_argument);
}

TEST(Stinespring, IdentityChannelIsTrivial) {
  const auto s = stinespring(channels::identity({2}));
  EXPECT_EQ(s.env_dim, 1u);
  EXPECT_TRUE(matrix_near(s.v, Matrix::Identity(2, 2), 0.0));
}

TEST(Stinespring, ChannelGivesIsometryAndReconstructs) {
  Rng rng(43);
  const auto phi = random_channel(rng, 2, 2, 3);
  const auto s = stinespring(phi);
  EXPECT_LE(s.env_dim, phi.kraus_count());
  EXPECT_TRUE(matrix_near(s.v.adjoint() * s.v, Matrix::Identity(2, 2), 1e-10));
  for (const auto& x : hermitian_basis(2))
    EXPECT_TRUE(matrix_near(s.apply(x).matrix(), phi.apply(x).matrix(), 1e-10));
}

TEST(Complementary, RejectsOperations) {
  const QuantumOperation half({Matrix::Identity(2, 2) / std::sqrt(2.0)}, Dims{2});
  EXPECT_THROW(complementary(half), std::invalid_argument);
}

TEST(Complementary, DepolarizingOnMaximallyMixed) {
  const auto phi = channels::depolarizing(1.0);
  const auto rho = PositiveOperator::maximally_mixed({2});
  EXPECT_TRUE(near(channel_mutual_info(complementary(phi), rho), 2.0 * std::log(2.0), 1e-8));
}

TEST(Complementary, MutualInformationIdentity) {
  Rng rng(44);
  for (const auto& phi : {channels::amplitude_damping(0.3), channels::identity({2}), random_channel(rng, 2, 3, 2)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto rho = random_state(rng, phi.in_dim());
      const double lhs = channel_mutual_info(complementary(phi), rho).value();
      const double rhs = 2.0 * von_neumann_entropy(rho).value() - channel_mutual_info(phi, rho).value();
      EXPECT_NEAR(lhs, rhs, 1e-8);
    }
  }
}

TEST(Adjoint, IdentityAndUnitary) {
  Rng rng(45);
  const Matrix u = haar_unitary(rng, 3);
  const auto x = HermitianOperator(random_state(rng, 3).matrix());
  EXPECT_TRUE(matrix_near(adjoint(channels::identity({3})).apply(x).matrix(), x.matrix(), 0.0));
  EXPECT_TRUE(matrix_near(adjoint(channels::unitary(u)).apply(x).matrix(), u.adjoint() * x.matrix() * u, 1e-13));
}

TEST(Adjoint, DualityOnRandomPairs) {
  Rng rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = random_channel(rng, 3, 2, 2);
    const auto rho = random_state(rng, 3);
    const auto x = HermitianOperator(Dims{2}, random_state(rng, 2).matrix() - 0.4 * Matrix::Identity(2, 2));
    EXPECT_NEAR(hs_inner(adjoint(phi).apply(x), rho), hs_inner(x, phi(rho)), 1e-10);
  }
}

TEST(Standard, AmplitudeDampingZeroIsIdentity) {
  EXPECT_TRUE(same_action(channels::amplitude_damping(0.0), channels::identity({2}), 0.0));
  EXPECT_THROW(channels::amplitude_damping(1.5), std::invalid_argument);
}

TEST(Standard, PinchingCommutingWithSigmaFixesIt) {
  const auto sigma = PositiveOperator::diagonal({0.5, 0.3, 0.2});
  std::vector<Projector> ps{Projector(HermitianOperator::diagonal({1.0, 1.0, 0.0})),
                            Projector(HermitianOperator::diagonal({0.0, 0.0, 1.0}))};
  const auto phi = channels::pinching(std::span<const Projector>(ps));
  EXPECT_TRUE(matrix_near(phi(sigma).matrix(), sigma.matrix(), 1e-12));
}

TEST(Standard, PinchingRejectsBadProjectorSets) {
  std::vector<Projector> overlap{Projector(HermitianOperator::diagonal({1.0, 0.0})),
                                 Projector(HermitianOperator::diagonal({1.0, 0.0}))};
  EXPECT_THROW(channels::pinching(std::span<const Projector>(overlap)), std::invalid_argument);
  std::vector<Projector> incomplete{Projector(HermitianOperator::diagonal({1.0, 0.0}))};
  EXPECT_THROW(channels::pinching(std::span<const Projector>(incomplete)), std::invalid_argument);
}

TEST(Standard, MeasurementOutputIsClassical) {
  Rng rng(47);
  const auto povm = random_povm(rng, 3, 4);
  const auto phi = channels::measurement_povm(std::span<const PositiveOperator>(povm));
  EXPECT_TRUE(phi.is_channel());
  for (int trial = 0; trial < 10; ++trial) {
    const auto out = phi(random_state(rng, 3));
    Matrix off = out.matrix();
    off.diagonal().setZero();
    EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-12);
  }
  std::vector<PositiveOperator> bad{PositiveOperator::diagonal({1.0, 0.0})};
  EXPECT_THROW(channels::measurement_povm(std::span<const PositiveOperator>(bad)), std::invalid_argument);
}

TEST(Standard, ComposeWithIdentityIsUnchanged) {
  Rng rng(48);
  const auto phi = random_channel(rng, 3, 2, 3);
  EXPECT_TRUE(same_action(channels::compose(channels::identity({3}), phi), phi, 1e-12));
  EXPECT_TRUE(same_action(channels::compose(phi, channels::identity({2})), phi, 1e-12));
}

TEST(Standard, TensorWithIdentityActsLocally) {
  Rng rng(49);
  const auto phi = random_channel(rng, 2, 2, 2);
  const auto ext = channels::tensor_with_identity(phi, 3);
  const auto a = random_state(rng, 2);
  const auto b = random_state(rng, 3);
  EXPECT_TRUE(matrix_near(ext(tensor(a, b)).matrix(), tensor(phi(a), b).matrix(), 1e-13));
}

TEST(Standard, PartialTraceChannelMatchesPartialTrace) {
  Rng rng(50);
  const auto rho = random_state(rng, Dims{2, 3, 2});
  const auto phi = channels::partial_trace(rho.dims(), {0, 2});
  EXPECT_TRUE(matrix_near(phi(rho).matrix(), partial_trace(rho, {0, 2}).matrix(), 1e-14));
  EXPECT_TRUE(phi.is_channel());
}

TEST(Standard, AttenuatorPhotonNumberLaw) {
  const double k = 0.7;
  const std::size_t cutoff = 40;
  const auto h = number_operator(cutoff);
  const auto out = channels::truncated_attenuator(k, cutoff)(thermal_state(1.0, cutoff));
  EXPECT_TRUE(near(mean_energy(h, out), k * k * 1.0, 1e-3));
  EXPECT_TRUE(channels::truncated_attenuator(k, cutoff).is_channel());
  EXPECT_THROW(channels::truncated_attenuator(1.2, cutoff), std::invalid_argument);
}

TEST(ChoiKraus, RoundTripReproducesAction) {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_channel(rng, 3, 2, 4);
    const auto back = kraus_from_choi(choi(phi));
    EXPECT_LE(back.kraus_count(), 6u);
    EXPECT_TRUE(same_action(phi, back, 1e-10));
  }
}

TEST(Monotonicity, HoldsForStandardOperations) {
  Rng rng(52);
  const std::vector<QuantumOperation> ops{channels::dephasing(2),      channels::depolarizing(0.4),
                                          channels::amplitude_damping(0.6), channels::identity({2}),
                                          channels::scaled_identity(0.5, {2})};
  for (const auto& phi : ops) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto rho = random_positive(rng, Dims{2});
      const auto sigma = trial % 4 == 0 ? PositiveOperator(random_state(rng, 2, 1)) : random_positive(rng, Dims{2});
      const auto in = relative_entropy(rho, sigma);
      const auto out = relative_entropy(phi(rho), phi(sigma));
      if (in.is_infinite()) continue;
      ASSERT_TRUE(out.is_finite());
      EXPECT_LE(out.value(), in.value() + 1e-9);
    }
  }
}

}  // namespace
}  // namespace qred
