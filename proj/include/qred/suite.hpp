#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qred/channel.hpp"
#include "qred/disturbance.hpp"
#include "qred/entropy.hpp"
#include "qred/probes.hpp"
#include "qred/random.hpp"
#include "qred/recovery.hpp"
#include "qred/report.hpp"

namespace qred {

struct SuiteConfig {
  std::uint64_t seed = 42;
  std::vector<std::size_t> dims{2, 3, 4};
  std::size_t trials = 200;
  double tolerance_scale = 1.0;
};

inline constexpr std::size_t kMaxSuiteDim = 6;

inline void validate(const SuiteConfig& c) {
  if (c.trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (c.dims.empty()) throw std::invalid_argument("dims must not be empty");
  for (auto d : c.dims)
    if (d < 2 || d > kMaxSuiteDim)
      throw std::invalid_argument("dims must lie in [2, " + std::to_string(kMaxSuiteDim) + "], got " +
                                  std::to_string(d));
  if (!(c.tolerance_scale > 0.0) || !std::isfinite(c.tolerance_scale))
    throw std::invalid_argument("tolerance scale must be positive");
}

/// Entry name prefixes, one per group of checks.
namespace section {
inline constexpr const char* identities = "identity/";
inline constexpr const char* inequalities = "inequality/";
inline constexpr const char* spot_values = "spot/";
inline constexpr const char* jumps = "jump/";
inline constexpr const char* semicontinuity = "lsc/";
inline constexpr const char* recovery = "recovery/";
inline constexpr const char* energy = "energy/";
inline constexpr const char* compression = "compression/";
}  // namespace section

namespace suite_detail {

inline constexpr double kIdentityTol = 1e-9;
inline constexpr double kCrossCheckTol = 1e-8;
inline constexpr double kSlackTol = 1e-9;

inline void record(ReportBuilder& b, const std::string& name, const std::string& anchor, const IdentityCheck& c,
                   double tol) {
  if (c.skipped)
    b.skip(name, anchor, Relation::equal, tol);
  else
    b.equal(name, anchor, c.lhs, c.rhs, tol);
}

/// Out-of-domain results count as skipped checks.
inline void record_nonnegative(ReportBuilder& b, const std::string& name, const std::string& anchor,
                               const DisturbanceResult& r, double tol = kSlackTol) {
  if (r.out_of_domain())
    b.skip(name, anchor, Relation::at_most, tol);
  else
    b.at_most(name, anchor, 0.0, *r.delta, tol);
}

inline std::size_t dim_for(const SuiteConfig& c, std::size_t trial) { return c.dims[trial % c.dims.size()]; }

inline Dims range_dims(std::size_t n, std::size_t d) { return Dims(n, d); }

/// Random Hamiltonian with spectrum in [0, 3).
inline EnergyObservable random_hamiltonian(Rng& rng, std::size_t d) {
  RealVector e(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = 3.0 * rng.uniform();
  const Matrix u = haar_unitary(rng, d);
  Matrix h = u * e.asDiagonal() * u.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
  return EnergyObservable(HermitianOperator(Dims{d}, h));
}

/// Contraction U diag(s) V^dag with singular values in [0, 1].
inline Matrix random_contraction(Rng& rng, std::size_t d) {
  RealVector s(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = rng.uniform();
  return haar_unitary(rng, d) * s.asDiagonal() * haar_unitary(rng, d).adjoint();
}

/// Block-diagonal embedding of a (k x k) and b ((d-k) x (d-k)).
inline PositiveOperator direct_sum(const PositiveOperator& a, const PositiveOperator& b) {
  const auto n = static_cast<Eigen::Index>(a.dim() + b.dim());
  Matrix m = Matrix::Zero(n, n);
  m.topLeftCorner(a.matrix().rows(), a.matrix().cols()) = a.matrix();
  m.bottomRightCorner(b.matrix().rows(), b.matrix().cols()) = b.matrix();
  return {HermitianOperator(Dims{static_cast<std::size_t>(n)}, m), PositiveOperator::Trusted{}};
}

inline Ensemble random_ensemble(Rng& rng, const Dims& dims, std::size_t k) {
  const auto w = random_weights(rng, k);
  std::vector<Ensemble::Item> items;
  for (std::size_t i = 0; i < k; ++i) items.push_back({w[i], random_state(rng, dims)});
  return Ensemble(std::move(items));
}

inline PositiveOperator bell_state() {
  Vector psi = Vector::Zero(4);
  psi(0) = psi(3) = M_SQRT1_2;
  return PositiveOperator::pure(psi, Dims{2, 2});
}

inline PositiveOperator ghz_state() {
  Vector psi = Vector::Zero(8);
  psi(0) = psi(7) = M_SQRT1_2;
  return PositiveOperator::pure(psi, Dims{2, 2, 2});
}

inline PositiveOperator rotate(const PositiveOperator& x, const Matrix& u) {
  return {HermitianOperator(x.dims(), u * x.matrix() * u.adjoint()), PositiveOperator::Trusted{}};
}

}  // namespace suite_detail

// ---------------------------------------------------------------------------
// Identities over seeded random trials
// ---------------------------------------------------------------------------

inline void check_identities(ReportBuilder& b, const SuiteConfig& cfg) {
  using namespace suite_detail;
  const std::string p = section::identities;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(derive_seed(cfg.seed, t));
    const std::size_t d = dim_for(cfg, t);
    // Every fifth trial uses a rank-deficient sigma to exercise infinite values.
    const bool deficient = t % 5 == 4;
    const auto rho = random_positive(rng, Dims{d});
    const auto sigma = deficient ? (0.3 + rng.uniform()) * random_state(rng, Dims{d}, d - 1)
                                 : random_positive(rng, Dims{d});
    const auto omega = random_positive(rng, Dims{d});

    record(b, p + "donald", "Donald's identity", donald_identity(rho, sigma, omega, rng.uniform()), kIdentityTol);

    {
      const auto pair = random_commuting_pair(rng, d, 1 + rng.index(d - 1));
      const auto s = (0.3 + 2.0 * rng.uniform()) * pair.sigma;
      record(b, p + "pinching_decomposition", "projector decomposition of the relative entropy",
             pinching_decomposition(rho, s, pair.projector), kIdentityTol);
    }

    {
      const auto phi = random_channel(rng, d, dim_for(cfg, t + 1), 1 + rng.index(3));
      record(b, p + "re_decomposition", "relative entropy = output divergence + disturbance",
             re_decomposition(phi, rho, sigma), kIdentityTol);
    }

    {
      const std::size_t k = 3;
      auto e1 = random_ensemble(rng, Dims{d}, k);
      auto e2 = random_ensemble(rng, Dims{d}, k);
      record(b, p + "weighted_sum", "weighted-ensemble identity with Kullback-Leibler term",
             weighted_sum_identity(e1, e2), kIdentityTol);
      b.equal(p + "holevo_dual_formula", "Holevo quantity", holevo_chi(e1), holevo_chi_entropic(e1), kIdentityTol);
    }

    {
      const bool four = t % 4 == 0;
      const std::size_t n = four ? 4 : 3;
      const auto state = random_state(rng, range_dims(n, 2));
      std::vector<Part> parts;
      for (std::size_t k = 0; k < n; ++k) parts.push_back({k});
      const std::vector<std::vector<std::size_t>> groups =
          four ? std::vector<std::vector<std::size_t>>{{0, 2}, {1, 3}} : std::vector<std::vector<std::size_t>>{{0, 1}, {2}};
      record(b, p + "multipartite_chain", "multipartite mutual information chain rule",
             multipartite_chain(state, parts, groups), kIdentityTol);
    }

    {
      const auto h = random_hamiltonian(rng, d);
      const double beta = 0.2 + 2.8 * rng.uniform();
      const auto r = random_state(rng, Dims{d});
      b.equal(p + "free_energy", "free energy via relative entropy to the Gibbs state", free_energy(h, beta, r),
              free_energy_entropic(h, beta, r), kIdentityTol);
    }

    // Scaling identities.
    for (double c : {0.3, 1.0, 2.7}) {
      b.equal(p + "scaling_both", "homogeneity of the relative entropy", relative_entropy(c * rho, c * sigma),
              c * relative_entropy(rho, sigma), kIdentityTol);
      const auto base = relative_entropy(rho, sigma);
      const auto scaled = relative_entropy(rho, c * sigma);
      if (base.is_infinite())
        b.equal(p + "scaling_second", "rescaling the second argument", scaled, base, kIdentityTol);
      else
        b.equal(p + "scaling_second", "rescaling the second argument", scaled,
                base.value() - rho.trace() * std::log(c) + (c - 1.0) * sigma.trace(), kIdentityTol);
    }

    {
      const std::size_t k = 1 + rng.index(d - 1);
      const auto r1 = random_positive(rng, Dims{k});
      const auto w1 = random_positive(rng, Dims{k});
      const auto r2 = random_positive(rng, Dims{d - k});
      const auto w2 = random_positive(rng, Dims{d - k});
      const auto z1 = PositiveOperator::zero(Dims{k});
      const auto z2 = PositiveOperator::zero(Dims{d - k});
      b.equal(p + "orthogonal_sum", "additivity on orthogonal blocks",
              relative_entropy(direct_sum(r1, r2), direct_sum(w1, w2)),
              relative_entropy(direct_sum(r1, z2), direct_sum(w1, z2)) +
                  relative_entropy(direct_sum(z1, r2), direct_sum(z1, w2)),
              kIdentityTol);
    }

    {
      const auto state = random_state(rng, Dims{d, 2, 2});
      auto s = [&](Part keep) { return von_neumann_entropy(partial_trace(state, std::span<const std::size_t>(keep))).value(); };
      const double entropic = s({0}) + s({1, 2}) - von_neumann_entropy(state).value() - (s({0}) + s({2}) - s({0, 2}));
      b.equal(p + "qcmi_entropy_formula", "conditional mutual information as a disturbance",
              qcmi(state, {0}, {1}, {2}), entropic, kCrossCheckTol);
    }

    {
      const auto s = random_positive(rng, Dims{d});
      const auto eta = random_positive(rng, Dims{d});
      const auto theta = random_positive(rng, Dims{d});
      record(b, p + "sf1_proof_one", "flagged extension identity", sf1_proof_one(rho, s, theta), kCrossCheckTol);
      record(b, p + "sf1_proof_two", "mixing identity for sums", sf1_proof_two(rho, eta, s), kCrossCheckTol);
      const auto direct = sf_gap(SfKind::sf1, rho, s, eta, theta);
      if (direct.out_of_domain())
        b.skip(p + "sf1_dual_route", "sum-difference gap via the proof identities", Relation::equal, kCrossCheckTol);
      else
        b.equal(p + "sf1_dual_route", "sum-difference gap via the proof identities", *direct.delta,
                sf1_via_proof(rho, s, eta, theta), kCrossCheckTol);
    }

    {
      const auto r = random_state(rng, Dims{d});
      const auto phi = random_channel(rng, d, 2, 2);
      const double two_s = 2.0 * von_neumann_entropy(r).value();
      const auto i_phi = channel_mutual_info(phi, r);
      b.equal(p + "complementary_mutual_info", "complementary channel mutual information",
              two_s - i_phi.value(), channel_mutual_info(complementary(phi), r), kCrossCheckTol);
      b.equal(p + "complementary_mutual_info_delta", "complementary channel mutual information as a disturbance",
              two_s - i_phi.value(), complementary_info_delta(phi, r).value(), kCrossCheckTol);
      b.equal(p + "channel_mutual_info_dual", "channel mutual information", i_phi,
              channel_mutual_info_entropic(phi, r), kCrossCheckTol);
    }

    {
      const auto e = random_ensemble(rng, Dims{d}, 3);
      const auto phi = random_channel(rng, d, 2, 2);
      b.equal(p + "entropic_disturbance_qc", "entropic disturbance on the classical-quantum state",
              entropic_disturbance(e, phi), entropic_disturbance_qc(e, phi).value(), kIdentityTol);
    }

    {
      const auto pair = random_commuting_pair(rng, d, 1 + rng.index(d - 1));
      const std::vector<Projector> ps{pair.projector, pair.projector.complement()};
      const auto r = random_state(rng, Dims{d});
      const auto pinch = channels::pinching(ps);
      b.equal(p + "entropy_gain_pinching", "entropy gain of a pinching channel",
              entropy_gain_pinching(r, ps, pair.sigma), relative_entropy(r, pinch(r)), kIdentityTol);
    }

    {
      const auto state = random_state(rng, Dims{d, 2});
      const auto povm = random_povm(rng, 2, 3);
      b.equal(p + "discord_dual", "unoptimized discord", discord_unoptimized(state, povm).value(),
              discord_entropic(state, povm), kCrossCheckTol);
    }

    {
      const double tt = 0.05 + 0.4 * rng.uniform();
      const auto phi = channels::amplitude_damping(tt);
      const auto r = random_state(rng, Dims{2});
      b.equal(p + "coherent_info_degradable", "coherent information of a degradable channel", coherent_info(phi, r),
              coherent_info_degradable(phi, amplitude_damping_degrading_map(tt), r), kCrossCheckTol);
    }

    {
      const auto phi = random_channel(rng, d, 2, 2);
      const auto psi = random_channel(rng, 2, 2, 2);
      const auto r = random_state(rng, Dims{d});
      const auto g = chain_rule_gaps(phi, psi, r);
      b.equal(p + "chain_rule_gap1_delta", "first chain rule for channel mutual information", g.gap1, g.gap1_delta,
              kCrossCheckTol);
      b.equal(p + "chain_rule_gap2_delta", "second chain rule for channel mutual information", g.gap2, g.gap2_delta,
              kCrossCheckTol);
    }
  }
}

// ---------------------------------------------------------------------------
// Inequalities over the same trial set
// ---------------------------------------------------------------------------

/// Every channel constructor, instantiated at input dimension d.
inline std::vector<std::pair<std::string, QuantumOperation>> monotonicity_operations(Rng& rng, std::size_t d) {
  using namespace suite_detail;
  std::vector<std::pair<std::string, QuantumOperation>> ops;
  ops.emplace_back("identity", channels::identity(Dims{d}));
  ops.emplace_back("unitary", channels::unitary(haar_unitary(rng, d)));
  ops.emplace_back("partial_trace", channels::partial_trace(Dims{d, 2}, {0}));
  {
    const auto pair = random_commuting_pair(rng, d, 1 + rng.index(d - 1));
    const std::vector<Projector> ps{pair.projector, pair.projector.complement()};
    ops.emplace_back("pinching", channels::pinching(ps));
  }
  ops.emplace_back("dephasing", channels::dephasing(d));
  {
    const auto povm = random_povm(rng, d, 3);
    ops.emplace_back("measurement_povm", channels::measurement_povm(povm));
  }
  ops.emplace_back("depolarizing", channels::depolarizing(rng.uniform(), d));
  ops.emplace_back("amplitude_damping", channels::amplitude_damping(rng.uniform()));
  ops.emplace_back("replacer", channels::replacer(random_state(rng, Dims{2}), Dims{d}));
  ops.emplace_back("compose", channels::compose(random_channel(rng, d, d, 2), channels::dephasing(d)));
  ops.emplace_back("tensor_with_identity", channels::tensor_with_identity(random_channel(rng, d, 2, 2), 2));
  ops.emplace_back("tensor", channels::tensor(channels::dephasing(d), channels::depolarizing(rng.uniform(), 2)));
  ops.emplace_back("truncated_attenuator", channels::truncated_attenuator(rng.uniform(), d));
  ops.emplace_back("random_kraus", random_channel(rng, d, 2, 1 + rng.index(3)));
  ops.emplace_back("mixture", channels::mixture(rng.uniform(), random_channel(rng, d, d, 2), channels::identity(Dims{d})));
  ops.emplace_back("compression", channels::compression(random_contraction(rng, d), Dims{d}));
  ops.emplace_back("scaled_identity", channels::scaled_identity(rng.uniform(), Dims{d}));
  ops.emplace_back("complementary", complementary(random_channel(rng, d, 2, 2)));
  return ops;
}

inline void check_inequalities(ReportBuilder& b, const SuiteConfig& cfg) {
  using namespace suite_detail;
  const std::string p = section::inequalities;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(derive_seed(cfg.seed, t) ^ 0x5bd1e995ULL);
    const std::size_t d = dim_for(cfg, t);
    const bool deficient = t % 3 == 2;

    for (const auto& [name, phi] : monotonicity_operations(rng, d)) {
      const Dims& in = phi.in_dims();
      const auto rho = random_positive(rng, in);
      const auto sigma = deficient ? (0.3 + rng.uniform()) * random_state(rng, in, product(in) - 1)
                                   : random_positive(rng, in);
      b.at_most(p + "monotonicity/" + name, "data processing inequality", relative_entropy(phi(rho), phi(sigma)),
                relative_entropy(rho, sigma), kSlackTol);
    }

    const auto rho = random_state(rng, Dims{d});
    const auto sigma = random_state(rng, Dims{d});
    for (int k = 1; k <= 9; ++k) {
      const double q = 0.1 * k;
      const PositiveOperator mix = q * rho + (1.0 - q) * sigma;
      b.at_most(p + "entropy_mixture_upper", "entropy of a mixture", von_neumann_entropy(mix),
                q * von_neumann_entropy(rho) + (1.0 - q) * von_neumann_entropy(sigma) + binary_entropy(q), kSlackTol);
    }

    const auto a = random_positive(rng, Dims{d});
    const auto c = random_positive(rng, Dims{d});
    const auto w = random_positive(rng, Dims{d});
    const auto v = random_positive(rng, Dims{d});
    {
      const auto sum = von_neumann_entropy(a + c);
      b.at_most(p + "entropy_sum_lower", "entropy of a sum of positive operators",
                von_neumann_entropy(a) + von_neumann_entropy(c), sum, kSlackTol);
      b.at_most(p + "entropy_sum_upper", "entropy of a sum of positive operators", sum,
                von_neumann_entropy(a) + von_neumann_entropy(c) + binary_entropy_ext(a.trace(), c.trace()), kSlackTol);
    }
    b.at_most(p + "second_argument_increase", "enlarging the second argument", relative_entropy(a, c + w),
              relative_entropy(a, c) + ExtendedReal(w.trace()), kSlackTol);
    {
      const auto lower = relative_entropy(a, w) + relative_entropy(c, w);
      b.at_most(p + "first_argument_sum", "relative entropy of a sum in the first argument",
                lower.is_infinite() ? lower : ExtendedReal(lower.value() - w.trace()), relative_entropy(a + c, w),
                kSlackTol);
    }
    b.at_most(p + "subadditivity_of_sums", "relative entropy of sums", relative_entropy(a + c, w + v),
              relative_entropy(a, w) + relative_entropy(c, v), kSlackTol);

    {
      PositiveOperator sr = PositiveOperator::zero(Dims{d});
      PositiveOperator ss = PositiveOperator::zero(Dims{d});
      ExtendedReal termwise = 0.0;
      for (int k = 0; k < 20; ++k) {
        const auto x = (1.0 / 20.0) * random_positive(rng, Dims{d});
        const auto y = (1.0 / 20.0) * random_positive(rng, Dims{d});
        sr = sr + x;
        ss = ss + y;
        termwise += relative_entropy(x, y);
      }
      b.at_most(p + "joint_convexity_sum", "joint convexity for sums", relative_entropy(sr, ss), termwise, kSlackTol);
    }

    {
      // Continuous families x -> U(x) rho U(x)^dag sampled on a grid, atomic measure.
      const Matrix gen_r = haar_unitary(rng, d);
      const Matrix gen_s = haar_unitary(rng, d);
      Eigen::ComplexEigenSolver<Matrix> er(gen_r), es(gen_s);
      const auto weights = random_weights(rng, 8);
      PositiveOperator avg_r = PositiveOperator::zero(Dims{d});
      PositiveOperator avg_s = PositiveOperator::zero(Dims{d});
      ExtendedReal integral = 0.0;
      for (int j = 0; j < 8; ++j) {
        const double x = j / 7.0;
        auto power = [x](const Eigen::ComplexEigenSolver<Matrix>& e) {
          Vector ph = e.eigenvalues();
          for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(cplx(0.0, x * std::arg(ph(i))));
          return Matrix(e.eigenvectors() * ph.asDiagonal() * e.eigenvectors().inverse());
        };
        const auto rx = rotate(rho, power(er));
        const auto sx = rotate(sigma, power(es));
        avg_r = avg_r + weights[j] * rx;
        avg_s = avg_s + weights[j] * sx;
        integral += weights[j] * relative_entropy(rx, sx);
      }
      b.at_most(p + "joint_convexity_integral", "joint convexity for averages over a family",
                relative_entropy(avg_r, avg_s), integral, kSlackTol);
    }

    {
      const auto e1 = random_ensemble(rng, Dims{d}, 3);
      const auto e2 = random_ensemble(rng, Dims{d}, 3);
      record_nonnegative(b, p + "convexity_modulus_shared", "convexity modulus",
                         convexity_modulus(e1, e2, WeightMode::shared));
      record_nonnegative(b, p + "convexity_modulus_separate", "convexity modulus with separate weights",
                         convexity_modulus(e1, e2, WeightMode::separate));
    }

    {
      const auto state = random_state(rng, Dims{d, 2, 2});
      b.at_most(p + "qcmi_nonnegative", "conditional mutual information", 0.0, qcmi(state, {0}, {1}, {2}), kSlackTol);
    }
    {
      const auto r = random_state(rng, Dims{d, 2});
      const auto s = random_state(rng, Dims{d, 2}, deficient ? 2 * d - 1 : 0);
      record_nonnegative(b, p + "conditional_relative_entropy", "conditional relative entropy",
                         cond_rel_entropy(r, s, {0}));
    }
    {
      const auto e = random_ensemble(rng, Dims{d}, 3);
      b.at_most(p + "entropic_disturbance", "entropic disturbance", 0.0,
                entropic_disturbance(e, random_channel(rng, d, 2, 2)), kSlackTol);
    }
    {
      const auto state = random_state(rng, Dims{d, 2});
      record_nonnegative(b, p + "discord", "unoptimized discord", discord_unoptimized(state, random_povm(rng, 2, 3)));
    }
    {
      const auto g = chain_rule_gaps(random_channel(rng, d, 2, 2), random_channel(rng, 2, 2, 2),
                                     random_state(rng, Dims{d}));
      b.at_most(p + "chain_rule_gap1", "first chain rule for channel mutual information", 0.0, g.gap1, kSlackTol);
      b.at_most(p + "chain_rule_gap2", "second chain rule for channel mutual information", 0.0, g.gap2, kSlackTol);
    }
    {
      const auto state = random_state(rng, Dims{d, 2});
      const auto ig = information_gain_local(random_povm(rng, d, 3), state);
      b.at_most(p + "information_gain_local", "information gain of a local measurement", 0.0, ig.gap, kSlackTol);
      b.equal(p + "information_gain_local_delta", "information gain of a local measurement", ig.gap, ig.gap_delta,
              kCrossCheckTol);
    }
    {
      const auto eta = random_positive(rng, Dims{d});
      const auto theta = random_positive(rng, Dims{d});
      const auto g = sf_gap(SfKind::sf1, a, c, eta, theta);
      if (g.out_of_domain())
        b.skip(p + "sum_difference_lower_bound", "lower bound of the sum-difference gap", Relation::at_most, kSlackTol);
      else
        b.at_most(p + "sum_difference_lower_bound", "lower bound of the sum-difference gap",
                  -theta.trace() - c.trace(), *g.delta, kSlackTol);
    }
  }
}

// ---------------------------------------------------------------------------
// Closed-form values
// ---------------------------------------------------------------------------

inline void check_spot_values(ReportBuilder& b) {
  using namespace suite_detail;
  const std::string p = section::spot_values;
  b.equal(p + "relative_entropy_qubit", "relative entropy of diagonal qubit states",
          relative_entropy(PositiveOperator::diagonal({0.5, 0.5}), PositiveOperator::diagonal({0.75, 0.25})),
          0.143841, 1e-6);
  b.equal(p + "bell_mutual_info", "mutual information of a Bell state",
          multipartite_mutual_info(bell_state(), {Part{0}, Part{1}}), 2.0 * std::log(2.0), 1e-8);
  b.equal(p + "ghz_conditional_mutual_info", "conditional mutual information of a GHZ state",
          qcmi(ghz_state(), {0}, {1}, {2}), std::log(2.0), 1e-8);
  {
    const auto g = gibbs_state(EnergyObservable(HermitianOperator::diagonal({0.0, 1.0})), std::log(2.0));
    const double err = (g.matrix() - PositiveOperator::diagonal({2.0 / 3.0, 1.0 / 3.0}).matrix()).cwiseAbs().maxCoeff();
    b.equal(p + "qubit_gibbs_state", "Gibbs state", err, 0.0, 1e-12);
  }
  {
    const auto f = families::vanishing_mass();
    const auto pt = f.at(100);
    b.equal(p + "vanishing_mass_n100", "relative entropy along the vanishing-mass sequence",
            relative_entropy(pt.rho, pt.sigma), families::vanishing_mass_divergence(100), 1e-12);
  }
  b.equal(p + "identity_channel_mutual_info", "channel mutual information",
          channel_mutual_info(channels::identity(Dims{2}), PositiveOperator::maximally_mixed(Dims{2})),
          2.0 * std::log(2.0), 1e-8);
  b.equal(p + "bell_discord", "unoptimized discord", discord_unoptimized(bell_state(), channels::computational_povm(2)).value(),
          std::log(2.0), 1e-8);
  b.equal(p + "depolarizing_coherent_info", "coherent information",
          coherent_info(channels::depolarizing(1.0, 2), PositiveOperator::maximally_mixed(Dims{2})), -std::log(2.0), 1e-8);
}

// ---------------------------------------------------------------------------
// Jump contraction
// ---------------------------------------------------------------------------

inline void check_jumps(ReportBuilder& b, const SuiteConfig& cfg) {
  const std::string p = section::jumps;
  const int n0 = kDefaultWindowStart;
  const int n = kDefaultWindowEnd;
  using families::VanishingMassChannel;
  {
    const auto f = families::vanishing_mass();
    const auto e = dj_estimate(f, Functional::relative_entropy, n0, n);
    b.equal(p + "vanishing_mass_jump", "discontinuity jump of the relative entropy", e.dj_hat, *f.analytic_jump, 5e-2);
    b.set_window(p + "vanishing_mass_jump", n0, n);
  }
  for (auto ch : {VanishingMassChannel::dephasing, VanishingMassChannel::depolarizing,
                  VanishingMassChannel::partial_trace, VanishingMassChannel::drift}) {
    const auto f = families::vanishing_mass(ch);
    const auto r = jump_contraction_experiment(f, nullptr, n0, n);
    const std::string name = p + "contraction/" + f.name;
    b.at_most(name, "jumps do not increase under quantum operations", r.output.dj_hat, r.input.dj_hat, r.tolerance);
    b.set_window(name, n0, n);
  }
  for (std::size_t d : cfg.dims) {
    const double jump = 0.5 + 0.25 * static_cast<double>(d);
    const auto f = families::classical_tail(d, jump);
    const auto e = dj_estimate(f, Functional::relative_entropy, n0, n);
    const std::string name = p + "classical_tail_jump";
    b.equal(name, "discontinuity jump of the relative entropy", e.dj_hat, jump, 5e-2);
    b.set_window(name, n0, n);
    const auto deph = channels::dephasing(d);
    const auto r = jump_contraction_experiment(f, &deph, n0, n);
    b.at_most(p + "contraction/classical_tail", "jumps do not increase under quantum operations", r.output.dj_hat,
              r.input.dj_hat, r.tolerance);
    b.set_window(p + "contraction/classical_tail", n0, n);
  }
  {
    const auto f = families::channel_drift(2, cfg.seed, 0.0);
    const auto in = dj_estimate(f, Functional::relative_entropy, n0, n);
    const auto out = dj_estimate(f, Functional::output_relative_entropy, n0, n);
    b.equal(p + "constant_family_input", "discontinuity jump of a constant family", in.dj_hat, 0.0, 1e-12);
    b.equal(p + "constant_family_output", "discontinuity jump of a constant family", out.dj_hat, 0.0, 1e-12);
  }
}

// ---------------------------------------------------------------------------
// Lower semicontinuity of the disturbance
// ---------------------------------------------------------------------------

inline std::vector<families::VanishingMassChannel> all_vanishing_mass_channels() {
  using families::VanishingMassChannel;
  return {VanishingMassChannel::identity, VanishingMassChannel::dephasing, VanishingMassChannel::depolarizing,
          VanishingMassChannel::partial_trace, VanishingMassChannel::drift};
}

/// Builtin families whose disturbance at the limit is defined.
inline std::vector<SequenceFamily> lsc_families(const SuiteConfig& cfg) {
  std::vector<SequenceFamily> fs;
  for (auto ch : all_vanishing_mass_channels()) fs.push_back(families::vanishing_mass(ch));
  for (std::size_t d : cfg.dims) {
    fs.push_back(families::classical_tail(d, 1.0));
    fs.push_back(families::channel_drift(d, derive_seed(cfg.seed, 1000 + d)));
    fs.push_back(families::channel_drift(d, derive_seed(cfg.seed, 2000 + d), 0.0));
    fs.push_back(families::contraction_compress(families::CompressionMode::to_identity, d, derive_seed(cfg.seed, 3000 + d)));
    fs.push_back(families::contraction_compress(families::CompressionMode::remark3, d, derive_seed(cfg.seed, 4000 + d)));
  }
  fs.push_back(families::gibbs_drift());
  families::GibbsDriftParams constant;
  constant.converging_input = false;
  fs.push_back(families::gibbs_drift(constant));
  return fs;
}

inline void check_semicontinuity(ReportBuilder& b, const SuiteConfig& cfg) {
  const std::string p = section::semicontinuity;
  for (const auto& f : lsc_families(cfg)) {
    const auto r = lsc_experiment(f);
    const std::string name = p + f.name;
    b.at_most(name, "lower semicontinuity of the disturbance", r.delta_limit, r.min_delta, r.tolerance);
    b.set_window(name, r.n0, r.n);
  }
}

// ---------------------------------------------------------------------------
// Petz recovery
// ---------------------------------------------------------------------------

inline void check_recovery(ReportBuilder& b, const SuiteConfig& cfg) {
  const std::string p = section::recovery;
  std::size_t root_ok = 0;
  std::size_t squared_ok = 0;
  const std::size_t count = 100;
  for (std::size_t t = 0; t < count; ++t) {
    Rng rng(derive_seed(cfg.seed, 50000 + t));
    const std::size_t d = cfg.dims[t % cfg.dims.size()];
    const auto phi = random_channel(rng, d, d, 2);
    const auto sigma = random_state(rng, Dims{d});
    const auto rho = random_state(rng, Dims{d});
    const auto psi = petz_map(phi, sigma);
    b.equal(p + "petz_fixes_sigma", "Petz recovery map", trace_distance(psi(phi(sigma)), sigma), 0.0, 1e-9);
    const auto v = validate(psi);
    b.holds(p + "petz_completely_positive", "Petz recovery map", v.is_cp);
    b.at_most(p + "petz_trace_nonincreasing", "Petz recovery map", v.trace_excess, 0.0, 1e-9);
    const auto d_out = relative_entropy(phi(rho), phi(sigma));
    b.at_most(p + "monotonicity_sandwich_inner", "data processing inequality", relative_entropy(psi(phi(rho)), sigma),
              d_out, 1e-9);
    b.at_most(p + "monotonicity_sandwich_outer", "data processing inequality", d_out, relative_entropy(rho, sigma),
              1e-9);
    const auto rep = reversibility_report(phi, rho, sigma);
    root_ok += rep.bound_satisfied ? 1 : 0;
    squared_ok += rep.bound_satisfied_squared ? 1 : 0;
  }
  b.set_note(p + "petz_fixes_sigma", "fidelity bound exp(-delta/2) met by the plain Petz map on " +
                                         std::to_string(root_ok) + "/" + std::to_string(count) +
                                         " random triples (root fidelity), " + std::to_string(squared_ok) + "/" +
                                         std::to_string(count) + " (squared); logged, not asserted");

  for (std::size_t d : cfg.dims) {
    Rng rng(derive_seed(cfg.seed, 60000 + d));
    const auto tau = random_state(rng, Dims{2});
    const auto rho = tensor(random_state(rng, Dims{d}), tau);
    const auto sigma = tensor(random_state(rng, Dims{d}), tau);
    const auto rep = reversibility_report(channels::partial_trace(Dims{d, 2}, {0}), rho, sigma);
    b.at_most(p + "sufficiency_delta", "reversibility when the disturbance vanishes", rep.delta, 0.0, 1e-9);
    b.equal(p + "sufficiency_fidelity", "reversibility when the disturbance vanishes", rep.fidelity_recovered, 1.0,
            1e-7);
    b.holds(p + "sufficiency_bound", "reversibility when the disturbance vanishes", rep.bound_satisfied);

    const auto u = channels::unitary(haar_unitary(rng, d));
    const auto r2 = random_state(rng, Dims{d});
    const auto s2 = random_state(rng, Dims{d});
    const auto urep = reversibility_report(u, r2, s2);
    b.equal(p + "unitary_delta", "reversibility of unitary channels", urep.delta, 0.0, 1e-9);
    b.equal(p + "unitary_fidelity", "reversibility of unitary channels", urep.fidelity_recovered, 1.0, 1e-7);
  }
}

// ---------------------------------------------------------------------------
// Gibbs states and energy
// ---------------------------------------------------------------------------

inline void check_energy(ReportBuilder& b, const SuiteConfig& cfg) {
  const std::string p = section::energy;
  const double k = 0.7;
  const std::size_t cutoff = 40;
  {
    const auto r = attenuator_thermal_check(k, cutoff, 1.0);
    b.equal(p + "attenuator_output_photons", "photon number law of the attenuator", r.photons_out, r.expected, 1e-3);
    b.equal(p + "attenuator_output_thermal_photons", "photon number law of the attenuator", r.fitted_photons, 0.49,
            1e-3);
    b.at_most(p + "attenuator_output_is_thermal", "Gibbs-preserving channels", r.fit.residual, 0.0, kGibbsFitGate);
  }
  {
    const auto h = number_operator(cutoff);
    const auto r = energy_limited_probe(channels::truncated_attenuator(k, cutoff), h, h, thermal_beta(1.0), 2.0,
                                        derive_seed(cfg.seed, 70000), 32, k * k);
    b.holds(p + "energy_limited_finite", "energy-limited channels", std::isfinite(r.sup_output_energy) && r.fit.compatible,
            "sup output energy " + std::to_string(r.sup_output_energy) + " over " + std::to_string(r.samples) +
                " states with energy <= 2");
    b.at_most(p + "energy_limited_linear_bound", "energy-limited channels", r.sup_output_energy, *r.linear_bound, 1e-3);
  }
  {
    const EnergyObservable h(HermitianOperator::diagonal({0.0, 1.0}));
    const double beta = std::log(2.0);
    families::GibbsDriftParams constant;
    constant.converging_input = false;
    for (const auto& params : {families::GibbsDriftParams{}, constant}) {
      const auto f = families::gibbs_drift(params);
      const auto r = h_case_jump_probe(f, h, h, params.beta);
      const std::string name = p + "gibbs_jump_bound/" + (params.converging_input ? "converging" : "constant");
      b.holds(p + "gibbs_compatibility", "Gibbs-preserving channels", r.compatible);
      b.at_most(name, "energy jumps under Gibbs-preserving channels", r.lhs, r.rhs, r.tolerance);
      b.set_window(name, r.input_energy.n0, r.input_energy.n);
    }
    families::GibbsDriftParams twisted;
    twisted.twist = 0.4;
    const auto r = h_case_jump_probe(families::gibbs_drift(twisted), h, h, beta);
    b.holds(p + "gibbs_compatibility_rejects_rotation", "Gibbs-preserving channels", !r.compatible,
            "fit residual " + std::to_string(r.worst_fit_residual));
  }
  {
    const auto r = semigroup_continuity_probe();
    std::string note = "max adjacent variation per grid:";
    for (std::size_t i = 0; i < r.grid_sizes.size(); ++i)
      note += " " + std::to_string(r.grid_sizes[i]) + "->" + std::to_string(r.max_variation[i]);
    note += "; refinement slope " + std::to_string(r.slope);
    b.holds(p + "semigroup_continuity", "continuity along the attenuator semigroup", r.pass, note);
  }
}

// ---------------------------------------------------------------------------
// Compressions converging to the identity, and the finite-d counterexample
// ---------------------------------------------------------------------------

inline void check_compression(ReportBuilder& b, const SuiteConfig& cfg) {
  const std::string p = section::compression;
  for (std::size_t d : cfg.dims) {
    const auto f = families::contraction_compress(families::CompressionMode::to_identity, d, derive_seed(cfg.seed, 80000 + d));
    const auto r = compression_probe(f);
    b.holds(p + "gated_points_exist", "compressions converging to the identity", r.gated_points > 0);
    b.at_most(p + "to_identity", "compressions converging to the identity", r.max_deviation, 0.0, r.tolerance);
    const auto s = remark3_scan(d, derive_seed(cfg.seed, 90000 + d));
    std::string shape;
    for (const auto& v : s.values) shape += (shape.empty() ? "" : ",") + (v.is_infinite() ? std::string("inf") : std::to_string(v.value()));
    b.holds(p + "vanishing_compression_shape", "compressions collapsing to zero", s.pass,
            "d=" + std::to_string(d) + ": " + shape);
  }
}

// ---------------------------------------------------------------------------
// Whole suite
// ---------------------------------------------------------------------------

/// Runs one group; an unexpected exception becomes a failed entry.
inline void run_section(ReportBuilder& b, const std::string& prefix, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    b.holds(prefix + "unexpected_error", "harness", false, e.what());
  }
}

inline SuiteReport run_suite(const SuiteConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  ReportBuilder b(cfg.tolerance_scale);
  run_section(b, section::identities, [&] { check_identities(b, cfg); });
  run_section(b, section::inequalities, [&] { check_inequalities(b, cfg); });
  run_section(b, section::spot_values, [&] { check_spot_values(b); });
  run_section(b, section::jumps, [&] { check_jumps(b, cfg); });
  run_section(b, section::semicontinuity, [&] { check_semicontinuity(b, cfg); });
  run_section(b, section::recovery, [&] { check_recovery(b, cfg); });
  run_section(b, section::energy, [&] { check_energy(b, cfg); });
  run_section(b, section::compression, [&] { check_compression(b, cfg); });
  SuiteReport r;
  r.rng = std::string(kRngName);
  r.seed = cfg.seed;
  r.dims = cfg.dims;
  r.trials = cfg.trials;
  r.tolerance_scale = cfg.tolerance_scale;
  r.entries = b.take();
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace qred
