#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qred/channel.hpp"
#include "qred/entropy.hpp"

namespace qred {

/// D(rho||sigma), D(Phi rho||Phi sigma) and their difference.
///
/// The difference is only defined when the output divergence is finite;
/// otherwise `delta` is empty and the record is out of domain.
struct DisturbanceResult {
  ExtendedReal d_in;
  ExtendedReal d_out;
  std::optional<ExtendedReal> delta;

  bool out_of_domain() const { return !delta.has_value(); }

  /// The defined value; throws when out of domain.
  ExtendedReal value() const {
    if (!delta) throw std::domain_error("disturbance is undefined: output divergence is infinite");
    return *delta;
  }
};

inline DisturbanceResult make_disturbance(ExtendedReal d_in, ExtendedReal d_out) {
  if (d_out.is_infinite()) return {d_in, d_out, std::nullopt};
  return {d_in, d_out, d_in - d_out};
}

using StateMap = std::function<PositiveOperator(const PositiveOperator&)>;

/// Delta for an arbitrary positivity-preserving map given as a function.
inline DisturbanceResult delta_map(const StateMap& phi, const PositiveOperator& rho, const PositiveOperator& sigma) {
  return make_disturbance(relative_entropy(rho, sigma), relative_entropy(phi(rho), phi(sigma)));
}

/// Delta_Phi(rho, sigma) = D(rho||sigma) - D(Phi(rho)||Phi(sigma)).
inline DisturbanceResult delta(const QuantumOperation& phi, const PositiveOperator& rho, const PositiveOperator& sigma) {
  return make_disturbance(relative_entropy(rho, sigma), relative_entropy(phi(rho), phi(sigma)));
}

/// Delta for the partial trace keeping the listed subsystems.
inline DisturbanceResult delta_partial_trace(const PositiveOperator& rho, const PositiveOperator& sigma,
                                             std::span<const std::size_t> keep) {
  return make_disturbance(relative_entropy(rho, sigma),
                          relative_entropy(partial_trace(rho, keep), partial_trace(sigma, keep)));
}

// ---------------------------------------------------------------------------
// Identity residuals
// ---------------------------------------------------------------------------

/// Both sides of an identity and |lhs - rhs|. When either side is infinite
/// the identity is not checked numerically and `skipped` is set.
struct IdentityCheck {
  ExtendedReal lhs;
  ExtendedReal rhs;
  double residual = 0.0;
  bool skipped = false;
};

inline IdentityCheck compare_sides(ExtendedReal lhs, ExtendedReal rhs) {
  if (lhs.is_infinite() || rhs.is_infinite()) return {lhs, rhs, 0.0, true};
  return {lhs, rhs, std::abs(lhs.value() - rhs.value()), false};
}

/// p D(rho||omega) + (1-p) D(sigma||omega)
///   = p D(rho||m) + (1-p) D(sigma||m) + D(m||omega),  m = p rho + (1-p) sigma.
inline IdentityCheck donald_identity(const PositiveOperator& rho, const PositiveOperator& sigma,
                                     const PositiveOperator& omega, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("donald_identity: p must lie in [0, 1]");
  const double q = 1.0 - p;
  const PositiveOperator m = p * rho + q * sigma;
  const auto lhs = p * relative_entropy(rho, omega) + q * relative_entropy(sigma, omega);
  const auto rhs = p * relative_entropy(rho, m) + q * relative_entropy(sigma, m) + relative_entropy(m, omega);
  return compare_sides(lhs, rhs);
}

/// D(rho||sigma) = D(P rho P||P sigma) + D(Pc rho Pc||Pc sigma) + D(rho||(rho + U rho U)/2)
/// with U = 2P - I, for a projector P commuting with sigma.
inline IdentityCheck pinching_decomposition(const PositiveOperator& rho, const PositiveOperator& sigma,
                                            const Projector& p) {
  const Matrix& pm = p.matrix();
  if ((pm * sigma.matrix() - sigma.matrix() * pm).norm() > 1e-9 * std::max(1.0, sigma.matrix().norm()))
    throw std::invalid_argument("pinching_decomposition: projector does not commute with sigma");
  const Projector pc = p.complement();
  const Matrix u = p.reflection();
  auto compress = [](const Matrix& a, const PositiveOperator& x) {
    return PositiveOperator(HermitianOperator(x.dims(), a * x.matrix() * a.adjoint()), PositiveOperator::Trusted{});
  };
  const auto lhs = relative_entropy(rho, sigma);
  const PositiveOperator mix = 0.5 * (rho + compress(u, rho));
  const auto rhs = relative_entropy(compress(pm, rho), compress(pm, sigma)) +
                   relative_entropy(compress(pc.matrix(), rho), compress(pc.matrix(), sigma)) +
                   relative_entropy(rho, mix);
  return compare_sides(lhs, rhs);
}

/// D(rho||sigma) = D(Phi rho||Phi sigma) + Delta_Phi(rho, sigma), the left side
/// evaluated through the cross-entropy expansion.
inline IdentityCheck re_decomposition(const QuantumOperation& phi, const PositiveOperator& rho,
                                      const PositiveOperator& sigma) {
  const auto lhs = relative_entropy_via_cross_entropy(rho, sigma);
  const auto d = delta(phi, rho, sigma);
  if (d.out_of_domain()) return {lhs, ExtendedReal::infinity(), 0.0, true};
  return compare_sides(lhs, d.d_out + *d.delta);
}

/// sum_i p_i D(rho_i||sigma_i) + KL(p||q) = sum_i D(p_i rho_i||q_i sigma_i).
inline IdentityCheck weighted_sum_identity(const Ensemble& e1, const Ensemble& e2) {
  if (e1.size() != e2.size()) throw std::invalid_argument("weighted_sum_identity: ensembles differ in length");
  const auto p = e1.weights();
  const auto q = e2.weights();
  ExtendedReal lhs = kl_divergence(p, q);
  ExtendedReal rhs = 0.0;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    if (p[i] > 0.0) lhs += p[i] * relative_entropy(e1.items()[i].state, e2.items()[i].state);
    rhs += relative_entropy(p[i] * e1.items()[i].state, q[i] * e2.items()[i].state);
  }
  return compare_sides(lhs, rhs);
}

/// I(A_1:...:A_n) = I(B_1:...:B_m) + sum_j I(parts inside B_j), where each
/// group B_j is the union of the parts it lists.
inline IdentityCheck multipartite_chain(const PositiveOperator& rho, std::span<const Part> parts,
                                        std::span<const std::vector<std::size_t>> groups) {
  std::vector<bool> seen(parts.size(), false);
  std::vector<Part> merged;
  ExtendedReal rhs = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("multipartite_chain: empty group");
    Part u;
    std::vector<Part> inner;
    for (auto i : g) {
      if (i >= parts.size() || seen[i]) throw std::invalid_argument("multipartite_chain: bad grouping");
      seen[i] = true;
      u.insert(u.end(), parts[i].begin(), parts[i].end());
      inner.push_back(parts[i]);
    }
    merged.push_back(u);
    rhs += multipartite_mutual_info(rho, std::span<const Part>(inner));
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("multipartite_chain: grouping does not cover every part");
  rhs += multipartite_mutual_info(rho, std::span<const Part>(merged));
  return compare_sides(multipartite_mutual_info(rho, parts), rhs);
}

/// rho (x) |0><0| and sigma (x) |0><0| + theta (x) |1><1|.
inline std::pair<PositiveOperator, PositiveOperator> flagged_pair(const PositiveOperator& rho,
                                                                  const PositiveOperator& sigma,
                                                                  const PositiveOperator& theta) {
  const auto f0 = PositiveOperator::diagonal({1.0, 0.0});
  const auto f1 = PositiveOperator::diagonal({0.0, 1.0});
  return {tensor(rho, f0), tensor(sigma, f0) + tensor(theta, f1)};
}

/// D(rho||sigma) = D(rho||sigma + theta) + Delta_{Tr_R}(rho^, sigma^) - Tr theta.
inline IdentityCheck sf1_proof_one(const PositiveOperator& rho, const PositiveOperator& sigma,
                                   const PositiveOperator& theta) {
  const auto [rh, sh] = flagged_pair(rho, sigma, theta);
  std::vector<std::size_t> keep(rho.subsystems());
  for (std::size_t k = 0; k < keep.size(); ++k) keep[k] = k;
  const auto d = delta_partial_trace(rh, sh, keep);
  const auto lhs = relative_entropy(rho, sigma);
  if (d.out_of_domain()) return {lhs, ExtendedReal::infinity(), 0.0, true};
  const auto rhs = d.d_out + *d.delta;
  if (rhs.is_infinite()) return {lhs, rhs, 0.0, true};
  return compare_sides(lhs, rhs.value() - theta.trace());
}

/// f(rho, eta) = D(rho||(rho+eta)/2) + D(eta||(rho+eta)/2).
inline ExtendedReal sf1_mixing_term(const PositiveOperator& rho, const PositiveOperator& eta) {
  const PositiveOperator mid = 0.5 * (rho + eta);
  return relative_entropy(rho, mid) + relative_entropy(eta, mid);
}

/// D(rho+eta||sigma) + f(rho, eta) = D(rho||sigma) + D(eta||sigma) + ln2 Tr(rho+eta) - Tr sigma.
inline IdentityCheck sf1_proof_two(const PositiveOperator& rho, const PositiveOperator& eta,
                                   const PositiveOperator& sigma) {
  const auto lhs = relative_entropy(rho + eta, sigma) + sf1_mixing_term(rho, eta);
  const auto rhs = relative_entropy(rho, sigma) + relative_entropy(eta, sigma);
  if (rhs.is_infinite()) return compare_sides(lhs, rhs);
  return compare_sides(lhs, rhs.value() + std::log(2.0) * (rho.trace() + eta.trace()) - sigma.trace());
}

// ---------------------------------------------------------------------------
// Special realizations
// ---------------------------------------------------------------------------

/// D_A(rho||sigma) = D(rho||sigma) - D(rho_B||sigma_B): decrease under
/// tracing out the listed subsystems.
inline DisturbanceResult cond_rel_entropy(const PositiveOperator& rho, const PositiveOperator& sigma,
                                          const Part& traced) {
  detail::require_same_dims(rho, sigma, "cond_rel_entropy");
  const std::vector<Part> check{traced};
  detail::check_parts(check, rho.subsystems(), "cond_rel_entropy");
  Part keep;
  for (std::size_t k = 0; k < rho.subsystems(); ++k)
    if (std::find(traced.begin(), traced.end(), k) == traced.end()) keep.push_back(k);
  if (keep.empty()) throw std::invalid_argument("cond_rel_entropy: nothing left after the partial trace");
  return delta_partial_trace(rho, sigma, keep);
}

/// Output ensemble {p_i, Phi(rho_i)}.
inline Ensemble apply(const QuantumOperation& phi, const Ensemble& e) {
  std::vector<Ensemble::Item> items;
  for (const auto& it : e.items()) items.push_back({it.weight, phi(it.state)});
  return Ensemble(std::move(items));
}

/// q-c state sum_i p_i rho_i (x) |i><i|.
inline PositiveOperator qc_state(const Ensemble& e) {
  const std::size_t k = e.size();
  PositiveOperator acc = PositiveOperator::zero(detail::concat(e.dims(), Dims{k}));
  for (std::size_t i = 0; i < k; ++i) {
    if (e.items()[i].weight == 0.0) continue;
    acc = acc + e.items()[i].weight * tensor(e.items()[i].state, PositiveOperator::pure(basis_vector(k, i)));
  }
  return acc;
}

/// chi({p_i, rho_i}) - chi({p_i, Phi(rho_i)}).
inline ExtendedReal entropic_disturbance(const Ensemble& e, const QuantumOperation& phi) {
  if (!phi.is_channel()) throw std::invalid_argument("entropic_disturbance: Phi must be a channel");
  const auto out = holevo_chi(apply(phi, e));
  if (out.is_infinite()) throw std::domain_error("entropic_disturbance: output Holevo quantity is infinite");
  return holevo_chi(e) - out;
}

/// Delta_{Phi (x) id_E}(rho_qc, rho_A (x) rho_E) for the q-c state of the ensemble.
inline DisturbanceResult entropic_disturbance_qc(const Ensemble& e, const QuantumOperation& phi) {
  const auto rho = qc_state(e);
  const auto w = e.weights();
  const auto sigma = tensor(e.average(), PositiveOperator::diagonal(std::span<const double>(w)));
  return delta(channels::tensor_with_identity(phi, e.size()), rho, sigma);
}

/// I(Phi, rho) = D(Phi (x) id_R(rho^) || Phi(rho) (x) rho^_R) for the spectral
/// purification rho^ of rho.
inline ExtendedReal channel_mutual_info(const QuantumOperation& phi, const PositiveOperator& rho) {
  if (!phi.is_channel()) throw std::invalid_argument("channel_mutual_info: Phi must be a channel");
  require_unit_trace(rho, "channel_mutual_info", 1e-8);
  const auto pure = purify(rho);
  const std::size_t dr = rho.dim();
  const auto omega = channels::tensor_with_identity(phi, dr)(pure);
  const auto ref = partial_trace(pure, {rho.subsystems()});
  return relative_entropy(omega, tensor(phi(rho), ref));
}

/// I(Phi, rho) = S(rho) + S(Phi rho) - S(Phi^ rho).
inline ExtendedReal channel_mutual_info_entropic(const QuantumOperation& phi, const PositiveOperator& rho) {
  const auto comp = complementary(phi);
  return von_neumann_entropy(rho) + von_neumann_entropy(phi(rho)) - von_neumann_entropy(comp(rho));
}

/// Delta_{Phi (x) id_R}(rho^, rho (x) rho_R) for the purification rho^;
/// equals I(Phi^, rho) = 2 S(rho) - I(Phi, rho).
inline DisturbanceResult complementary_info_delta(const QuantumOperation& phi, const PositiveOperator& rho) {
  const auto pure = purify(rho);
  const auto ref = partial_trace(pure, {rho.subsystems()});
  return delta(channels::tensor_with_identity(phi, rho.dim()), pure, tensor(rho, ref));
}

/// I_c(Phi, rho) = S(Phi rho) - S(Phi^ rho).
inline ExtendedReal coherent_info(const QuantumOperation& phi, const PositiveOperator& rho) {
  const auto comp = complementary(phi);
  return von_neumann_entropy(phi(rho)).value() - von_neumann_entropy(comp(rho)).value();
}

/// (1/2) Delta_{Theta (x) id_R}(Phi (x) id_R(rho^), Phi(rho) (x) rho^_R) for a
/// degrading map Theta with Theta o Phi complementary to Phi. Equals
/// I_c(Phi, rho) when Theta degrades Phi.
inline ExtendedReal coherent_info_degradable(const QuantumOperation& phi, const QuantumOperation& theta,
                                             const PositiveOperator& rho) {
  const auto pure = purify(rho);
  const auto ref = partial_trace(pure, {rho.subsystems()});
  const auto omega = channels::tensor_with_identity(phi, rho.dim())(pure);
  const auto d = delta(channels::tensor_with_identity(theta, rho.dim()), omega, tensor(phi(rho), ref));
  return 0.5 * d.value();
}

/// Degrading map of qubit amplitude damping with t <= 1/2: damping with
/// parameter (1 - 2t) / (1 - t), so that the composition is damping with 1 - t.
inline QuantumOperation amplitude_damping_degrading_map(double t) {
  if (!(t >= 0.0 && t <= 0.5)) throw std::invalid_argument("amplitude damping is degradable only for t <= 1/2");
  return channels::amplitude_damping((1.0 - 2.0 * t) / (1.0 - t));
}

/// id_A (x) Psi_M on a bipartite state, the POVM acting on the second part.
inline QuantumOperation local_measurement_channel(const Dims& a_dims, std::span<const PositiveOperator> povm) {
  return channels::identity_with_tensor(a_dims, channels::measurement_povm(povm));
}

/// Unoptimised discord I(A:B)_rho - I(A:E)_{Phi(rho)} for a measurement on
/// the last subsystem, as Delta_Phi(rho, rho_A (x) rho_B).
inline DisturbanceResult discord_unoptimized(const PositiveOperator& rho, std::span<const PositiveOperator> povm) {
  require_unit_trace(rho, "discord_unoptimized", 1e-8);
  if (rho.subsystems() < 2) throw std::invalid_argument("discord_unoptimized: state must be bipartite");
  const std::size_t last = rho.subsystems() - 1;
  Part a;
  for (std::size_t k = 0; k < last; ++k) a.push_back(k);
  const Dims a_dims(rho.dims().begin(), rho.dims().end() - 1);
  const auto rho_a = partial_trace(rho, std::span<const std::size_t>(a));
  const auto rho_b = partial_trace(rho, {last});
  const auto phi = local_measurement_channel(a_dims, povm);
  return delta(phi, rho, tensor(rho_a, rho_b));
}

/// Same quantity from entropies: (S_A + S_B - S_AB) - (S_A + S_E - S_AE).
inline ExtendedReal discord_entropic(const PositiveOperator& rho, std::span<const PositiveOperator> povm) {
  const std::size_t last = rho.subsystems() - 1;
  Part a;
  for (std::size_t k = 0; k < last; ++k) a.push_back(k);
  const Dims a_dims(rho.dims().begin(), rho.dims().end() - 1);
  const auto out = local_measurement_channel(a_dims, povm)(rho);
  const std::vector<Part> parts{a, Part{last}};
  return mutual_info_entropic(rho, parts) - mutual_info_entropic(out, parts);
}

/// S(Phi rho) - S(rho) for a pinching channel built from `projectors`.
/// When `sigma` is given the projectors must commute with it.
inline ExtendedReal entropy_gain_pinching(const PositiveOperator& rho, std::span<const Projector> projectors,
                                          const std::optional<PositiveOperator>& sigma = std::nullopt) {
  if (sigma) {
    for (const auto& p : projectors) {
      if ((p.matrix() * sigma->matrix() - sigma->matrix() * p.matrix()).norm() >
          1e-9 * std::max(1.0, sigma->matrix().norm()))
        throw std::invalid_argument("entropy_gain_pinching: projector does not commute with sigma");
    }
  }
  const auto phi = channels::pinching(projectors);
  return von_neumann_entropy(phi(rho)).value() - von_neumann_entropy(rho).value();
}

/// Chain-rule gaps for channels Phi: A -> B, Psi: B -> C at rho.
struct ChainRuleGaps {
  ExtendedReal gap1;        // I(Phi, rho) - I(Psi o Phi, rho), from entropies
  ExtendedReal gap2;        // I(Psi, Phi rho) - I(Psi o Phi, rho), from entropies
  ExtendedReal gap1_delta;  // Delta_{Psi (x) id_R}(omega_BR, omega_B (x) omega_R)
  ExtendedReal gap2_delta;  // Delta_{Tr_E}(Psi (x) id_RE(omega), Psi(omega_B) (x) omega_RE)
};

inline ChainRuleGaps chain_rule_gaps(const QuantumOperation& phi, const QuantumOperation& psi,
                                     const PositiveOperator& rho) {
  if (!phi.is_channel() || !psi.is_channel()) throw std::invalid_argument("chain_rule_gaps: channels required");
  const auto composed = channels::compose(phi, psi);
  const auto i_phi = channel_mutual_info_entropic(phi, rho);
  const auto i_psi = channel_mutual_info_entropic(psi, phi(rho));
  const auto i_comp = channel_mutual_info_entropic(composed, rho);

  ChainRuleGaps out{i_phi - i_comp, i_psi - i_comp, 0.0, 0.0};

  const auto pure = purify(rho);
  const std::size_t dr = rho.dim();
  const std::size_t nb = phi.out_dims().size();

  // omega_BR and the first gap.
  const auto omega_br = channels::tensor_with_identity(phi, dr)(pure);
  Part r_pos{nb};
  const auto omega_r = partial_trace(omega_br, std::span<const std::size_t>(r_pos));
  out.gap1_delta =
      delta(channels::tensor_with_identity(psi, dr), omega_br, tensor(phi(rho), omega_r)).value();

  // omega on B E R from the Stinespring isometry of Phi.
  const auto v = stinespring(phi);
  Matrix vr = detail::kron(v.v, Matrix::Identity(static_cast<Eigen::Index>(dr), static_cast<Eigen::Index>(dr)));
  Dims ber = v.joint_dims();
  ber.push_back(dr);
  const PositiveOperator omega(HermitianOperator(ber, vr * pure.matrix() * vr.adjoint()), PositiveOperator::Trusted{});
  Part re_pos{nb, nb + 1};
  Part b_pos;
  for (std::size_t k = 0; k < nb; ++k) b_pos.push_back(k);
  const auto omega_re = partial_trace(omega, std::span<const std::size_t>(re_pos));
  const auto omega_b = partial_trace(omega, std::span<const std::size_t>(b_pos));
  const auto psi_omega = channels::tensor_with_identity(psi, Dims{v.env_dim, dr})(omega);
  const auto reference = tensor(psi(omega_b), omega_re);
  // Trace out E, the subsystem right after C.
  const std::size_t nc = psi.out_dims().size();
  Part keep_cr;
  for (std::size_t k = 0; k < nc; ++k) keep_cr.push_back(k);
  keep_cr.push_back(nc + 1);
  out.gap2_delta = delta_partial_trace(psi_omega, reference, keep_cr).value();
  return out;
}

// ---------------------------------------------------------------------------
// Convexity moduli and gap functions
// ---------------------------------------------------------------------------

enum class WeightMode { shared, separate };

/// Shared weights: sum_i p_i D(rho_i||sigma_i) - D(sum p_i rho_i || sum p_i sigma_i).
/// Separate weights: sum_i p_i D(rho_i||sigma_i) + KL(p||q) - D(sum p_i rho_i || sum q_i sigma_i).
/// Items with zero weight are dropped.
inline DisturbanceResult convexity_modulus(const Ensemble& e1, const Ensemble& e2, WeightMode mode) {
  if (e1.size() != e2.size()) throw std::invalid_argument("convexity_modulus: ensembles differ in length");
  if (e1.dims() != e2.dims()) throw std::invalid_argument("convexity_modulus: ensembles differ in dims");
  const auto p = e1.weights();
  const auto q = mode == WeightMode::shared ? p : e2.weights();
  ExtendedReal upper = mode == WeightMode::shared ? ExtendedReal(0.0) : kl_divergence(p, q);
  PositiveOperator a = PositiveOperator::zero(e1.dims());
  PositiveOperator b = PositiveOperator::zero(e1.dims());
  for (std::size_t i = 0; i < e1.size(); ++i) {
    if (p[i] > 0.0) {
      upper += p[i] * relative_entropy(e1.items()[i].state, e2.items()[i].state);
      a = a + p[i] * e1.items()[i].state;
    }
    if (q[i] > 0.0) b = b + q[i] * e2.items()[i].state;
  }
  return make_disturbance(upper, relative_entropy(a, b));
}

/// IG(M, rho) = I(Psi_M, rho) for the measurement channel of a POVM.
inline ExtendedReal information_gain(std::span<const PositiveOperator> povm, const PositiveOperator& rho) {
  return channel_mutual_info(channels::measurement_povm(povm), rho);
}

struct LocalInformationGain {
  ExtendedReal ig_local;   // IG(M, rho_A)
  ExtendedReal ig_joint;   // IG(M (x) I_B, rho)
  ExtendedReal gap;        // ig_local - ig_joint
  ExtendedReal gap_delta;  // same gap from the second chain rule in Delta form
};

/// Information gain of a POVM on the first part of a bipartite state and of
/// its local extension M (x) I_B.
inline LocalInformationGain information_gain_local(std::span<const PositiveOperator> povm,
                                                   const PositiveOperator& rho) {
  if (rho.subsystems() < 2) throw std::invalid_argument("information_gain_local: state must be bipartite");
  const auto trace_b = channels::partial_trace(rho.dims(), {0});
  const auto m = channels::measurement_povm(povm);
  if (m.in_dims() != trace_b.out_dims()) throw std::invalid_argument("information_gain_local: POVM dims mismatch");
  const auto rho_a = trace_b(rho);
  LocalInformationGain out{channel_mutual_info(m, rho_a), channel_mutual_info(channels::compose(trace_b, m), rho), 0.0,
                           0.0};
  out.gap = out.ig_local - out.ig_joint;
  out.gap_delta = chain_rule_gaps(trace_b, m, rho).gap2_delta;
  return out;
}

enum class SfKind { sf1, sf2 };

/// sf1: D(rho+eta||sigma) - D(rho||sigma+theta).
/// sf2: Tr(rho+eta)(-ln sigma) - Tr rho(-ln(sigma+theta)).
/// The subtracted term being infinite puts the pair out of domain.
inline DisturbanceResult sf_gap(SfKind kind, const PositiveOperator& rho, const PositiveOperator& sigma,
                                const PositiveOperator& eta, const PositiveOperator& theta) {
  if (kind == SfKind::sf1)
    return make_disturbance(relative_entropy(rho + eta, sigma), relative_entropy(rho, sigma + theta));
  return make_disturbance(cross_entropy(rho + eta, sigma), cross_entropy(rho, sigma + theta));
}

/// sf1 rebuilt from the two proof identities:
/// D(eta||sigma) + Delta_{Tr_R}(rho^, sigma^) + ln2 Tr(rho+eta) - f(rho, eta) - Tr(sigma + theta).
inline ExtendedReal sf1_via_proof(const PositiveOperator& rho, const PositiveOperator& sigma,
                                  const PositiveOperator& eta, const PositiveOperator& theta) {
  const auto [rh, sh] = flagged_pair(rho, sigma, theta);
  std::vector<std::size_t> keep(rho.subsystems());
  for (std::size_t k = 0; k < keep.size(); ++k) keep[k] = k;
  const auto d = delta_partial_trace(rh, sh, keep).value();
  const auto f = sf1_mixing_term(rho, eta);
  const auto head = relative_entropy(eta, sigma) + d;
  if (head.is_infinite()) return head;
  return head.value() + std::log(2.0) * (rho.trace() + eta.trace()) - f.value() - sigma.trace() - theta.trace();
}

// ---------------------------------------------------------------------------
// Dispatch by name, for batch manifests
// ---------------------------------------------------------------------------

enum class IdentityId {
  donald,
  pinching_decomposition,
  re_decomposition,
  weighted_sum,
  multipartite_chain,
  sf1_proof_one,
  sf1_proof_two
};

inline constexpr std::string_view identity_names[] = {"donald",       "pinching_decomposition", "re_decomposition",
                                                      "weighted_sum", "multipartite_chain",     "sf1_proof_one",
                                                      "sf1_proof_two"};

inline std::optional<IdentityId> parse_identity_id(std::string_view name) {
  for (std::size_t i = 0; i < std::size(identity_names); ++i)
    if (identity_names[i] == name) return static_cast<IdentityId>(i);
  return std::nullopt;
}

inline std::string_view to_string(IdentityId id) { return identity_names[static_cast<std::size_t>(id)]; }

}  // namespace qred
