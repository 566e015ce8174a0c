#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qred/extended_real.hpp"
#include "qred/operator.hpp"

namespace qred {

/// D(rho||sigma) is +inf when the mass of rho outside supp(sigma) exceeds
/// this fraction of Tr rho.
inline constexpr double kInfinityLeak = 1e-9;

/// eta(x) = -x ln x with eta(0) = 0.
inline double eta(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

inline double binary_entropy(double p) { return eta(p) + eta(1.0 - p); }

/// Homogeneous extension of the binary entropy to the positive quadrant.
inline double binary_entropy_ext(double a, double b) { return eta(a) + eta(b) - eta(a + b); }

/// Homogeneous extension S(rho) = Tr eta(rho) - eta(Tr rho); zero at rho = 0.
inline ExtendedReal von_neumann_entropy(const PositiveOperator& rho) {
  const auto s = rho.clamped_spectrum();
  double acc = 0.0;
  double tr = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    acc += eta(s.values(i));
    tr += s.values(i);
  }
  return std::max(0.0, acc - eta(tr));
}

namespace detail {

inline void require_same_dims(const HermitianOperator& a, const HermitianOperator& b, const char* what) {
  if (a.dims() != b.dims()) {
    throw std::invalid_argument(std::string(what) + ": dims mismatch " + dims_string(a.dims()) + " vs " +
                                dims_string(b.dims()));
  }
}

// Exact classical branch: both operators diagonal in the computational basis,
// so no eigenvector leakage exists and support is decided by exact zeros.
inline ExtendedReal classical_relative_entropy(const RealVector& p, const RealVector& q) {
  double acc = 0.0;
  double tp = 0.0;
  double tq = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = std::max(p(i), 0.0);
    const double qi = std::max(q(i), 0.0);
    tp += pi;
    tq += qi;
    if (pi == 0.0) continue;
    if (qi == 0.0) return ExtendedReal::infinity();
    acc += pi * (std::log(pi) - std::log(qi));
  }
  return acc + tq - tp;
}

struct SupportBasis {
  Matrix vectors;      // d x r, eigenvectors of sigma on its support
  RealVector values;   // r retained eigenvalues
};

inline SupportBasis support_basis(const PositiveOperator& sigma) {
  const auto s = sigma.clamped_spectrum();
  const double cut = s.support_threshold();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
    if (s.values(i) > cut) keep.push_back(i);
  SupportBasis b{Matrix(s.vectors.rows(), static_cast<Eigen::Index>(keep.size())),
                 RealVector(static_cast<Eigen::Index>(keep.size()))};
  for (std::size_t k = 0; k < keep.size(); ++k) {
    b.vectors.col(static_cast<Eigen::Index>(k)) = s.vectors.col(keep[k]);
    b.values(static_cast<Eigen::Index>(k)) = s.values(keep[k]);
  }
  return b;
}

inline bool is_zero_operator(const PositiveOperator& rho) { return rho.matrix().cwiseAbs().maxCoeff() == 0.0; }

}  // namespace detail

/// Lindblad's extension of the quantum relative entropy, in nats.
///
/// +inf when supp(rho) is not contained in supp(sigma): the mass of rho
/// outside the support of sigma exceeds kInfinityLeak * Tr rho. Otherwise
/// the value is evaluated in the eigenbasis of sigma restricted to its
/// support, with rho compressed to that subspace. D(0||sigma) = Tr sigma.
inline ExtendedReal relative_entropy(const PositiveOperator& rho, const PositiveOperator& sigma) {
  detail::require_same_dims(rho, sigma, "relative_entropy");
  const double tr_sigma = std::max(sigma.trace(), 0.0);
  if (detail::is_zero_operator(rho)) return tr_sigma;
  if (rho.is_diagonal() && sigma.is_diagonal())
    return detail::classical_relative_entropy(rho.diagonal_values(), sigma.diagonal_values());

  const double tr_rho = rho.trace();
  const auto basis = detail::support_basis(sigma);
  if (basis.values.size() == 0) return ExtendedReal::infinity();
  const Matrix compressed = basis.vectors.adjoint() * rho.matrix() * basis.vectors;
  const double tr_compressed = compressed.trace().real();
  if (tr_rho - tr_compressed > kInfinityLeak * tr_rho) return ExtendedReal::infinity();

  Eigen::SelfAdjointEigenSolver<Matrix> solver((compressed + compressed.adjoint()) * 0.5,
                                               Eigen::EigenvaluesOnly);
  double rho_log_rho = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) rho_log_rho -= eta(solver.eigenvalues()(i));
  double rho_log_sigma = 0.0;
  for (Eigen::Index j = 0; j < basis.values.size(); ++j)
    rho_log_sigma += compressed(j, j).real() * std::log(basis.values(j));
  return std::max(0.0, rho_log_rho - rho_log_sigma + tr_sigma - tr_compressed);
}

/// Tr rho(-ln sigma); +inf when supp(rho) is not contained in supp(sigma).
inline ExtendedReal cross_entropy(const PositiveOperator& rho, const PositiveOperator& sigma) {
  detail::require_same_dims(rho, sigma, "cross_entropy");
  if (detail::is_zero_operator(rho)) return 0.0;
  if (rho.is_diagonal() && sigma.is_diagonal()) {
    const auto p = rho.diagonal_values();
    const auto q = sigma.diagonal_values();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p(i) <= 0.0) continue;
      if (q(i) <= 0.0) return ExtendedReal::infinity();
      acc -= p(i) * std::log(q(i));
    }
    return acc;
  }
  const double tr_rho = rho.trace();
  const auto s = sigma.clamped_spectrum();
  const double cut = s.support_threshold();
  double inside = 0.0;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < s.values.size(); ++j) {
    if (s.values(j) <= cut) continue;
    const double w = (s.vectors.col(j).adjoint() * rho.matrix() * s.vectors.col(j))(0, 0).real();
    inside += w;
    acc -= w * std::log(s.values(j));
  }
  if (tr_rho - inside > kInfinityLeak * tr_rho) return ExtendedReal::infinity();
  return acc;
}

/// D via the cross-entropy expansion Tr rho(-ln sigma) - S(rho) - eta(Tr rho)
/// + Tr sigma - Tr rho. Independent of the support-compressed evaluation in
/// relative_entropy; used as its cross-check.
inline ExtendedReal relative_entropy_via_cross_entropy(const PositiveOperator& rho, const PositiveOperator& sigma) {
  const auto ce = cross_entropy(rho, sigma);
  if (ce.is_infinite()) return ce;
  const double tr_rho = rho.trace();
  return ce - von_neumann_entropy(rho) - eta(tr_rho) + sigma.trace() - tr_rho;
}

/// Kullback-Leibler divergence sum p_i ln(p_i / q_i).
inline ExtendedReal kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw std::invalid_argument("kl_divergence: negative entry");
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return ExtendedReal::infinity();
    acc += p[i] * std::log(p[i] / q[i]);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

/// Finite list of (weight, state) pairs with weights summing to one.
class Ensemble {
 public:
  struct Item {
    double weight;
    PositiveOperator state;
  };

  Ensemble() = default;
  explicit Ensemble(std::vector<Item> items) : items_(std::move(items)) {
    if (items_.empty()) throw std::invalid_argument("Ensemble: no items");
    double total = 0.0;
    for (const auto& it : items_) {
      if (!(it.weight >= 0.0)) throw std::invalid_argument("Ensemble: negative weight");
      if (it.state.dims() != items_.front().state.dims())
        throw std::invalid_argument("Ensemble: states have different dims");
      require_unit_trace(it.state, "Ensemble", 1e-8);
      total += it.weight;
    }
    if (std::abs(total - 1.0) > 1e-10)
      throw std::invalid_argument("Ensemble: weights sum to " + std::to_string(total));
  }

  const std::vector<Item>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  const Dims& dims() const { return items_.front().state.dims(); }

  std::vector<double> weights() const {
    std::vector<double> w;
    for (const auto& it : items_) w.push_back(it.weight);
    return w;
  }

  PositiveOperator average() const {
    PositiveOperator acc = PositiveOperator::zero(dims());
    for (const auto& it : items_)
      if (it.weight > 0.0) acc = acc + it.weight * it.state;
    return acc;
  }

 private:
  std::vector<Item> items_;
};

/// Holevo quantity sum_i p_i D(rho_i || rho_bar).
inline ExtendedReal holevo_chi(const Ensemble& e) {
  const auto avg = e.average();
  ExtendedReal acc = 0.0;
  for (const auto& it : e.items())
    if (it.weight > 0.0) acc += it.weight * relative_entropy(it.state, avg);
  return acc;
}

/// Holevo quantity as S(rho_bar) - sum_i p_i S(rho_i).
inline ExtendedReal holevo_chi_entropic(const Ensemble& e) {
  ExtendedReal acc = von_neumann_entropy(e.average());
  for (const auto& it : e.items())
    if (it.weight > 0.0) acc -= it.weight * von_neumann_entropy(it.state);
  return acc;
}

// ---------------------------------------------------------------------------
// Energy, Gibbs states, free energy
// ---------------------------------------------------------------------------

/// Hamiltonian with nonnegative spectrum.
class EnergyObservable {
 public:
  explicit EnergyObservable(HermitianOperator h) : h_(std::move(h)) {
    const auto s = h_.spectrum();
    if (s.min() < -kPositivityTolerance * std::max(s.max_abs(), 1e-300))
      throw std::invalid_argument("EnergyObservable: negative energy " + std::to_string(s.min()));
    spectrum_ = s;
  }

  const HermitianOperator& op() const { return h_; }
  const Dims& dims() const { return h_.dims(); }
  const Spectrum& spectrum() const { return spectrum_; }

  /// ln Tr exp(-beta H), evaluated with the ground energy factored out.
  double log_partition(double beta) const {
    const double e0 = spectrum_.min();
    double z = 0.0;
    for (Eigen::Index i = 0; i < spectrum_.values.size(); ++i) z += std::exp(-beta * (spectrum_.values(i) - e0));
    return -beta * e0 + std::log(z);
  }

 private:
  HermitianOperator h_;
  Spectrum spectrum_;
};

/// Number operator diag(0, 1, ..., d-1).
inline EnergyObservable number_operator(std::size_t d) {
  std::vector<double> n(d);
  for (std::size_t i = 0; i < d; ++i) n[i] = static_cast<double>(i);
  return EnergyObservable(HermitianOperator::diagonal(std::span<const double>(n)));
}

inline void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("inverse temperature must be positive");
}

/// exp(-beta H) / Tr exp(-beta H).
inline PositiveOperator gibbs_state(const EnergyObservable& h, double beta) {
  require_positive_beta(beta);
  const auto& s = h.spectrum();
  const double e0 = s.min();
  RealVector w(s.values.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * (s.values(i) - e0));
  w /= w.sum();
  return {HermitianOperator(h.dims(), s.vectors * w.asDiagonal() * s.vectors.adjoint()), PositiveOperator::Trusted{}};
}

/// Tr H rho.
inline ExtendedReal mean_energy(const EnergyObservable& h, const PositiveOperator& rho) {
  detail::require_same_dims(h.op(), rho, "mean_energy");
  return (h.op().matrix() * rho.matrix()).trace().real();
}

/// beta^{-1} (D(rho || gamma) - ln Tr exp(-beta H)).
inline ExtendedReal free_energy(const EnergyObservable& h, double beta, const PositiveOperator& rho) {
  require_positive_beta(beta);
  require_unit_trace(rho, "free_energy", 1e-8);
  const auto d = relative_entropy(rho, gibbs_state(h, beta));
  if (d.is_infinite()) return d;
  return (d.value() - h.log_partition(beta)) / beta;
}

/// E(rho) - S(rho) / beta.
inline ExtendedReal free_energy_entropic(const EnergyObservable& h, double beta, const PositiveOperator& rho) {
  require_positive_beta(beta);
  return mean_energy(h, rho).value() - von_neumann_entropy(rho).value() / beta;
}

// ---------------------------------------------------------------------------
// Mutual information
// ---------------------------------------------------------------------------

using Part = std::vector<std::size_t>;

namespace detail {

inline void check_parts(std::span<const Part> parts, std::size_t subsystems, const char* what) {
  std::vector<bool> used(subsystems, false);
  for (const auto& part : parts) {
    if (part.empty()) throw std::invalid_argument(std::string(what) + ": empty part");
    for (auto k : part) {
      if (k >= subsystems) throw std::invalid_argument(std::string(what) + ": subsystem index out of range");
      if (used[k]) throw std::invalid_argument(std::string(what) + ": parts are not disjoint");
      used[k] = true;
    }
  }
}

inline Part sorted(Part p) {
  std::sort(p.begin(), p.end());
  return p;
}

/// (rho restricted to the union of parts, product of part marginals) in the
/// same subsystem order.
inline std::pair<PositiveOperator, PositiveOperator> state_and_product(const PositiveOperator& rho,
                                                                         std::span<const Part> parts) {
  Part all;
  std::vector<PositiveOperator> marginals;
  Part product_order;
  for (const auto& part : parts) {
    auto sp = sorted(part);
    marginals.push_back(partial_trace(rho, std::span<const std::size_t>(sp)));
    product_order.insert(product_order.end(), sp.begin(), sp.end());
    all.insert(all.end(), sp.begin(), sp.end());
  }
  std::sort(all.begin(), all.end());
  auto joint = partial_trace(rho, std::span<const std::size_t>(all));
  auto prod = tensor(std::span<const PositiveOperator>(marginals));
  std::vector<std::size_t> order(all.size());
  for (std::size_t k = 0; k < all.size(); ++k)
    order[k] = static_cast<std::size_t>(std::find(product_order.begin(), product_order.end(), all[k]) -
                                        product_order.begin());
  return {std::move(joint), permute_subsystems(prod, std::span<const std::size_t>(order))};
}

}  // namespace detail

/// Total correlation D(rho_B || rho_{B_1} (x) ... (x) rho_{B_m}) over the
/// listed disjoint parts, where B is the union of the parts.
inline ExtendedReal multipartite_mutual_info(const PositiveOperator& rho, std::span<const Part> parts) {
  detail::check_parts(parts, rho.subsystems(), "multipartite_mutual_info");
  if (parts.size() < 2) return 0.0;
  const auto [joint, prod] = detail::state_and_product(rho, parts);
  return relative_entropy(joint, prod);
}
inline ExtendedReal multipartite_mutual_info(const PositiveOperator& rho, std::initializer_list<Part> parts) {
  std::vector<Part> v(parts);
  return multipartite_mutual_info(rho, std::span<const Part>(v));
}

/// sum_j S(rho_{B_j}) - S(rho_B).
inline ExtendedReal mutual_info_entropic(const PositiveOperator& rho, std::span<const Part> parts) {
  detail::check_parts(parts, rho.subsystems(), "mutual_info_entropic");
  Part all;
  ExtendedReal acc = 0.0;
  for (const auto& part : parts) {
    auto sp = detail::sorted(part);
    acc += von_neumann_entropy(partial_trace(rho, std::span<const std::size_t>(sp)));
    all.insert(all.end(), sp.begin(), sp.end());
  }
  std::sort(all.begin(), all.end());
  return acc - von_neumann_entropy(partial_trace(rho, std::span<const std::size_t>(all)));
}

/// Conditional mutual information I(A:B|C) = I(A:BC) - I(A:C), evaluated as
/// the decrease D(rho_ABC || rho_A (x) rho_BC) - D(rho_AC || rho_A (x) rho_C)
/// of the divergence under tracing out B. `c` may be empty.
inline ExtendedReal qcmi(const PositiveOperator& rho, const Part& a, const Part& b, const Part& c) {
  Part bc = b;
  bc.insert(bc.end(), c.begin(), c.end());
  const std::vector<Part> outer{a, bc};
  detail::check_parts(outer, rho.subsystems(), "qcmi");
  const auto [abc, a_bc] = detail::state_and_product(rho, outer);

  // Subsystem positions of B inside the sorted union A u B u C.
  Part all = a;
  all.insert(all.end(), bc.begin(), bc.end());
  std::sort(all.begin(), all.end());
  Part keep;
  for (std::size_t k = 0; k < all.size(); ++k)
    if (std::find(b.begin(), b.end(), all[k]) == b.end()) keep.push_back(k);

  const auto d_in = relative_entropy(abc, a_bc);
  const auto d_out = relative_entropy(partial_trace(abc, std::span<const std::size_t>(keep)),
                                      partial_trace(a_bc, std::span<const std::size_t>(keep)));
  if (d_out.is_infinite()) throw std::domain_error("qcmi: I(A:C) is infinite");
  return d_in - d_out;
}

}  // namespace qred
