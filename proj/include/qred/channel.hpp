#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qred/operator.hpp"

namespace qred {

/// Gate for sum K^dag K <= I and for the channel (equality) flag.
inline constexpr double kChannelTolerance = 1e-9;

/// Completely positive trace-non-increasing map in Kraus form,
/// rho -> sum_k K_k rho K_k^dag.
class QuantumOperation {
 public:
  QuantumOperation(std::vector<Matrix> kraus, Dims in_dims, Dims out_dims)
      : kraus_(std::move(kraus)), in_dims_(std::move(in_dims)), out_dims_(std::move(out_dims)) {
    if (kraus_.empty()) throw std::invalid_argument("QuantumOperation: no Kraus operators");
    const auto din = static_cast<Eigen::Index>(product(in_dims_));
    const auto dout = static_cast<Eigen::Index>(product(out_dims_));
    for (const auto& k : kraus_) {
      if (k.rows() != dout || k.cols() != din) {
        throw std::invalid_argument("QuantumOperation: Kraus operator is " + std::to_string(k.rows()) + "x" +
                                    std::to_string(k.cols()) + ", expected " + std::to_string(dout) + "x" +
                                    std::to_string(din));
      }
    }
    const Matrix gram = kraus_gram();
    Eigen::SelfAdjointEigenSolver<Matrix> solver((gram + gram.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    trace_excess_ = ev.maxCoeff() - 1.0;
    channel_defect_ = std::max(std::abs(ev.maxCoeff() - 1.0), std::abs(ev.minCoeff() - 1.0));
    if (trace_excess_ > kChannelTolerance) {
      throw std::invalid_argument("QuantumOperation: sum K^dag K exceeds the identity by " +
                                  std::to_string(trace_excess_));
    }
  }

  QuantumOperation(std::vector<Matrix> kraus, Dims dims) : QuantumOperation(std::move(kraus), dims, dims) {}

  const std::vector<Matrix>& kraus() const { return kraus_; }
  const Dims& in_dims() const { return in_dims_; }
  const Dims& out_dims() const { return out_dims_; }
  std::size_t in_dim() const { return product(in_dims_); }
  std::size_t out_dim() const { return product(out_dims_); }
  std::size_t kraus_count() const { return kraus_.size(); }

  bool is_channel() const { return channel_defect_ <= kChannelTolerance; }
  /// lambda_max(sum K^dag K) - 1.
  double trace_excess() const { return trace_excess_; }
  /// max |lambda(sum K^dag K) - 1|.
  double channel_defect() const { return channel_defect_; }

  Matrix kraus_gram() const {
    Matrix g = Matrix::Zero(static_cast<Eigen::Index>(in_dim()), static_cast<Eigen::Index>(in_dim()));
    for (const auto& k : kraus_) g += k.adjoint() * k;
    return g;
  }

  Matrix apply_matrix(const Matrix& x) const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(out_dim()), static_cast<Eigen::Index>(out_dim()));
    for (const auto& k : kraus_) out += k * x * k.adjoint();
    return out;
  }

  HermitianOperator apply(const HermitianOperator& x) const {
    check_input(x);
    return {out_dims_, apply_matrix(x.matrix())};
  }
  PositiveOperator apply(const PositiveOperator& x) const {
    return {apply(static_cast<const HermitianOperator&>(x)), PositiveOperator::Trusted{}};
  }
  PositiveOperator operator()(const PositiveOperator& x) const { return apply(x); }

 private:
  void check_input(const HermitianOperator& x) const {
    if (x.dims() != in_dims_) {
      throw std::invalid_argument("QuantumOperation: input dims " + dims_string(x.dims()) + " do not match " +
                                  dims_string(in_dims_));
    }
  }

  std::vector<Matrix> kraus_;
  Dims in_dims_;
  Dims out_dims_;
  double trace_excess_ = 0.0;
  double channel_defect_ = 0.0;
};

// ---------------------------------------------------------------------------
// Choi representation and validation
// ---------------------------------------------------------------------------

/// J = sum_ij Phi(|i><j|) (x) |i><j|, output factor first, unnormalised.
struct ChoiMatrix {
  Matrix j;
  Dims in_dims;
  Dims out_dims;
};

inline ChoiMatrix choi_from_action(const std::function<Matrix(const Matrix&)>& action, Dims in_dims, Dims out_dims) {
  const auto din = static_cast<Eigen::Index>(product(in_dims));
  const auto dout = static_cast<Eigen::Index>(product(out_dims));
  Matrix j = Matrix::Zero(dout * din, dout * din);
  for (Eigen::Index a = 0; a < din; ++a) {
    for (Eigen::Index b = 0; b < din; ++b) {
      Matrix e = Matrix::Zero(din, din);
      e(a, b) = 1.0;
      const Matrix out = action(e);
      for (Eigen::Index r = 0; r < dout; ++r)
        for (Eigen::Index c = 0; c < dout; ++c) j(r * din + a, c * din + b) = out(r, c);
    }
  }
  return {std::move(j), std::move(in_dims), std::move(out_dims)};
}

inline ChoiMatrix choi(const QuantumOperation& phi) {
  const auto din = static_cast<Eigen::Index>(phi.in_dim());
  const auto dout = static_cast<Eigen::Index>(phi.out_dim());
  Matrix j = Matrix::Zero(dout * din, dout * din);
  for (const auto& k : phi.kraus()) {
    Vector v(dout * din);
    for (Eigen::Index r = 0; r < dout; ++r)
      for (Eigen::Index a = 0; a < din; ++a) v(r * din + a) = k(r, a);
    j += v * v.adjoint();
  }
  return {std::move(j), phi.in_dims(), phi.out_dims()};
}

struct ValidationReport {
  bool is_cp = false;
  bool is_trace_nonincreasing = false;
  bool is_channel = false;
  double min_choi_eigenvalue = 0.0;  // relative to the Choi norm
  double trace_excess = 0.0;         // lambda_max(Tr_out J) - 1
  double channel_defect = 0.0;       // max |lambda(Tr_out J) - 1|
};

inline ValidationReport validate(const ChoiMatrix& c) {
  ValidationReport r;
  const Matrix jh = (c.j + c.j.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> js(jh, Eigen::EigenvaluesOnly);
  const double scale = std::max(js.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  r.min_choi_eigenvalue = js.eigenvalues().minCoeff() / scale;
  r.is_cp = r.min_choi_eigenvalue >= -kChannelTolerance;

  const Dims jd{product(c.out_dims), product(c.in_dims)};
  const std::size_t keep_in[] = {1};
  const Matrix marg = detail::partial_trace(jh, jd, keep_in);
  Eigen::SelfAdjointEigenSolver<Matrix> ms((marg + marg.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  r.trace_excess = ms.eigenvalues().maxCoeff() - 1.0;
  r.channel_defect = std::max(std::abs(ms.eigenvalues().maxCoeff() - 1.0), std::abs(ms.eigenvalues().minCoeff() - 1.0));
  r.is_trace_nonincreasing = r.trace_excess <= kChannelTolerance;
  r.is_channel = r.is_cp && r.channel_defect <= kChannelTolerance;
  return r;
}

inline ValidationReport validate(const QuantumOperation& phi) { return validate(choi(phi)); }

/// Kraus decomposition of a Choi matrix; the number of terms equals its rank.
inline QuantumOperation kraus_from_choi(const ChoiMatrix& c) {
  const auto report = validate(c);
  if (!report.is_cp) throw std::invalid_argument("kraus_from_choi: map is not completely positive");
  const auto din = static_cast<Eigen::Index>(product(c.in_dims));
  const auto dout = static_cast<Eigen::Index>(product(c.out_dims));
  Eigen::SelfAdjointEigenSolver<Matrix> solver((c.j + c.j.adjoint()) * 0.5);
  const auto& ev = solver.eigenvalues();
  const double cut = 1e-14 * std::max(ev.maxCoeff(), 0.0);
  std::vector<Matrix> kraus;
  for (Eigen::Index i = ev.size(); i-- > 0;) {
    if (ev(i) <= cut) continue;
    Matrix k(dout, din);
    const double w = std::sqrt(ev(i));
    for (Eigen::Index r = 0; r < dout; ++r)
      for (Eigen::Index a = 0; a < din; ++a) k(r, a) = w * solver.eigenvectors()(r * din + a, i);
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) kraus.push_back(Matrix::Zero(dout, din));
  return {std::move(kraus), c.in_dims, c.out_dims};
}

// ---------------------------------------------------------------------------
// Stinespring, complementary and adjoint maps
// ---------------------------------------------------------------------------

/// Contraction V : H_A -> H_B (x) H_E with Phi(rho) = Tr_E V rho V^dag.
struct StinespringDilation {
  Matrix v;  // (d_B * d_E) x d_A, environment index fastest
  std::size_t env_dim = 1;
  Dims in_dims;
  Dims out_dims;

  Dims joint_dims() const {
    Dims d = out_dims;
    d.push_back(env_dim);
    return d;
  }

  /// V rho V^dag on B (x) E.
  HermitianOperator embed(const HermitianOperator& rho) const { return {joint_dims(), v * rho.matrix() * v.adjoint()}; }
  PositiveOperator embed(const PositiveOperator& rho) const {
    return {embed(static_cast<const HermitianOperator&>(rho)), PositiveOperator::Trusted{}};
  }

  HermitianOperator apply(const HermitianOperator& rho) const {
    std::vector<std::size_t> keep(out_dims.size());
    for (std::size_t k = 0; k < keep.size(); ++k) keep[k] = k;
    return partial_trace(embed(rho), std::span<const std::size_t>(keep));
  }
};

inline StinespringDilation stinespring(const QuantumOperation& phi) {
  const auto din = static_cast<Eigen::Index>(phi.in_dim());
  const auto dout = static_cast<Eigen::Index>(phi.out_dim());
  const auto env = static_cast<Eigen::Index>(phi.kraus_count());
  Matrix v = Matrix::Zero(dout * env, din);
  for (Eigen::Index k = 0; k < env; ++k)
    for (Eigen::Index b = 0; b < dout; ++b) v.row(b * env + k) = phi.kraus()[static_cast<std::size_t>(k)].row(b);
  return {std::move(v), static_cast<std::size_t>(env), phi.in_dims(), phi.out_dims()};
}

/// rho -> Tr_B V rho V^dag for the Stinespring isometry of a channel.
inline QuantumOperation complementary(const QuantumOperation& phi) {
  if (!phi.is_channel()) throw std::invalid_argument("complementary: input is not a channel");
  const auto din = static_cast<Eigen::Index>(phi.in_dim());
  const auto dout = static_cast<Eigen::Index>(phi.out_dim());
  const auto env = static_cast<Eigen::Index>(phi.kraus_count());
  std::vector<Matrix> out;
  for (Eigen::Index b = 0; b < dout; ++b) {
    Matrix l(env, din);
    for (Eigen::Index k = 0; k < env; ++k) l.row(k) = phi.kraus()[static_cast<std::size_t>(k)].row(b);
    out.push_back(std::move(l));
  }
  return {std::move(out), phi.in_dims(), Dims{static_cast<std::size_t>(env)}};
}

/// Heisenberg-picture map X -> sum_k K_k^dag X K_k on observables of the
/// output system. Not trace-non-increasing in general, hence its own type.
class AdjointMap {
 public:
  explicit AdjointMap(const QuantumOperation& phi) : in_dims_(phi.out_dims()), out_dims_(phi.in_dims()) {
    for (const auto& k : phi.kraus()) kraus_.push_back(k.adjoint());
  }

  const Dims& in_dims() const { return in_dims_; }
  const Dims& out_dims() const { return out_dims_; }

  Matrix apply_matrix(const Matrix& x) const {
    const auto d = static_cast<Eigen::Index>(product(out_dims_));
    Matrix out = Matrix::Zero(d, d);
    for (const auto& k : kraus_) out += k * x * k.adjoint();
    return out;
  }

  HermitianOperator apply(const HermitianOperator& x) const {
    if (x.dims() != in_dims_) throw std::invalid_argument("AdjointMap: input dims mismatch");
    return {out_dims_, apply_matrix(x.matrix())};
  }

 private:
  std::vector<Matrix> kraus_;
  Dims in_dims_;
  Dims out_dims_;
};

inline AdjointMap adjoint(const QuantumOperation& phi) { return AdjointMap(phi); }

// ---------------------------------------------------------------------------
// Standard constructions
// ---------------------------------------------------------------------------

namespace channels {

inline QuantumOperation identity(Dims dims) {
  const auto n = static_cast<Eigen::Index>(product(dims));
  return {{Matrix::Identity(n, n)}, dims, dims};
}

inline QuantumOperation unitary(const Matrix& u, Dims dims = {}) {
  if (dims.empty()) dims = {static_cast<std::size_t>(u.rows())};
  if (u.rows() != u.cols()) throw std::invalid_argument("unitary: matrix is not square");
  if ((u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm() > 1e-10)
    throw std::invalid_argument("unitary: matrix is not unitary");
  return {{u}, dims, dims};
}

/// Keeps the listed subsystems of `dims` and traces out the rest.
inline QuantumOperation partial_trace(const Dims& dims, std::span<const std::size_t> keep_in) {
  detail::check_subsystems(keep_in, dims.size(), "channels::partial_trace");
  std::vector<std::size_t> keep(keep_in.begin(), keep_in.end());
  std::sort(keep.begin(), keep.end());
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  Dims kd, td;
  for (auto k : keep) kd.push_back(dims[k]);
  for (auto k : traced) td.push_back(dims[k]);
  const auto nk = product(kd);
  const auto nt = product(td);
  const auto n = static_cast<Eigen::Index>(product(dims));
  std::vector<Matrix> kraus;
  std::vector<std::size_t> d(dims.size());
  for (std::size_t t = 0; t < nt; ++t) {
    Matrix k = Matrix::Zero(static_cast<Eigen::Index>(nk), n);
    const auto tdig = detail::digits(t, td);
    for (std::size_t s = 0; s < traced.size(); ++s) d[traced[s]] = tdig[s];
    for (std::size_t i = 0; i < nk; ++i) {
      const auto kdig = detail::digits(i, kd);
      for (std::size_t s = 0; s < keep.size(); ++s) d[keep[s]] = kdig[s];
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(detail::compose(d, dims))) = 1.0;
    }
    kraus.push_back(std::move(k));
  }
  if (kd.empty()) kd = {1};
  return {std::move(kraus), dims, std::move(kd)};
}
inline QuantumOperation partial_trace(const Dims& dims, std::initializer_list<std::size_t> keep) {
  std::vector<std::size_t> v(keep);
  return partial_trace(dims, std::span<const std::size_t>(v));
}

/// rho -> sum_i P_i rho P_i for mutually orthogonal projectors summing to I.
inline QuantumOperation pinching(std::span<const Projector> projectors) {
  if (projectors.empty()) throw std::invalid_argument("pinching: no projectors");
  const auto& dims = projectors.front().dims();
  const auto n = static_cast<Eigen::Index>(projectors.front().dim());
  Matrix sum = Matrix::Zero(n, n);
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    if (projectors[i].dims() != dims) throw std::invalid_argument("pinching: projector dims differ");
    for (std::size_t j = 0; j < i; ++j) {
      if ((projectors[i].matrix() * projectors[j].matrix()).norm() > 1e-10)
        throw std::invalid_argument("pinching: projectors are not mutually orthogonal");
    }
    sum += projectors[i].matrix();
    kraus.push_back(projectors[i].matrix());
  }
  if ((sum - Matrix::Identity(n, n)).norm() > 1e-10) throw std::invalid_argument("pinching: projectors do not sum to I");
  return {std::move(kraus), dims, dims};
}

/// Projectors onto the computational basis vectors.
inline std::vector<Projector> computational_projectors(std::size_t d) {
  std::vector<Projector> out;
  for (std::size_t i = 0; i < d; ++i)
    out.emplace_back(HermitianOperator::outer(basis_vector(d, i)), PositiveOperator::Trusted{});
  return out;
}

/// Complete dephasing in the computational basis.
inline QuantumOperation dephasing(std::size_t d) {
  const auto p = computational_projectors(d);
  return pinching(std::span<const Projector>(p));
}

/// Measurement channel rho -> sum_i Tr(M_i rho) |i><i| for a POVM {M_i}.
inline QuantumOperation measurement_povm(std::span<const PositiveOperator> povm) {
  if (povm.empty()) throw std::invalid_argument("measurement_povm: empty POVM");
  const auto& dims = povm.front().dims();
  const auto n = static_cast<Eigen::Index>(povm.front().dim());
  const auto m = static_cast<Eigen::Index>(povm.size());
  Matrix sum = Matrix::Zero(n, n);
  std::vector<Matrix> kraus;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& mi = povm[static_cast<std::size_t>(i)];
    if (mi.dims() != dims) throw std::invalid_argument("measurement_povm: element dims differ");
    sum += mi.matrix();
    const Matrix root = sqrt_psd(mi).matrix();
    for (Eigen::Index k = 0; k < n; ++k) {
      Matrix kr = Matrix::Zero(m, n);
      kr.row(i) = root.row(k);
      kraus.push_back(std::move(kr));
    }
  }
  if ((sum - Matrix::Identity(n, n)).norm() > 1e-10) throw std::invalid_argument("measurement_povm: elements do not sum to I");
  return {std::move(kraus), dims, Dims{static_cast<std::size_t>(m)}};
}

/// Computational-basis projective measurement as a POVM.
inline std::vector<PositiveOperator> computational_povm(std::size_t d) {
  std::vector<PositiveOperator> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(PositiveOperator::pure(basis_vector(d, i)));
  return out;
}

/// Weyl (clock and shift) operators X^a Z^b, a, b in [0, d).
inline std::vector<Matrix> weyl_operators(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix x = Matrix::Zero(n, n);
  Matrix z = Matrix::Zero(n, n);
  const double pi = std::acos(-1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    x((i + 1) % n, i) = 1.0;
    z(i, i) = std::polar(1.0, 2.0 * pi * static_cast<double>(i) / static_cast<double>(d));
  }
  std::vector<Matrix> out;
  Matrix xa = Matrix::Identity(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    Matrix zb = Matrix::Identity(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
      out.push_back(xa * zb);
      zb = zb * z;
    }
    xa = xa * x;
  }
  return out;
}

/// rho -> (1 - p) rho + p Tr(rho) I / d.
inline QuantumOperation depolarizing(double p, std::size_t d = 2) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing: p must lie in [0, 1]");
  const double dd = static_cast<double>(d * d);
  auto w = weyl_operators(d);
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double weight = i == 0 ? 1.0 - p + p / dd : p / dd;
    if (weight > 0.0) kraus.push_back(std::sqrt(weight) * w[i]);
  }
  return {std::move(kraus), Dims{d}, Dims{d}};
}

/// Qubit amplitude damping with decay probability t.
inline QuantumOperation amplitude_damping(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("amplitude_damping: t must lie in [0, 1]");
  Matrix k0 = Matrix::Zero(2, 2);
  Matrix k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - t);
  k1(0, 1) = std::sqrt(t);
  return {{k0, k1}, Dims{2}, Dims{2}};
}

/// rho -> Tr(rho) tau.
inline QuantumOperation replacer(const PositiveOperator& tau, Dims in_dims) {
  require_unit_trace(tau, "replacer", 1e-10);
  const auto s = tau.clamped_spectrum();
  const auto din = static_cast<Eigen::Index>(product(in_dims));
  std::vector<Matrix> kraus;
  for (Eigen::Index j = 0; j < s.values.size(); ++j) {
    if (s.values(j) <= 0.0) continue;
    for (Eigen::Index i = 0; i < din; ++i) {
      Matrix k = Matrix::Zero(static_cast<Eigen::Index>(tau.dim()), din);
      k.col(i) = std::sqrt(s.values(j)) * s.vectors.col(j);
      kraus.push_back(std::move(k));
    }
  }
  return {std::move(kraus), std::move(in_dims), tau.dims()};
}

/// `then` after `first`: rho -> then(first(rho)).
inline QuantumOperation compose(const QuantumOperation& first, const QuantumOperation& then) {
  if (first.out_dims() != then.in_dims()) throw std::invalid_argument("compose: dims mismatch");
  std::vector<Matrix> kraus;
  for (const auto& b : then.kraus())
    for (const auto& a : first.kraus()) kraus.push_back(b * a);
  return {std::move(kraus), first.in_dims(), then.out_dims()};
}

inline QuantumOperation tensor(const QuantumOperation& a, const QuantumOperation& b) {
  std::vector<Matrix> kraus;
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) kraus.push_back(detail::kron(ka, kb));
  return {std::move(kraus), detail::concat(a.in_dims(), b.in_dims()), detail::concat(a.out_dims(), b.out_dims())};
}

/// Phi (x) id_R, the reference appended as trailing subsystems.
inline QuantumOperation tensor_with_identity(const QuantumOperation& phi, Dims reference) {
  return tensor(phi, identity(std::move(reference)));
}
inline QuantumOperation tensor_with_identity(const QuantumOperation& phi, std::size_t d_ref) {
  return tensor_with_identity(phi, Dims{d_ref});
}

/// id_L (x) Phi, the identity acting on leading subsystems.
inline QuantumOperation identity_with_tensor(Dims left, const QuantumOperation& phi) {
  return tensor(identity(std::move(left)), phi);
}

/// p Phi + (1 - p) Psi.
inline QuantumOperation mixture(double p, const QuantumOperation& phi, const QuantumOperation& psi) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mixture: p must lie in [0, 1]");
  if (phi.in_dims() != psi.in_dims() || phi.out_dims() != psi.out_dims())
    throw std::invalid_argument("mixture: dims mismatch");
  std::vector<Matrix> kraus;
  for (const auto& k : phi.kraus()) kraus.push_back(std::sqrt(p) * k);
  for (const auto& k : psi.kraus()) kraus.push_back(std::sqrt(1.0 - p) * k);
  return {std::move(kraus), phi.in_dims(), phi.out_dims()};
}

/// Single Kraus operator c * I, a trace-decreasing operation for c < 1.
inline QuantumOperation scaled_identity(double c, Dims dims) {
  const auto n = static_cast<Eigen::Index>(product(dims));
  return {{c * Matrix::Identity(n, n)}, dims, dims};
}

/// Compression rho -> A rho A^dag by a contraction A.
inline QuantumOperation compression(const Matrix& a, Dims dims) { return {{a}, dims, dims}; }

/// Pure-loss channel with amplitude factor k <= 1 on Fock levels 0..cutoff-1.
/// A_l = sum_n sqrt(C(n,l)) (1-k^2)^{l/2} k^{n-l} |n-l><n|. Thermal inputs with
/// mean photon number N map to thermal outputs with N' = k^2 N, up to
/// truncation of the input.
inline QuantumOperation truncated_attenuator(double k, std::size_t cutoff) {
  if (!(k >= 0.0)) throw std::invalid_argument("truncated_attenuator: k must be nonnegative");
  if (k > 1.0) throw std::invalid_argument("truncated_attenuator: amplification (k > 1) is not supported");
  if (cutoff < 1) throw std::invalid_argument("truncated_attenuator: cutoff must be positive");
  const double eta_t = k * k;
  const auto n = static_cast<Eigen::Index>(cutoff);
  std::vector<Matrix> kraus;
  for (Eigen::Index l = 0; l < n; ++l) {
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index m = l; m < n; ++m) {
      const double log_binom = std::lgamma(static_cast<double>(m) + 1) - std::lgamma(static_cast<double>(l) + 1) -
                               std::lgamma(static_cast<double>(m - l) + 1);
      double amp = std::exp(0.5 * log_binom);
      amp *= (l == 0) ? 1.0 : std::pow(1.0 - eta_t, 0.5 * static_cast<double>(l));
      amp *= (m - l == 0) ? 1.0 : std::pow(k, static_cast<double>(m - l));
      a(m - l, m) = amp;
    }
    if (a.norm() > 0.0) kraus.push_back(std::move(a));
  }
  return {std::move(kraus), Dims{cutoff}, Dims{cutoff}};
}

}  // namespace channels

}  // namespace qred
