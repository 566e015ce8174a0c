#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qred {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

/// Eigenvalues are kept iff lambda > kSupportCutoff * lambda_max.
inline constexpr double kSupportCutoff = 1e-10;
/// Relative Frobenius gate for accepting a matrix as Hermitian.
inline constexpr double kHermitianTolerance = 1e-12;
/// Relative gate for the smallest eigenvalue of a positive operator.
inline constexpr double kPositivityTolerance = 1e-10;
inline constexpr double kProjectorTolerance = 1e-10;

inline std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string dims_string(std::span<const std::size_t> dims) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << ']';
  return os.str();
}

namespace detail {

// Row-major multi-index: the first subsystem is the most significant digit,
// matching the Kronecker product convention.
inline std::vector<std::size_t> digits(std::size_t index, std::span<const std::size_t> dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  return out;
}

inline std::size_t compose(std::span<const std::size_t> digits, std::span<const std::size_t> dims) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

inline double frobenius(const Matrix& m) { return m.norm(); }

}  // namespace detail

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
struct Spectrum {
  RealVector values;
  Matrix vectors;

  double max() const { return values.size() ? values.maxCoeff() : 0.0; }
  double min() const { return values.size() ? values.minCoeff() : 0.0; }
  double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }

  /// Eigenvalue threshold below which a direction is outside the support.
  double support_threshold() const { return kSupportCutoff * std::max(max(), 0.0); }
};

/// Dense complex Hermitian matrix carrying subsystem dimension labels.
class HermitianOperator {
 public:
  HermitianOperator() : dims_{1}, m_(Matrix::Zero(1, 1)) {}

  HermitianOperator(Dims dims, Matrix m) : dims_(std::move(dims)), m_(std::move(m)) {
    if (dims_.empty()) throw std::invalid_argument("HermitianOperator: empty dims");
    for (auto d : dims_)
      if (d == 0) throw std::invalid_argument("HermitianOperator: zero subsystem dimension");
    const auto n = product(dims_);
    if (m_.rows() != static_cast<Eigen::Index>(n) || m_.cols() != static_cast<Eigen::Index>(n)) {
      throw std::invalid_argument("HermitianOperator: dims " + dims_string(dims_) +
                                  " do not match a " + std::to_string(m_.rows()) + "x" +
                                  std::to_string(m_.cols()) + " matrix");
    }
    const double scale = detail::frobenius(m_);
    const double skew = (m_ - m_.adjoint()).norm();
    if (skew > kHermitianTolerance * std::max(scale, 1e-300) && skew > 0.0) {
      throw std::invalid_argument("HermitianOperator: matrix is not Hermitian (skew " +
                                  std::to_string(skew / scale) + " relative)");
    }
    m_ = ((m_ + m_.adjoint()) * 0.5).eval();
  }

  explicit HermitianOperator(const Matrix& m) : HermitianOperator(square_dims(m), m) {}

  static HermitianOperator identity(Dims dims) {
    const auto n = static_cast<Eigen::Index>(product(dims));
    return {std::move(dims), Matrix::Identity(n, n)};
  }
  static HermitianOperator zero(Dims dims) {
    const auto n = static_cast<Eigen::Index>(product(dims));
    return {std::move(dims), Matrix::Zero(n, n)};
  }
  static HermitianOperator diagonal(std::span<const double> entries, Dims dims = {}) {
    if (dims.empty()) dims = {entries.size()};
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
    return {std::move(dims), std::move(m)};
  }
  static HermitianOperator diagonal(std::initializer_list<double> entries, Dims dims = {}) {
    std::vector<double> v(entries);
    return diagonal(std::span<const double>(v), std::move(dims));
  }
  /// |psi><psi| without normalisation.
  static HermitianOperator outer(const Vector& psi, Dims dims = {}) {
    if (dims.empty()) dims = {static_cast<std::size_t>(psi.size())};
    return {std::move(dims), psi * psi.adjoint()};
  }

  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t subsystems() const { return dims_.size(); }
  const Matrix& matrix() const { return m_; }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  double trace() const { return m_.trace().real(); }

  /// True when every off-diagonal entry is exactly zero.
  bool is_diagonal() const {
    for (Eigen::Index c = 0; c < m_.cols(); ++c)
      for (Eigen::Index r = 0; r < m_.rows(); ++r)
        if (r != c && m_(r, c) != cplx(0.0, 0.0)) return false;
    return true;
  }

  RealVector diagonal_values() const { return m_.diagonal().real(); }

  Spectrum spectrum() const {
    if (is_diagonal()) {
      // Exact for diagonal input; sorted ascending like the solver output.
      const auto n = m_.rows();
      std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), Eigen::Index{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](auto a, auto b) { return m_(a, a).real() < m_(b, b).real(); });
      Spectrum s{RealVector(n), Matrix::Zero(n, n)};
      for (Eigen::Index k = 0; k < n; ++k) {
        s.values(k) = m_(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
        s.vectors(order[static_cast<std::size_t>(k)], k) = 1.0;
      }
      return s;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_);
    if (solver.info() != Eigen::Success) throw std::runtime_error("HermitianOperator: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
  }

  bool approx_equal(const HermitianOperator& o, double tol) const {
    return dims_ == o.dims_ && (m_ - o.m_).norm() <= tol;
  }

  HermitianOperator relabel(Dims dims) const { return {std::move(dims), m_}; }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    check_same(a, b);
    return {a.dims_, a.m_ + b.m_, Unchecked{}};
  }
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    check_same(a, b);
    return {a.dims_, a.m_ - b.m_, Unchecked{}};
  }
  friend HermitianOperator operator*(double c, const HermitianOperator& a) { return {a.dims_, c * a.m_, Unchecked{}}; }
  friend HermitianOperator operator*(const HermitianOperator& a, double c) { return c * a; }

 protected:
  struct Unchecked {};
  HermitianOperator(Dims dims, Matrix m, Unchecked) : dims_(std::move(dims)), m_(std::move(m)) {}

  static Dims square_dims(const Matrix& m) { return Dims{static_cast<std::size_t>(m.rows())}; }

  static void check_same(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dims_ != b.dims_) {
      throw std::invalid_argument("HermitianOperator: dims mismatch " + dims_string(a.dims_) + " vs " +
                                  dims_string(b.dims_));
    }
  }

 private:
  Dims dims_;
  Matrix m_;
};

/// Hermitian operator with nonnegative spectrum (up to kPositivityTolerance).
class PositiveOperator : public HermitianOperator {
 public:
  struct Trusted {};

  PositiveOperator() = default;

  explicit PositiveOperator(HermitianOperator h) : HermitianOperator(std::move(h)) {
    const auto s = spectrum();
    if (s.min() < -kPositivityTolerance * s.max_abs()) {
      throw std::invalid_argument("PositiveOperator: negative eigenvalue " + std::to_string(s.min()));
    }
  }

  /// For results of positivity-preserving operations; skips the spectral check.
  PositiveOperator(HermitianOperator h, Trusted) : HermitianOperator(std::move(h)) {}

  PositiveOperator(Dims dims, Matrix m) : PositiveOperator(HermitianOperator(std::move(dims), std::move(m))) {}

  static PositiveOperator diagonal(std::initializer_list<double> entries, Dims dims = {}) {
    return PositiveOperator(HermitianOperator::diagonal(entries, std::move(dims)));
  }
  static PositiveOperator diagonal(std::span<const double> entries, Dims dims = {}) {
    return PositiveOperator(HermitianOperator::diagonal(entries, std::move(dims)));
  }
  static PositiveOperator pure(const Vector& psi, Dims dims = {}) {
    return {HermitianOperator::outer(psi, std::move(dims)), Trusted{}};
  }
  static PositiveOperator zero(Dims dims) { return {HermitianOperator::zero(std::move(dims)), Trusted{}}; }
  static PositiveOperator identity(Dims dims) { return {HermitianOperator::identity(std::move(dims)), Trusted{}}; }
  static PositiveOperator maximally_mixed(Dims dims) {
    auto id = HermitianOperator::identity(std::move(dims));
    const double n = static_cast<double>(id.dim());
    return {(1.0 / n) * id, Trusted{}};
  }

  /// Spectrum with negative rounding noise clamped to zero.
  Spectrum clamped_spectrum() const {
    auto s = spectrum();
    s.values = s.values.cwiseMax(0.0);
    return s;
  }

  PositiveOperator normalized() const {
    const double t = trace();
    if (!(t > 0)) throw std::domain_error("PositiveOperator: cannot normalise a zero-trace operator");
    return {(1.0 / t) * static_cast<const HermitianOperator&>(*this), Trusted{}};
  }

  PositiveOperator relabel(Dims dims) const { return {HermitianOperator::relabel(std::move(dims)), Trusted{}}; }

  friend PositiveOperator operator+(const PositiveOperator& a, const PositiveOperator& b) {
    return {static_cast<const HermitianOperator&>(a) + static_cast<const HermitianOperator&>(b), Trusted{}};
  }
  friend PositiveOperator operator*(double c, const PositiveOperator& a) {
    if (c < 0) throw std::invalid_argument("PositiveOperator: negative scale factor");
    return {c * static_cast<const HermitianOperator&>(a), Trusted{}};
  }
  friend PositiveOperator operator*(const PositiveOperator& a, double c) { return c * a; }
};

/// Orthogonal projector: P^2 = P.
class Projector : public PositiveOperator {
 public:
  Projector() = default;
  explicit Projector(HermitianOperator h) : PositiveOperator(std::move(h), Trusted{}) {
    const auto& m = matrix();
    if ((m * m - m).norm() > kProjectorTolerance * std::max(1.0, m.norm()))
      throw std::invalid_argument("Projector: operator is not idempotent");
  }
  Projector(HermitianOperator h, Trusted) : PositiveOperator(std::move(h), Trusted{}) {}

  std::size_t rank() const { return static_cast<std::size_t>(std::lround(trace())); }

  /// I - P.
  Projector complement() const {
    return {HermitianOperator::identity(dims()) - static_cast<const HermitianOperator&>(*this), Trusted{}};
  }
  /// U = 2P - I, Hermitian and unitary.
  Matrix reflection() const {
    return 2.0 * matrix() - Matrix::Identity(matrix().rows(), matrix().cols());
  }
};

// ---------------------------------------------------------------------------
// Tensor products and partial traces
// ---------------------------------------------------------------------------

namespace detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Dims concat(const Dims& a, const Dims& b) {
  Dims out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline void check_subsystems(std::span<const std::size_t> subsystems, std::size_t count, const char* what) {
  std::vector<bool> seen(count, false);
  for (auto k : subsystems) {
    if (k >= count) {
      throw std::invalid_argument(std::string(what) + ": subsystem index " + std::to_string(k) +
                                  " out of range for " + std::to_string(count) + " subsystems");
    }
    if (seen[k]) throw std::invalid_argument(std::string(what) + ": repeated subsystem index " + std::to_string(k));
    seen[k] = true;
  }
}

inline Matrix partial_trace(const Matrix& x, const Dims& dims, std::span<const std::size_t> keep_in) {
  check_subsystems(keep_in, dims.size(), "partial_trace");
  std::vector<std::size_t> keep(keep_in.begin(), keep_in.end());
  std::sort(keep.begin(), keep.end());
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  if (traced.empty()) return x;

  Dims keep_dims, traced_dims;
  for (auto k : keep) keep_dims.push_back(dims[k]);
  for (auto k : traced) traced_dims.push_back(dims[k]);
  const auto nk = product(keep_dims);
  const auto nt = product(traced_dims);

  // full index for every (traced, kept) pair
  std::vector<Eigen::Index> full(nk * nt);
  std::vector<std::size_t> d(dims.size());
  for (std::size_t t = 0; t < nt; ++t) {
    const auto td = digits(t, traced_dims);
    for (std::size_t s = 0; s < traced.size(); ++s) d[traced[s]] = td[s];
    for (std::size_t k = 0; k < nk; ++k) {
      const auto kd = digits(k, keep_dims);
      for (std::size_t s = 0; s < keep.size(); ++s) d[keep[s]] = kd[s];
      full[t * nk + k] = static_cast<Eigen::Index>(compose(d, dims));
    }
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(nk), static_cast<Eigen::Index>(nk));
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t j = 0; j < nk; ++j)
      for (std::size_t i = 0; i < nk; ++i)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += x(full[t * nk + i], full[t * nk + j]);
  return out;
}

// New subsystem k is old subsystem order[k].
inline std::vector<Eigen::Index> permutation_map(const Dims& dims, std::span<const std::size_t> order) {
  check_subsystems(order, dims.size(), "permute_subsystems");
  if (order.size() != dims.size()) throw std::invalid_argument("permute_subsystems: order must list every subsystem");
  Dims new_dims;
  for (auto k : order) new_dims.push_back(dims[k]);
  const auto n = product(dims);
  std::vector<Eigen::Index> map(n);
  std::vector<std::size_t> old_digits(dims.size());
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto nd = digits(idx, new_dims);
    for (std::size_t k = 0; k < order.size(); ++k) old_digits[order[k]] = nd[k];
    map[idx] = static_cast<Eigen::Index>(compose(old_digits, dims));
  }
  return map;
}

}  // namespace detail

inline HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return {detail::concat(a.dims(), b.dims()), detail::kron(a.matrix(), b.matrix())};
}
inline PositiveOperator tensor(const PositiveOperator& a, const PositiveOperator& b) {
  return {tensor(static_cast<const HermitianOperator&>(a), static_cast<const HermitianOperator&>(b)),
          PositiveOperator::Trusted{}};
}
inline PositiveOperator tensor(std::span<const PositiveOperator> parts) {
  if (parts.empty()) throw std::invalid_argument("tensor: empty factor list");
  PositiveOperator out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, parts[i]);
  return out;
}

/// Reduces `x` to the subsystems listed in `keep` (kept in their original order).
inline HermitianOperator partial_trace(const HermitianOperator& x, std::span<const std::size_t> keep) {
  Dims kd;
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  Matrix m = detail::partial_trace(x.matrix(), x.dims(), keep);
  for (auto k : sorted) kd.push_back(x.dims()[k]);
  if (kd.empty()) kd = {1};
  return {std::move(kd), std::move(m)};
}
inline HermitianOperator partial_trace(const HermitianOperator& x, std::initializer_list<std::size_t> keep) {
  std::vector<std::size_t> v(keep);
  return partial_trace(x, std::span<const std::size_t>(v));
}
inline PositiveOperator partial_trace(const PositiveOperator& x, std::span<const std::size_t> keep) {
  return {partial_trace(static_cast<const HermitianOperator&>(x), keep), PositiveOperator::Trusted{}};
}
inline PositiveOperator partial_trace(const PositiveOperator& x, std::initializer_list<std::size_t> keep) {
  std::vector<std::size_t> v(keep);
  return partial_trace(x, std::span<const std::size_t>(v));
}

/// Reorders tensor factors: subsystem k of the result is subsystem order[k] of `x`.
inline HermitianOperator permute_subsystems(const HermitianOperator& x, std::span<const std::size_t> order) {
  const auto map = detail::permutation_map(x.dims(), order);
  const auto n = static_cast<Eigen::Index>(map.size());
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = x.matrix()(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
  Dims nd;
  for (auto k : order) nd.push_back(x.dims()[k]);
  return {std::move(nd), std::move(out)};
}
inline PositiveOperator permute_subsystems(const PositiveOperator& x, std::span<const std::size_t> order) {
  return {permute_subsystems(static_cast<const HermitianOperator&>(x), order), PositiveOperator::Trusted{}};
}

// ---------------------------------------------------------------------------
// Spectral functions
// ---------------------------------------------------------------------------

/// f applied to every eigenvalue, no support cutoff.
inline HermitianOperator spectral_map(const HermitianOperator& a, const std::function<double(double)>& f) {
  const auto s = a.spectrum();
  RealVector mapped(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    mapped(i) = f(s.values(i));
    if (!std::isfinite(mapped(i)))
      throw std::domain_error("spectral_map: function undefined at eigenvalue " + std::to_string(s.values(i)));
  }
  return {a.dims(), s.vectors * mapped.asDiagonal() * s.vectors.adjoint()};
}

/// f applied to the clamped spectrum of a positive operator. Eigenvalues at or
/// below the support cutoff are sent to `zero_value` instead of f.
inline HermitianOperator op_function(const PositiveOperator& a, const std::function<double(double)>& f,
                                     double zero_value) {
  const auto s = a.clamped_spectrum();
  const double cut = s.support_threshold();
  RealVector mapped(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double lam = s.values(i);
    if (lam > cut) {
      mapped(i) = f(lam);
      if (!std::isfinite(mapped(i)))
        throw std::domain_error("op_function: function undefined at eigenvalue " + std::to_string(lam));
    } else {
      mapped(i) = zero_value;
    }
  }
  return {a.dims(), s.vectors * mapped.asDiagonal() * s.vectors.adjoint()};
}

inline PositiveOperator sqrt_psd(const PositiveOperator& a) {
  return {op_function(a, [](double x) { return std::sqrt(x); }, 0.0), PositiveOperator::Trusted{}};
}

/// Generalised inverse square root on the support, zero elsewhere.
inline PositiveOperator inverse_sqrt_on_support(const PositiveOperator& a) {
  return {op_function(a, [](double x) { return 1.0 / std::sqrt(x); }, 0.0), PositiveOperator::Trusted{}};
}

inline Projector support_projector(const PositiveOperator& a) {
  const auto s = a.clamped_spectrum();
  const double cut = s.support_threshold();
  const auto n = s.values.size();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (s.values(i) > cut) p += s.vectors.col(i) * s.vectors.col(i).adjoint();
  return {HermitianOperator(a.dims(), std::move(p)), PositiveOperator::Trusted{}};
}

inline std::size_t rank(const PositiveOperator& a) {
  const auto s = a.clamped_spectrum();
  const double cut = s.support_threshold();
  return static_cast<std::size_t>((s.values.array() > cut).count());
}

inline double trace_norm(const HermitianOperator& a) { return a.spectrum().values.cwiseAbs().sum(); }

inline double trace_distance(const HermitianOperator& a, const HermitianOperator& b) {
  return 0.5 * trace_norm(a - b);
}

inline double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  return (a.matrix().adjoint() * b.matrix()).trace().real();
}

// ---------------------------------------------------------------------------
// Purification and fidelity
// ---------------------------------------------------------------------------

inline void require_unit_trace(const HermitianOperator& rho, const char* what, double tol = 1e-10) {
  if (std::abs(rho.trace() - 1.0) > tol) {
    throw std::invalid_argument(std::string(what) + ": expected unit trace, got " + std::to_string(rho.trace()));
  }
}

/// Vector sum_i sqrt(lambda_i) |e_i>|i> on A (x) R with dim R = dim A.
inline Vector purification_vector(const PositiveOperator& rho) {
  require_unit_trace(rho, "purify");
  const auto s = rho.clamped_spectrum();
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Vector psi = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double w = std::sqrt(s.values(i));
    if (w == 0.0) continue;
    for (Eigen::Index a = 0; a < d; ++a) psi(a * d + i) += w * s.vectors(a, i);
  }
  return psi;
}

/// Pure state on the input subsystems followed by one reference subsystem.
inline PositiveOperator purify(const PositiveOperator& rho) {
  Dims dims = rho.dims();
  dims.push_back(rho.dim());
  return PositiveOperator::pure(purification_vector(rho), std::move(dims));
}

/// Root fidelity Tr|sqrt(rho) sqrt(sigma)|.
inline double fidelity(const PositiveOperator& rho, const PositiveOperator& sigma) {
  require_unit_trace(rho, "fidelity", 1e-8);
  require_unit_trace(sigma, "fidelity", 1e-8);
  const Matrix prod = sqrt_psd(rho).matrix() * sqrt_psd(sigma).matrix();
  Eigen::JacobiSVD<Matrix> svd(prod);
  return std::min(1.0, svd.singularValues().sum());
}

/// Squared convention (Tr|sqrt(rho) sqrt(sigma)|)^2.
inline double squared_fidelity(const PositiveOperator& rho, const PositiveOperator& sigma) {
  const double f = fidelity(rho, sigma);
  return f * f;
}

inline Vector basis_vector(std::size_t d, std::size_t i) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

}  // namespace qred
