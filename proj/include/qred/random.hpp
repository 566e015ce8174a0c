#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "qred/channel.hpp"
#include "qred/operator.hpp"

namespace qred {

/// Name and version of the generator; part of every report so that results
/// can be tied to the sampling scheme that produced them.
inline constexpr std::string_view kRngName = "mt19937_64/boxmuller-v1";

/// SplitMix64 step, used to derive independent per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

/// Seeded generator. The standard distributions are implementation-defined,
/// so uniforms and normals are built here from raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::acos(-1.0) * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Complex normal with unit variance.
  cplx complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix z(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) z(r, c) = rng.complex_normal();
  return z;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal moved into Q.
inline Matrix haar_unitary(Rng& rng, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  const Matrix z = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

/// Isometry with `cols` orthonormal columns in dimension `rows`.
inline Matrix random_isometry(Rng& rng, std::size_t rows, std::size_t cols) {
  if (cols > rows) throw std::invalid_argument("random_isometry: more columns than rows");
  return haar_unitary(rng, rows).leftCols(static_cast<Eigen::Index>(cols));
}

/// Probability vector with entries bounded below by floor / (n (1 + floor)).
inline std::vector<double> random_weights(Rng& rng, std::size_t n, double floor = 0.05) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = rng.uniform() + floor;
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

/// Random density operator U diag(p) U^dag with floored spectrum and Haar U.
/// With `rank` < dim, the remaining eigenvalues are exactly zero.
inline PositiveOperator random_state(Rng& rng, const Dims& dims, std::size_t rank = 0) {
  const std::size_t d = product(dims);
  if (rank == 0 || rank > d) rank = d;
  auto w = random_weights(rng, rank);
  RealVector p = RealVector::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rank; ++i) p(static_cast<Eigen::Index>(i)) = w[i];
  const Matrix u = haar_unitary(rng, d);
  return PositiveOperator(HermitianOperator(dims, u * p.asDiagonal() * u.adjoint()), PositiveOperator::Trusted{});
}

inline PositiveOperator random_state(Rng& rng, std::size_t d, std::size_t rank = 0) {
  return random_state(rng, Dims{d}, rank);
}

inline PositiveOperator random_pure_state(Rng& rng, const Dims& dims) {
  const auto n = static_cast<Eigen::Index>(product(dims));
  Vector psi = gaussian_matrix(rng, n, 1).col(0);
  psi.normalize();
  return PositiveOperator::pure(psi, dims);
}

/// Random positive operator with trace drawn from [0.3, 2.3).
inline PositiveOperator random_positive(Rng& rng, const Dims& dims) {
  const auto rho = random_state(rng, dims);
  return (0.3 + 2.0 * rng.uniform()) * rho;
}

/// Random diagonal density operator with floored entries.
inline PositiveOperator random_diagonal_state(Rng& rng, std::size_t d) {
  const auto w = random_weights(rng, d);
  return PositiveOperator::diagonal(std::span<const double>(w));
}

/// Channel from a random isometry into output (x) environment. The Kraus
/// count is raised to the smallest value admitting an isometry.
inline QuantumOperation random_channel(Rng& rng, std::size_t d_in, std::size_t d_out, std::size_t kraus_count) {
  kraus_count = std::max(kraus_count, (d_in + d_out - 1) / d_out);
  const Matrix v = random_isometry(rng, d_out * kraus_count, d_in);
  std::vector<Matrix> kraus;
  for (std::size_t k = 0; k < kraus_count; ++k) {
    Matrix m(static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
    for (std::size_t b = 0; b < d_out; ++b) m.row(static_cast<Eigen::Index>(b)) = v.row(static_cast<Eigen::Index>(b * kraus_count + k));
    kraus.push_back(std::move(m));
  }
  return {std::move(kraus), Dims{d_in}, Dims{d_out}};
}

/// Random POVM {V_i^dag V_i} from the blocks of a random isometry.
inline std::vector<PositiveOperator> random_povm(Rng& rng, std::size_t d, std::size_t outcomes) {
  const Matrix v = random_isometry(rng, d * outcomes, d);
  std::vector<PositiveOperator> out;
  const auto n = static_cast<Eigen::Index>(d);
  for (std::size_t i = 0; i < outcomes; ++i) {
    const Matrix block = v.middleRows(static_cast<Eigen::Index>(i) * n, n);
    out.emplace_back(HermitianOperator(Dims{d}, block.adjoint() * block), PositiveOperator::Trusted{});
  }
  return out;
}

/// Random state together with a projector commuting with it: both are
/// diagonal in the same random basis, the projector covers `rank` of its
/// eigenvectors.
struct CommutingPair {
  PositiveOperator sigma;
  Projector projector;
};

inline CommutingPair random_commuting_pair(Rng& rng, std::size_t d, std::size_t rank) {
  const Matrix u = haar_unitary(rng, d);
  const auto w = random_weights(rng, d);
  RealVector p(static_cast<Eigen::Index>(d));
  RealVector mask = RealVector::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    p(static_cast<Eigen::Index>(i)) = w[i];
    if (i < rank) mask(static_cast<Eigen::Index>(i)) = 1.0;
  }
  return {PositiveOperator(HermitianOperator(Dims{d}, u * p.asDiagonal() * u.adjoint()), PositiveOperator::Trusted{}),
          Projector(HermitianOperator(Dims{d}, u * mask.asDiagonal() * u.adjoint()), PositiveOperator::Trusted{})};
}

}  // namespace qred
