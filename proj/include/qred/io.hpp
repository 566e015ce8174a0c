#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qred/channel.hpp"
#include "qred/extended_real.hpp"
#include "qred/operator.hpp"
#include "qred/report.hpp"

namespace qred {

/// Malformed input document; the message names the source and the field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io {

/// Location prefix used in error messages, e.g. "rho.json: kraus[1].re".
struct Where {
  std::string source;
  std::string field;

  Where at(const std::string& child) const {
    return {source, field.empty() ? child : field + "." + child};
  }
  Where index(std::size_t i) const { return {source, field + "[" + std::to_string(i) + "]"}; }
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError(source + ": " + (field.empty() ? std::string("<root>") : field) + ": " + what);
  }
};

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": parse error: " + e.what());
  }
}

inline const json& require(const json& j, const char* key, const Where& w) {
  if (!j.is_object()) w.fail("expected an object");
  auto it = j.find(key);
  if (it == j.end()) w.fail(std::string("missing field '") + key + "'");
  return *it;
}

inline double number(const json& j, const Where& w) {
  if (!j.is_number()) w.fail("expected a number");
  return j.get<double>();
}

inline std::size_t count(const json& j, const Where& w) {
  if (!j.is_number_integer() || j.get<long long>() < 0) w.fail("expected a nonnegative integer");
  return j.get<std::size_t>();
}

inline Dims dims_from(const json& j, const Where& w) {
  if (!j.is_array() || j.empty()) w.fail("expected a nonempty array of dimensions");
  Dims d;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto k = count(j[i], w.index(i));
    if (k == 0) w.index(i).fail("dimension must be positive");
    d.push_back(k);
  }
  return d;
}

inline json real_rows(const Matrix& m, bool imag) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(imag ? m(r, c).imag() : m(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Reads {re, im} into a rows x cols matrix; `im` may be omitted.
inline Matrix matrix_from(const json& j, Eigen::Index rows, Eigen::Index cols, const Where& w) {
  Matrix m = Matrix::Zero(rows, cols);
  for (const char* part : {"re", "im"}) {
    const bool imag = part[0] == 'i';
    if (imag && (!j.is_object() || !j.contains("im"))) continue;
    const Where wp = w.at(part);
    const json& a = require(j, part, w);
    if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != rows)
      wp.fail("expected " + std::to_string(rows) + " rows");
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& row = a[static_cast<std::size_t>(r)];
      const Where wr = wp.index(static_cast<std::size_t>(r));
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
        wr.fail("expected " + std::to_string(cols) + " columns");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double v = number(row[static_cast<std::size_t>(c)], wr.index(static_cast<std::size_t>(c)));
        if (imag)
          m(r, c).imag(v);
        else
          m(r, c).real(v);
      }
    }
  }
  return m;
}

}  // namespace io

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

inline json to_json(const HermitianOperator& x) {
  json j;
  j["dims"] = x.dims();
  j["re"] = io::real_rows(x.matrix(), false);
  j["im"] = io::real_rows(x.matrix(), true);
  return j;
}

inline HermitianOperator hermitian_from_json(const json& j, const std::string& source = "<input>") {
  const io::Where w{source, ""};
  const Dims dims = io::dims_from(io::require(j, "dims", w), w.at("dims"));
  const auto n = static_cast<Eigen::Index>(product(dims));
  Matrix m = io::matrix_from(j, n, n, w);
  try {
    return {dims, std::move(m)};
  } catch (const std::invalid_argument& e) {
    w.fail(e.what());
  }
}

inline PositiveOperator positive_from_json(const json& j, const std::string& source = "<input>") {
  auto h = hermitian_from_json(j, source);
  try {
    return PositiveOperator(std::move(h));
  } catch (const std::invalid_argument& e) {
    throw InputError(source + ": <root>: " + e.what());
  }
}

inline PositiveOperator load_positive(const std::string& path) { return positive_from_json(io::load_file(path), path); }

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

inline json to_json(const QuantumOperation& phi) {
  json j;
  j["in_dims"] = phi.in_dims();
  j["out_dims"] = phi.out_dims();
  json ks = json::array();
  for (const auto& k : phi.kraus()) ks.push_back({{"re", io::real_rows(k, false)}, {"im", io::real_rows(k, true)}});
  j["kraus"] = std::move(ks);
  return j;
}

inline QuantumOperation channel_from_spec(const json& j, const io::Where& w);

/// Either an explicit Kraus document {in_dims, out_dims, kraus} or a
/// standard construction {kind, ...}.
inline QuantumOperation channel_from_json(const json& j, const std::string& source = "<input>") {
  const io::Where w{source, ""};
  if (j.is_object() && j.contains("kind")) return channel_from_spec(j, w);
  const Dims in = io::dims_from(io::require(j, "in_dims", w), w.at("in_dims"));
  const Dims out = io::dims_from(io::require(j, "out_dims", w), w.at("out_dims"));
  const json& ks = io::require(j, "kraus", w);
  if (!ks.is_array() || ks.empty()) w.at("kraus").fail("expected a nonempty array");
  std::vector<Matrix> kraus;
  for (std::size_t i = 0; i < ks.size(); ++i)
    kraus.push_back(io::matrix_from(ks[i], static_cast<Eigen::Index>(product(out)),
                                    static_cast<Eigen::Index>(product(in)), w.at("kraus").index(i)));
  try {
    return {std::move(kraus), in, out};
  } catch (const std::invalid_argument& e) {
    w.fail(e.what());
  }
}

inline QuantumOperation load_channel(const std::string& path) { return channel_from_json(io::load_file(path), path); }

inline constexpr const char* kChannelKinds =
    "identity, unitary, partial_trace, pinching, dephasing, measurement_povm, depolarizing, amplitude_damping, "
    "replacer, compose, tensor_with_identity, truncated_attenuator";

/// Standard constructions by name. Parameters are validated by the builders;
/// their errors are reported with the location of the spec.
inline QuantumOperation channel_from_spec(const json& j, const io::Where& w) {
  const json& kind_j = io::require(j, "kind", w);
  if (!kind_j.is_string()) w.at("kind").fail("expected a string");
  const std::string kind = kind_j.get<std::string>();
  auto dim = [&](const char* key) { return io::count(io::require(j, key, w), w.at(key)); };
  auto num = [&](const char* key) { return io::number(io::require(j, key, w), w.at(key)); };
  auto ops = [&](const char* key) {
    const json& a = io::require(j, key, w);
    if (!a.is_array() || a.empty()) w.at(key).fail("expected a nonempty array of operators");
    std::vector<HermitianOperator> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(hermitian_from_json(a[i], w.source));
    return out;
  };
  try {
    if (kind == "identity") return channels::identity(Dims{dim("d")});
    if (kind == "unitary") {
      const auto d = static_cast<Eigen::Index>(dim("d"));
      return channels::unitary(io::matrix_from(io::require(j, "u", w), d, d, w.at("u")));
    }
    if (kind == "partial_trace") {
      const Dims dims = io::dims_from(io::require(j, "dims", w), w.at("dims"));
      const json& keep_j = io::require(j, "keep", w);
      if (!keep_j.is_array()) w.at("keep").fail("expected an array of subsystem indices");
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < keep_j.size(); ++i) keep.push_back(io::count(keep_j[i], w.at("keep").index(i)));
      return channels::partial_trace(dims, std::span<const std::size_t>(keep));
    }
    if (kind == "pinching") {
      std::vector<Projector> ps;
      for (auto& h : ops("projectors")) ps.emplace_back(std::move(h));
      return channels::pinching(std::span<const Projector>(ps));
    }
    if (kind == "dephasing") return channels::dephasing(dim("d"));
    if (kind == "measurement_povm") {
      std::vector<PositiveOperator> ms;
      for (auto& h : ops("povm")) ms.emplace_back(std::move(h));
      return channels::measurement_povm(std::span<const PositiveOperator>(ms));
    }
    if (kind == "depolarizing") return channels::depolarizing(num("p"), j.contains("d") ? dim("d") : 2);
    if (kind == "amplitude_damping") return channels::amplitude_damping(num("t"));
    if (kind == "replacer") {
      const auto tau = positive_from_json(io::require(j, "state", w), w.source);
      return channels::replacer(tau, io::dims_from(io::require(j, "in_dims", w), w.at("in_dims")));
    }
    if (kind == "compose") {
      const auto first = channel_from_json(io::require(j, "first", w), w.source);
      const auto then = channel_from_json(io::require(j, "then", w), w.source);
      return channels::compose(first, then);
    }
    if (kind == "tensor_with_identity") {
      const auto phi = channel_from_json(io::require(j, "channel", w), w.source);
      return channels::tensor_with_identity(phi, dim("reference_dim"));
    }
    if (kind == "truncated_attenuator") return channels::truncated_attenuator(num("k"), dim("cutoff"));
  } catch (const std::invalid_argument& e) {
    w.fail(e.what());
  }
  w.at("kind").fail("unknown channel kind '" + kind + "'; valid kinds: " + kChannelKinds);
}

// ---------------------------------------------------------------------------
// Extended reals
// ---------------------------------------------------------------------------

inline ExtendedReal extended_from_json(const json& j, const std::string& source = "<input>") {
  if (j.is_string() && j.get<std::string>() == "inf") return ExtendedReal::infinity();
  if (j.is_number()) return j.get<double>();
  throw InputError(source + ": expected a number or \"inf\"");
}

/// Printed form used by the CLI: six decimals or "inf".
inline std::string format_value(ExtendedReal x) {
  if (x.is_infinite()) return "inf";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << x.value();
  return os.str();
}

}  // namespace qred
