#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qred/disturbance.hpp"
#include "qred/io.hpp"
#include "qred/probes.hpp"
#include "qred/random.hpp"
#include "qred/recovery.hpp"
#include "qred/report.hpp"

namespace qred {

/// Wrong number or kind of command arguments.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// compute <quantity> <files...>
// ---------------------------------------------------------------------------

struct Quantity {
  std::string name;
  std::string inputs;  // argument list shown in help, e.g. "rho sigma"
  std::function<ExtendedReal(const std::vector<std::string>&)> eval;
};

namespace commands_detail {

inline std::size_t arity(const std::string& inputs) {
  std::size_t n = inputs.empty() ? 0 : 1;
  for (char c : inputs) n += c == ' ' ? 1 : 0;
  return n;
}

inline std::vector<Part> singleton_parts(const PositiveOperator& rho) {
  std::vector<Part> parts;
  for (std::size_t k = 0; k < rho.subsystems(); ++k) parts.push_back({k});
  return parts;
}

/// Reports dimension and domain errors of a computation as input errors.
template <class F>
auto guarded(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw InputError(what + ": " + e.what());
  }
}

}  // namespace commands_detail

inline const std::vector<Quantity>& quantities() {
  using commands_detail::guarded;
  static const std::vector<Quantity> q{
      {"relative_entropy", "rho sigma",
       [](const auto& f) { return guarded(f[0], [&] { return relative_entropy(load_positive(f[0]), load_positive(f[1])); }); }},
      {"entropy", "rho", [](const auto& f) { return von_neumann_entropy(load_positive(f[0])); }},
      {"mutual_info", "rho",
       [](const auto& f) {
         const auto rho = load_positive(f[0]);
         if (rho.subsystems() < 2) throw InputError(f[0] + ": dims: mutual_info needs at least two subsystems");
         return multipartite_mutual_info(rho, commands_detail::singleton_parts(rho));
       }},
      {"qcmi", "rho",
       [](const auto& f) {
         const auto rho = load_positive(f[0]);
         if (rho.subsystems() != 3) throw InputError(f[0] + ": dims: qcmi needs exactly three subsystems A, B, C");
         return guarded(f[0], [&] { return qcmi(rho, {0}, {1}, {2}); });
       }},
      {"cond_rel_entropy", "rho sigma",
       [](const auto& f) {
         const auto rho = load_positive(f[0]);
         if (rho.subsystems() != 2) throw InputError(f[0] + ": dims: cond_rel_entropy needs two subsystems A, B");
         return guarded(f[0], [&] { return cond_rel_entropy(rho, load_positive(f[1]), {0}).value(); });
       }},
      {"delta", "channel rho sigma",
       [](const auto& f) {
         const auto phi = load_channel(f[0]);
         return guarded(f[1], [&] { return delta(phi, load_positive(f[1]), load_positive(f[2])).value(); });
       }},
      {"channel_mutual_info", "channel rho",
       [](const auto& f) {
         const auto phi = load_channel(f[0]);
         return guarded(f[1], [&] { return channel_mutual_info(phi, load_positive(f[1])); });
       }},
      {"coherent_info", "channel rho",
       [](const auto& f) {
         const auto phi = load_channel(f[0]);
         return guarded(f[1], [&] { return coherent_info(phi, load_positive(f[1])); });
       }},
      {"fidelity", "rho sigma",
       [](const auto& f) {
         return guarded(f[0], [&] { return ExtendedReal(fidelity(load_positive(f[0]), load_positive(f[1]))); });
       }},
      {"trace_distance", "rho sigma",
       [](const auto& f) {
         return guarded(f[0], [&] { return ExtendedReal(trace_distance(load_positive(f[0]), load_positive(f[1]))); });
       }},
  };
  return q;
}

inline std::string quantity_names() {
  std::string s;
  for (const auto& q : quantities()) s += (s.empty() ? "" : ", ") + q.name;
  return s;
}

/// Evaluates a named quantity on serialized inputs. Out-of-domain values
/// raise std::domain_error.
inline ExtendedReal compute(const std::string& quantity, const std::vector<std::string>& files) {
  for (const auto& q : quantities()) {
    if (q.name != quantity) continue;
    const auto n = commands_detail::arity(q.inputs);
    if (files.size() != n)
      throw UsageError(quantity + " expects " + std::to_string(n) + " input file(s): " + q.inputs);
    return q.eval(files);
  }
  throw UsageError("unknown quantity '" + quantity + "'; valid quantities: " + quantity_names());
}

// ---------------------------------------------------------------------------
// Probe configurations
// ---------------------------------------------------------------------------

inline constexpr const char* kFamilyKinds = "vanishing_mass, classical_tail, channel_drift, contraction_compress, gibbs_drift";
inline constexpr const char* kProbeKinds =
    "dj_estimate, jump_contraction, lsc, compression, remark3, attenuator_thermal, energy_limited, h_case_jump, "
    "semigroup_continuity";

namespace commands_detail {

inline double number_or(const json& j, const char* key, double fallback, const io::Where& w) {
  return j.contains(key) ? io::number(j[key], w.at(key)) : fallback;
}

inline std::size_t count_or(const json& j, const char* key, std::size_t fallback, const io::Where& w) {
  return j.contains(key) ? io::count(j[key], w.at(key)) : fallback;
}

inline std::uint64_t seed_or(const json& j, const io::Where& w, std::uint64_t fallback = 1) {
  if (!j.contains("seed")) return fallback;
  if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
    w.at("seed").fail("expected a nonnegative integer");
  return j["seed"].get<std::uint64_t>();
}

inline std::string string_or(const json& j, const char* key, const std::string& fallback, const io::Where& w) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) w.at(key).fail("expected a string");
  return j[key].get<std::string>();
}

}  // namespace commands_detail

/// Parameters of a gibbs_drift family, defaults filled in.
inline families::GibbsDriftParams gibbs_params_from_json(const json& j, const io::Where& w) {
  using commands_detail::number_or;
  families::GibbsDriftParams p;
  p.beta = number_or(j, "beta", p.beta, w);
  p.beta_prime0 = number_or(j, "beta_prime0", p.beta_prime0, w);
  p.mix = number_or(j, "mix", p.mix, w);
  p.rate = number_or(j, "rate", p.rate, w);
  p.twist = number_or(j, "twist", p.twist, w);
  if (j.contains("converging_input")) {
    if (!j["converging_input"].is_boolean()) w.at("converging_input").fail("expected a boolean");
    p.converging_input = j["converging_input"].get<bool>();
  }
  return p;
}

inline SequenceFamily family_from_json(const json& j, const io::Where& w) {
  using namespace commands_detail;
  const json& kind_j = io::require(j, "kind", w);
  if (!kind_j.is_string()) w.at("kind").fail("expected a string");
  const std::string kind = kind_j.get<std::string>();
  try {
    if (kind == "vanishing_mass") {
      const auto ch = string_or(j, "channel", "identity", w);
      const auto parsed = families::parse_vanishing_mass_channel(ch);
      if (!parsed) w.at("channel").fail("unknown channel '" + ch + "'; valid: identity, dephasing, depolarizing, partial_trace, drift");
      return families::vanishing_mass(*parsed, count_or(j, "ancilla_dim", 2, w));
    }
    if (kind == "classical_tail")
      return families::classical_tail(io::count(io::require(j, "d", w), w.at("d")), number_or(j, "jump", 1.0, w));
    if (kind == "channel_drift")
      return families::channel_drift(io::count(io::require(j, "d", w), w.at("d")), seed_or(j, w),
                                     number_or(j, "rate", std::exp(-1.0), w));
    if (kind == "contraction_compress") {
      const auto mode = string_or(j, "mode", "to_identity", w);
      if (mode != "to_identity" && mode != "remark3") w.at("mode").fail("expected 'to_identity' or 'remark3'");
      return families::contraction_compress(
          mode == "remark3" ? families::CompressionMode::remark3 : families::CompressionMode::to_identity,
          io::count(io::require(j, "d", w), w.at("d")), seed_or(j, w));
    }
    if (kind == "gibbs_drift") return families::gibbs_drift(gibbs_params_from_json(j, w));
  } catch (const std::invalid_argument& e) {
    w.fail(e.what());
  }
  w.at("kind").fail("unknown family kind '" + kind + "'; valid kinds: " + kFamilyKinds);
}

inline EnergyObservable hamiltonian_from_json(const json& j, const io::Where& w) {
  if (j.is_object() && j.contains("number_cutoff")) return number_operator(io::count(j["number_cutoff"], w.at("number_cutoff")));
  try {
    return EnergyObservable(hermitian_from_json(j, w.source));
  } catch (const std::invalid_argument& e) {
    w.fail(e.what());
  }
}

/// Runs a probe described by {kind, params, N0, N, tolerance}. Validation
/// problems raise InputError; probe outcomes become report entries.
inline SuiteReport run_probe(const json& config, const std::string& source = "<probe>") {
  using namespace commands_detail;
  const io::Where root{source, ""};
  const json& kind_j = io::require(config, "kind", root);
  if (!kind_j.is_string()) root.at("kind").fail("expected a string");
  const std::string kind = kind_j.get<std::string>();
  static const json empty = json::object();
  const json& params = config.contains("params") ? config["params"] : empty;
  const io::Where pw = root.at("params");
  if (!params.is_object()) pw.fail("expected an object");
  const int n0 = static_cast<int>(count_or(config, "N0", kDefaultWindowStart, root));
  const int n = static_cast<int>(count_or(config, "N", kDefaultWindowEnd, root));
  if (n0 < 1 || n < n0) root.fail("window must satisfy 1 <= N0 <= N");
  const auto tol = [&](double fallback) { return number_or(config, "tolerance", fallback, root); };
  auto family = [&] { return family_from_json(io::require(params, "family", pw), pw.at("family")); };

  const auto start = std::chrono::steady_clock::now();
  ReportBuilder b;
  const std::string base = "probe/" + kind;
  SuiteReport r;
  r.rng = std::string(kRngName);
  r.seed = seed_or(params, pw, 0);

  try {
    if (kind == "dj_estimate") {
      const auto f = family();
      const auto fn = string_or(params, "functional", "relative_entropy", pw);
      Functional which;
      if (fn == "relative_entropy")
        which = Functional::relative_entropy;
      else if (fn == "output_relative_entropy")
        which = Functional::output_relative_entropy;
      else if (fn == "disturbance")
        which = Functional::disturbance;
      else
        pw.at("functional").fail("expected relative_entropy, output_relative_entropy or disturbance");
      const auto e = dj_estimate(f, which, n0, n);
      const std::string name = base + "/" + f.name;
      if (f.analytic_jump && which == Functional::relative_entropy)
        b.equal(name, "discontinuity jump", e.dj_hat, *f.analytic_jump, tol(5e-2));
      else
        b.at_most(name, "discontinuity jump", 0.0, e.dj_hat, tol(1e-9));
      b.set_window(name, n0, n);
      b.set_note(name, "tail max at n=" + std::to_string(e.argmax));
    } else if (kind == "jump_contraction") {
      const auto f = family();
      std::optional<QuantumOperation> phi;
      if (params.contains("channel")) phi = channel_from_json(params["channel"], source);
      const auto res = jump_contraction_experiment(f, phi ? &*phi : nullptr, n0, n, tol(1e-6));
      const std::string name = base + "/" + f.name;
      b.at_most(name, "jumps do not increase under quantum operations", res.output.dj_hat, res.input.dj_hat,
                res.tolerance);
      b.set_window(name, n0, n);
    } else if (kind == "lsc") {
      const auto f = family();
      const auto res = lsc_experiment(f, n0, n, tol(1e-6));
      const std::string name = base + "/" + f.name;
      b.at_most(name, "lower semicontinuity of the disturbance", res.delta_limit, res.min_delta, res.tolerance);
      b.set_window(name, n0, n);
      if (res.out_of_domain > 0) b.set_note(name, std::to_string(res.out_of_domain) + " window points out of domain");
    } else if (kind == "compression") {
      const auto f = family();
      const auto res = compression_probe(f, n0 == kDefaultWindowStart ? 1 : n0, n == kDefaultWindowEnd ? 60 : n,
                                         number_or(params, "norm_gate", 1e-8, pw), tol(1e-6));
      const std::string name = base + "/" + f.name;
      if (res.gated_points == 0)
        b.holds(name, "compressions converging to the identity", false, "no window point passes the norm gate");
      else
        b.at_most(name, "compressions converging to the identity", res.max_deviation, 0.0, res.tolerance);
    } else if (kind == "remark3") {
      const auto d = io::count(io::require(params, "d", pw), pw.at("d"));
      if (d < 2) pw.at("d").fail("dimension must be at least 2");
      const auto res = remark3_scan(d, seed_or(params, pw));
      std::string shape;
      for (const auto& v : res.values) shape += (shape.empty() ? "" : ",") + format_value(v);
      b.holds(base, "compressions collapsing to zero", res.pass, shape);
    } else if (kind == "attenuator_thermal") {
      const double k = number_or(params, "k", 0.7, pw);
      const auto cutoff = count_or(params, "cutoff", 40, pw);
      const double photons = number_or(params, "photons", 1.0, pw);
      const auto res = attenuator_thermal_check(k, cutoff, photons);
      b.equal(base + "/output_photons", "photon number law of the attenuator", res.photons_out, res.expected, tol(1e-3));
      b.at_most(base + "/output_is_thermal", "Gibbs-preserving channels", res.fit.residual, 0.0, kGibbsFitGate);
    } else if (kind == "energy_limited") {
      const auto phi = channel_from_json(io::require(params, "channel", pw), source);
      const auto ha = params.contains("h_in") ? hamiltonian_from_json(params["h_in"], pw.at("h_in"))
                                              : number_operator(phi.in_dim());
      const auto hb = params.contains("h_out") ? hamiltonian_from_json(params["h_out"], pw.at("h_out"))
                                               : number_operator(phi.out_dim());
      std::optional<double> ratio;
      if (params.contains("ratio")) ratio = io::number(params["ratio"], pw.at("ratio"));
      const double cap = number_or(params, "energy_cap", 2.0, pw);
      const auto res = energy_limited_probe(phi, ha, hb, number_or(params, "beta", thermal_beta(1.0), pw), cap,
                                            seed_or(params, pw), count_or(params, "samples", 32, pw), ratio, tol(1e-3));
      b.at_most(base + "/gibbs_compatibility", "Gibbs-preserving channels", res.fit.residual, 0.0, kGibbsFitGate);
      if (res.linear_bound)
        b.at_most(base + "/output_energy", "energy-limited channels", res.sup_output_energy, *res.linear_bound, tol(1e-3));
      else
        b.holds(base + "/output_energy", "energy-limited channels", std::isfinite(res.sup_output_energy));
      b.set_note(base + "/output_energy", "sup output energy " + format_value(res.sup_output_energy) + " over " +
                                              std::to_string(res.samples) + " states with energy <= " +
                                              format_value(cap));
    } else if (kind == "h_case_jump") {
      const json& fj = io::require(params, "family", pw);
      const auto f = family_from_json(fj, pw.at("family"));
      const auto h = params.contains("h") ? hamiltonian_from_json(params["h"], pw.at("h")) : number_operator(2);
      const double beta =
          number_or(params, "beta", gibbs_params_from_json(fj, pw.at("family")).beta, pw);
      const auto res = h_case_jump_probe(f, h, h, beta, n0, n, tol(1e-6));
      b.at_most(base + "/gibbs_compatibility", "Gibbs-preserving channels", res.worst_fit_residual, 0.0, kGibbsFitGate);
      if (!res.compatible)
        b.set_note(base + "/gibbs_compatibility", "channel output is not a Gibbs state; jump bound not evaluated");
      else {
        b.at_most(base + "/" + f.name, "energy jumps under Gibbs-preserving channels", res.lhs, res.rhs, res.tolerance);
        b.set_window(base + "/" + f.name, n0, n);
      }
    } else if (kind == "semigroup_continuity") {
      std::vector<int> grids{10, 20, 40, 80};
      if (params.contains("grids")) {
        grids.clear();
        const json& g = params["grids"];
        if (!g.is_array()) pw.at("grids").fail("expected an array of grid sizes");
        for (std::size_t i = 0; i < g.size(); ++i) grids.push_back(static_cast<int>(io::count(g[i], pw.at("grids").index(i))));
      }
      const auto res = semigroup_continuity_probe(count_or(params, "cutoff", 30, pw), number_or(params, "photons", 1.0, pw),
                                                  number_or(params, "t_max", 2.0, pw), grids, seed_or(params, pw, 7));
      std::string note;
      for (std::size_t i = 0; i < res.grid_sizes.size(); ++i)
        note += (note.empty() ? "" : " ") + std::to_string(res.grid_sizes[i]) + "->" + format_value(res.max_variation[i]);
      b.holds(base, "continuity along the attenuator semigroup", res.pass,
              "max adjacent variation " + note + "; refinement slope " + format_value(res.slope));
    } else {
      root.at("kind").fail("unknown probe kind '" + kind + "'; valid kinds: " + kProbeKinds);
    }
  } catch (const std::invalid_argument& e) {
    root.fail(e.what());
  } catch (const std::domain_error& e) {
    root.fail(e.what());
  }

  r.entries = b.take();
  r.runtime_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------
// Batch manifests
// ---------------------------------------------------------------------------

inline std::string identity_anchor(IdentityId id) {
  switch (id) {
    case IdentityId::donald:
      return "Donald's identity";
    case IdentityId::pinching_decomposition:
      return "projector decomposition of the relative entropy";
    case IdentityId::re_decomposition:
      return "relative entropy = output divergence + disturbance";
    case IdentityId::weighted_sum:
      return "weighted-ensemble identity with Kullback-Leibler term";
    case IdentityId::multipartite_chain:
      return "multipartite mutual information chain rule";
    case IdentityId::sf1_proof_one:
      return "flagged extension identity";
    case IdentityId::sf1_proof_two:
      return "mixing identity for sums";
  }
  return {};
}

/// Evaluates identity residuals listed in a manifest
/// {entries: [{identity, tolerance?, <inputs>}]}. Relative paths are
/// resolved against `base_dir`.
inline SuiteReport run_batch(const json& manifest, const std::string& source, const std::filesystem::path& base_dir) {
  const io::Where root{source, ""};
  const json& entries = io::require(manifest, "entries", root);
  if (!entries.is_array() || entries.empty()) root.at("entries").fail("expected a nonempty array");
  const auto start = std::chrono::steady_clock::now();
  ReportBuilder b;

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const json& e = entries[i];
    const io::Where w = root.at("entries").index(i);
    const json& id_j = io::require(e, "identity", w);
    if (!id_j.is_string()) w.at("identity").fail("expected a string");
    const auto id = parse_identity_id(id_j.get<std::string>());
    if (!id) {
      std::string valid;
      for (auto n : identity_names) valid += (valid.empty() ? "" : ", ") + std::string(n);
      w.at("identity").fail("unknown identity '" + id_j.get<std::string>() + "'; valid identities: " + valid);
    }
    auto path = [&](const char* key) {
      const json& p = io::require(e, key, w);
      if (!p.is_string()) w.at(key).fail("expected a file path");
      const std::filesystem::path fp(p.get<std::string>());
      return (fp.is_absolute() ? fp : base_dir / fp).string();
    };
    auto op = [&](const char* key) { return load_positive(path(key)); };
    auto ensemble = [&](const char* key) {
      const json& ej = io::require(e, key, w);
      const io::Where ew = w.at(key);
      const json& ws = io::require(ej, "weights", ew);
      const json& ss = io::require(ej, "states", ew);
      if (!ws.is_array() || !ss.is_array() || ws.size() != ss.size() || ws.empty())
        ew.fail("weights and states must be nonempty arrays of equal length");
      std::vector<Ensemble::Item> items;
      for (std::size_t k = 0; k < ws.size(); ++k) {
        if (!ss[k].is_string()) ew.at("states").index(k).fail("expected a file path");
        const std::filesystem::path fp(ss[k].get<std::string>());
        items.push_back({io::number(ws[k], ew.at("weights").index(k)),
                         load_positive((fp.is_absolute() ? fp : base_dir / fp).string())});
      }
      return Ensemble(std::move(items));
    };
    auto index_lists = [&](const char* key) {
      const json& a = io::require(e, key, w);
      if (!a.is_array()) w.at(key).fail("expected an array of index lists");
      std::vector<std::vector<std::size_t>> out;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (!a[k].is_array()) w.at(key).index(k).fail("expected an array of indices");
        std::vector<std::size_t> v;
        for (std::size_t m = 0; m < a[k].size(); ++m) v.push_back(io::count(a[k][m], w.at(key).index(k).index(m)));
        out.push_back(std::move(v));
      }
      return out;
    };

    IdentityCheck c;
    try {
      switch (*id) {
        case IdentityId::donald:
          c = donald_identity(op("rho"), op("sigma"), op("omega"), io::number(io::require(e, "p", w), w.at("p")));
          break;
        case IdentityId::pinching_decomposition:
          c = pinching_decomposition(op("rho"), op("sigma"), Projector(hermitian_from_json(io::load_file(path("projector")), path("projector"))));
          break;
        case IdentityId::re_decomposition:
          c = re_decomposition(load_channel(path("channel")), op("rho"), op("sigma"));
          break;
        case IdentityId::weighted_sum:
          c = weighted_sum_identity(ensemble("e1"), ensemble("e2"));
          break;
        case IdentityId::multipartite_chain: {
          const auto parts = index_lists("parts");
          const auto groups = index_lists("groups");
          c = multipartite_chain(op("rho"), parts, groups);
          break;
        }
        case IdentityId::sf1_proof_one:
          c = sf1_proof_one(op("rho"), op("sigma"), op("theta"));
          break;
        case IdentityId::sf1_proof_two:
          c = sf1_proof_two(op("rho"), op("eta"), op("sigma"));
          break;
      }
    } catch (const std::invalid_argument& ex) {
      w.fail(ex.what());
    }
    const double tol = commands_detail::number_or(e, "tolerance", 1e-9, w);
    const std::string name = "batch/" + std::to_string(i) + "/" + std::string(to_string(*id));
    const std::string anchor = identity_anchor(*id);
    if (c.skipped)
      b.skip(name, anchor, Relation::equal, tol);
    else
      b.equal(name, anchor, c.lhs, c.rhs, tol);
  }

  SuiteReport r;
  r.rng = std::string(kRngName);
  r.entries = b.take();
  r.runtime_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline SuiteReport run_batch_file(const std::string& path) {
  const auto manifest = io::load_file(path);
  return run_batch(manifest, path, std::filesystem::path(path).parent_path());
}

}  // namespace qred
