#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qred/extended_real.hpp"

namespace qred {

using json = nlohmann::ordered_json;

inline json to_json(ExtendedReal x) {
  if (x.is_infinite()) return "inf";
  return x.value();
}

/// lhs == rhs or lhs <= rhs.
enum class Relation { equal, at_most };

inline const char* to_string(Relation r) { return r == Relation::equal ? "equal" : "at_most"; }

/// Residual of a check: |lhs - rhs| for equalities, max(0, lhs - rhs) for
/// inequalities. Matching infinities count as zero residual.
inline ExtendedReal residual_of(Relation rel, ExtendedReal lhs, ExtendedReal rhs) {
  if (rel == Relation::equal) {
    if (lhs.is_infinite() && rhs.is_infinite()) return 0.0;
    if (lhs.is_infinite() || rhs.is_infinite()) return ExtendedReal::infinity();
    return std::abs(lhs.value() - rhs.value());
  }
  if (rhs.is_infinite()) return 0.0;
  if (lhs.is_infinite()) return ExtendedReal::infinity();
  return std::max(0.0, lhs.value() - rhs.value());
}

struct ReportEntry {
  std::string name;
  std::string paper_anchor;
  Relation relation = Relation::equal;
  ExtendedReal lhs;
  ExtendedReal rhs;
  ExtendedReal residual;
  double tolerance = 0.0;
  bool pass = true;
  std::size_t checks = 0;
  std::size_t skipped = 0;
  std::optional<std::array<int, 2>> window;
  std::string note;

  json to_json() const {
    json j;
    j["name"] = name;
    j["paper_anchor"] = paper_anchor;
    j["relation"] = to_string(relation);
    j["lhs"] = qred::to_json(lhs);
    j["rhs"] = qred::to_json(rhs);
    j["residual"] = qred::to_json(residual);
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    j["checks"] = checks;
    j["skipped"] = skipped;
    if (window) j["window"] = {(*window)[0], (*window)[1]};
    if (!note.empty()) j["note"] = note;
    return j;
  }
};

struct SuiteReport {
  std::string rng;
  std::uint64_t seed = 0;
  std::vector<std::size_t> dims;
  std::size_t trials = 0;
  double tolerance_scale = 1.0;
  std::vector<ReportEntry> entries;
  std::int64_t runtime_ms = 0;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.pass ? 0 : 1;
    return n;
  }

  const ReportEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }

  /// Everything except the wall-clock time; identical for identical seeds.
  json body() const {
    json j;
    j["rng"] = rng;
    j["seed"] = seed;
    j["dims"] = dims;
    j["trials"] = trials;
    j["tolerance_scale"] = tolerance_scale;
    json arr = json::array();
    for (const auto& e : entries) arr.push_back(e.to_json());
    j["entries"] = std::move(arr);
    j["summary"] = {{"entries", entries.size()}, {"failed", failures()}, {"pass", all_pass()}};
    return j;
  }

  json to_json() const {
    json j = body();
    j["runtime_ms"] = runtime_ms;
    return j;
  }
};

/// Accumulates checks by name, keeping the worst residual seen for each.
class ReportBuilder {
 public:
  explicit ReportBuilder(double tolerance_scale = 1.0) : scale_(tolerance_scale) {}

  void equal(const std::string& name, const std::string& anchor, ExtendedReal lhs, ExtendedReal rhs, double tol) {
    add(name, anchor, Relation::equal, lhs, rhs, tol);
  }
  void at_most(const std::string& name, const std::string& anchor, ExtendedReal lhs, ExtendedReal rhs, double tol) {
    add(name, anchor, Relation::at_most, lhs, rhs, tol);
  }
  /// Boolean outcome recorded as 0/1 against the expected 1.
  void holds(const std::string& name, const std::string& anchor, bool ok, const std::string& note = {}) {
    add(name, anchor, Relation::equal, ok ? 1.0 : 0.0, 1.0, 0.0);
    if (!note.empty()) entry(name, anchor, Relation::equal, 0.0).note = note;
  }
  /// Counts a check that could not be evaluated numerically.
  void skip(const std::string& name, const std::string& anchor, Relation rel, double tol) {
    auto& e = entry(name, anchor, rel, tol);
    ++e.checks;
    ++e.skipped;
  }
  void set_window(const std::string& name, int n0, int n) {
    for (auto& e : entries_)
      if (e.name == name) e.window = std::array<int, 2>{n0, n};
  }
  void set_note(const std::string& name, const std::string& note) {
    for (auto& e : entries_)
      if (e.name == name) e.note = note;
  }

  double scale() const { return scale_; }
  std::vector<ReportEntry> take() { return std::move(entries_); }
  const std::vector<ReportEntry>& entries() const { return entries_; }

 private:
  ReportEntry& entry(const std::string& name, const std::string& anchor, Relation rel, double tol) {
    auto it = index_.find(name);
    if (it != index_.end()) return entries_[it->second];
    index_[name] = entries_.size();
    ReportEntry e;
    e.name = name;
    e.paper_anchor = anchor;
    e.relation = rel;
    e.tolerance = tol;
    e.residual = 0.0;
    entries_.push_back(std::move(e));
    return entries_.back();
  }

  void add(const std::string& name, const std::string& anchor, Relation rel, ExtendedReal lhs, ExtendedReal rhs,
           double tol) {
    auto& e = entry(name, anchor, rel, tol);
    const auto r = residual_of(rel, lhs, rhs);
    const bool first = e.checks == e.skipped;
    ++e.checks;
    if (first || r > e.residual) {
      e.lhs = lhs;
      e.rhs = rhs;
      e.residual = r;
    }
    const bool ok = r.is_finite() && r.value() <= e.tolerance * scale_;
    e.pass = e.pass && ok;
  }

  double scale_;
  std::vector<ReportEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace qred
