#include <set>

#include "test_util.hpp"

namespace qred {
namespace {

std::string sample(const std::string& name) { return std::string(QRED_SAMPLES_DIR) + "/" + name; }

json sample_json(const std::string& name) { return io::load_file(sample(name)); }

TEST(Compute, RelativeEntropyOfSamples) {
  // KL((1/2, 1/2) || (3/4, 1/4)), frozen from the classical oracle.
  const double oracle = test::kl_oracle({0.5, 0.5}, {0.75, 0.25});
  EXPECT_NEAR(oracle, 0.143841, 1e-6);
  const auto v = compute("relative_entropy", {sample("half_half.json"), sample("three_quarter.json")});
  EXPECT_TRUE(test::near(v, oracle, 1e-12));
  EXPECT_EQ(format_value(v), "0.143841");
}

TEST(Compute, SupportViolationIsInfinite) {
  const auto v = compute("relative_entropy", {sample("three_quarter.json"), sample("ket0.json")});
  EXPECT_TRUE(v.is_infinite());
  EXPECT_EQ(format_value(v), "inf");
}

TEST(Compute, GhzConditionalMutualInformation) {
  EXPECT_EQ(format_value(compute("qcmi", {sample("ghz.json")})), "0.693147");
  EXPECT_TRUE(test::near(compute("mutual_info", {sample("bell.json")}), 2.0 * std::log(2.0), 1e-10));
}

TEST(Compute, OutOfDomainDisturbanceThrows) {
  EXPECT_THROW(compute("delta", {sample("dephasing_kraus.json"), sample("half_half.json"), sample("ket0.json")}),
               std::domain_error);
}

TEST(Compute, UsageErrors) {
  EXPECT_THROW(compute("relative_entropy", {sample("half_half.json")}), UsageError);
  try {
    compute("negativity", {});
    FAIL() << "no UsageError";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("relative_entropy"), std::string::npos);
  }
}

TEST(Compute, MalformedFileNamesTheFile) {
  try {
    compute("entropy", {sample("malformed_operator.json")});
    FAIL() << "no InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("malformed_operator.json"), std::string::npos);
  }
}

TEST(Compute, EveryQuantityIsListed) {
  std::set<std::string> names;
  for (const auto& q : quantities()) names.insert(q.name);
  for (const char* n : {"relative_entropy", "entropy", "mutual_info", "qcmi", "cond_rel_entropy", "delta",
                        "channel_mutual_info", "coherent_info", "fidelity", "trace_distance"})
    EXPECT_TRUE(names.count(n)) << n;
}

TEST(Probe, UnknownKindListsValidKinds) {
  try {
    run_probe(sample_json("probe_bad_kind.json"), "probe_bad_kind.json");
    FAIL() << "no InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("dj_estimate"), std::string::npos);
  }
}

TEST(Probe, VanishingMassPasses) {
  const auto r = run_probe(sample_json("probe_vanishing_mass.json"), "probe_vanishing_mass.json");
  EXPECT_FALSE(r.entries.empty());
  EXPECT_TRUE(r.all_pass());
}

TEST(Probe, TwistedGibbsFamilyFailsCompatibility) {
  const auto r = run_probe(sample_json("probe_gibbs_twisted.json"), "probe_gibbs_twisted.json");
  EXPECT_FALSE(r.all_pass());
  bool named = false;
  for (const auto& e : r.entries) named = named || (!e.pass && e.name.find("gibbs_compatibility") != std::string::npos);
  EXPECT_TRUE(named);
}

TEST(Batch, SampleManifestPasses) {
  const auto r = run_batch_file(sample("batch.json"));
  EXPECT_EQ(r.entries.size(), 8u);
  EXPECT_TRUE(r.all_pass());
}

TEST(Batch, MissingFileIsAnInputError) {
  const auto manifest = json::parse(R"({"entries": [{"identity": "donald", "rho": "nope.json", "sigma": "nope.json",
                                                    "omega": "nope.json", "p": 0.5}]})");
  EXPECT_THROW(run_batch(manifest, "m.json", QRED_SAMPLES_DIR), InputError);
}

TEST(Suite, SmallRunIsDeterministic) {
  SuiteConfig c;
  c.seed = 9;
  c.dims = {2, 3};
  c.trials = 10;
  const auto a = run_suite(c);
  const auto b = run_suite(c);
  EXPECT_EQ(a.body().dump(), b.body().dump());
  EXPECT_TRUE(a.all_pass()) << a.body().dump(2);
  c.seed = 10;
  EXPECT_NE(run_suite(c).body().dump(), a.body().dump());
}

}  // namespace
}  // namespace qred
