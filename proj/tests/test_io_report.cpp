#include "test_util.hpp"

namespace qred {
namespace {

using test::matrix_near;

::testing::AssertionResult throws_input_error_with(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
  } catch (const InputError& e) {
    if (std::string(e.what()).find(needle) != std::string::npos) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "message '" << e.what() << "' lacks '" << needle << "'";
  }
  return ::testing::AssertionFailure() << "no InputError thrown";
}

TEST(OperatorJson, RoundTripIsExact) {
  Rng rng(101);
  const auto rho = random_state(rng, Dims{2, 3});
  const auto back = positive_from_json(json::parse(to_json(rho).dump()));
  EXPECT_EQ(back.dims(), rho.dims());
  EXPECT_TRUE(matrix_near(back.matrix(), rho.matrix(), 0.0));
}

TEST(OperatorJson, ImaginaryPartIsOptional) {
  const auto x = positive_from_json(json::parse(R"({"dims": [2], "re": [[0.75, 0], [0, 0.25]]})"));
  EXPECT_TRUE(matrix_near(x.matrix(), HermitianOperator::diagonal({0.75, 0.25}).matrix(), 0.0));
}

TEST(OperatorJson, ErrorsNameTheField) {
  EXPECT_TRUE(throws_input_error_with([] { positive_from_json(json::parse(R"({"re": [[1]]})"), "a.json"); },
                                      "a.json"));
  EXPECT_TRUE(throws_input_error_with([] { positive_from_json(json::parse(R"({"re": [[1]]})"), "a.json"); }, "dims"));
  EXPECT_TRUE(throws_input_error_with(
      [] { positive_from_json(json::parse(R"({"dims": [2], "re": [[1, 0], [0]]})"), "b.json"); }, "re"));
  EXPECT_TRUE(throws_input_error_with(
      [] { positive_from_json(json::parse(R"({"dims": [2], "re": [[1, 0], [0, -1]]})"), "c.json"); }, "c.json"));
  EXPECT_TRUE(throws_input_error_with([] { io::load_file("/nonexistent/x.json"); }, "/nonexistent/x.json"));
}

TEST(ChannelJson, KrausRoundTripIsExact) {
  Rng rng(102);
  const auto phi = random_channel(rng, 2, 3, 2);
  const auto back = channel_from_json(json::parse(to_json(phi).dump()));
  EXPECT_EQ(back.in_dims(), phi.in_dims());
  EXPECT_EQ(back.out_dims(), phi.out_dims());
  ASSERT_EQ(back.kraus_count(), phi.kraus_count());
  for (std::size_t i = 0; i < phi.kraus_count(); ++i)
    EXPECT_TRUE(matrix_near(back.kraus()[i], phi.kraus()[i], 0.0));
}

TEST(ChannelJson, StandardKinds) {
  const auto phi = channel_from_json(json::parse(R"({"kind": "amplitude_damping", "t": 0.3})"));
  const auto ref = channels::amplitude_damping(0.3);
  ASSERT_EQ(phi.kraus_count(), ref.kraus_count());
  for (std::size_t i = 0; i < ref.kraus_count(); ++i) EXPECT_TRUE(matrix_near(phi.kraus()[i], ref.kraus()[i], 0.0));
  EXPECT_TRUE(throws_input_error_with([] { channel_from_json(json::parse(R"({"kind": "teleport"})"), "k.json"); },
                                      "amplitude_damping"));
  EXPECT_TRUE(throws_input_error_with(
      [] { channel_from_json(json::parse(R"({"kind": "amplitude_damping", "t": 2})"), "k.json"); }, "k.json"));
}

TEST(ChannelJson, TraceIncreasingKrausIsAnInputError) {
  const auto j = json::parse(R"({"in_dims": [1], "out_dims": [1], "kraus": [{"re": [[2]]}]})");
  EXPECT_TRUE(throws_input_error_with([&] { channel_from_json(j, "t.json"); }, "t.json"));
}

TEST(ExtendedRealJson, InfinityIsAString) {
  EXPECT_EQ(to_json(ExtendedReal::infinity()), json("inf"));
  EXPECT_EQ(to_json(ExtendedReal(0.5)), json(0.5));
  EXPECT_TRUE(extended_from_json(json("inf")).is_infinite());
  EXPECT_EQ(extended_from_json(json(1.25)).value(), 1.25);
  EXPECT_THROW(extended_from_json(json("nan")), InputError);
}

TEST(FormatValue, SixDecimalsOrInf) {
  EXPECT_EQ(format_value(ExtendedReal::infinity()), "inf");
  EXPECT_EQ(format_value(std::log(2.0)), "0.693147");
  EXPECT_EQ(format_value(0.0), "0.000000");
}

TEST(Residual, EqualAndAtMost) {
  EXPECT_EQ(residual_of(Relation::equal, 1.0, 1.5).value(), 0.5);
  EXPECT_EQ(residual_of(Relation::equal, ExtendedReal::infinity(), ExtendedReal::infinity()).value(), 0.0);
  EXPECT_TRUE(residual_of(Relation::equal, ExtendedReal::infinity(), 1.0).is_infinite());
  EXPECT_EQ(residual_of(Relation::at_most, 1.0, 2.0).value(), 0.0);
  EXPECT_EQ(residual_of(Relation::at_most, 3.0, 2.0).value(), 1.0);
  EXPECT_EQ(residual_of(Relation::at_most, ExtendedReal::infinity(), ExtendedReal::infinity()).value(), 0.0);
  EXPECT_TRUE(residual_of(Relation::at_most, ExtendedReal::infinity(), 2.0).is_infinite());
}

TEST(ReportBuilder, KeepsWorstResidualAndCountsChecks) {
  ReportBuilder b;
  b.equal("x", "a", 1.0, 1.0 + 1e-12, 1e-9);
  b.equal("x", "a", 2.0, 2.0 + 1e-10, 1e-9);
  b.equal("x", "a", 3.0, 3.0, 1e-9);
  const auto& e = b.entries().front();
  EXPECT_EQ(e.checks, 3u);
  EXPECT_NEAR(e.residual.value(), 1e-10, 1e-15);
  EXPECT_EQ(e.lhs.value(), 2.0);
  EXPECT_TRUE(e.pass);
  b.at_most("x", "a", 5.0, 4.0, 1e-9);
  EXPECT_FALSE(b.entries().front().pass);
}

TEST(ReportBuilder, ToleranceScaleLoosensChecks) {
  ReportBuilder strict(1.0), loose(100.0);
  strict.equal("y", "a", 0.0, 1e-8, 1e-9);
  loose.equal("y", "a", 0.0, 1e-8, 1e-9);
  EXPECT_FALSE(strict.entries().front().pass);
  EXPECT_TRUE(loose.entries().front().pass);
}

TEST(ReportBuilder, SkipsAndBooleans) {
  ReportBuilder b;
  b.skip("s", "a", Relation::equal, 1e-9);
  b.holds("h", "a", false, "broken");
  const auto entries = b.take();
  EXPECT_EQ(entries[0].skipped, 1u);
  EXPECT_TRUE(entries[0].pass);
  EXPECT_FALSE(entries[1].pass);
  EXPECT_EQ(entries[1].note, "broken");
}

TEST(SuiteReport, BodyOmitsRuntime) {
  SuiteReport r;
  r.runtime_ms = 17;
  ReportBuilder b;
  b.equal("z", "a", 1.0, 2.0, 0.1);
  r.entries = b.take();
  EXPECT_FALSE(r.body().contains("runtime_ms"));
  EXPECT_EQ(r.to_json()["runtime_ms"], 17);
  EXPECT_EQ(r.body()["summary"]["failed"], 1);
  EXPECT_EQ(r.body()["summary"]["pass"], false);
  EXPECT_EQ(r.body()["entries"][0]["residual"], 1.0);
  EXPECT_NE(r.find("z"), nullptr);
  EXPECT_EQ(r.find("missing"), nullptr);
}

TEST(SuiteConfig, Validation) {
  SuiteConfig c;
  EXPECT_NO_THROW(validate(c));
  c.trials = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = SuiteConfig{};
  c.dims = {2, 9};
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.dims = {};
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = SuiteConfig{};
  c.tolerance_scale = 0.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
}

}  // namespace
}  // namespace qred
