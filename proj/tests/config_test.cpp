#include <gtest/gtest.h>

#include "bathtub/config.hpp"
#include "bathtub/errors.hpp"
#include "bathtub/experiments.hpp"

using namespace bathtub;

namespace {

const char* kReferenceConfig = R"(# reference scenario
L = 10
T = 8

[velocity]
kind = greenshields
free_flow_speed = 1
jam_density = 1

[inflow]
kind = constant
rate = 0.15

[distribution]
kind = uniform
length = 10

[initial]
kind = zero

[mesh]
forward_dt = 1e-3
forward_dx = 1e-3
inverse_dt = 1e-2

[noise]
sigma = 1e-4
seed = 1
)";

}  // namespace

TEST(Config, ParsesReferenceScenario) {
  ParsedConfig config = parse_config_text(kReferenceConfig);
  EXPECT_DOUBLE_EQ(config.scenario.kernel_length, 10.0);
  EXPECT_DOUBLE_EQ(config.scenario.horizon, 8.0);
  EXPECT_DOUBLE_EQ(config.scenario.inflow(3.0), 0.15);
  EXPECT_DOUBLE_EQ(config.options.sigma, 1e-4);
  EXPECT_EQ(config.options.seed, 1u);
}

TEST(Config, EmptyFileIsParseError) {
  EXPECT_THROW(parse_config_text(""), ParseError);
  EXPECT_THROW(parse_config_text("# only a comment\n"), ParseError);
}

TEST(Config, UnknownKeyRejectedWithLocation) {
  std::string text = std::string(kReferenceConfig) + "\n[velocity]\nbogus = 3\n";
  try {
    parse_config_text(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

TEST(Config, UnknownSectionRejected) {
  std::string text = std::string(kReferenceConfig) + "\n[extra]\nkey = 1\n";
  EXPECT_THROW(parse_config_text(text), ParseError);
}

TEST(Config, RoundTripIsIdentity) {
  ParsedConfig first = parse_config_text(kReferenceConfig);
  std::string emitted = emit_config(first);
  ParsedConfig second = parse_config_text(emitted);
  EXPECT_EQ(emit_config(second), emitted);
}

TEST(Config, RoundTripCoversEveryBuiltInExample) {
  for (const auto& name : example_names()) {
    ParsedConfig config = example_config(name);
    std::string emitted = emit_config(config);
    ParsedConfig reparsed = parse_config_text(emitted);
    EXPECT_EQ(emit_config(reparsed), emitted) << name;
  }
}

TEST(Config, OverrideRewritesValue) {
  std::string text = apply_override(kReferenceConfig, "T=16");
  ParsedConfig config = parse_config_text(text);
  EXPECT_DOUBLE_EQ(config.scenario.horizon, 16.0);
  // Section-qualified override.
  text = apply_override(text, "inflow.rate=0.3");
  config = parse_config_text(text);
  EXPECT_DOUBLE_EQ(config.scenario.inflow(0.0), 0.3);
}

TEST(Config, OverrideAppendsMissingKey) {
  std::string text = apply_override(kReferenceConfig, "mesh.nodes_dx=0.1");
  ParsedConfig config = parse_config_text(text);
  ASSERT_TRUE(config.options.nodes_dx.has_value());
  EXPECT_DOUBLE_EQ(*config.options.nodes_dx, 0.1);
}

TEST(Config, TabulatedLawsRoundTrip) {
  const char* text = R"(
L = 10
T = 4

[velocity]
kind = tabulated
densities = 0, 0.5, 1
speeds = 1, 0.6, 0.1

[inflow]
kind = tabulated
times = 0, 2, 4
values = 0.1, 0.2, 0.1

[distribution]
kind = tabulated
times = 0
positions = 0, 5, 10
values_0 = 0.1, 0.1, 0.1

[initial]
kind = tabulated
positions = 0, 5, 10
values = 0, 0.05, 0
)";
  ParsedConfig config = parse_config_text(text);
  std::string emitted = emit_config(config);
  EXPECT_EQ(emit_config(parse_config_text(emitted)), emitted);
  EXPECT_DOUBLE_EQ(config.scenario.inflow(2.0), 0.2);
}

TEST(Config, DuplicateKeyRejected) {
  std::string text = "L = 10\nL = 11\nT = 8\n";
  EXPECT_THROW(parse_config_text(text), ParseError);
}
