#include "bgt/commands.hpp"
#include "bgt/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace bgt;
using namespace bgt::report;

namespace {

ExperimentConfig small_torus() {
  ExperimentConfig c;
  c.preset = "flat-torus";
  c.family = "trig";
  c.family_count = 3;
  c.s = {0.0, 1.0};
  return c;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Config, RoundTripAndStableHash) {
  ExperimentConfig c = small_torus();
  c.seed = 17;
  c.s = {0.5, 1.5};
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(back.hash(), c.hash());
  EXPECT_EQ(c.hash().size(), 16u);
  ExperimentConfig other = c;
  other.seed = 18;
  EXPECT_NE(other.hash(), c.hash());
  // The output directory does not change what is computed.
  other = c;
  other.out = "elsewhere";
  EXPECT_EQ(other.hash(), c.hash());
}

TEST(Config, MissingSectionsTakeDefaults) {
  const ExperimentConfig c = ExperimentConfig::from_json(Json::object());
  EXPECT_EQ(c.to_json(), ExperimentConfig{}.to_json());
}

TEST(Config, RejectsUnknownSectionAndMissingPreset) {
  EXPECT_THROW(ExperimentConfig::from_json(Json::parse(R"({"plot": {}})")), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(Json::parse(R"({"manifold": {"n": 2}})")), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(Json::parse(R"({"grid": 64})")), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(Json::parse("[1, 2]")), ConfigError);
}

TEST(Config, ValidateRanges) {
  ExperimentConfig c;
  c.res = 100;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.p = {1.0};
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.preset = "klein-bottle";
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.family = "noise";
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(ExperimentConfig{}.validate());
}

TEST(Hash, KnownFnvVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Dump, SortedAndDeterministic) {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = {{"b", 2.5}, {"a", "x"}};
  const std::string a = dump(j);
  EXPECT_EQ(a, dump(Json::parse(a)));
  EXPECT_LT(a.find("alpha"), a.find("zeta"));
  EXPECT_EQ(a.back(), '\n');
}

TEST(Csv, HeaderAndColumns) {
  const std::string csv = to_csv({{"f0", 1.0, 2.0, "geodesic", 3.5, 0.25}, {"f1", 0.0, 2.0, "fermi", 1.0, 1.0}});
  const auto lines = split_lines(csv);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "function_id,s,p,trivialization,value,ratio");
  for (const auto& line : lines) EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
  EXPECT_EQ(lines[1].substr(0, 3), "f0,");
}

TEST(Commands, ZeroFamilyNormIsZero) {
  ExperimentConfig c = small_torus();
  c.family = "zero";
  const CommandResult r = cmd_norm(c);
  EXPECT_TRUE(r.pass);
  const auto lines = split_lines(r.csv);
  ASSERT_GT(lines.size(), 1u);
  for (size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string cell;
    for (int col = 0; col < 5; ++col) std::getline(row, cell, ',');
    EXPECT_EQ(std::stod(cell), 0.0) << lines[i];
  }
  EXPECT_EQ(r.report.at("config_hash"), c.hash());
}

TEST(Commands, SelfEquivalenceHasUnitSpread) {
  ExperimentConfig c = small_torus();
  c.compare = "self";
  const CommandResult r = cmd_equiv(c);
  EXPECT_TRUE(r.pass);
  const std::string text = dump(r.report);
  EXPECT_NE(text.find("\"spread\": 1.0,"), std::string::npos);
}

TEST(Commands, DeterministicReports) {
  const ExperimentConfig c = small_torus();
  EXPECT_EQ(dump(cmd_norm(c).report), dump(cmd_norm(c).report));
  EXPECT_EQ(cmd_norm(c).csv, cmd_norm(c).csv);
}

TEST(Commands, SymmetryNeedsTorusAndRoughFamily) {
  ExperimentConfig c;
  EXPECT_THROW(cmd_symmetry(c), ConfigError);
  c.preset = "flat-torus";
  EXPECT_THROW(cmd_symmetry(c), ConfigError);
}

TEST(Commands, NamesAndDispatch) {
  const auto& names = command_names();
  for (const char* n : {"norm", "equiv", "trace", "admissibility", "symmetry"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  EXPECT_THROW(run_command("plot", ExperimentConfig{}), ConfigError);
  EXPECT_DOUBLE_EQ(default_radius("euclidean"), 1.0);
  EXPECT_DOUBLE_EQ(default_radius("flat-torus"), 0.3);
}
