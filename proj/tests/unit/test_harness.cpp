#include "bouss/harness/experiment.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace bouss;
using namespace bouss::harness;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bouss_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.ini");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json load_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

const char* kIdentity = R"(# small identity run
[experiment]
kind = identity-suite
output_dir = id
seed = 3

[model]
mode = direct
a = -0.6
c = -0.4
a1 = 0.3
c1 = 0.7

[bathymetry]
preset = bump
epsilon = 0.01
width = 2
t_ref = 11

[grid]
L = 32*pi
N = 256

[initial]
preset = localized
epsilon = 0.05
modes = 20

[time]
t0 = 11
dt = 1e-3
t_end = 11.2

[diagnostics]
every = 10
weight = schedule
)";

const char* kDecayZero = R"([experiment]
kind = decay-run
output_dir = dz

[model]
mode = direct
a = -1
c = -1

[grid]
L = 20*pi
N = 128

[initial]
preset = zero

[time]
t0 = 11
dt = 0.05
t_end = 13

[diagnostics]
every = 4
)";

int run_cli(const std::string& args, const fs::path& root) {
  const std::string cmd = "BOUSS_OUTPUT_ROOT='" + root.string() + "' '" + BOUSS_CLI_PATH + "' " + args + " > '" +
                          (root / "cli.log").string() + "' 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

TEST(Config, ParsesAndRoundTrips) {
  const ExperimentConfig c = parse(kIdentity);
  EXPECT_EQ(c.kind, ExperimentKind::identity_suite);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.N, 256);
  EXPECT_NEAR(c.L, 32 * std::numbers::pi, 1e-12);
  EXPECT_EQ(c.initial, "localized");
  EXPECT_EQ(c.bottom.preset, BathymetryPreset::decaying_bump);
  EXPECT_EQ(parse(serialize_config(c)), c);
}

TEST(Config, MissingRequiredKeyIsNamed) {
  std::string text = kIdentity;
  text.replace(text.find("dt = 1e-3\n"), 10, "");
  const std::string msg = error_of(text);
  EXPECT_NE(msg.find("'dt'"), std::string::npos) << msg;
}

TEST(Config, UnknownKeyReportsFileAndLine) {
  std::string text = kIdentity;
  text += "colour = blue\n";
  const std::string msg = error_of(text);
  EXPECT_NE(msg.find("unknown key 'colour'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("test.ini:"), std::string::npos) << msg;
}

TEST(Config, BadValueReportsLine) {
  std::string text = kIdentity;
  text.replace(text.find("N = 256"), 7, "N = many");
  const std::string msg = error_of(text);
  EXPECT_NE(msg.find("test.ini:22"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'N'"), std::string::npos) << msg;
}

TEST(Config, UnknownKindIsRejected) {
  EXPECT_NE(error_of("[experiment]\nkind = fishing\n").find("fishing"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Experiments

TEST(Experiment, IdentitySuitePasses) {
  const fs::path root = scratch("identity");
  const Outcome o = run_experiment(parse(kIdentity), root);
  EXPECT_EQ(o.exit_code, kPass) << o.message << "\n" << o.summary.dump(2);
  for (const char* f : {"config.ini", "summary.json", "diagnostics.csv", "final_state.csv", "plot.gp"})
    EXPECT_TRUE(fs::exists(root / "id" / f)) << f;
  const auto cols = read_csv(root / "id" / "diagnostics.csv");
  EXPECT_EQ(cols.size(), diagnostics_columns().size());
  EXPECT_EQ(cols.at("t").size(), 21u);
  EXPECT_EQ(load_json(root / "id" / "summary.json").at("seed"), 3);
}

TEST(Experiment, RunsAreByteDeterministic) {
  const fs::path r1 = scratch("det1"), r2 = scratch("det2");
  run_experiment(parse(kIdentity), r1);
  run_experiment(parse(kIdentity), r2);
  EXPECT_EQ(slurp(r1 / "id" / "diagnostics.csv"), slurp(r2 / "id" / "diagnostics.csv"));
  EXPECT_EQ(slurp(r1 / "id" / "final_state.csv"), slurp(r2 / "id" / "final_state.csv"));
}

TEST(Experiment, ZeroDataDecayReportIsTrivial) {
  const fs::path root = scratch("decay_zero");
  const Outcome o = run_experiment(parse(kDecayZero), root);
  ASSERT_EQ(o.exit_code, kPass) << o.message;
  const Outcome r = decay_report(root / "dz");
  EXPECT_EQ(r.exit_code, kPass);
  EXPECT_EQ(r.summary.at("global_ratio"), 0.0);
  EXPECT_EQ(r.summary.at("windowed_ratio"), 0.0);
  EXPECT_EQ(r.summary.at("running_final"), 0.0);
  EXPECT_TRUE(fs::exists(root / "dz" / "decay_report.json"));
}

TEST(Experiment, OutOfRegionDecayIsFlagged) {
  std::string text = kDecayZero;
  text.replace(text.find("a = -1\nc = -1"), 13, "a = -0.020833333333333332\nc = -0.020833333333333332");
  text.replace(text.find("preset = zero"), 13, "preset = gaussian\nepsilon = 0.01");
  const fs::path root = scratch("decay_out");
  const Outcome o = run_experiment(parse(text), root);
  EXPECT_EQ(o.exit_code, kPass);
  EXPECT_EQ(o.summary.at("decay").at("flag"), "out-of-region");
  EXPECT_FALSE(o.summary.at("region").at("accepted").get<bool>());
}

TEST(Experiment, RegionMapRejectsSharpnessNeighbour) {
  const fs::path root = scratch("map");
  const Outcome o = run_experiment(parse("[experiment]\nkind = region-map\noutput_dir = m\n[region_map]\n"
                                         "a_min = -1\na_max = -0.01\nc_min = -1\nc_max = -0.01\nstep = 0.01\n"),
                                   root);
  ASSERT_EQ(o.exit_code, kPass);
  EXPECT_EQ(o.summary.at("cells"), 10000);
  const auto& near = o.summary.at("nearest_to_a_c_minus_1_48");
  EXPECT_NEAR(near.at("a").get<double>(), -0.02, 1e-12);
  EXPECT_NEAR(near.at("c").get<double>(), -0.02, 1e-12);
  EXPECT_FALSE(near.at("accepted").get<bool>());
  // (-1,-1) is the first cell and accepted
  std::ifstream in(root / "m" / "region_map.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "a,c,accepted,branch,margin,alpha");
  EXPECT_EQ(first.substr(0, 8), "-1,-1,1,");
}

TEST(Experiment, BlowUpIsARuntimeAbort) {
  std::string text = kIdentity;
  text.replace(text.find("epsilon = 0.01\nwidth = 2"), 14, "epsilon = 80");
  text.replace(text.find("c1 = 0.7"), 8, "c1 = 1");
  const fs::path root = scratch("abort");
  const Outcome o = run_experiment(parse(text), root);
  EXPECT_EQ(o.exit_code, kRuntimeAbort) << o.message;
  EXPECT_EQ(load_json(root / "id" / "summary.json").at("aborted"), true);
}

// ---------------------------------------------------------------------------
// CLI

TEST(Cli, ExitCodes) {
  const fs::path root = scratch("cli");
  {
    std::ofstream(root / "good.ini") << kIdentity;
    std::ofstream(root / "bad.ini") << "[experiment]\nkind = identity-suite\nbogus = 1\n";
    std::string failing = kIdentity;
    failing += "tolerance = 1e-30\n";
    std::ofstream(root / "failing.ini") << failing;
  }
  EXPECT_EQ(run_cli("run '" + (root / "good.ini").string() + "'", root), 0) << slurp(root / "cli.log");
  EXPECT_EQ(run_cli("run '" + (root / "bad.ini").string() + "'", root), 1);
  EXPECT_EQ(run_cli("run '" + (root / "missing.ini").string() + "'", root), 1);
  EXPECT_EQ(run_cli("frobnicate", root), 1);
  EXPECT_EQ(run_cli("run '" + (root / "failing.ini").string() + "'", root), 3) << slurp(root / "cli.log");
  EXPECT_EQ(run_cli("region-map '" + (root / "good.ini").string() + "'", root), 1);
}
