#include <gtest/gtest.h>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "copolymer/lab/config.hpp"
#include "copolymer/lab/experiments.hpp"
#include "copolymer/lab/output.hpp"
#include "copolymer/lab/validate.hpp"

using namespace copolymer;
using namespace copolymer::lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("copolymer_lab_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

struct CliRun {
  int code = -1;
  std::string out, err;
};

CliRun cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(COPOLYMER_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string expect_config_error(const std::string& text) {
  try {
    const auto cfg = Config::parse(text, "cfg.json");
    (void)cmd_free_energy(cfg);
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected ConfigError";
  return "";
}

const char* kSmall = R"({
  "schema_version": 1,
  "seed": 5,
  "model": {"alpha": 0.5, "n_max": 1000},
  "disorder": {"kind": "gaussian"},
  "free_energy": {"lambda": [0.0, 1.0], "h": [0.1, 3.0], "N": 800, "replicas": 8}
})";

}  // namespace

TEST(Config, MalformedJsonNamesTheLine) {
  const auto msg = expect_config_error("{\n  \"schema_version\": 1,\n  \"seed\": ,\n}");
  EXPECT_NE(msg.find("cfg.json:3:"), std::string::npos) << msg;
}

TEST(Config, SchemaVersionRequired) {
  EXPECT_NE(expect_config_error("{\"seed\": 1}").find("schema_version"), std::string::npos);
  EXPECT_NE(expect_config_error("{\n\"schema_version\": 2}").find("cfg.json:2:"), std::string::npos);
}

TEST(Config, UnknownKeyAndBadTypeAreLineAnchored) {
  std::string text = kSmall;
  text.replace(text.find("\"replicas\""), 10, "\"replica\"");
  auto msg = expect_config_error(text);
  EXPECT_NE(msg.find("cfg.json:6: /free_energy/replica: unknown key"), std::string::npos) << msg;
  text = kSmall;
  text.replace(text.find("\"alpha\": 0.5"), 12, "\"alpha\": \"x\"");
  msg = expect_config_error(text);
  EXPECT_NE(msg.find("cfg.json:4: /model/alpha: expected a number"), std::string::npos) << msg;
  text = kSmall;
  text.replace(text.find("\"N\": 800"), 8, "\"N\": 2.5");
  msg = expect_config_error(text);
  EXPECT_NE(msg.find("/free_energy/N: expected an integer"), std::string::npos) << msg;
}

TEST(Config, RatioConstraintsCheckedBeforeCompute) {
  const auto cfg = Config::parse(R"({
  "schema_version": 1,
  "model": {"alpha": 0.5, "n_max": 1000},
  "disorder": {"kind": "binary"},
  "pipeline_chain": {"lambda": 1, "h": 0.4, "a": 0.25, "eps": 0.07, "delta": 0.28, "t": 7, "replicas": 2}
})",
                                 "p.json");
  try {
    (void)cmd_pipeline_chain(cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("p.json:5: /pipeline_chain/eps"), std::string::npos) << e.what();
  }
}

TEST(Config, HorizonOverrunIsAResourceLimit) {
  std::string text = kSmall;
  text.replace(text.find("\"N\": 800"), 8, "\"N\": 1500");
  EXPECT_THROW((void)cmd_free_energy(Config::parse(text)), HorizonError);
}

TEST(Output, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  }
  CsvTable t("t", {"a", "b", "c", "d"});
  t.add(0.1, true, std::int64_t{7}, std::string("x"));
  EXPECT_EQ(t.body(), "a,b,c,d\n0.10000000000000001,1,7,x\n");
  EXPECT_THROW(t.add(1.0), InvariantError);
}

TEST(FreeEnergyCmd, LambdaZeroRowsAndDeepPoints) {
  const auto rec = cmd_free_energy(Config::parse(kSmall));
  ASSERT_TRUE(rec.ok());
  const auto* t = rec.table("free_energy");
  ASSERT_NE(t, nullptr);
  ASSERT_EQ(t->rows().size(), 4u);
  for (const auto& r : t->rows())
    if (r[0] == "0") EXPECT_EQ(r[5], "0");
  // lambda = 1: h = 0.1 deep localized at 3 sigma, h = 3 deep delocalized
  const double loc = std::stod(t->rows()[2][5]), loc_se = std::stod(t->rows()[2][6]);
  EXPECT_GT(loc, 3 * loc_se);
  EXPECT_LE(std::abs(std::stod(t->rows()[3][5])), 0.01);
}

TEST(FreeEnergyCmd, ReproducibleAndSeedOverride) {
  const auto cfg = Config::parse(kSmall);
  const auto a = cmd_free_energy(cfg), b = cmd_free_energy(cfg, {std::nullopt, 3, false});
  EXPECT_EQ(a.tables[0].body(), b.tables[0].body());
  const auto c = cmd_free_energy(cfg, {std::uint64_t{6}, 1, false});
  EXPECT_NE(a.tables[0].body(), c.tables[0].body());
}

TEST(CollapseCmd, UnitScaleEqualsFreeEnergy) {
  const auto cfg = Config::parse(R"({
  "schema_version": 1,
  "seed": 9,
  "model": {"alpha": 0.5, "n_max": 1000},
  "disorder": {"kind": "gaussian"},
  "free_energy": {"lambda": [1.0], "h": [0.4], "N": 150, "replicas": 8},
  "collapse": {"models": [{"alpha": 0.5, "n_max": 1000}, {"alpha": 0.5, "n_max": 1000, "slowly_varying": "log_power"}],
               "a": [1.0, 0.5], "lambda": 1.0, "h": 0.4, "t": 150, "replicas": 8}
})");
  const auto fe = cmd_free_energy(cfg);
  const auto co = cmd_collapse(cfg);
  ASSERT_TRUE(co.ok());
  const auto& row = co.table("collapse")->rows()[0];
  EXPECT_EQ(row[1], "1");
  EXPECT_EQ(row[8], fe.tables[0].rows()[0][5]);
  EXPECT_EQ(co.table("collapse_gaps")->rows().size(), 2u);
}

TEST(HcCurveCmd, LambdaZeroOmittedAndBoundsGate) {
  // at N = 2000 the bracket sits just below the rigorous lower bound (finite-N bias), so the
  // tolerance decides the verdict
  const std::string text = R"({
  "schema_version": 1,
  "model": {"alpha": 0.5, "n_max": 2000},
  "disorder": {"kind": "gaussian"},
  "hc_curve": {"lambda": [0.0, 1.0], "N": 2000, "replicas": 8, "resolution": 0.1, "tolerance": TOL}
})";
  auto with = [&](const std::string& tol) {
    std::string s = text;
    s.replace(s.find("TOL"), 3, tol);
    return cmd_hc_curve(Config::parse(s));
  };
  const auto loose = with("0.2");
  EXPECT_TRUE(loose.ok());
  ASSERT_EQ(loose.tables[0].rows().size(), 1u);
  EXPECT_EQ(loose.tables[0].rows()[0][0], "1");
  EXPECT_EQ(loose.tables[0].rows()[0][9], "1");
  EXPECT_EQ(loose.notes.size(), 1u);
  const auto tight = with("0.0");
  ASSERT_EQ(tight.failures.size(), 1u);
  EXPECT_EQ(tight.failures[0], "hc_bracket_outside_bounds(lambda=1)");
  EXPECT_EQ(tight.tables[0].rows()[0][9], "0");
}

TEST(PipelineCmd, LambdaZeroGivesZeros) {
  const auto cfg = Config::parse(R"({
  "schema_version": 1,
  "model": {"alpha": 0.5, "n_max": 1000},
  "disorder": {"kind": "binary"},
  "pipeline_chain": {"lambda": 0, "h": 0.4, "a": 0.5, "eps": 0.25, "delta": 0.5, "t": 5, "replicas": 2,
                     "cells": 4, "inner": 10}
})");
  const auto rec = cmd_pipeline_chain(cfg);
  ASSERT_TRUE(rec.ok());
  for (const auto& r : rec.table("pipeline_chain")->rows()) EXPECT_EQ(r[9], "0");
}

TEST(Validate, FaultInjectionNamesTheInvariant) {
  const auto checks = run_validation(1, {true, "k_table", 1});
  bool norm = false, identity = false;
  for (const auto& c : checks) {
    if (c.name == "law_normalization") norm = !c.pass;
    if (c.name == "renewal_identity") identity = !c.pass;
  }
  EXPECT_TRUE(norm);
  EXPECT_TRUE(identity);
  for (const auto& c : run_validation(1, {true, "", 1})) EXPECT_TRUE(c.pass) << c.name;
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("exit_codes");
  const auto good = write_file(dir / "good.json", kSmall);
  auto r = cli("free-energy --config " + good.string() + " --out " + (dir / "out").string(), dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "out" / "free_energy.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "free_energy.json"));

  std::string bad = kSmall;
  bad.replace(bad.find("\"replicas\""), 10, "\"replica\"");
  r = cli("free-energy --config " + write_file(dir / "bad.json", bad).string() + " --out " + dir.string(), dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.json:6:"), std::string::npos) << r.err;

  r = cli("free-energy --config " + (dir / "missing.json").string(), dir);
  EXPECT_EQ(r.code, 1);

  std::string big = kSmall;
  big.replace(big.find("\"N\": 800"), 8, "\"N\": 1500");
  r = cli("free-energy --config " + write_file(dir / "big.json", big).string() + " --out " + dir.string(), dir);
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Cli, InjectedFaultExitsTwo) {
  const auto dir = scratch("fault");
  const auto cfg = write_file(dir / "fault.json", R"({"schema_version": 1, "validate": {"inject_fault": "k_table"}})");
  const auto r = cli("validate --fast --config " + cfg.string() + " --out " + dir.string(), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("law_normalization"), std::string::npos) << r.err;
  EXPECT_NE(slurp(dir / "validate.csv").find("law_normalization,fail"), std::string::npos);
}

TEST(Cli, FastValidateIsQuickAndReproducible) {
  const auto dir = scratch("fast");
  const std::string cfg = std::string(COPOLYMER_CONFIG_DIR) + "/default.json";
  const auto start = std::chrono::steady_clock::now();
  const auto a = cli("validate --fast --config " + cfg + " --out " + (dir / "a").string(), dir);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_LT(secs, 60.0);
  const auto b = cli("validate --fast --config " + cfg + " --out " + (dir / "b").string() + " --threads 2", dir);
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(slurp(dir / "a" / "validate.csv"), slurp(dir / "b" / "validate.csv"));
}
