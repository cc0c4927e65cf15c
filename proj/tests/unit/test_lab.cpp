#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lambdap/errors.hpp"
#include "lambdap/lab/lab.hpp"

using namespace lambdap;
using namespace lambdap::lab;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("lambdap_lab_test_" + name);
  std::filesystem::remove_all(d);
  return d;
}

int run_cli(const std::string& args) {
  const char* cli = std::getenv("LAMBDAP_CLI");
  if (!cli) return -1;
  const int rc = std::system((std::string(cli) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Format, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0 / 3.0), "0.66666666666666663");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Table, CsvLayout) {
  Table t{"x", {"a", "b", "c"}, {}};
  t.add({std::string("s"), 0.5, 3LL});
  EXPECT_EQ(t.to_csv(), "a,b,c\ns,0.5,3\n");
  EXPECT_THROW(t.add({0.5}), std::logic_error);
}

TEST(Config, ParseAndValidate) {
  EXPECT_EQ(parse_experiment("k-omega"), Experiment::k_omega);
  EXPECT_EQ(parse_experiment("verify_all"), Experiment::verify_all);
  EXPECT_THROW(parse_experiment("nope"), ConfigError);
  ExperimentConfig c;
  c.experiment = Experiment::k_omega;
  c.trials = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c.trials = 60;
  c.p = 5.0;
  EXPECT_THROW(validate(c), ConfigError);
  c.experiment = Experiment::kest_scan;
  c.p = 3.0;
  c.n = {128};
  EXPECT_THROW(validate(c), SizeLimitError);
}

TEST(Records, DeterministicAcrossThreadCounts) {
  ExperimentConfig c;
  c.experiment = Experiment::reduce_demo;
  c.n = {16};
  c.trials = 200;
  c.seed = 3;
  c.out = scratch("det1");
  c.threads = 1;
  auto a = run(c);
  c.threads = 4;
  c.out = scratch("det1");  // same path so the config snapshot matches
  auto b = run(c);
  ASSERT_EQ(a.tables.size(), b.tables.size());
  EXPECT_EQ(a.tables[0].to_csv(), b.tables[0].to_csv());
  // Thread count is intentionally not part of the snapshot.
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Records, WritesFilesAndTimesSeparately) {
  ExperimentConfig c;
  c.experiment = Experiment::entropy_scan;
  c.n = {4};
  c.seed = 1;
  c.knobs["pool"] = 200;
  c.out = scratch("files");
  auto r = run(c);
  write_outputs(r);
  EXPECT_TRUE(std::filesystem::exists(c.out / "entropy_scan.csv"));
  EXPECT_TRUE(std::filesystem::exists(c.out / "run_times.json"));
  const auto js = slurp(c.out / "run_record.json");
  EXPECT_NE(js.find("\"seed\": 1"), std::string::npos);
  EXPECT_EQ(js.find("started"), std::string::npos);
  const auto csv = slurp(c.out / "entropy_scan.csv");
  EXPECT_EQ(csv.rfind("n,m,t,q,count_kind,count,bound,ratio,anchor\n", 0), 0u);
}

TEST(KOmega, SmallRunProducesTrend) {
  ExperimentConfig c;
  c.experiment = Experiment::k_omega;
  c.n = {16, 64};
  c.trials = 50;
  c.seed = 5;
  c.knobs["restarts"] = 2;
  const auto r = run(c);
  EXPECT_TRUE(r.summary.count("median_khat_n64"));
  EXPECT_TRUE(r.summary.count("flat_growth"));
  EXPECT_EQ(r.tables[0].rows.size(), 100u);
}

TEST(VerifyAll, ManyNamedChecksAllPass) {
  ExperimentConfig c;
  c.experiment = Experiment::verify_all;
  c.seed = 7;
  const auto r = run(c);
  EXPECT_GE(r.checks.size(), 25u);
  for (const auto& ch : r.checks) EXPECT_TRUE(ch.passed) << ch.name << " value=" << ch.value;
}

TEST(VerifyAll, AliasedTrigGridFailsOrthogonality) {
  ExperimentConfig c;
  c.experiment = Experiment::verify_all;
  c.seed = 7;
  c.oversample = 1;
  const auto r = run(c);
  EXPECT_FALSE(r.passed());
  bool found = false;
  for (const auto& ch : r.checks)
    if (ch.name == "trig_orthogonality") found = !ch.passed;
  EXPECT_TRUE(found);
}

TEST(Cli, ExitCodes) {
  if (!std::getenv("LAMBDAP_CLI")) GTEST_SKIP() << "LAMBDAP_CLI not set";
  const auto out = scratch("cli").string();
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("k-omega --trials 0 --seed 1 --out " + out), 2);
  EXPECT_EQ(run_cli("k-omega --n 64"), 2);  // --seed is mandatory
  EXPECT_EQ(run_cli("bogus --seed 1"), 2);
  EXPECT_EQ(run_cli("verify-all --seed 7 --oversample 1 --out " + out), 1);
  EXPECT_EQ(run_cli("entropy-scan --n 4 --seed 1 --set pool=100 --out " + out), 0);
  EXPECT_EQ(run_cli("entropy-scan --n 13 --seed 1 --out " + out), 2);
}
