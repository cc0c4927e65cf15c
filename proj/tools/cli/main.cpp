// lambdap-lab: batch driver for the experiments in lambdap::lab.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lambdap/errors.hpp"
#include "lambdap/lab/lab.hpp"
#include "lambdap/parallel.hpp"

namespace lab = lambdap::lab;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

struct Options {
  std::size_t n = 0;
  std::vector<std::size_t> n_list;
  double p = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string system = "trig";
  std::string out = "lab_out";
  std::size_t oversample = 16;
  unsigned threads = 0;
  std::vector<std::string> knobs;
};

lab::ExperimentConfig to_config(lab::Experiment e, const Options& o, const CLI::App& sub) {
  lab::ExperimentConfig cfg;
  cfg.experiment = e;
  if (sub.count("--n-list")) cfg.n = o.n_list;
  if (sub.count("--n")) cfg.n.insert(cfg.n.begin(), o.n);
  if (sub.count("--p")) cfg.p = o.p;
  if (sub.count("--trials")) cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.system = lambdap::parse_system_kind(o.system);
  cfg.out = o.out;
  cfg.oversample = o.oversample;
  cfg.threads = o.threads;
  for (const auto& kv : o.knobs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw lab::ConfigError("--set expects key=value, got " + kv);
    try {
      std::size_t used = 0;
      const double v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing characters");
      cfg.knobs[kv.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw lab::ConfigError("--set value is not a number: " + kv);
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for random Lambda(p) sets"};
  app.require_subcommand(1);
  Options o;
  const std::pair<lab::Experiment, const char*> subs[] = {
      {lab::Experiment::k_omega, "random selector sets: K(omega) distribution and trend in n"},
      {lab::Experiment::kest_scan, "ratio scan of the trilinear key estimate"},
      {lab::Experiment::entropy_scan, "entropy numbers of P_m against the reference bound"},
      {lab::Experiment::reduce_demo, "support reduction statistics"},
      {lab::Experiment::decouple, "tripartite decoupling check on random vectors"},
      {lab::Experiment::selectors, "selector moments, tails and Bernstein"},
      {lab::Experiment::verify_all, "run every invariant suite"},
  };
  std::vector<std::pair<lab::Experiment, CLI::App*>> apps;
  for (const auto& [e, help] : subs) {
    std::string name(lab::to_string(e));
    for (char& c : name)
      if (c == '_') c = '-';
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--n", o.n, "problem size")->check(CLI::PositiveNumber);
    sub->add_option("--n-list", o.n_list, "comma-separated sizes")->delimiter(',');
    sub->add_option("--p", o.p, "exponent p (q for entropy-scan and reduce-demo)");
    sub->add_option("--trials", o.trials, "trial count");
    sub->add_option("--seed", o.seed, "master seed")->required();
    sub->add_option("--system", o.system, "orthogonal system")->check(CLI::IsMember({"walsh", "trig"}));
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--oversample", o.oversample, "trig grid oversampling factor");
    sub->add_option("--threads", o.threads, "worker threads (0: hardware)");
    sub->add_option("--set", o.knobs, "experiment knob key=value (repeatable)");
    apps.emplace_back(e, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (const auto& [e, sub] : apps) {
      if (!sub->parsed()) continue;
      auto cfg = to_config(e, o, *sub);
      if (cfg.threads) lambdap::set_default_threads(cfg.threads);
      auto rec = lab::run(cfg);
      lab::write_outputs(rec);
      std::size_t ok = 0;
      for (const auto& c : rec.checks) {
        ok += c.passed;
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << lab::format_double(c.value)
                  << " threshold=" << lab::format_double(c.threshold) << '\n';
      }
      for (const auto& [k, v] : rec.summary) std::cout << "summary " << k << '=' << lab::format_double(v) << '\n';
      std::cout << sub->get_name() << ": " << ok << '/' << rec.checks.size() << " checks passed" << std::endl;
      return rec.passed() ? kOk : kFailed;
    }
  } catch (const lab::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const lambdap::SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
