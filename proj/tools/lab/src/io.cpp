#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "lambdap/lab/lab.hpp"

namespace lambdap::lab {

namespace {

constexpr std::pair<Experiment, std::string_view> kNames[] = {
    {Experiment::k_omega, "k_omega"},         {Experiment::kest_scan, "kest_scan"},
    {Experiment::entropy_scan, "entropy_scan"}, {Experiment::verify_all, "verify_all"},
    {Experiment::reduce_demo, "reduce_demo"}, {Experiment::decouple, "decouple"},
    {Experiment::selectors, "selectors"},
};

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// JSON numbers must be finite; non-finite values become strings.
nlohmann::ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [k, v] : kNames)
    if (k == e) return v;
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  std::string s(name);
  for (char& c : s)
    if (c == '-') c = '_';
  for (const auto& [k, v] : kNames)
    if (v == s) return k;
  throw ConfigError("unknown experiment: " + std::string(name));
}

double ExperimentConfig::knob(const std::string& key, double fallback) const {
  const auto it = knobs.find(key);
  return it == knobs.end() ? fallback : it->second;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != header.size()) throw std::logic_error("Table::add: row width mismatch in " + name);
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  auto cell = [](const Cell& c) -> std::string {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    return std::to_string(std::get<long long>(c));
  };
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell(r[i]);
    out += '\n';
  }
  return out;
}

bool RunRecord::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void RunRecord::check(std::string name, bool ok, std::string anchor, double value, double threshold) {
  checks.push_back({std::move(name), ok, std::move(anchor), value, threshold});
}

std::string RunRecord::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json c;
  c["experiment"] = to_string(config.experiment);
  c["n"] = config.n;
  c["p"] = config.p ? num(*config.p) : nlohmann::ordered_json();
  c["trials"] = config.trials ? nlohmann::ordered_json(*config.trials) : nlohmann::ordered_json();
  c["seed"] = config.seed;
  c["system"] = lambdap::to_string(config.system);
  c["oversample"] = config.oversample;
  c["out"] = config.out.string();
  nlohmann::ordered_json knobs = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.knobs) knobs[k] = num(v);
  c["knobs"] = knobs;
  j["config"] = c;
  j["artifact_version"] = artifact_version;
  j["files"] = files;
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& [k, v] : summary) s[k] = num(v);
  j["summary"] = s;
  nlohmann::ordered_json checks_j = nlohmann::ordered_json::array();
  for (const auto& ch : checks)
    checks_j.push_back({{"name", ch.name},
                        {"passed", ch.passed},
                        {"anchor", ch.anchor},
                        {"value", num(ch.value)},
                        {"threshold", num(ch.threshold)}});
  j["checks"] = checks_j;
  j["passed"] = passed();
  return j.dump(2) + "\n";
}

RunRecord run(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::string started = now_utc();
  RunRecord rec;
  switch (cfg.experiment) {
    case Experiment::k_omega: rec = run_k_omega(cfg); break;
    case Experiment::kest_scan: rec = run_kest_scan(cfg); break;
    case Experiment::entropy_scan: rec = run_entropy_scan(cfg); break;
    case Experiment::reduce_demo: rec = run_reduce_demo(cfg); break;
    case Experiment::decouple: rec = run_decouple(cfg); break;
    case Experiment::selectors: rec = run_selectors(cfg); break;
    case Experiment::verify_all: rec = run_verify_all(cfg); break;
  }
  rec.started = started;
  rec.finished = now_utc();
  return rec;
}

void write_outputs(RunRecord& rec) {
  const auto& dir = rec.config.out;
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << body;
  };
  rec.files.clear();
  for (const auto& t : rec.tables) rec.files.push_back(t.name + ".csv");
  rec.files.push_back("run_record.json");
  for (const auto& t : rec.tables) write(t.name + ".csv", t.to_csv());
  write("run_record.json", rec.to_json());
  nlohmann::ordered_json times{{"started", rec.started}, {"finished", rec.finished}};
  write("run_times.json", times.dump(2) + "\n");
}

}  // namespace lambdap::lab
