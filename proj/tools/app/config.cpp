#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sdp/errors.hpp"

namespace sdp::app {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* b = text.data();
  const char* e = b + text.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

}  // namespace

const std::map<std::string, std::string>& default_values() {
  static const std::map<std::string, std::string> defaults = {
      {"d", "2"},
      {"extent", "20"},
      {"ell", "1"},
      {"L", "2"},
      {"M", "10"},
      {"p", "0.55"},
      {"eps", "0.2"},
      {"p_c", "0.5"},
      {"replicas", "100"},
      {"seed", "1"},
      {"first_replica", "0"},
      {"proxy", "boundary"},
      {"radius", "half_diameter"},
      {"event", "E"},
      {"witness", "arm_sites"},
      {"half_width", "auto"},
      {"n_values", "1,2,4,8"},
      {"geometry", "box"},
      {"p_grid", "0.51,0.55,0.6"},
      {"C", "1"},
      {"c", "1"},
      {"eta", "0.1"},
      {"budget", "1000000"},
  };
  return defaults;
}

ExperimentConfig::ExperimentConfig() {
  for (const auto& [k, v] : default_values()) entries_[k] = Entry{v, "default"};
}

void ExperimentConfig::set(const std::string& key, const std::string& value, const std::string& origin) {
  if (!default_values().count(key)) throw ConfigError(origin + ": unknown key '" + key + "'");
  if (value.empty()) throw ConfigError(origin + ": key '" + key + "' has an empty value");
  entries_[key] = Entry{value, origin};
}

void ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path);
}

void ExperimentConfig::load_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = name + ":" + std::to_string(number);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
  }
}

void ExperimentConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set " + assignment + ": expected key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--set " + assignment);
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second.value;
}

void ExperimentConfig::fail(const std::string& key, const std::string& what) const {
  const auto it = entries_.find(key);
  const std::string origin = it == entries_.end() ? "config" : it->second.origin;
  const std::string value = it == entries_.end() ? "" : it->second.value;
  throw ConfigError(origin + ": key '" + key + "' = '" + value + "': " + what);
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  std::int64_t v = 0;
  if (!parse_number(raw(key), v)) fail(key, "expected an integer");
  return v;
}

std::uint64_t ExperimentConfig::unsigned_integer(const std::string& key) const {
  std::uint64_t v = 0;
  if (!parse_number(raw(key), v)) fail(key, "expected a non-negative integer");
  return v;
}

double ExperimentConfig::real(const std::string& key) const {
  double v = 0;
  if (!parse_number(raw(key), v)) fail(key, "expected a number");
  return v;
}

std::vector<double> ExperimentConfig::real_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(raw(key))) {
    double v = 0;
    if (!parse_number(item, v)) fail(key, "expected a comma-separated list of numbers");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "list is empty");
  return out;
}

std::vector<std::int64_t> ExperimentConfig::integer_list(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(raw(key))) {
    std::int64_t v = 0;
    if (!parse_number(item, v)) fail(key, "expected a comma-separated list of integers");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "list is empty");
  return out;
}

int ExperimentConfig::dim() const {
  const auto d = integer("d");
  if (d < kMinDimension || d > kMaxDimension) {
    fail("d", "dimension must lie in [" + std::to_string(kMinDimension) + ", " + std::to_string(kMaxDimension) + "]");
  }
  return static_cast<int>(d);
}

Probability ExperimentConfig::probability(const std::string& key) const {
  const double v = real(key);
  if (!(v >= 0.0 && v <= 1.0)) fail(key, "probability must lie in [0, 1]");
  return Probability(v);
}

double ExperimentConfig::q() const {
  const double pc = real("p_c");
  const double eps = real("eps");
  if (!(pc > 0.0 && pc < 1.0)) fail("p_c", "reference p_c must lie in (0, 1)");
  if (!(eps >= 0.0 && eps <= 1.0)) fail("eps", "eps must lie in [0, 1]");
  return std::min(1.0, pc + eps);
}

ReplicaRange ExperimentConfig::replicas() const {
  const auto n = unsigned_integer("replicas");
  if (n == 0) fail("replicas", "replicas must be >= 1");
  return ReplicaRange{unsigned_integer("seed"), unsigned_integer("first_replica"), n};
}

ProxyRule ExperimentConfig::proxy() const {
  try {
    return ProxyRule::parse(raw("proxy"));
  } catch (const ConfigError& e) {
    fail("proxy", e.what());
  }
}

RadiusConvention ExperimentConfig::radius() const {
  const auto& v = raw("radius");
  if (v == "half_diameter") return RadiusConvention::half_diameter;
  if (v == "diameter") return RadiusConvention::diameter;
  fail("radius", "expected half_diameter or diameter");
}

WitnessRule ExperimentConfig::witness() const {
  try {
    return parse_witness(raw("witness"));
  } catch (const ConfigError& e) {
    fail("witness", e.what());
  }
}

EventKind ExperimentConfig::event() const {
  const auto& v = raw("event");
  if (v == "A") return EventKind::A;
  if (v == "E") return EventKind::E;
  if (v == "B" || v == "B_witnessed") return EventKind::B_witnessed;
  if (v == "B_exhaustive") return EventKind::B_exhaustive;
  fail("event", "expected A, E, B_witnessed or B_exhaustive");
}

ArmGeometry ExperimentConfig::geometry() const {
  const auto& v = raw("geometry");
  if (v == "box") return ArmGeometry::box;
  if (v == "chain") return ArmGeometry::chain;
  fail("geometry", "expected box or chain");
}

std::string ExperimentConfig::resolved_text() const {
  std::string out;
  for (const auto& [k, e] : entries_) out += k + " = " + e.value + "\n";
  return out;
}

}  // namespace sdp::app
