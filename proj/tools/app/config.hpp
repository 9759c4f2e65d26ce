#pragma once

// Flat experiment configuration: `key = value` lines with # comments, then
// `--set key=value` overrides. Every value remembers where it came from so
// errors can point at a line.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdp/clustering.hpp"
#include "sdp/edge_field.hpp"
#include "sdp/estimators.hpp"
#include "sdp/process.hpp"
#include "sdp/renorm.hpp"

namespace sdp::app {

struct Entry {
  std::string value;
  std::string origin;  // "default", "path:line" or "--set"
};

class ExperimentConfig {
 public:
  ExperimentConfig();

  // Applies a config file; unknown keys and malformed lines are errors.
  void load_file(const std::string& path);
  void load_text(const std::string& text, const std::string& name);
  // "key=value".
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value, const std::string& origin);

  const std::map<std::string, Entry>& entries() const { return entries_; }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;

  std::int64_t integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  double real(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;
  std::vector<std::int64_t> integer_list(const std::string& key) const;

  // Typed views; each validates the fields it reads.
  int dim() const;
  Probability probability(const std::string& key) const;
  double q() const;  // min(1, p_c + eps)
  ReplicaRange replicas() const;
  ProxyRule proxy() const;
  RadiusConvention radius() const;
  WitnessRule witness() const;
  EventKind event() const;
  ArmGeometry geometry() const;

  // "key = value" lines in key order.
  std::string resolved_text() const;

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::map<std::string, Entry> entries_;
};

// Keys accepted in a config file, with their defaults.
const std::map<std::string, std::string>& default_values();

}  // namespace sdp::app
