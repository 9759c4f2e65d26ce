#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "sdp/errors.hpp"

using namespace sdp;
using namespace sdp::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sdp_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<nlohmann::json> records(const fs::path& dir) {
  std::vector<nlohmann::json> out;
  std::istringstream in(slurp(dir / "results.jsonl"));
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sdp");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults and typed getters") {
  ExperimentConfig c;
  CHECK(c.dim() == 2);
  CHECK(c.integer("L") == 2);
  CHECK(c.q() == doctest::Approx(0.7));
  CHECK(c.real_list("p_grid") == std::vector<double>{0.51, 0.55, 0.6});
  CHECK(c.integer_list("n_values") == std::vector<std::int64_t>{1, 2, 4, 8});
  CHECK(c.raw("proxy") == "boundary");
  CHECK(c.entries().at("L").origin == "default");
  CHECK(c.geometry() == ArmGeometry::box);
}

TEST_CASE("config text with comments and overrides") {
  ExperimentConfig c;
  c.load_text("# a comment\n\nd = 3\nL = 4   # trailing\np = 0.3\n", "exp.txt");
  CHECK(c.dim() == 3);
  CHECK(c.integer("L") == 4);
  CHECK(c.entries().at("d").origin == "exp.txt:3");
  c.apply_override("L=7");
  CHECK(c.integer("L") == 7);
  CHECK(c.entries().at("L").origin.find("--set") != std::string::npos);
  const auto text = c.resolved_text();
  CHECK(text.find("L = 7") != std::string::npos);
  CHECK(text.find("d = 3") != std::string::npos);
}

TEST_CASE("config errors carry the line") {
  ExperimentConfig c;
  const auto bad_int = error_of([&] {
    c.load_text("d = 2\nL = x\n", "c.txt");
    (void)c.integer("L");
  });
  CHECK(bad_int.find("c.txt:2") != std::string::npos);
  CHECK(bad_int.find("expected an integer") != std::string::npos);

  ExperimentConfig u;
  CHECK_THROWS_AS(u.load_text("nonsense = 1\n", "u.txt"), ConfigError);
  CHECK(error_of([&] { u.load_text("nonsense = 1\n", "u.txt"); }).find("u.txt:1") != std::string::npos);
  CHECK_THROWS_AS(u.load_text("just words\n", "u.txt"), ConfigError);
  CHECK_THROWS_AS(u.apply_override("novalue"), ConfigError);
  CHECK_THROWS_AS(u.apply_override("foo=1"), ConfigError);
}

TEST_CASE("typed views validate") {
  ExperimentConfig c;
  c.apply_override("d=1");
  CHECK_THROWS(c.dim());
  c.apply_override("d=2");
  c.apply_override("p=1.5");
  CHECK_THROWS_AS(c.probability("p"), ConfigError);
  c.apply_override("proxy=sometimes");
  CHECK_THROWS_AS(c.proxy(), ConfigError);
  c.apply_override("event=Z");
  CHECK_THROWS_AS(c.event(), ConfigError);
  c.apply_override("replicas=0");
  CHECK_THROWS_AS(c.replicas(), ConfigError);
  c.apply_override("eps=0.9");
  CHECK(c.q() == 1.0);
}

TEST_CASE("bounds command writes its files") {
  const auto dir = scratch("bounds");
  ExperimentConfig c;
  c.apply_override("L=10");
  std::ostringstream log;
  CHECK(run_command("bounds", c, dir.string(), log) == kExitOk);
  for (const char* f : {"results.jsonl", "summary.csv", "config.resolved.txt", "timing.txt"}) CHECK(fs::exists(dir / f));
  CHECK(slurp(dir / "summary.csv").find("peierls_bound,0.37748736") != std::string::npos);
  const auto recs = records(dir);
  REQUIRE_FALSE(recs.empty());
  CHECK(recs.front()["tool"] == "sdp");
  CHECK(recs.front()["command"] == "bounds");
  CHECK(recs.front()["config"]["L"] == "10");
  CHECK(slurp(dir / "config.resolved.txt").find("L = 10") != std::string::npos);
}

TEST_CASE("one-arm at p = 0 gives zeros and skips the fit") {
  const auto dir = scratch("onearm0");
  ExperimentConfig c;
  c.apply_override("p=0");
  c.apply_override("replicas=20");
  std::ostringstream log;
  CHECK(run_command("one-arm", c, dir.string(), log) == kExitOk);
  int estimates = 0;
  for (const auto& r : records(dir)) {
    if (r["type"] == "estimate") {
      ++estimates;
      if (r["n"].get<int>() > 0) {
        CHECK(r["estimate"]["mean"].get<double>() == 0.0);
      }
    }
    if (r["type"] == "fit") CHECK(r["status"] == "unavailable");
  }
  CHECK(estimates == 4);
}

TEST_CASE("replay gives identical results") {
  ExperimentConfig c;
  c.apply_override("replicas=30");
  c.apply_override("extent=10");
  std::ostringstream log;
  for (const char* cmd : {"events", "scan", "sdp"}) {
    const auto a = scratch(std::string("replay_a_") + cmd);
    const auto b = scratch(std::string("replay_b_") + cmd);
    run_command(cmd, c, a.string(), log);
    run_command(cmd, c, b.string(), log);
    CHECK_MESSAGE(slurp(a / "results.jsonl") == slurp(b / "results.jsonl"), cmd);
    CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  }
}

TEST_CASE("sdp command stores triples") {
  const auto dir = scratch("triples");
  ExperimentConfig c;
  c.apply_override("replicas=2");
  c.apply_override("extent=5");
  std::ostringstream log;
  CHECK(run_command("sdp", c, dir.string(), log) == kExitOk);
  CHECK(fs::exists(dir / "triple_0.sdpt"));
  CHECK(fs::exists(dir / "triple_1.sdpt"));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  CHECK(cli({"bounds", "--out", dir.string()}) == kExitOk);
  CHECK(cli({"bounds", "--out", dir.string(), "--set", "foo=1"}) == kExitConfig);
  CHECK(cli({"renorm", "--out", dir.string(), "--set", "extent=3"}) == kExitExtent);
  CHECK(cli({"bounds", "--out", dir.string(), "--config", (dir / "missing.txt").string()}) == kExitConfig);
  CHECK(cli({"nosuchcommand"}) == kExitConfig);
  std::ofstream(dir / "c.txt") << "d = 2\nL = x\n";
  CHECK(cli({"bounds", "--out", dir.string(), "--config", (dir / "c.txt").string()}) == kExitConfig);
}

TEST_CASE("command list") {
  const auto& names = command_names();
  CHECK(names.size() == 7);
  ExperimentConfig c;
  std::ostringstream log;
  CHECK_THROWS_AS(run_command("frobnicate", c, scratch("unknown").string(), log), ConfigError);
}

}
