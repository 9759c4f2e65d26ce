#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "report_json.hpp"
#include "sdp/bounds.hpp"
#include "sdp/errors.hpp"
#include "sdp/estimators.hpp"
#include "sdp/realize.hpp"
#include "sdp/renorm.hpp"
#include "sdp/serialize.hpp"

#ifndef SDP_VERSION
#define SDP_VERSION "0.0.0"
#endif

namespace sdp::app {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Output {
 public:
  Output(std::string dir, std::string command, const ExperimentConfig& config)
      : dir_(std::move(dir)), command_(std::move(command)), config_(config) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ExtentError("cannot create output directory " + dir_ + ": " + ec.message());
    results_.open(path("results.jsonl"), std::ios::binary);
    summary_.open(path("summary.csv"), std::ios::binary);
    if (!results_ || !summary_) throw ExtentError("cannot write into " + dir_);
    for (const auto& [k, e] : config.entries()) config_json_[k] = e.value;
  }

  std::string path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

  void record(const std::string& type, const Json& body) {
    Json j{{"tool", "sdp"}, {"version", SDP_VERSION}, {"command", command_}, {"type", type}};
    for (const auto& [k, v] : body.items()) j[k] = v;
    j["config"] = config_json_;
    results_ << j.dump() << '\n';
  }

  void csv(const std::string& line) { summary_ << line << '\n'; }

  void finish(double seconds) {
    std::ofstream resolved(path("config.resolved.txt"), std::ios::binary);
    resolved << "# sdp " << SDP_VERSION << " " << command_ << "\n" << config_.resolved_text();
    std::ofstream timing(path("timing.txt"), std::ios::binary);
    timing << "command " << command_ << "\nelapsed_seconds " << seconds << "\nthreads " << omp_get_max_threads()
           << '\n';
  }

 private:
  std::string dir_;
  std::string command_;
  const ExperimentConfig& config_;
  Json config_json_ = Json::object();
  std::ofstream results_;
  std::ofstream summary_;
};

// Runs body(i) for every i in parallel and rethrows the first exception.
template <typename F>
void parallel_for(std::uint64_t n, F body) {
  std::exception_ptr error;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical(sdp_app_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void require_extent(const ExperimentConfig& config, std::int64_t needed, const std::string& constraint) {
  const auto extent = config.integer("extent");
  if (extent < needed) {
    throw ExtentError("constraint " + constraint + " violated: extent = " + std::to_string(extent) +
                      ", need >= " + std::to_string(needed));
  }
}

std::int64_t positive(const ExperimentConfig& config, const std::string& key, std::int64_t min) {
  const auto v = config.integer(key);
  if (v < min) throw ConfigError(config.entries().at(key).origin + ": key '" + key + "' must be >= " +
                                 std::to_string(min));
  return v;
}

// ---------------------------------------------------------------------------

int cmd_one_arm(const ExperimentConfig& config, Output& out, std::ostream& log) {
  const auto p = config.probability("p");
  const auto range = config.replicas();
  const OneArmParams params{config.dim(), config.geometry()};
  const auto ns = config.integer_list("n_values");
  for (auto n : ns) {
    if (n < 0) throw ConfigError(config.entries().at("n_values").origin + ": n values must be >= 0");
  }
  out.csv("n,p,mean,ci_low,ci_high,successes,replicas");
  std::vector<std::pair<double, double>> points;
  for (auto n : ns) {
    const auto est = one_arm_estimate(p, n, range, params);
    Json body{{"n", n}, {"p", p.value()}, {"geometry", config.raw("geometry")}, {"estimate", to_json(est)}};
    if (params.geometry == ArmGeometry::chain) {
      const double s = std::pow(p.value(), static_cast<double>(n));
      body["closed_form"] = 2.0 * s - s * s;
    }
    out.record("estimate", body);
    out.csv(std::to_string(n) + "," + fmt(p.value()) + "," + fmt(est.mean) + "," + fmt(est.ci_low) + "," +
            fmt(est.ci_high) + "," + std::to_string(est.successes) + "," + std::to_string(est.replicas));
    log << "n=" << n << " estimate=" << est.mean << " [" << est.ci_low << ", " << est.ci_high << "]\n";
    if (n > 0) points.emplace_back(static_cast<double>(n), est.mean);
  }
  try {
    const auto fit = exponent_fit(points);
    out.record("fit", Json{{"status", "ok"}, {"fit", to_json(fit)}});
    log << "slope=" << fit.slope << " +- " << fit.slope_stderr << "\n";
  } catch (const ConfigError& e) {
    out.record("fit", Json{{"status", "unavailable"}, {"reason", e.what()}});
    log << "fit unavailable: " << e.what() << "\n";
  }
  return kExitOk;
}

int cmd_sdp(const ExperimentConfig& config, Output& out, std::ostream& log) {
  const int d = config.dim();
  const auto extent = positive(config, "extent", 1);
  const Region region = Region::box(Site::origin(d), extent);
  const auto p = config.probability("p");
  const auto eps = config.probability("eps");
  const auto rule = config.proxy();
  const auto range = config.replicas();
  out.csv("replica,omega_p,omega_tilde_p,omega_prime_eps,omega_tilde_p_eps,file");
  for (std::uint64_t i = 0; i < range.count; ++i) {
    const auto key = range.key(i);
    const auto triple = build_triple(key, region, p, eps, rule);
    const auto bytes = serialize(triple);
    const std::string name = "triple_" + std::to_string(key.replica_index) + ".sdpt";
    write_file(out.path(name), bytes);
    Json body{{"replica", key.replica_index},
              {"region", region.describe()},
              {"edges", region.edge_count()},
              {"open", Json{{"omega_p", triple.omega_p.open_count()},
                            {"omega_tilde_p", triple.omega_tilde_p.open_count()},
                            {"omega_prime_eps", triple.omega_prime_eps.open_count()},
                            {"omega_tilde_p_eps", triple.omega_tilde_p_eps.open_count()}}},
              {"file", name},
              {"bytes", bytes.size()}};
    out.record("triple", body);
    out.csv(std::to_string(key.replica_index) + "," + std::to_string(triple.omega_p.open_count()) + "," +
            std::to_string(triple.omega_tilde_p.open_count()) + "," +
            std::to_string(triple.omega_prime_eps.open_count()) + "," +
            std::to_string(triple.omega_tilde_p_eps.open_count()) + "," + name);
  }
  log << "wrote " << range.count << " triples on " << region.describe() << "\n";
  return kExitOk;
}

CoarseParams coarse_params(const ExperimentConfig& config) {
  CoarseParams cp;
  cp.dim = config.dim();
  cp.p = config.probability("p");
  cp.q = Probability(config.q());
  cp.eps = config.real("eps");
  cp.p_c_input = config.real("p_c");
  cp.ell = positive(config, "ell", 0);
  cp.L = positive(config, "L", 1);
  cp.M = positive(config, "M", 0);
  cp.event.radius = config.radius();
  cp.witness = config.witness();
  cp.proxy = config.proxy();
  const auto extent = config.integer("extent");
  require_extent(config, 4 * cp.L, "extent >= 4L");
  if (config.raw("half_width") == "auto") {
    cp.half_width = (extent - 4 * cp.L) / cp.L;
  } else {
    cp.half_width = positive(config, "half_width", 0);
    require_extent(config, (cp.half_width + 4) * cp.L, "extent >= (half_width + 4) L");
  }
  cp.validate();
  return cp;
}

int cmd_renorm(const ExperimentConfig& config, Output& out, std::ostream& log) {
  const auto cp = coarse_params(config);
  const auto range = config.replicas();
  out.csv("replica,density,a_density,b_density,crossing,largest_fraction,components,links_checked,links_intersecting");
  Tally crossings;
  double density_sum = 0.0;
  for (std::uint64_t i = 0; i < range.count; ++i) {
    const auto key = range.key(i);
    CoarseSample sample;
    const auto field = coarse_good_field(key, cp, &sample);
    const auto rep = coarse_percolation_check(field, &sample);
    if (i == 0) {
      std::ofstream grid(out.path("coarse_field.txt"), std::ios::binary);
      grid << field.to_text();
    }
    crossings.add(rep.left_right_crossing);
    density_sum += field.density();
    out.record("field", Json{{"replica", key.replica_index},
                             {"half_width", cp.half_width},
                             {"density", field.density()},
                             {"a_density", field.a_density()},
                             {"b_density", field.b_density()},
                             {"dependency_distance", field.dependency_distance()},
                             {"percolation", to_json(rep)}});
    out.csv(std::to_string(key.replica_index) + "," + fmt(field.density()) + "," + fmt(field.a_density()) + "," +
            fmt(field.b_density()) + "," + (rep.left_right_crossing ? "1" : "0") + "," + fmt(rep.largest_fraction) +
            "," + std::to_string(rep.components) + "," + std::to_string(rep.chain_links_checked) + "," +
            std::to_string(rep.chain_links_intersecting));
  }
  const auto est = make_estimate(crossings, range);
  const double mean_density = density_sum / static_cast<double>(range.count);
  out.record("summary", Json{{"mean_density", mean_density},
                             {"coarse_crossing", to_json(est)},
                             {"q", cp.q.value()},
                             {"note", "p_c is a reference input"}});
  log << "coarse grid " << cp.side() << "x" << cp.side() << ", mean good density " << mean_density
      << ", crossing frequency " << est.mean << "\n";
  return kExitOk;
}

int cmd_events(const ExperimentConfig& config, Output& out, std::ostream& log) {
  const int d = config.dim();
  const auto ell = positive(config, "ell", 0);
  const auto L = positive(config, "L", 1);
  const auto M = positive(config, "M", 0);
  const auto kind = config.event();
  const auto p = config.probability("p");
  const Probability q(config.q());
  const auto range = config.replicas();
  const EventOptions opts{config.radius()};
  const auto witness_rule = config.witness();
  const auto rule = config.proxy();
  const auto budget = config.unsigned_integer("budget");
  require_extent(config, 4 * L, "extent >= 4L");

  const auto extent = config.integer("extent");
  std::vector<std::int64_t> lo, hi;
  for (int a = 0; a < d; ++a) {
    const auto half = a < 2 ? extent : ell + L;
    lo.push_back(-half);
    hi.push_back(half);
  }
  const Region region = Region::from_bounds(lo, hi);
  const Site x = Site::origin(d);
  const Region box = slab_box(x, ell, L);

  std::vector<EventReport> reports(range.count);
  parallel_for(range.count, [&](std::uint64_t i) {
    const auto key = range.key(i);
    auto& rep = reports[i];
    switch (kind) {
      case EventKind::A:
        rep = event_A(realize_serial(key, region, p), x, ell, L, M);
        break;
      case EventKind::E:
        rep = event_E(realize_serial(key, region, q), x, ell, L, opts);
        break;
      case EventKind::B_witnessed: {
        const auto omega_p = realize_serial(key, region, p);
        const auto witness = witness_rule == WitnessRule::arm_sites ? arm_sites(omega_p, box, L)
                                                                    : infinite_cluster_proxy(omega_p, rule).sites;
        rep = event_B_witnessed(realize_serial(key, region, q), x, ell, L, witness, opts);
        break;
      }
      case EventKind::B_exhaustive: {
        ExhaustiveOptions ex;
        ex.budget = budget;
        ex.event = opts;
        rep = event_B_exhaustive(realize_serial(key, region, q), x, ell, L, M, ex);
        break;
      }
    }
  });

  Tally tally;
  for (std::uint64_t i = 0; i < range.count; ++i) {
    tally.add(reports[i].outcome);
    out.record("replica", Json{{"replica", range.key(i).replica_index}, {"report", to_json(reports[i])}});
  }
  const auto est = make_estimate(tally, range);
  const double used = kind == EventKind::A ? p.value() : q.value();
  out.record("estimate", Json{{"event", event_name(kind)}, {"probability", used}, {"estimate", to_json(est)}});
  out.csv("event,probability,mean,ci_low,ci_high,successes,replicas");
  out.csv(std::string(event_name(kind)) + "," + fmt(used) + "," + fmt(est.mean) + "," + fmt(est.ci_low) + "," +
          fmt(est.ci_high) + "," + std::to_string(est.successes) + "," + std::to_string(est.replicas));
  log << event_name(kind) << " at p=" << used << ": " << est.mean << " [" << est.ci_low << ", " << est.ci_high
      << "]\n";
  return kExitOk;
}

int cmd_bounds(const ExperimentConfig& config, Output& out, std::ostream& log) {
  BoundParams bp;
  bp.dim = config.dim();
  bp.ell = positive(config, "ell", 1);
  bp.L = positive(config, "L", 1);
  bp.M = positive(config, "M", 0);
  bp.eps = config.real("eps");
  bp.eta = config.real("eta");
  bp.p_c_input = config.real("p_c");
  bp.C = config.real("C");
  bp.c = config.real("c");
  if (bp.L < bp.ell) throw ConfigError(config.entries().at("L").origin + ": key 'L' must be >= ell");

  const auto M = markov_bound_M(bp.ell, bp.C, bp.eta, bp.dim);
  const double peierls = peierls_bound(bp.ell, bp.L);
  const auto ub = union_bound_FM(bp);
  out.record("markov_bound_M", Json{{"ell", bp.ell}, {"d", bp.dim}, {"C", bp.C}, {"eta", bp.eta}, {"M", M}});
  out.record("peierls_bound", Json{{"ell", bp.ell}, {"L", bp.L}, {"value", peierls}});
  out.record("union_bound_FM", Json{{"d", bp.dim},
                                    {"M", bp.M},
                                    {"L", bp.L},
                                    {"p_c", bp.p_c_input},
                                    {"eps", bp.eps},
                                    {"c", bp.c},
                                    {"eta", bp.eta},
                                    {"bound", to_json(ub)}});
  out.csv("quantity,value");
  out.csv("markov_bound_M," + std::to_string(M));
  out.csv("peierls_bound," + fmt(peierls));
  out.csv("union_bound_FM," + fmt(ub.value));
  out.csv("union_bound_FM_min_L," + std::to_string(ub.min_L));
  log << "markov_bound_M = " << M << "\npeierls_bound = " << fmt(peierls) << "\nunion_bound_FM = " << fmt(ub.value)
      << " (min L " << ub.min_L << ")\n";
  return kExitOk;
}

int cmd_scan(const ExperimentConfig& config, Output& out, std::ostream& log) {
  ScanParams sp;
  sp.dim = config.dim();
  sp.extent = positive(config, "extent", 1);
  sp.eps = config.real("eps");
  sp.p_c_input = config.real("p_c");
  sp.p_grid = config.real_list("p_grid");
  sp.proxy = config.proxy();
  sp.validate();
  const auto range = config.replicas();
  const auto rep = theorem2_scan(sp, range);
  out.csv("p,q,mean,ci_low,ci_high,successes,replicas");
  for (const auto& row : rep.rows) {
    out.record("row", Json{{"p", row.p}, {"q", rep.q}, {"crossing", to_json(row.crossing)}, {"report_only", true}});
    out.csv(fmt(row.p) + "," + fmt(rep.q) + "," + fmt(row.crossing.mean) + "," + fmt(row.crossing.ci_low) + "," +
            fmt(row.crossing.ci_high) + "," + std::to_string(row.crossing.successes) + "," +
            std::to_string(row.crossing.replicas));
    log << "p=" << row.p << " crossing=" << row.crossing.mean << "\n";
  }
  out.record("trend", Json{{"q", rep.q},
                           {"coupled_non_increasing", rep.coupled_non_increasing},
                           {"coupled_violations", rep.coupled_violations},
                           {"frequency_non_increasing", rep.frequency_non_increasing},
                           {"report_only", true},
                           {"note", "exploratory; p_c is a reference input"}});
  log << "coupled non-increasing: " << (rep.coupled_non_increasing ? "yes" : "no") << " (report only)\n";
  return kExitOk;
}

int cmd_selftest(const ExperimentConfig&, Output& out, std::ostream& log) {
  const auto checks = run_selftest();
  out.csv("check,pass");
  int failed = 0;
  for (const auto& c : checks) {
    out.record("check", Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    out.csv(c.name + "," + (c.pass ? "1" : "0"));
    log << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << "\n";
    if (!c.pass) ++failed;
  }
  log << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"one-arm", "sdp", "renorm", "events", "bounds", "scan", "selftest"};
  return names;
}

int run_command(const std::string& command, const ExperimentConfig& config, const std::string& out_dir,
                std::ostream& log) {
  using Fn = int (*)(const ExperimentConfig&, Output&, std::ostream&);
  Fn fn = nullptr;
  if (command == "one-arm") fn = cmd_one_arm;
  else if (command == "sdp") fn = cmd_sdp;
  else if (command == "renorm") fn = cmd_renorm;
  else if (command == "events") fn = cmd_events;
  else if (command == "bounds") fn = cmd_bounds;
  else if (command == "scan") fn = cmd_scan;
  else if (command == "selftest") fn = cmd_selftest;
  else throw ConfigError("unknown command '" + command + "'");

  const auto start = std::chrono::steady_clock::now();
  Output out(out_dir, command, config);
  const int status = fn(config, out, log);
  out.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return status;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Self-destructive bond percolation lab", "sdp"};
  app.set_version_flag("--version", SDP_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "sdp_out";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::uint64_t replicas = 0;

  static const std::map<std::string, std::string> blurbs = {
      {"one-arm", "one-arm probability sweep over n_values, with a log-log fit"},
      {"sdp", "build and store the coupled configurations per replica"},
      {"renorm", "coarse good-site field and its percolation check"},
      {"events", "Monte Carlo probability of event A, E or B"},
      {"bounds", "Markov, Peierls and union-bound calculators"},
      {"scan", "coupled subtraction scan over p_grid (report only)"},
      {"selftest", "run every built-in oracle comparison"},
  };
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, blurbs.at(name));
    sub->add_option("--config", config_path, "flat key = value config file");
    sub->add_option("--seed", seed, "experiment seed");
    sub->add_option("--replicas", replicas, "number of replicas");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--set", overrides, "override one key (key=value), repeatable");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const auto* sub = app.get_subcommands().front();
  try {
    ExperimentConfig config;
    if (!config_path.empty()) config.load_file(config_path);
    if (sub->count("--seed")) config.set("seed", std::to_string(seed), "--seed");
    if (sub->count("--replicas")) config.set("replicas", std::to_string(replicas), "--replicas");
    for (const auto& o : overrides) config.apply_override(o);
    return run_command(sub->get_name(), config, out_dir, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "sdp: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    std::cerr << "sdp: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CouplingError& e) {
    std::cerr << "sdp: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ExtentError& e) {
    std::cerr << "sdp: extent error: " << e.what() << "\n";
    return kExitExtent;
  } catch (const BudgetExceeded& e) {
    std::cerr << "sdp: resource error: " << e.what() << "\n";
    return kExitExtent;
  } catch (const std::bad_alloc&) {
    std::cerr << "sdp: resource error: out of memory\n";
    return kExitExtent;
  }
}

}  // namespace sdp::app
