#include "report_json.hpp"

namespace sdp::app {

Json to_json(const Site& s) { return Json(s.coords); }

Json to_json(const Estimate& e) {
  return Json{{"mean", e.mean},
              {"successes", e.successes},
              {"replicas", e.replicas},
              {"ci_low", e.ci_low},
              {"ci_high", e.ci_high},
              {"seed", e.experiment_seed},
              {"first_replica", e.first_replica},
              {"last_replica", e.last_replica}};
}

Json to_json(const EventReport& r) {
  Json j{{"event", event_name(r.kind)},
         {"x", to_json(r.x)},
         {"ell", r.ell},
         {"L", r.L},
         {"M", r.M},
         {"outcome", r.outcome}};
  if (r.kind == EventKind::A) {
    j["count"] = r.count;
  } else {
    j["failed_clause"] = r.failed_clause;
    j["qualifying_clusters"] = r.qualifying_clusters;
  }
  if (r.kind == EventKind::B_witnessed) j["witness_size"] = r.count;
  if (r.kind == EventKind::B_exhaustive) {
    j["subsets_checked"] = r.subsets_checked;
    Json fs = Json::array();
    for (const auto& s : r.failing_set) fs.push_back(to_json(s));
    j["failing_set"] = fs;
  }
  return j;
}

Json to_json(const CoarsePercolationReport& r) {
  Json path = Json::array();
  for (const auto& [i, j] : r.chain_path) path.push_back(Json::array({i, j}));
  return Json{{"left_right_crossing", r.left_right_crossing},
              {"largest_fraction", r.largest_fraction},
              {"good_sites", r.good_sites},
              {"components", r.components},
              {"chain_path", path},
              {"chain_links_checked", r.chain_links_checked},
              {"chain_links_intersecting", r.chain_links_intersecting}};
}

Json to_json(const PowerFit& f) {
  return Json{{"slope", f.slope},
              {"slope_stderr", f.slope_stderr},
              {"intercept", f.intercept},
              {"points_used", f.points_used},
              {"points_dropped", f.points_dropped}};
}

Json to_json(const UnionBound& b) {
  return Json{{"value", b.value}, {"log_value", b.log_value}, {"min_L", b.min_L}};
}

Json to_json(const Lemma1Report& r) {
  return Json{{"left", to_json(r.left)},
              {"right", r.right},
              {"sigma_left", r.sigma_left},
              {"sigma_right", r.sigma_right},
              {"sigma_combined", r.sigma_combined},
              {"mean_count", r.mean_count},
              {"box_sites", r.box_sites},
              {"holds", r.holds}};
}

}  // namespace sdp::app
