#pragma once

#include <json.hpp>

#include "sdp/bounds.hpp"
#include "sdp/estimators.hpp"
#include "sdp/renorm.hpp"

namespace sdp::app {

using Json = nlohmann::ordered_json;

Json to_json(const Site& s);
Json to_json(const Estimate& e);
Json to_json(const EventReport& r);
Json to_json(const CoarsePercolationReport& r);
Json to_json(const PowerFit& f);
Json to_json(const UnionBound& b);
Json to_json(const Lemma1Report& r);

}  // namespace sdp::app
