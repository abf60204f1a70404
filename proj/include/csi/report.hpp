#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "csi/anomaly.hpp"
#include "csi/curve.hpp"
#include "csi/invariants.hpp"
#include "csi/labelled.hpp"
#include "csi/strata.hpp"

namespace csi {

using Json = nlohmann::ordered_json;

std::string key_string(const CanonicalKey& key);

// Estimates serialize without their wall time; the report carries one total.
Json to_json(const MCEstimate& e);
Json to_json(const MCOptions& o);
Json to_json(const Uncertain& u);
Json to_json(const Series& s);
Json to_json(const DiagramIntegral& d);
Json to_json(const LinkingResult& r);
Json to_json(const V2Result& r);
Json to_json(const LatticeReport& r);
Json to_json(const AlphaResult& r);
Json to_json(const SymmetryReport& r);
Json to_json(const RegionVerdict& v);
Json to_json(const DiscIntegral& d);
Json to_json(const FramingRow& r);
Json to_json(const GluingReport& r);
Json to_json(const FaceLabel& f);
Json to_json(const EmbeddingReport& r);

// One CLI run: the resolved configuration needed to replay it, the result,
// and the wall time (the only field that may differ between replays).
struct Report {
  std::string command;
  Json config = Json::object();
  Json result = Json::object();
  double wall_seconds = 0;
};

std::string render_json(const Report& r);
// "path = value" lines, one per leaf, in document order.
std::string render_text(const Report& r);

}  // namespace csi
