#include "csi/report.hpp"

#include <cmath>
#include <sstream>

namespace csi {

namespace {

constexpr const char* kVersion = "1";

Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

const char* region_name(Region r) {
  switch (r) {
    case Region::none: return "none";
    case Region::a1: return "a1";
    case Region::a3: return "a3";
    case Region::boundary: return "boundary";
  }
  return "none";
}

void flatten(const Json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out << path << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

std::string key_string(const CanonicalKey& key) {
  std::string s;
  for (std::size_t i = 0; i < key.size(); ++i) s += (i ? "," : "") + std::to_string(key[i]);
  return s;
}

Json to_json(const MCEstimate& e) {
  return {{"value", e.value},     {"stderr", e.std_error},         {"samples", e.samples},
          {"seed", e.seed},       {"shards", e.shards},            {"rejected", e.rejected},
          {"rejection_rate", e.rejection_rate()}};
}

Json to_json(const MCOptions& o) {
  return {{"samples", o.samples}, {"seed", o.seed}, {"shards", resolve_shards(o.shards)}};
}

Json to_json(const Uncertain& u) { return {{"value", u.value}, {"stderr", u.std_error()}}; }

Json to_json(const Series& s) {
  Json parts = Json::array();
  for (const auto& p : s.parts) {
    Json basis = Json::array(), coef = Json::array();
    for (const auto& k : p.basis) basis.push_back(key_string(k));
    for (const auto& c : p.coefficient) coef.push_back(to_json(c));
    parts.push_back({{"degree", p.degree}, {"k", p.k}, {"basis", basis}, {"coefficients", coef}});
  }
  return {{"support", s.support.describe()}, {"parts", parts}};
}

Json to_json(const DiagramIntegral& d) {
  return {{"key", key_string(d.key)},
          {"diagram", format_diagram(d.diagram)},
          {"automorphisms", d.automorphisms},
          {"estimate", to_json(d.estimate)}};
}

Json to_json(const LinkingResult& r) {
  return {{"estimate", to_json(r.estimate)},
          {"nearest", r.nearest},
          {"crossing_oracle", r.crossing_oracle},
          {"warning", r.warning}};
}

Json to_json(const V2Result& r) {
  Json framing = Json::array();
  for (const auto& f : r.z.framing) framing.push_back(to_json(f));
  return {{"v2", to_json(r.value)},
          {"nearest", r.nearest},
          {"warning", r.warning},
          {"framing", framing},
          {"z", to_json(r.z.z)}};
}

Json to_json(const LatticeReport& r) {
  Json basis = Json::array(), coords = Json::array();
  for (const auto& row : r.lattice_basis) {
    Json jr = Json::array();
    for (const auto& q : row) jr.push_back(to_string(q));
    basis.push_back(jr);
  }
  for (const auto& c : r.coordinates) coords.push_back(to_json(c));
  return {{"n", r.n},
          {"k", r.k},
          {"framings", r.framings},
          {"lattice_basis", basis},
          {"coordinates", coords},
          {"nearest", r.nearest},
          {"outside", r.outside},
          {"worst_sigma", r.worst_sigma},
          {"worst_residual", r.worst_residual},
          {"ok", r.ok}};
}

Json to_json(const AlphaResult& r) {
  Json terms = Json::array();
  for (const auto& t : r.terms)
    terms.push_back({{"gamma", t.name}, {"automorphisms", t.automorphisms}, {"f", to_json(t.f)}});
  return {{"terms", terms}, {"alpha", to_json(r.alpha)}};
}

Json to_json(const SymmetryReport& r) {
  Json j = {{"points", r.points},
            {"max_psi_mismatch", r.max_psi_mismatch},
            {"max_value_mismatch", r.max_value_mismatch},
            {"expected_sign", r.expected_sign},
            {"integrand_sign", r.integrand_sign},
            {"pointwise_ok", r.pointwise_ok}};
  if (r.f.samples > 0) {
    j["f"] = to_json(r.f);
    j["f_image"] = to_json(r.f_image);
    j["estimates_ok"] = r.estimates_ok;
  }
  j["ok"] = r.ok();
  return j;
}

Json to_json(const RegionVerdict& v) {
  return {{"square", v.square}, {"square_swapped", v.square_swapped}, {"region", region_name(v.region)}};
}

Json to_json(const DiscIntegral& d) {
  return {{"component", d.component}, {"q", vec_json(d.q)},           {"clearance", d.clearance},
          {"value", d.value},         {"grid_value", d.grid_value}, {"segments", d.segments}};
}

Json to_json(const FramingRow& r) {
  return {{"component", r.component},
          {"self_linking", to_json(r.self_linking)},
          {"quadrature", r.quadrature},
          {"disc", to_json(r.disc)},
          {"framing", r.framing},
          {"nearest", r.nearest},
          {"residual", r.residual}};
}

Json to_json(const GluingReport& r) {
  return {{"n", r.n},
          {"k", r.k},
          {"stu_instances", r.stu_instances},
          {"ihx_instances", r.ihx_instances},
          {"stu_ok", r.stu_ok},
          {"ihx_ok", r.ihx_ok},
          {"failure", r.failure},
          {"ok", r.ok()}};
}

Json to_json(const FaceLabel& f) {
  Json names = Json::array();
  for (int v : f.A) names.push_back(f.diagram.name(v));
  return {{"A", names},
          {"type", face_type_name(f.type)},
          {"inner", f.inner},
          {"outer", f.outer},
          {"degenerate", f.degenerate}};
}

Json to_json(const EmbeddingReport& r) {
  Json j = {{"ok", r.ok},
            {"samples", r.samples},
            {"delta", r.delta},
            {"eta", r.eta},
            {"min_speed", r.min_speed},
            {"min_self_distance", r.min_self_distance}};
  j["min_cross_distance"] = std::isfinite(r.min_cross_distance) ? Json(r.min_cross_distance) : Json(nullptr);
  if (!r.ok) j["message"] = r.message;
  return j;
}

std::string render_json(const Report& r) {
  Json j = {{"command", r.command}, {"version", kVersion}, {"config", r.config}, {"result", r.result},
            {"wall_seconds", r.wall_seconds}};
  return j.dump(2) + "\n";
}

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << "command = " << r.command << "\n";
  flatten(r.config, "config", out);
  flatten(r.result, "result", out);
  out << "wall_seconds = " << r.wall_seconds << "\n";
  return out.str();
}

}  // namespace csi
