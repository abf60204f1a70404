#include "csi/curve.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>

#include "csi/errors.hpp"

namespace csi {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Vec3 FourierComponent::eval(double t) const {
  Vec3 p = constant;
  for (size_t h = 0; h < cos.size(); ++h) p += std::cos((h + 1) * t) * cos[h];
  for (size_t h = 0; h < sin.size(); ++h) p += std::sin((h + 1) * t) * sin[h];
  return p;
}

Vec3 FourierComponent::derivative(double t) const {
  Vec3 d{0, 0, 0};
  for (size_t h = 0; h < cos.size(); ++h) d += (-(h + 1.0) * std::sin((h + 1) * t)) * cos[h];
  for (size_t h = 0; h < sin.size(); ++h) d += ((h + 1.0) * std::cos((h + 1) * t)) * sin[h];
  return d;
}

Vec3 FourierComponent::second_derivative(double t) const {
  Vec3 d{0, 0, 0};
  for (size_t h = 0; h < cos.size(); ++h) d += (-(h + 1.0) * (h + 1.0) * std::cos((h + 1) * t)) * cos[h];
  for (size_t h = 0; h < sin.size(); ++h) d += (-(h + 1.0) * (h + 1.0) * std::sin((h + 1) * t)) * sin[h];
  return d;
}

LinkCurve::LinkCurve(std::vector<FourierComponent> components, std::string name)
    : components_(std::move(components)), name_(std::move(name)) {
  if (components_.empty()) throw InputError("curve needs at least one component");
  constexpr int kProbe = 256;
  std::vector<Vec3> pts;
  Vec3 sum{0, 0, 0};
  for (const auto& c : components_)
    for (int i = 0; i < kProbe; ++i) {
      pts.push_back(c.eval(kTwoPi * i / kProbe));
      sum += pts.back();
    }
  centroid_ = (1.0 / pts.size()) * sum;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) diameter_ = std::max(diameter_, norm(pts[i] - pts[j]));
}

Vec3 LinkCurve::tangent(int m, double t) const {
  Vec3 d = derivative(m, t);
  double s = norm(d);
  if (!(s > 1e-12 * std::max(1.0, diameter_)))
    throw StructureError("curve is not immersed at component " + std::to_string(m) + ", t = " + std::to_string(t));
  return (1.0 / s) * d;
}

namespace {

Vec3 read_vec(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw InputError(what + " must be a triple of numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw InputError(what + " must be a triple of numbers");
    v[i] = j[i].get<double>();
    if (!std::isfinite(v[i])) throw InputError(what + " has a non-finite entry");
  }
  return v;
}

std::vector<Vec3> read_series(const nlohmann::json& c, const char* key) {
  std::vector<Vec3> out;
  if (!c.contains(key)) return out;
  const auto& arr = c.at(key);
  if (!arr.is_array()) throw InputError(std::string("\"") + key + "\" must be an array of triples");
  for (size_t h = 0; h < arr.size(); ++h) out.push_back(read_vec(arr[h], std::string(key) + "[" + std::to_string(h) + "]"));
  return out;
}

nlohmann::json write_vec(const Vec3& v) { return nlohmann::json::array({v[0], v[1], v[2]}); }

}  // namespace

LinkCurve parse_curve_json(const std::string& text, const std::string& name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("curve file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("components") || !doc["components"].is_array())
    throw InputError("curve file needs a \"components\" array");
  std::vector<FourierComponent> comps;
  for (const auto& c : doc["components"]) {
    if (!c.is_object()) throw InputError("each component must be an object");
    FourierComponent f;
    if (c.contains("const")) f.constant = read_vec(c["const"], "const");
    f.cos = read_series(c, "cos");
    f.sin = read_series(c, "sin");
    if (f.harmonics() == 0) throw InputError("component without harmonics is a point");
    comps.push_back(std::move(f));
  }
  if (comps.empty()) throw InputError("curve file has no components");
  return LinkCurve(std::move(comps), name);
}

std::string curve_to_json(const LinkCurve& c) {
  nlohmann::json doc;
  doc["components"] = nlohmann::json::array();
  for (int m = 0; m < c.size(); ++m) {
    const auto& f = c.component(m);
    nlohmann::json j;
    j["const"] = write_vec(f.constant);
    j["cos"] = nlohmann::json::array();
    j["sin"] = nlohmann::json::array();
    for (const auto& v : f.cos) j["cos"].push_back(write_vec(v));
    for (const auto& v : f.sin) j["sin"].push_back(write_vec(v));
    doc["components"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

namespace {

// Coefficients per harmonic; missing harmonics are zero.
FourierComponent component(Vec3 constant, std::vector<Vec3> cos, std::vector<Vec3> sin) {
  return {constant, std::move(cos), std::move(sin)};
}

const std::map<std::string, std::vector<FourierComponent>>& catalog_table() {
  static const std::map<std::string, std::vector<FourierComponent>> table = {
      // (cos t, sin t, 0)
      {"unknot-round", {component({0, 0, 0}, {{1, 0, 0}}, {{0, 1, 0}})}},
      // round circle with an in-plane wobble and a small out-of-plane bend
      {"unknot-planar-perturbed",
       {component({0, 0, 0}, {{1, 0, 0}, {0.15, 0, 0}, {0, 0, 0.1}}, {{0, 1, 0}, {0, -0.15, 0.25}})}},
      // (2 + cos 3t)(cos 2t, sin 2t) + (0, 0, sin 3t), the (2,3) torus knot
      {"trefoil",
       {component({0, 0, 0}, {{0.5, 0, 0}, {2, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0.5, 0, 0}},
                  {{0, -0.5, 0}, {0, 2, 0}, {0, 0, 1}, {0, 0, 0}, {0, 0.5, 0}})}},
      // the trefoil with the z amplitude raised to 3.727, where I(theta) = -4
      // to about 1e-4
      {"trefoil-framed",
       {component({0, 0, 0}, {{0.5, 0, 0}, {2, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0.5, 0, 0}},
                  {{0, -0.5, 0}, {0, 2, 0}, {0, 0, 3.727}, {0, 0, 0}, {0, 0.5, 0}})}},
      // (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t)
      {"trefoil-alt",
       {component({0, 0, 0}, {{0, 1, 0}, {0, -2, 0}}, {{1, 0, 0}, {2, 0, 0}, {0, 0, -1}})}},
      // (2 + cos 2t)(cos 3t, sin 3t) + (0, 0, sin 4t)
      {"figure8",
       {component({0, 0, 0}, {{0.5, 0, 0}, {0, 0, 0}, {2, 0, 0}, {0, 0, 0}, {0.5, 0, 0}},
                  {{0, 0.5, 0}, {0, 0, 0}, {0, 2, 0}, {0, 0, 1}, {0, 0.5, 0}})}},
      // (cos t, sin t, 0) and (1 + cos t, 0, -sin t), linking number +1
      {"hopf-link",
       {component({0, 0, 0}, {{1, 0, 0}}, {{0, 1, 0}}), component({1, 0, 0}, {{1, 0, 0}}, {{0, 0, -1}})}},
      // (cos t, sin t, 0) and (3 + cos t, sin t, 0)
      {"unlink-2",
       {component({0, 0, 0}, {{1, 0, 0}}, {{0, 1, 0}}), component({3, 0, 0}, {{1, 0, 0}}, {{0, 1, 0}})}},
  };
  return table;
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& [name, comps] : catalog_table()) out.push_back(name);
  return out;
}

LinkCurve catalog(const std::string& name) {
  const auto& table = catalog_table();
  auto it = table.find(name);
  if (it == table.end()) {
    std::string known;
    for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
    throw InputError("unknown catalog curve '" + name + "' (known: " + known + ")");
  }
  return LinkCurve(it->second, name);
}

LinkCurve load_curve(const std::string& name_or_path) {
  const auto& table = catalog_table();
  if (table.count(name_or_path)) return catalog(name_or_path);
  if (!std::filesystem::exists(name_or_path))
    throw InputError("'" + name_or_path + "' is neither a catalog curve nor a readable file");
  return parse_curve_json(read_file(name_or_path), std::filesystem::path(name_or_path).stem().string());
}

EmbeddingReport validate_embedding(const LinkCurve& c, int samples, double delta, double eta) {
  if (samples < 8) throw InputError("validation needs at least 8 samples per component");
  EmbeddingReport r;
  r.samples = samples;
  r.delta = delta;
  r.eta = eta;
  r.min_speed = std::numeric_limits<double>::infinity();
  r.min_self_distance = std::numeric_limits<double>::infinity();
  r.min_cross_distance = std::numeric_limits<double>::infinity();

  std::vector<std::vector<Vec3>> pts(c.size());
  const double step = kTwoPi / samples;
  for (int m = 0; m < c.size(); ++m)
    for (int i = 0; i < samples; ++i) {
      double t = i * step;
      pts[m].push_back(c.eval(m, t));
      double s = norm(c.derivative(m, t));
      if (s < r.min_speed) r.min_speed = s;
    }

  double worst = std::numeric_limits<double>::infinity();
  auto consider = [&](int a, int i, int b, int j, double d) {
    if (d < worst) {
      worst = d;
      r.comp_a = a;
      r.t_a = i * step;
      r.comp_b = b;
      r.t_b = j * step;
    }
  };
  for (int m = 0; m < c.size(); ++m)
    for (int i = 0; i < samples; ++i)
      for (int j = i + 1; j < samples; ++j) {
        double sep = (j - i) * step;
        if (std::min(sep, kTwoPi - sep) <= delta) continue;
        double d = norm(pts[m][i] - pts[m][j]);
        if (d < r.min_self_distance) r.min_self_distance = d;
        consider(m, i, m, j, d);
      }
  for (int a = 0; a < c.size(); ++a)
    for (int b = a + 1; b < c.size(); ++b)
      for (int i = 0; i < samples; ++i)
        for (int j = 0; j < samples; ++j) {
          double d = norm(pts[a][i] - pts[b][j]);
          if (d < r.min_cross_distance) r.min_cross_distance = d;
          consider(a, i, b, j, d);
        }

  if (!(r.min_speed > 1e-9 * std::max(1.0, c.diameter()))) {
    r.ok = false;
    r.message = "derivative vanishes (min speed " + std::to_string(r.min_speed) + ")";
  } else if (!(worst > eta)) {
    r.ok = false;
    r.message = "points closer than eta: component " + std::to_string(r.comp_a) + " t=" + std::to_string(r.t_a) +
                " and component " + std::to_string(r.comp_b) + " t=" + std::to_string(r.t_b) +
                " at distance " + std::to_string(worst);
  }
  return r;
}

void require_embedding(const LinkCurve& c, int samples, double delta, double eta) {
  auto r = validate_embedding(c, samples, delta, eta);
  if (!r.ok) throw EmbeddingError(r.message, r.comp_a, r.t_a, r.comp_b, r.t_b);
}

}  // namespace csi
