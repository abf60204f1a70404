#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "csi/diagram.hpp"
#include "csi/vec3.hpp"

namespace csi {

// One closed component: const + sum_h cos[h-1] cos(h t) + sin[h-1] sin(h t).
struct FourierComponent {
  Vec3 constant{0, 0, 0};
  std::vector<Vec3> cos;
  std::vector<Vec3> sin;

  int harmonics() const { return static_cast<int>(std::max(cos.size(), sin.size())); }
  Vec3 eval(double t) const;
  Vec3 derivative(double t) const;
  Vec3 second_derivative(double t) const;
};

class LinkCurve {
 public:
  LinkCurve() = default;
  explicit LinkCurve(std::vector<FourierComponent> components, std::string name = "");

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(components_.size()); }
  const FourierComponent& component(int m) const { return components_.at(m); }
  // Circles named m1..mk (S1 for a knot), matching SupportModel::circles.
  SupportModel support() const { return SupportModel::circles(size()); }

  Vec3 eval(int m, double t) const { return components_.at(m).eval(t); }
  Vec3 derivative(int m, double t) const { return components_.at(m).derivative(t); }
  // Unit tangent; throws StructureError where the derivative vanishes.
  Vec3 tangent(int m, double t) const;
  // Largest distance between sampled points over all components.
  double diameter() const { return diameter_; }
  Vec3 centroid() const { return centroid_; }

 private:
  std::vector<FourierComponent> components_;
  std::string name_;
  double diameter_ = 0;
  Vec3 centroid_{0, 0, 0};
};

// {"components":[{"const":[x,y,z],"cos":[[..],..],"sin":[[..],..]}, ...]}
LinkCurve parse_curve_json(const std::string& text, const std::string& name = "");
std::string curve_to_json(const LinkCurve& c);
// A catalog name or a path to a curve file.
LinkCurve load_curve(const std::string& name_or_path);

std::vector<std::string> catalog_names();
// Throws InputError for unknown names.
LinkCurve catalog(const std::string& name);

struct EmbeddingReport {
  bool ok = true;
  int samples = 0;
  double delta = 0;
  double eta = 0;
  double min_speed = 0;
  double min_self_distance = 0;   // same component, separation above delta
  double min_cross_distance = 0;  // distinct components (infinite for knots)
  // Worst pair found.
  int comp_a = 0, comp_b = 0;
  double t_a = 0, t_b = 0;
  std::string message;
};

inline constexpr int kDefaultValidationSamples = 4096;
inline constexpr double kDefaultValidationDelta = 0.05;
inline constexpr double kDefaultValidationEta = 1e-3;

EmbeddingReport validate_embedding(const LinkCurve& c, int samples = kDefaultValidationSamples,
                                   double delta = kDefaultValidationDelta, double eta = kDefaultValidationEta);
// Throws EmbeddingError with the witness pair when validation fails.
void require_embedding(const LinkCurve& c, int samples = kDefaultValidationSamples,
                       double delta = kDefaultValidationDelta, double eta = kDefaultValidationEta);

}  // namespace csi
