#pragma once

#include <vector>

#include "csi/curve.hpp"

namespace csi {

// A crossing of the planar projection of a polygonal approximation; the
// over strand is the one closer to the viewer placed far along `direction`.
struct Crossing {
  int over_comp = 0;
  double over_t = 0;
  int under_comp = 0;
  double under_t = 0;
  int sign = 0;  // right-handed crossings are +1
};

struct Projection {
  Vec3 direction{0, 0, 1};
  int samples = 0;
  std::vector<Crossing> crossings;
};

// A fixed direction that is generic for the catalog curves.
Vec3 default_projection_direction();

Projection project(const LinkCurve& c, int samples_per_component = 2048,
                   const Vec3& direction = default_projection_direction());

// Half the signed count of crossings between two distinct components.
int linking_number_by_crossings(const Projection& p, int a, int b);
// Signed count of self crossings of one component (diagram writhe).
int diagram_writhe(const Projection& p, int m);

// Passages through crossings along one component in parameter order: each
// crossing of the component with itself is met twice, once over and once
// under.
struct GaussPassage {
  int crossing = 0;  // index into Projection::crossings
  bool over = false;
  int sign = 0;
  double t = 0;
};
std::vector<GaussPassage> gauss_code(const Projection& p, int m);

}  // namespace csi
