#include "csi/projection.hpp"

#include <algorithm>
#include <cmath>

#include "csi/errors.hpp"

namespace csi {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Segment {
  int comp;
  int index;
  double x0, y0, x1, y1;  // projected end points
  double h0, h1;          // heights along the view direction
  Vec3 dir;
};
}  // namespace

Vec3 default_projection_direction() { return normalized(Vec3{0.1931, 0.1147, 0.9744}); }

Projection project(const LinkCurve& c, int samples, const Vec3& direction) {
  if (samples < 16) throw InputError("projection needs at least 16 samples per component");
  Projection p;
  p.direction = normalized(direction);
  p.samples = samples;
  Vec3 helper = std::abs(p.direction[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = normalized(helper - dot(helper, p.direction) * p.direction);
  Vec3 e2 = cross(p.direction, e1);

  std::vector<Segment> segs;
  for (int m = 0; m < c.size(); ++m) {
    std::vector<Vec3> pts;
    for (int i = 0; i <= samples; ++i) pts.push_back(c.eval(m, kTwoPi * (i % samples) / samples));
    for (int i = 0; i < samples; ++i) {
      const Vec3 &a = pts[i], &b = pts[i + 1];
      segs.push_back({m, i, dot(a, e1), dot(a, e2), dot(b, e1), dot(b, e2), dot(a, p.direction),
                      dot(b, p.direction), b - a});
    }
  }

  for (size_t i = 0; i < segs.size(); ++i)
    for (size_t j = i + 1; j < segs.size(); ++j) {
      const Segment &s = segs[i], &r = segs[j];
      if (s.comp == r.comp) {
        int gap = std::abs(s.index - r.index);
        if (gap <= 1 || gap == samples - 1) continue;
      }
      if (std::max(s.x0, s.x1) < std::min(r.x0, r.x1) || std::max(r.x0, r.x1) < std::min(s.x0, s.x1) ||
          std::max(s.y0, s.y1) < std::min(r.y0, r.y1) || std::max(r.y0, r.y1) < std::min(s.y0, s.y1))
        continue;
      double dx = s.x1 - s.x0, dy = s.y1 - s.y0;
      double ex = r.x1 - r.x0, ey = r.y1 - r.y0;
      double den = dx * ey - dy * ex;
      if (den == 0) continue;
      double fx = r.x0 - s.x0, fy = r.y0 - s.y0;
      double u = (fx * ey - fy * ex) / den;
      double v = (fx * dy - fy * dx) / den;
      if (u < 0 || u >= 1 || v < 0 || v >= 1) continue;
      double hs = s.h0 + u * (s.h1 - s.h0);
      double hr = r.h0 + v * (r.h1 - r.h0);
      if (hs == hr) throw ConvergenceError("projection direction is not generic (touching strands)");
      const Segment& over = hs > hr ? s : r;
      const Segment& under = hs > hr ? r : s;
      double uo = hs > hr ? u : v, uu = hs > hr ? v : u;
      Crossing x;
      x.over_comp = over.comp;
      x.over_t = kTwoPi * (over.index + uo) / samples;
      x.under_comp = under.comp;
      x.under_t = kTwoPi * (under.index + uu) / samples;
      x.sign = triple(p.direction, over.dir, under.dir) > 0 ? 1 : -1;
      p.crossings.push_back(x);
    }
  return p;
}

int linking_number_by_crossings(const Projection& p, int a, int b) {
  if (a == b) throw PreconditionError("linking number needs two distinct components");
  int sum = 0;
  for (const auto& x : p.crossings)
    if ((x.over_comp == a && x.under_comp == b) || (x.over_comp == b && x.under_comp == a)) sum += x.sign;
  if (sum % 2 != 0) throw ConvergenceError("odd crossing count between two closed components");
  return sum / 2;
}

int diagram_writhe(const Projection& p, int m) {
  int sum = 0;
  for (const auto& x : p.crossings)
    if (x.over_comp == m && x.under_comp == m) sum += x.sign;
  return sum;
}

std::vector<GaussPassage> gauss_code(const Projection& p, int m) {
  std::vector<GaussPassage> out;
  for (int i = 0; i < static_cast<int>(p.crossings.size()); ++i) {
    const auto& x = p.crossings[i];
    if (x.over_comp != m || x.under_comp != m) continue;
    out.push_back({i, true, x.sign, x.over_t});
    out.push_back({i, false, x.sign, x.under_t});
  }
  std::sort(out.begin(), out.end(), [](const GaussPassage& a, const GaussPassage& b) { return a.t < b.t; });
  return out;
}

}  // namespace csi
