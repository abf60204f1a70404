#include "csi/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csi/combinatorics.hpp"
#include "csi/errors.hpp"

namespace csi {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kFourPi = 4 * kPi;
constexpr int kBatch = 64;
// W(gamma) lives at unit scale (first leg at 0, last at 1).
constexpr double kWScale = 0.5;
constexpr double kWCollision = 1e-6;

Vec3 uniform_sphere(Stream& rng) {
  double z = 2 * rng.uniform() - 1;
  double phi = 2 * kPi * rng.uniform();
  double rho = std::sqrt(std::max(0.0, 1 - z * z));
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

bool connected(const Diagram& d) {
  if (d.vertex_count() == 0) return false;
  std::vector<bool> seen(d.vertex_count(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : d.neighbors(v))
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == d.vertex_count();
}

// Slice columns in C order: C column index -> (vertex, coordinate); the
// coordinate is -1 for a free leg.
struct SliceColumn {
  int column;
  int vertex;
  int axis;
};

std::vector<SliceColumn> slice_columns(const WPlan& p) {
  const IntegrandPlan& L = p.layout;
  std::vector<SliceColumn> cols;
  for (int v : p.free_legs) cols.push_back({L.univalent_column[v], v, -1});
  for (std::size_t v = 0; v < L.trivalent_columns.size(); ++v)
    if (L.univalent_column[v] < 0)
      for (int j = 0; j < 3; ++j) cols.push_back({L.trivalent_columns[v][j], static_cast<int>(v), j});
  std::sort(cols.begin(), cols.end(), [](const SliceColumn& a, const SliceColumn& b) { return a.column < b.column; });
  return cols;
}

std::vector<JacobianColumn> w_columns(const WPlan& p, const std::vector<SliceColumn>& slice, const WConfiguration& x) {
  auto [g1, g2] = sphere_frame(x.s);
  std::vector<JacobianColumn> cols(2);
  const Diagram& d = p.layout.diagram.diagram.diagram();
  for (int v : d.placements()[0]) {
    cols[0].push_back({v, x.tau[v] * g1});
    cols[1].push_back({v, x.tau[v] * g2});
  }
  for (const auto& c : slice) {
    ColumnTerm t;
    t.vertex = c.vertex;
    if (c.axis < 0) {
      t.d = x.s;
    } else {
      t.d = {0, 0, 0};
      t.d[c.axis] = 1;
    }
    cols.push_back({t});
  }
  return cols;
}

int compute_sigma(const WPlan& p) {
  // det[T, D, slice] in the coordinates of C_gamma(l_s) at a generic point.
  const IntegrandPlan& L = p.layout;
  const int dim = L.dim;
  const Diagram& d = L.diagram.diagram.diagram();
  std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
  auto at = [&](int row, int col) -> double& { return m[static_cast<std::size_t>(row) * dim + col]; };
  const Vec3 s = normalized(Vec3{0.3, -0.5, 0.8});
  const auto& legs = d.placements()[0];
  for (std::size_t i = 0; i < legs.size(); ++i) {
    int v = legs[i];
    double tau = static_cast<double>(i) / (legs.size() - 1);
    int c = L.univalent_column[v];
    at(c, 0) = L.bit[v];
    at(c, 1) = L.bit[v] * tau;
  }
  for (int v = 0; v < d.vertex_count(); ++v) {
    if (d.is_univalent(v)) continue;
    Vec3 y{0.1 * v + 0.2, -0.3 + 0.05 * v, 0.7};
    for (int j = 0; j < 3; ++j) {
      int c = L.trivalent_columns[v][j];
      at(c, 0) = s[j];
      at(c, 1) = y[j];
    }
  }
  auto slice = slice_columns(p);
  for (std::size_t k = 0; k < slice.size(); ++k) {
    const auto& sc = slice[k];
    at(sc.column, 2 + static_cast<int>(k)) = sc.axis < 0 ? L.bit[sc.vertex] : 1.0;
  }
  double det = 0;
  det_batch(dim, 1, m.data(), &det, Kernel::scalar);
  if (det == 0) throw StructureError("degenerate slice orientation");
  return det > 0 ? 1 : -1;
}

}  // namespace

OrientedDiagram line_diagram(const std::string& name) {
  if (name == "d2-tripod") return line_tripod();
  return anomaly_diagram(name);
}

WPlan make_wplan(const OrientedDiagram& od) {
  const Diagram& d = od.diagram();
  if (d.support().size() != 1 || !d.support().is_line(0))
    throw InputError("anomaly integrals need a diagram on one line");
  if (!connected(d)) throw InputError("anomaly integrals need a connected diagram");
  if (d.univalent_count() < 2) throw InputError("anomaly gauge needs at least two univalent vertices");
  WPlan p;
  p.layout = plan_layout(LabelledDiagram::standard(od));
  p.degree = degree(d);
  const auto& legs = d.placements()[0];
  p.first = legs.front();
  p.last = legs.back();
  p.free_legs.assign(legs.begin() + 1, legs.end() - 1);
  p.sigma = compute_sigma(p);
  return p;
}

void place_legs(const WPlan& p, WConfiguration& x) {
  const Diagram& d = p.layout.diagram.diagram.diagram();
  for (int v : d.placements()[0]) x.point[v] = x.tau[v] * x.s;
}

namespace {

// Integrand value together with the Hadamard bound of its determinant.
std::pair<double, double> w_evaluate(const WPlan& p, const WConfiguration& x) {
  const int dim = p.layout.dim;
  std::vector<double> m(static_cast<std::size_t>(dim) * dim);
  if (!psi_jacobian(p.layout.rows, x.point, w_columns(p, slice_columns(p), x), 0.0, m.data(), 1))
    throw PreconditionError("configuration collapses an edge");
  double bound = 1;
  for (int j = 0; j < dim; ++j) {
    double c = 0;
    for (int i = 0; i < dim; ++i) c += m[static_cast<std::size_t>(i) * dim + j] * m[static_cast<std::size_t>(i) * dim + j];
    bound *= std::sqrt(c);
  }
  double det = 0;
  det_batch(dim, 1, m.data(), &det, Kernel::scalar);
  const double norm = std::pow(kFourPi, dim / 2);
  return {p.sigma * det / norm, bound / norm};
}

// |b - sign a| relative to the larger value, with values below 1e-9 of the
// Hadamard bound treated as zero.
double relation_mismatch(std::pair<double, double> a, std::pair<double, double> b, int sign) {
  double scale = std::max({std::fabs(a.first), std::fabs(b.first), 1e-9 * std::max(a.second, b.second)});
  if (scale == 0) return 0;
  return std::fabs(b.first - sign * a.first) / scale;
}

}  // namespace

double w_integrand(const WPlan& p, const WConfiguration& x) { return w_evaluate(p, x).first; }

std::vector<Vec3> edge_directions(const WPlan& p, const WConfiguration& x) {
  std::vector<Vec3> out;
  for (auto [tail, head] : p.layout.rows) out.push_back(normalized(x.point[head] - x.point[tail]));
  return out;
}

double sample_w(const WPlan& p, Stream& rng, WConfiguration& x) {
  const Diagram& d = p.layout.diagram.diagram.diagram();
  const int V = d.vertex_count();
  x.tau.assign(V, 0.0);
  x.point.assign(V, Vec3{0, 0, 0});
  x.s = uniform_sphere(rng);
  double dens = 1 / kFourPi;
  const int free = static_cast<int>(p.free_legs.size());
  std::vector<double> taus(free);
  for (auto& t : taus) t = rng.uniform();
  std::sort(taus.begin(), taus.end());
  for (int i = 2; i <= free; ++i) dens *= i;
  x.tau[p.first] = 0;
  x.tau[p.last] = 1;
  for (int i = 0; i < free; ++i) x.tau[p.free_legs[i]] = taus[i];
  place_legs(p, x);

  std::vector<int> placed(d.placements()[0].begin(), d.placements()[0].end());
  std::vector<Vec3> anchors;
  std::vector<double> scales;
  for (const auto& [t, nbrs] : p.layout.placement) {
    anchors.clear();
    scales.clear();
    for (int a : nbrs) {
      double best = kWScale;
      for (int b : placed)
        if (b != a) best = std::min(best, norm(x.point[a] - x.point[b]));
      anchors.push_back(x.point[a]);
      scales.push_back(std::max(best, kWCollision));
    }
    if (anchors.empty()) {
      anchors.push_back({0, 0, 0});
      scales.push_back(kWScale);
    }
    dens *= sample_free_point(anchors, scales, kWScale, rng, x.point[t]);
    placed.push_back(t);
  }
  return dens;
}

MCEstimate f_gamma(const OrientedDiagram& gamma, const MCOptions& opt, Kernel kernel) {
  const WPlan p = make_wplan(gamma);
  const auto slice = slice_columns(p);
  const int dim = p.layout.dim;
  const double norm_factor = std::pow(kFourPi, dim / 2);
  MCEstimate e = run_mc(opt, [&](Stream& rng, std::uint64_t count, ShardAccumulator& acc) {
    std::vector<double> mat(static_cast<std::size_t>(dim) * dim * kBatch);
    std::vector<double> det(kBatch), dens(kBatch);
    std::vector<char> ok(kBatch);
    WConfiguration x;
    for (std::uint64_t done = 0; done < count;) {
      const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kBatch, count - done));
      for (std::size_t l = 0; l < kBatch; ++l) {
        ok[l] = 0;
        if (l < n) {
          dens[l] = sample_w(p, rng, x);
          ok[l] = psi_jacobian(p.layout.rows, x.point, w_columns(p, slice, x), kWCollision, mat.data() + l, kBatch);
        }
        if (!ok[l])
          for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) mat[(static_cast<std::size_t>(i) * dim + j) * kBatch + l] = i == j;
      }
      det_batch(dim, kBatch, mat.data(), det.data(), kernel);
      for (std::size_t l = 0; l < n; ++l) {
        if (!ok[l]) {
          acc.reject();
          continue;
        }
        double w = p.sigma * det[l] / norm_factor / dens[l];
        if (!std::isfinite(w)) throw ConvergenceError("non-finite anomaly sample");
        acc.add(w);
      }
      done += n;
    }
  });
  require_finite(e, "anomaly integral");
  return e;
}

AlphaResult anomaly_alpha(int max_degree, const MCOptions& opt, Kernel kernel) {
  if (max_degree < 1 || max_degree > 3) throw CapabilityError("the anomaly is available in degrees 1 to 3");
  AlphaResult r;
  std::vector<std::string> names{"theta"};
  if (max_degree >= 2) names.push_back("tripod");
  if (max_degree >= 3) names.insert(names.end(), {"a1", "a2", "a3"});
  const SupportModel J = SupportModel::line();
  r.alpha.support = J;
  for (int d = 0; d <= max_degree; ++d) {
    SeriesPart part;
    part.degree = d;
    part.basis = reducer_for(J, d)->basis();
    part.coefficient.assign(part.basis.size(), Uncertain{});
    r.alpha.parts.push_back(part);
  }
  int source = 0;
  for (const auto& name : names) {
    AlphaTerm t;
    t.name = name;
    t.diagram = line_diagram(name);
    t.automorphisms = automorphism_count(t.diagram.diagram());
    MCOptions o = opt;
    o.seed = splitmix64(opt.seed ^ (0xa0761d6478bd642fULL * static_cast<std::uint64_t>(source + 1)));
    t.f = f_gamma(t.diagram, o, kernel);
    t.f.seed = o.seed;
    const int d = degree(t.diagram.diagram());
    auto coords = reducer_for(J, d)->coordinates(ClassVector::of(t.diagram));
    Uncertain f = Uncertain::measured(t.f.value, t.f.std_error, source);
    for (std::size_t b = 0; b < coords.size(); ++b)
      if (coords[b] != 0) r.alpha.parts[d].coefficient[b] += (coords[b].get_d() / (2.0 * t.automorphisms)) * f;
    r.terms.push_back(std::move(t));
    ++source;
  }
  return r;
}

namespace {

// Reversed diagram and the vertex map from gamma to it.
std::pair<OrientedDiagram, std::vector<int>> reverse_with_map(const OrientedDiagram& d) {
  DiagramBuilder b = DiagramBuilder::from(d);
  if (b.placements.size() != 1) throw InputError("reversal needs a single line component");
  std::reverse(b.placements[0].begin(), b.placements[0].end());
  for (int v : b.placements[0]) b.bits[v] = -b.bits[v];
  return {b.build(), b.compaction()};
}

}  // namespace

OrientedDiagram reversed_line(const OrientedDiagram& d) { return reverse_with_map(d).first; }

SymmetryReport symmetry_check_s1_even(const OrientedDiagram& gamma, int points, std::uint64_t samples,
                                      std::uint64_t seed) {
  auto [bar, map] = reverse_with_map(gamma);
  const WPlan p = make_wplan(gamma);
  const WPlan q = make_wplan(bar);
  SymmetryReport r;
  r.points = points;
  r.expected_sign = 1;
  r.integrand_sign = 1;
  Stream rng(seed, 0);
  WConfiguration x, y;
  double worst_psi = 0, worst_val = 0;
  for (int i = 0; i < points; ++i) {
    sample_w(p, rng, x);
    // Same points seen on l_{-s}, translated so that the new first leg is
    // at the origin.
    y.s = -1.0 * x.s;
    y.tau.assign(x.tau.size(), 0.0);
    y.point.assign(x.point.size(), Vec3{0, 0, 0});
    for (std::size_t v = 0; v < x.point.size(); ++v) {
      int w = map[v];
      y.point[w] = x.point[v] - x.s;
      y.tau[w] = 1 - x.tau[v];
    }
    auto a = edge_directions(p, x);
    auto b = edge_directions(q, y);
    for (std::size_t e = 0; e < a.size(); ++e) {
      auto [tail, head] = p.layout.rows[e];
      for (std::size_t f = 0; f < b.size(); ++f) {
        auto [u, w] = q.layout.rows[f];
        if (u == map[tail] && w == map[head]) worst_psi = std::max(worst_psi, norm(a[e] - b[f]));
        if (u == map[head] && w == map[tail]) worst_psi = std::max(worst_psi, norm(a[e] + b[f]));
      }
    }
    worst_val = std::max(worst_val, relation_mismatch(w_evaluate(p, x), w_evaluate(q, y), r.integrand_sign));
  }
  r.max_psi_mismatch = worst_psi;
  r.max_value_mismatch = worst_val;
  r.pointwise_ok = worst_psi < 1e-9 && worst_val < 1e-6;
  if (samples > 0) {
    MCOptions o;
    o.samples = samples;
    o.seed = seed;
    r.f = f_gamma(gamma, o);
    o.seed = splitmix64(seed);
    r.f_image = f_gamma(bar, o);
    double se = std::hypot(r.f.std_error, r.f_image.std_error);
    r.estimates_ok = std::fabs(r.f.value - r.f_image.value) <= 3 * se;
  }
  return r;
}

SymmetryReport symmetry_check_central(const OrientedDiagram& gamma, int points, std::uint64_t seed) {
  const WPlan p = make_wplan(gamma);
  SymmetryReport r;
  r.points = points;
  const int edges = static_cast<int>(p.layout.rows.size());
  r.expected_sign = p.degree % 2 == 0 ? 1 : -1;
  r.integrand_sign = (p.degree + edges) % 2 == 0 ? 1 : -1;
  Stream rng(seed, 0);
  WConfiguration x, y;
  double worst_psi = 0, worst_val = 0;
  for (int i = 0; i < points; ++i) {
    sample_w(p, rng, x);
    y = x;
    y.s = -1.0 * x.s;
    for (auto& pt : y.point) pt = -1.0 * pt;
    auto a = edge_directions(p, x);
    auto b = edge_directions(p, y);
    for (std::size_t e = 0; e < a.size(); ++e) worst_psi = std::max(worst_psi, norm(a[e] + b[e]));
    worst_val = std::max(worst_val, relation_mismatch(w_evaluate(p, x), w_evaluate(p, y), r.integrand_sign));
  }
  r.max_psi_mismatch = worst_psi;
  r.max_value_mismatch = worst_val;
  r.pointwise_ok = worst_psi == 0.0 && worst_val < 1e-9;
  return r;
}

namespace {

double angle(const Vec3& a, const Vec3& b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

Vec3 slerp(const Vec3& q, const Vec3& p, double r) {
  double th = angle(q, p);
  if (th < 1e-12) return q;
  double s = std::sin(th);
  return (std::sin((1 - r) * th) / s) * q + (std::sin(r * th) / s) * p;
}

// d/dr of slerp at r.
Vec3 slerp_dr(const Vec3& q, const Vec3& p, double r) {
  double th = angle(q, p);
  if (th < 1e-12) return {0, 0, 0};
  double s = std::sin(th);
  return (-th * std::cos((1 - r) * th) / s) * q + (th * std::cos(r * th) / s) * p;
}

double clearance(const LinkCurve& c, int m, const Vec3& q, int samples) {
  double best = kPi;
  for (int i = 0; i < samples; ++i) best = std::min(best, angle(c.tangent(m, 2 * kPi * i / samples), -1.0 * q));
  return best;
}

Vec3 mean_tangent(const LinkCurve& c, int m) {
  Vec3 sum{0, 0, 0};
  const int n = 1024;
  for (int i = 0; i < n; ++i) sum += c.tangent(m, 2 * kPi * i / n);
  return (1.0 / n) * sum;
}

}  // namespace

Vec3 default_disc_base(const LinkCurve& c, int m) {
  Vec3 mean = mean_tangent(c, m);
  std::vector<Vec3> cands{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  if (norm(mean) > 0.1) return normalized(mean);
  if (norm(mean) > 1e-9) {
    cands.push_back(normalized(mean));
    cands.push_back(-1.0 * normalized(mean));
  }
  Vec3 best = cands[0];
  double bc = -1;
  for (const auto& q : cands) {
    double cl = clearance(c, m, q, 512);
    if (cl > bc + 1e-12) {
      bc = cl;
      best = q;
    }
  }
  return best;
}

DiscIntegral disc_integral(const LinkCurve& c, int m, const Vec3& q_in, int segments, double min_clearance) {
  if (segments < 16) throw InputError("disc integral needs at least 16 segments");
  DiscIntegral r;
  r.component = m;
  r.q = normalized(q_in);
  r.segments = segments;
  r.clearance = clearance(c, m, r.q, segments);
  if (r.clearance < min_clearance)
    throw PreconditionError("tangent indicatrix passes within " + std::to_string(r.clearance) +
                            " rad of -q; choose another base point");
  const Vec3& q = r.q;
  const double h = 2 * kPi / segments;
  // Route 1: the disc as a fan of geodesic triangles (q, T_i, T_{i+1}),
  // signed solid angle by van Oosterom-Strackee.
  KahanSum fan;
  std::vector<Vec3> T(segments);
  for (int i = 0; i < segments; ++i) T[i] = c.tangent(m, i * h);
  for (int i = 0; i < segments; ++i) {
    const Vec3& a = T[i];
    const Vec3& b = T[(i + 1) % segments];
    double num = triple(q, a, b);
    double den = 1 + dot(q, a) + dot(a, b) + dot(b, q);
    fan.add(2 * std::atan2(num, den));
  }
  // The disc carries the orientation opposite to (r, theta).
  r.value = -fan.value() / kFourPi;
  // Route 2: midpoint rule for det(phi, d_r phi, d_theta phi) on the grid.
  const int nr = 64;
  KahanSum grid;
  for (int i = 0; i < segments; ++i) {
    double th = (i + 0.5) * h;
    Vec3 p = c.tangent(m, th);
    // d_theta of the unit tangent by central differences
    const double dh = 1e-5;
    Vec3 dp = (0.5 / dh) * (c.tangent(m, th + dh) - c.tangent(m, th - dh));
    for (int j = 0; j < nr; ++j) {
      double rr = (j + 0.5) / nr;
      Vec3 phi = slerp(q, p, rr);
      Vec3 dphi_dr = slerp_dr(q, p, rr);
      const double e = 1e-6;
      Vec3 dphi_dth = (0.5 / e) * (slerp(q, normalized(p + e * dp), rr) - slerp(q, normalized(p - e * dp), rr));
      grid.add(triple(phi, dphi_dr, dphi_dth));
    }
  }
  r.grid_value = -grid.value() * h / nr / kFourPi;
  return r;
}

DiscIntegral disc_integral(const LinkCurve& c, int m, int segments) {
  return disc_integral(c, m, default_disc_base(c, m), segments);
}

std::vector<FramingRow> framing_report(const LinkCurve& c, const IntegrateOptions& opt) {
  std::vector<FramingRow> rows;
  for (int m = 0; m < c.size(); ++m) {
    FramingRow row;
    row.component = m;
    IntegrateOptions o = opt;
    o.mc.seed = splitmix64(opt.mc.seed + static_cast<std::uint64_t>(m));
    row.self_linking = self_linking(c, m, o);
    row.quadrature = writhe_quadrature(c, m, 512);
    row.disc = disc_integral(c, m);
    row.framing = row.self_linking.value + 2 * row.disc.value;
    row.nearest = std::lround(row.framing);
    row.residual = std::fabs(row.framing - row.nearest);
    rows.push_back(row);
  }
  return rows;
}

int orientation_sign(const Vec3& a, const Vec3& b, const Vec3& c) {
  double d = triple(a, b, c);
  return d > 0 ? 1 : d < 0 ? -1 : 0;
}

bool is_square(const Vec3& e1, const Vec3& e2, const Vec3& e3, const Vec3& e4) {
  int a = orientation_sign(e1, e2, e3);
  return a != 0 && a == orientation_sign(e1, e2, e4) && a == orientation_sign(e1, e3, e4) &&
         a == orientation_sign(e2, e3, e4);
}

namespace {

// Inside the spherical triangle (a, b, c): -1 outside, 0 on the boundary, 1 inside.
int in_triangle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& x) {
  int o = orientation_sign(a, b, c);
  int s1 = orientation_sign(a, b, x), s2 = orientation_sign(b, c, x), s3 = orientation_sign(c, a, x);
  if (o == 0 || s1 == 0 || s2 == 0 || s3 == 0) return 0;
  return (s1 == o && s2 == o && s3 == o) ? 1 : -1;
}

// Intersection of the diagonals (p1, p3) and (p2, p4) of a square, on the
// side of its vertices.
Vec3 square_center(const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& p4) {
  Vec3 c = cross(cross(p1, p3), cross(p2, p4));
  if (dot(c, p1 + p2 + p3 + p4) < 0) c = -1.0 * c;
  return c;
}

bool any_zero(const std::array<Vec3, 5>& e) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k)
        if (orientation_sign(e[i], e[j], e[k]) == 0) return true;
  return false;
}

}  // namespace

RegionVerdict degree3_region_predicates(const std::array<Vec3, 5>& e) {
  RegionVerdict v;
  if (any_zero(e)) {
    v.region = Region::boundary;
    return v;
  }
  v.square = is_square(e[0], e[1], e[2], e[3]);
  const Vec3 m1 = -1.0 * e[0], m4 = -1.0 * e[3];
  v.square_swapped = is_square(e[1], e[2], m1, m4);
  if (v.square) {
    int t = in_triangle(square_center(e[0], e[1], e[2], e[3]), e[0], e[1], e[4]);
    if (t == 0) v.region = Region::boundary;
    if (t == 1) v.region = Region::a3;
  }
  if (v.square_swapped && v.region == Region::none) {
    int t = in_triangle(square_center(e[1], e[2], m1, m4), e[1], e[2], e[4]);
    if (t == 0) v.region = Region::boundary;
    if (t == 1) v.region = Region::a1;
  }
  return v;
}

std::array<Vec3, 5> degree3_edges(const std::string& name, const WConfiguration& x, const WPlan& p) {
  if (name != "a1" && name != "a3") throw InputError("degree-3 edge labelling exists for a1 and a3");
  const Diagram& d = p.layout.diagram.diagram.diagram();
  const auto& legs = d.placements()[0];
  int t = d.neighbors(legs[0])[0];
  int s = -1;
  for (int w : d.neighbors(t))
    if (!d.is_univalent(w)) s = w;
  std::vector<int> lt, ls;
  for (int v : legs) (d.neighbors(v)[0] == t ? lt : ls).push_back(v);
  auto dir = [&](int a, int b) { return normalized(x.point[b] - x.point[a]); };
  return {dir(t, lt[0]), dir(t, lt[1]), dir(ls[0], s), dir(ls[1], s), dir(t, s)};
}

}  // namespace csi
