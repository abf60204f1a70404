#include "csi/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "csi/combinatorics.hpp"
#include "csi/errors.hpp"

namespace csi {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2 * kPi;
constexpr double kFourPi = 4 * kPi;
constexpr int kBatch = 64;

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

Vec3 uniform_direction(Stream& rng) {
  double z = 2 * rng.uniform() - 1;
  double phi = kTwoPi * rng.uniform();
  double rho = std::sqrt(std::max(0.0, 1 - z * z));
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

}  // namespace

double gauss_kernel(const LinkCurve& c, int m, double s, int m2, double t) {
  Vec3 p = c.eval(m, s), q = c.eval(m2, t);
  Vec3 d = p - q;
  double r = norm(d);
  if (!(r > 0)) throw PreconditionError("gauss kernel at coincident points");
  return triple(c.derivative(m, s), c.derivative(m2, t), d) / (kFourPi * r * r * r);
}

std::pair<Vec3, Vec3> sphere_frame(const Vec3& u) {
  Vec3 axis = std::fabs(u[2]) > 0.9 ? Vec3{1, 0, 0} : Vec3{0, 0, 1};
  Vec3 f1 = normalized(axis - dot(axis, u) * u);
  return {f1, cross(u, f1)};
}

bool psi_jacobian(const std::vector<std::pair<int, int>>& edges, const std::vector<Vec3>& pos,
                  const std::vector<JacobianColumn>& columns, double min_length, double* out, std::size_t stride) {
  const std::size_t dim = columns.size();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [tail, head] = edges[e];
    Vec3 d = pos[head] - pos[tail];
    double r = norm(d);
    if (!(r > min_length)) return false;
    Vec3 u = (1.0 / r) * d;
    auto [f1, f2] = sphere_frame(u);
    for (std::size_t j = 0; j < dim; ++j) {
      double a = 0, b = 0;
      for (const auto& term : columns[j]) {
        double s = term.vertex == head ? 1.0 : term.vertex == tail ? -1.0 : 0.0;
        if (s == 0.0) continue;
        a += s * dot(f1, term.d);
        b += s * dot(f2, term.d);
      }
      out[((2 * e) * dim + j) * stride] = a / r;
      out[((2 * e + 1) * dim + j) * stride] = b / r;
    }
  }
  return true;
}

IntegrandPlan make_plan(const LabelledDiagram& g, const LinkCurve& c) {
  const SupportModel& sup = g.diagram.diagram().support();
  if (sup.size() != c.size())
    throw InputError("diagram support has " + std::to_string(sup.size()) + " components but the curve has " +
                     std::to_string(c.size()));
  for (int m = 0; m < sup.size(); ++m)
    if (sup.is_line(m)) throw InputError("diagrams on a link need circle components");
  return plan_layout(g);
}

IntegrandPlan plan_layout(const LabelledDiagram& g) {
  const Diagram& d = g.diagram.diagram();
  if (g.visible() != d.edge_count() || static_cast<int>(g.tail.size()) != d.edge_count())
    throw StructureError("labelling does not cover the edges");

  IntegrandPlan p;
  p.diagram = g;
  const int V = d.vertex_count();
  p.dim = 2 * d.edge_count();
  p.univalent_column.assign(V, -1);
  p.trivalent_columns.assign(V, {-1, -1, -1});
  p.bit.assign(V, 1);
  p.curve_component.assign(V, -1);

  std::vector<int> order(d.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return g.label[a] < g.label[b]; });
  // Half-edge label -> column rank; with distinct labels, 2l-1 and 2l sort
  // by label then tail first.
  std::vector<int> rank_of_edge(d.edge_count());
  for (int i = 0; i < d.edge_count(); ++i) rank_of_edge[order[i]] = i;
  auto column = [&](int edge, int vertex) { return 2 * rank_of_edge[edge] + (vertex == g.tail[edge] ? 0 : 1); };
  auto edge_between = [&](int v, int w) {
    for (int i = 0; i < d.edge_count(); ++i) {
      const Edge& e = d.edges()[i];
      if ((e.a == v && e.b == w) || (e.a == w && e.b == v)) return i;
    }
    throw StructureError("no edge between vertices");
  };

  for (int i : order) p.rows.push_back({g.tail[i], g.head(i)});
  p.chord_only = d.trivalent_count() == 0;
  for (int v = 0; v < V; ++v) {
    if (d.is_univalent(v)) {
      p.univalent_column[v] = column(edge_between(v, d.neighbors(v)[0]), v);
      p.bit[v] = g.diagram.bit(v);
      p.curve_component[v] = d.component(v);
    } else {
      const auto& cyc = g.diagram.cyclic(v);
      for (int j = 0; j < 3; ++j) p.trivalent_columns[v][j] = column(edge_between(v, cyc[j]), v);
    }
  }

  std::vector<bool> placed(V, false);
  for (int v = 0; v < V; ++v) placed[v] = d.is_univalent(v);
  std::vector<int> pending = d.trivalent();
  while (!pending.empty()) {
    bool progress = false;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      int t = pending[i];
      std::vector<int> anchors;
      for (int w : d.neighbors(t))
        if (placed[w]) anchors.push_back(w);
      if (anchors.empty()) continue;
      std::sort(anchors.begin(), anchors.end());
      p.placement.push_back({t, anchors});
      placed[t] = true;
      pending.erase(pending.begin() + i);
      progress = true;
      break;
    }
    if (!progress) {
      p.placement.push_back({pending.front(), {}});
      placed[pending.front()] = true;
      pending.erase(pending.begin());
    }
  }
  return p;
}

std::vector<JacobianColumn> plan_columns(const IntegrandPlan& p, const Configuration& x) {
  std::vector<JacobianColumn> cols(p.dim);
  for (std::size_t v = 0; v < p.univalent_column.size(); ++v) {
    if (p.univalent_column[v] >= 0) {
      cols[p.univalent_column[v]].push_back({static_cast<int>(v), p.bit[v] * x.velocity[v]});
    } else {
      for (int j = 0; j < 3; ++j) {
        Vec3 e{0, 0, 0};
        e[j] = 1;
        cols[p.trivalent_columns[v][j]].push_back({static_cast<int>(v), e});
      }
    }
  }
  return cols;
}

namespace {

double det_small(int dim, std::vector<double>& a) {
  double out = 0;
  det_batch(dim, 1, a.data(), &out, Kernel::scalar);
  return out;
}

}  // namespace

double integrand(const IntegrandPlan& p, const Configuration& x) {
  std::vector<double> m(static_cast<std::size_t>(p.dim) * p.dim);
  if (!psi_jacobian(p.rows, x.point, plan_columns(p, x), 0.0, m.data(), 1))
    throw PreconditionError("configuration collapses an edge");
  return det_small(p.dim, m) / std::pow(kFourPi, p.dim / 2);
}

double integrand(const LabelledDiagram& g, const LinkCurve& c, const Configuration& x) {
  return integrand(make_plan(g, c), x);
}

double integrand(const OrientedDiagram& d, const LinkCurve& c, const Configuration& x) {
  return integrand(LabelledDiagram::standard(d), c, x);
}

namespace {

// Radial law of the free-point proposal: r = s u / (1 - u), density
// s / (r + s)^2 on [0, inf).
double radial_density(double r, double s) { return s / ((r + s) * (r + s)); }

double wrap(double d) { return std::remainder(d, kTwoPi); }

double to_circle(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0 ? t + kTwoPi : t;
}

}  // namespace

double sample_cyclic(int k, Stream& rng, double* out) {
  if (k <= 0) return 1;
  double pts[64];
  if (k > 64) throw CapabilityError("too many univalent vertices on one component");
  if (k == 1 || rng.uniform() < 0.5) {
    for (int i = 0; i < k; ++i) pts[i] = kTwoPi * rng.uniform();
  } else {
    double t0 = kTwoPi * rng.uniform();
    double u = rng.uniform();
    double lambda = kPi * u * u;
    pts[0] = t0;
    for (int i = 1; i < k; ++i) pts[i] = to_circle(t0 + lambda * (2 * rng.uniform() - 1));
  }
  std::sort(pts, pts + k);
  int shift = static_cast<int>(rng.uniform() * k);
  for (int i = 0; i < k; ++i) out[i] = pts[(i + shift) % k];
  return cyclic_density(k, out);
}

double cyclic_density(int k, const double* t) {
  if (k <= 0) return 1;
  const double uniform = factorial(k - 1) / std::pow(kTwoPi, k);
  if (k == 1) return uniform;
  // Clustered law with the anchor at t[a]: lambda has density
  // lambda^{-1/2} / (2 sqrt(pi)) on (0, pi], the others are uniform on
  // [-lambda, lambda], so the tuple density integrates in closed form.
  const double e = k - 1.5;
  const double c = 1.0 / (2 * std::sqrt(kPi)) * std::pow(2.0, -(k - 1)) / e / kTwoPi;
  double sum = 0;
  for (int a = 0; a < k; ++a) {
    double m = 0;
    for (int i = 0; i < k; ++i)
      if (i != a) m = std::max(m, std::fabs(wrap(t[i] - t[a])));
    if (m > 0) sum += c * (std::pow(m, -e) - std::pow(kPi, -e));
  }
  const double clustered = factorial(k - 1) / k * sum;
  return 0.5 * uniform + 0.5 * clustered;
}

double sample_free_point(const std::vector<Vec3>& anchors, const std::vector<double>& local_scales,
                         double global_scale, Stream& rng, Vec3& y) {
  const std::size_t n = anchors.size();
  std::size_t a = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * n));
  double s = rng.uniform() < 0.5 ? global_scale : local_scales[a];
  double u = rng.uniform();
  double r = s * u / (1 - u);
  y = anchors[a] + r * uniform_direction(rng);
  return free_point_density(y, anchors, local_scales, global_scale);
}

double free_point_density(const Vec3& y, const std::vector<Vec3>& anchors, const std::vector<double>& local_scales,
                          double global_scale) {
  double sum = 0;
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    double r = norm(y - anchors[a]);
    double g = 0.5 * radial_density(r, global_scale) + 0.5 * radial_density(r, local_scales[a]);
    sum += g / (2 * kTwoPi * r * r);
  }
  return sum / static_cast<double>(anchors.size());
}

namespace {

// Anchors of the i-th trivalent vertex in placement order and their local
// scales, given the points of every vertex placed before it.
void anchors_for(const IntegrandPlan& p, const LinkCurve& c, const Configuration& x, std::size_t i,
                 std::vector<Vec3>& anchors, std::vector<double>& scales) {
  anchors.clear();
  scales.clear();
  const Diagram& d = p.diagram.diagram.diagram();
  const double floor = kCollisionRadius * c.diameter();
  std::vector<int> placed;
  for (int v = 0; v < d.vertex_count(); ++v)
    if (d.is_univalent(v)) placed.push_back(v);
  for (std::size_t j = 0; j < i; ++j) placed.push_back(p.placement[j].first);
  for (int a : p.placement[i].second) {
    double best = kProposalScale * c.diameter();
    for (int b : placed)
      if (b != a) best = std::min(best, norm(x.point[a] - x.point[b]));
    anchors.push_back(x.point[a]);
    scales.push_back(std::max(best, floor));
  }
  if (anchors.empty()) {
    anchors.push_back(c.centroid());
    scales.push_back(kProposalScale * c.diameter());
  }
}

}  // namespace

double sample_configuration(const IntegrandPlan& p, const LinkCurve& c, Stream& rng, Configuration& x) {
  const Diagram& d = p.diagram.diagram.diagram();
  const int V = d.vertex_count();
  x.component.assign(V, -1);
  x.t.assign(V, 0.0);
  x.point.assign(V, Vec3{0, 0, 0});
  x.velocity.assign(V, Vec3{0, 0, 0});
  double dens = 1;
  double params[64];
  for (int m = 0; m < static_cast<int>(d.placements().size()); ++m) {
    const auto& pl = d.placements()[m];
    const int k = static_cast<int>(pl.size());
    if (k == 0) continue;
    dens *= sample_cyclic(k, rng, params);
    for (int i = 0; i < k; ++i) {
      int v = pl[i];
      x.component[v] = m;
      x.t[v] = params[i];
      x.point[v] = c.eval(m, params[i]);
      x.velocity[v] = c.derivative(m, params[i]);
    }
  }
  const double s = kProposalScale * c.diameter();
  std::vector<Vec3> anchors;
  std::vector<double> scales;
  for (std::size_t i = 0; i < p.placement.size(); ++i) {
    anchors_for(p, c, x, i, anchors, scales);
    dens *= sample_free_point(anchors, scales, s, rng, x.point[p.placement[i].first]);
  }
  return dens;
}

double proposal_density(const IntegrandPlan& p, const LinkCurve& c, const Configuration& x) {
  const Diagram& d = p.diagram.diagram.diagram();
  double dens = 1;
  double params[64];
  for (const auto& pl : d.placements()) {
    const int k = static_cast<int>(pl.size());
    for (int i = 0; i < k; ++i) params[i] = x.t[pl[i]];
    dens *= cyclic_density(k, params);
  }
  const double s = kProposalScale * c.diameter();
  std::vector<Vec3> anchors;
  std::vector<double> scales;
  for (std::size_t i = 0; i < p.placement.size(); ++i) {
    anchors_for(p, c, x, i, anchors, scales);
    dens *= free_point_density(x.point[p.placement[i].first], anchors, scales, s);
  }
  return dens;
}

namespace {

std::string describe(const Configuration& x) {
  std::ostringstream o;
  o.precision(17);
  for (std::size_t v = 0; v < x.point.size(); ++v) {
    if (v) o << "; ";
    if (x.component[v] >= 0)
      o << "v" << v << " on " << x.component[v] << " t=" << x.t[v];
    else
      o << "v" << v << " at (" << x.point[v][0] << ", " << x.point[v][1] << ", " << x.point[v][2] << ")";
  }
  return o.str();
}

void chord_shard(const IntegrandPlan& p, const LinkCurve& c, Kernel kernel, Stream& rng, std::uint64_t count,
                 ShardAccumulator& acc) {
  const std::size_t E = p.rows.size();
  const double min_len = kCollisionRadius * c.diameter();
  std::vector<double> buf[12];
  for (auto& b : buf) b.resize(kBatch * E);
  std::vector<double> out(kBatch * E);
  std::vector<double> dens(kBatch);
  std::vector<char> ok(kBatch);
  std::vector<Configuration> xs(kBatch);
  double sign = 1;
  for (const auto& [tail, head] : p.rows) sign *= p.bit[tail] * p.bit[head];
  for (std::uint64_t done = 0; done < count;) {
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kBatch, count - done));
    for (std::size_t l = 0; l < n; ++l) {
      Configuration& x = xs[l];
      dens[l] = sample_configuration(p, c, rng, x);
      ok[l] = 1;
      for (std::size_t e = 0; e < E; ++e) {
        auto [tail, head] = p.rows[e];
        const std::size_t i = e * kBatch + l;
        for (int k = 0; k < 3; ++k) {
          buf[k][i] = x.point[tail][k];
          buf[3 + k][i] = x.point[head][k];
          buf[6 + k][i] = x.velocity[tail][k];
          buf[9 + k][i] = x.velocity[head][k];
        }
        if (!(norm(x.point[head] - x.point[tail]) > min_len)) {
          ok[l] = 0;
          for (int k = 0; k < 3; ++k) buf[3 + k][i] = buf[k][i] + 1;  // keeps the lane finite
        }
      }
    }
    GaussBatch gb;
    gb.n = kBatch * E;
    for (int k = 0; k < 3; ++k) {
      gb.p[k] = buf[k].data();
      gb.q[k] = buf[3 + k].data();
      gb.dp[k] = buf[6 + k].data();
      gb.dq[k] = buf[9 + k].data();
    }
    gb.out = out.data();
    gauss_kernel_batch(gb, kernel);
    for (std::size_t l = 0; l < n; ++l) {
      if (!ok[l]) {
        acc.reject();
        continue;
      }
      double v = sign;
      for (std::size_t e = 0; e < E; ++e) v *= out[e * kBatch + l];
      double w = v / dens[l];
      if (!std::isfinite(w)) throw ConvergenceError("non-finite sample at " + describe(xs[l]));
      acc.add(w);
    }
    done += n;
  }
}

void generic_shard(const IntegrandPlan& p, const LinkCurve& c, Kernel kernel, Stream& rng, std::uint64_t count,
                   ShardAccumulator& acc) {
  const int dim = p.dim;
  const double min_len = kCollisionRadius * c.diameter();
  const double norm_factor = std::pow(kFourPi, dim / 2);
  std::vector<double> mat(static_cast<std::size_t>(dim) * dim * kBatch);
  std::vector<double> det(kBatch), dens(kBatch);
  std::vector<char> ok(kBatch);
  std::vector<Configuration> xs(kBatch);
  for (std::uint64_t done = 0; done < count;) {
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kBatch, count - done));
    for (std::size_t l = 0; l < kBatch; ++l) {
      ok[l] = 0;
      if (l < n) {
        dens[l] = sample_configuration(p, c, rng, xs[l]);
        ok[l] = psi_jacobian(p.rows, xs[l].point, plan_columns(p, xs[l]), min_len, mat.data() + l, kBatch);
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
      double w = det[l] / norm_factor / dens[l];
      if (!std::isfinite(w)) throw ConvergenceError("non-finite sample at " + describe(xs[l]));
      acc.add(w);
    }
    done += n;
  }
}

}  // namespace

MCEstimate integrate_diagram(const LabelledDiagram& g, const LinkCurve& c, const IntegrateOptions& opt) {
  IntegrandPlan p = make_plan(g, c);
  if (p.rows.empty()) {
    // No edges: the integrand is the constant 1 over the configuration space.
    MCEstimate e;
    e.value = 1;
    e.samples = 0;
    e.seed = opt.mc.seed;
    e.shards = resolve_shards(opt.mc.shards);
    return e;
  }
  Kernel kernel = opt.kernel;
  MCEstimate e = run_mc(opt.mc, [&](Stream& rng, std::uint64_t count, ShardAccumulator& acc) {
    if (p.chord_only)
      chord_shard(p, c, kernel, rng, count, acc);
    else
      generic_shard(p, c, kernel, rng, count, acc);
  });
  require_finite(e, "integral of " + format_diagram(g.diagram));
  return e;
}

MCEstimate integrate_diagram(const OrientedDiagram& d, const LinkCurve& c, const IntegrateOptions& opt) {
  return integrate_diagram(LabelledDiagram::standard(d), c, opt);
}

std::vector<DiagramIntegral> integrate_degree(const LinkCurve& c, int n, const IntegrateOptions& opt) {
  std::vector<DiagramIntegral> out;
  const SupportModel sup = c.support();
  int index = 0;
  for (const Diagram& d : enumerate_diagrams(sup, n)) {
    if (!is_subprincipal(d)) continue;
    CanonicalForm cf = canonical_form(d);
    DiagramIntegral di;
    di.key = cf.key;
    di.diagram = representative(sup, cf.key);
    di.automorphisms = cf.automorphisms;
    IntegrateOptions o = opt;
    o.mc.seed = splitmix64(opt.mc.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n * 1000 + index)));
    di.estimate = integrate_diagram(di.diagram, c, o);
    di.estimate.seed = o.mc.seed;
    out.push_back(std::move(di));
    ++index;
  }
  return out;
}

namespace {

double chord_quadrature(const LinkCurve& c, int a, int b, int grid) {
  const double h = kTwoPi / grid;
  KahanSum sum;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      if (a == b && i == j) continue;
      sum.add(gauss_kernel(c, a, i * h, b, j * h));
    }
  return sum.value() * h * h;
}

}  // namespace

double writhe_quadrature(const LinkCurve& c, int m, int grid) {
  // The kernel is bounded near the diagonal, so dropping it costs O(1/grid).
  return chord_quadrature(c, m, m, grid);
}

double linking_quadrature(const LinkCurve& c, int a, int b, int grid) { return chord_quadrature(c, a, b, grid); }

}  // namespace csi
