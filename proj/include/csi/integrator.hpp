#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "csi/algebra.hpp"
#include "csi/curve.hpp"
#include "csi/labelled.hpp"
#include "csi/mc.hpp"
#include "csi/simd.hpp"
#include "csi/vec3.hpp"

namespace csi {

// (1/4pi) ((L'_m(s) x L'_m2(t)) . (L_m(s) - L_m2(t))) / |L_m(s) - L_m2(t)|^3,
// the density of the pulled back area form for a chord directed from (m, s)
// to (m2, t). Throws PreconditionError when the two points coincide.
double gauss_kernel(const LinkCurve& c, int m, double s, int m2, double t);

// Oriented orthonormal frame (f1, f2) of the tangent plane at the unit
// vector u with f1 x f2 = u: f1 is e_z made orthogonal to u, or e_x when u
// is within acos(0.9) of the z axis.
std::pair<Vec3, Vec3> sphere_frame(const Vec3& u);

// Derivative of vertex positions along one coordinate of a configuration
// space; a sparse column of the Jacobian of the edge directions.
struct ColumnTerm {
  int vertex = 0;
  Vec3 d{0, 0, 0};
};
using JacobianColumn = std::vector<ColumnTerm>;

// Fills the 2E x 2E matrix with rows (edge, frame vector) in the order of
// `edges` (tail, head) and the given columns. Entry (i, j) goes to
// out[(i * dim + j) * stride]. Returns false when an edge has length at most
// `min_length`, leaving `out` unspecified.
bool psi_jacobian(const std::vector<std::pair<int, int>>& edges, const std::vector<Vec3>& pos,
                  const std::vector<JacobianColumn>& columns, double min_length, double* out, std::size_t stride);

// Points of a diagram configuration: univalent vertices carry a component
// and parameter, trivalent vertices only a point.
struct Configuration {
  std::vector<int> component;  // -1 for trivalent vertices
  std::vector<double> t;
  std::vector<Vec3> point;
  std::vector<Vec3> velocity;  // L'(t) at univalent vertices
};

// Precomputed layout of the integrand of a labelled diagram on a curve:
// rows are the visible edges in label order; columns are the half-edge
// labels in increasing order. A univalent vertex owns the column of its
// half-edge, oriented by its bit; a trivalent vertex with cyclic order
// (n0, n1, n2) gives its x, y, z coordinates to the half-edges towards n0,
// n1, n2.
struct IntegrandPlan {
  LabelledDiagram diagram;
  int dim = 0;  // 2 * visible edges
  std::vector<std::pair<int, int>> rows;
  std::vector<int> univalent_column;               // per vertex, -1 if trivalent
  std::vector<std::array<int, 3>> trivalent_columns;
  std::vector<int> bit;                            // per vertex
  std::vector<int> curve_component;                // per vertex, -1 if trivalent
  bool chord_only = false;
  // Trivalent vertices in placement order, each with the neighbours placed
  // before it (empty when it has none; then it is drawn around the centroid).
  std::vector<std::pair<int, std::vector<int>>> placement;
};

// Throws InputError when the diagram does not live on the curve's support.
IntegrandPlan make_plan(const LabelledDiagram& g, const LinkCurve& c);
// The same layout without reference to a curve (any support).
IntegrandPlan plan_layout(const LabelledDiagram& g);

std::vector<JacobianColumn> plan_columns(const IntegrandPlan& p, const Configuration& x);

// Density of Psi*Omega at x against the coordinate volume: the Jacobian
// determinant divided by (4pi)^E. Throws PreconditionError on a collapsed
// edge.
double integrand(const IntegrandPlan& p, const Configuration& x);
double integrand(const LabelledDiagram& g, const LinkCurve& c, const Configuration& x);
double integrand(const OrientedDiagram& d, const LinkCurve& c, const Configuration& x);

// Rejection radius around collisions, relative to the curve diameter.
inline constexpr double kCollisionRadius = 1e-6;
// Scale of the trivalent proposal, relative to the curve diameter.
inline constexpr double kProposalScale = 0.5;

// k parameters on a circle in a fixed cyclic order, drawn from an equal
// mixture of the uniform law and a clustered law (one point uniform, the
// others uniform within lambda of it, lambda = pi u^2). The clustered part
// puts enough mass near total collisions for the weights to have finite
// variance. Returns the density of the assignment; `out` follows `order`
// positions.
double sample_cyclic(int k, Stream& rng, double* out);
double cyclic_density(int k, const double* t);

// One free point: y = a + r w, w uniform on S^2, r = s u / (1 - u), with a
// uniform among the anchors and s chosen with equal odds between the global
// scale and the anchor's local scale. Returns the density at y.
double sample_free_point(const std::vector<Vec3>& anchors, const std::vector<double>& local_scales,
                         double global_scale, Stream& rng, Vec3& y);
double free_point_density(const Vec3& y, const std::vector<Vec3>& anchors, const std::vector<double>& local_scales,
                          double global_scale);

// Draws x from the proposal and returns its density: sample_cyclic per
// component, then sample_free_point for the trivalent vertices in placement
// order, anchored at their placed neighbours. A local scale is the distance
// from the anchor to the nearest other placed vertex.
double sample_configuration(const IntegrandPlan& p, const LinkCurve& c, Stream& rng, Configuration& x);
// Density of the proposal at x.
double proposal_density(const IntegrandPlan& p, const LinkCurve& c, const Configuration& x);

struct IntegrateOptions {
  MCOptions mc;
  Kernel kernel = active_kernel();
};

// Importance-sampled I_L(Gamma). Samples within the collision radius count
// as draws contributing zero.
MCEstimate integrate_diagram(const LabelledDiagram& g, const LinkCurve& c, const IntegrateOptions& opt);
MCEstimate integrate_diagram(const OrientedDiagram& d, const LinkCurve& c, const IntegrateOptions& opt);

// Per diagram class: I_L(Gamma) for the canonical representative, |Aut|,
// and the estimate.
struct DiagramIntegral {
  CanonicalKey key;
  OrientedDiagram diagram;
  int automorphisms = 1;
  MCEstimate estimate;
};

// Every subprincipal degree-n diagram on the curve's support, each with its
// own seed derived from opt.mc.seed and its position.
std::vector<DiagramIntegral> integrate_degree(const LinkCurve& c, int n, const IntegrateOptions& opt);

// Deterministic trapezoid approximation of I_L(theta_m) on a grid x grid
// lattice; for tests and curve construction.
double writhe_quadrature(const LinkCurve& c, int m, int grid = 512);
// Same for the chord between components a and b.
double linking_quadrature(const LinkCurve& c, int a, int b, int grid = 512);

}  // namespace csi
