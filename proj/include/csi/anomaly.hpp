#pragma once

#include <array>
#include <string>
#include <vector>

#include "csi/curve.hpp"
#include "csi/integrator.hpp"
#include "csi/invariants.hpp"

namespace csi {

// Line diagram prepared for the integral over W(gamma): the univalent
// vertices sit on the axis l_s at tau s, the first at tau = 0 and the last at
// tau = 1; coordinates are (s on S^2, the free tau in line order, the
// trivalent points), oriented so that (translation, dilation, slice) agrees
// with the orientation of C_gamma(l_s), base S^2 first.
struct WPlan {
  IntegrandPlan layout;
  int degree = 0;
  int first = -1;
  int last = -1;
  std::vector<int> free_legs;  // univalent vertices strictly between, in line order
  int sigma = 1;               // slice orientation relative to the quotient orientation
};

// Throws InputError unless d is a connected diagram on one line with at
// least two univalent vertices.
WPlan make_wplan(const OrientedDiagram& d);

struct WConfiguration {
  Vec3 s{0, 0, 1};
  std::vector<double> tau;   // per vertex, univalent only
  std::vector<Vec3> point;   // per vertex
};

// Positions from s, tau and the trivalent points already stored in x.
void place_legs(const WPlan& p, WConfiguration& x);
// Density of Psi*Omega against (area on S^2, d tau, d y). Throws
// PreconditionError on a collapsed edge.
double w_integrand(const WPlan& p, const WConfiguration& x);
// Unit edge directions in label order.
std::vector<Vec3> edge_directions(const WPlan& p, const WConfiguration& x);

// s uniform on S^2, free tau sorted uniform on (0, 1), trivalent points
// from sample_free_point with global scale 1/2.
double sample_w(const WPlan& p, Stream& rng, WConfiguration& x);

// Catalog names: theta, tripod (also d2-tripod), a1, a2, a3.
OrientedDiagram line_diagram(const std::string& name);

MCEstimate f_gamma(const OrientedDiagram& gamma, const MCOptions& opt, Kernel kernel = active_kernel());

struct AlphaTerm {
  std::string name;
  OrientedDiagram diagram;
  int automorphisms = 1;
  MCEstimate f;
};

struct AlphaResult {
  std::vector<AlphaTerm> terms;
  Series alpha;  // on J, in reducer bases, degrees 0..max
};

// alpha = sum f_gamma / (2 |Aut gamma|) [gamma] over the connected line
// diagrams up to max_degree (<= 3): theta, tripod, a1, a2, a3.
AlphaResult anomaly_alpha(int max_degree, const MCOptions& opt, Kernel kernel = active_kernel());

// Reverses the order of the univalent vertices on the line.
OrientedDiagram reversed_line(const OrientedDiagram& d);

struct SymmetryReport {
  int points = 0;
  double max_psi_mismatch = 0;     // largest |Psi' - expected| over edges and points
  double max_value_mismatch = 0;   // relative mismatch of the signed integrand relation
  int expected_sign = 1;           // orientation sign of the isomorphism
  int integrand_sign = 1;          // pointwise ratio of integrand values
  bool pointwise_ok = false;
  MCEstimate f;
  MCEstimate f_image;
  bool estimates_ok = true;        // within 3 combined stderr (when estimated)
  bool ok() const { return pointwise_ok && estimates_ok; }
};

// W_s(gamma) -> W_{-s}(reversed gamma) by translating the last leg to 0:
// Psi values and integrand values agree pointwise; with samples > 0 the two
// f estimates are compared too.
SymmetryReport symmetry_check_s1_even(const OrientedDiagram& gamma, int points, std::uint64_t samples = 0,
                                      std::uint64_t seed = 1);
// x -> -x maps W_s(gamma) to W_{-s}(gamma) with every Psi value sent to its
// antipode. The isomorphism has sign (-1)^n; with the antipodal degree
// (-1)^E on the target the integrand ratio is (-1)^(n+E).
SymmetryReport symmetry_check_central(const OrientedDiagram& gamma, int points, std::uint64_t seed = 1);

// Tangent indicatrix disc extension: phi(r, theta) runs along the geodesic
// from q (r = 0) to the unit tangent at theta (r = 1); the disc carries the
// orientation opposite to the usual one.
struct DiscIntegral {
  int component = 0;
  Vec3 q{0, 0, 1};
  double clearance = 0;   // least angle between the indicatrix and -q
  double value = 0;       // fan of van Oosterom-Strackee triangles
  double grid_value = 0;  // midpoint rule on an (r, theta) grid
  int segments = 0;
};

// Default q: the normalized mean tangent when it is not small, else the
// candidate among +-e_x, +-e_y, +-e_z, the mean tangent and its antipode
// with the largest clearance.
Vec3 default_disc_base(const LinkCurve& c, int m);
// Throws PreconditionError when the indicatrix comes within `min_clearance`
// radians of -q.
DiscIntegral disc_integral(const LinkCurve& c, int m, const Vec3& q, int segments = 4096, double min_clearance = 1e-3);
DiscIntegral disc_integral(const LinkCurve& c, int m, int segments = 4096);

struct FramingRow {
  int component = 0;
  MCEstimate self_linking;  // I_L(theta_m)
  double quadrature = 0;    // deterministic cross-check of I_L(theta_m)
  DiscIntegral disc;
  double framing = 0;       // I_L(theta_m) + 2 I_m
  long nearest = 0;
  double residual = 0;
};

std::vector<FramingRow> framing_report(const LinkCurve& c, const IntegrateOptions& opt);

// Degree-3 regions on (S^2)^5.
enum class Region { none, a1, a3, boundary };

struct RegionVerdict {
  bool square = false;          // (e1, e2, e3, e4)
  bool square_swapped = false;  // (e2, e3, -e1, -e4)
  Region region = Region::none;
};

// [a, b, c]: sign of det(a, b, c).
int orientation_sign(const Vec3& a, const Vec3& b, const Vec3& c);
// Square: [e1,e2,e3] = [e1,e2,e4] = [e1,e3,e4] = [e2,e3,e4] != 0.
bool is_square(const Vec3& e1, const Vec3& e2, const Vec3& e3, const Vec3& e4);
// A3: (e1..e4) square with e5 in the triangle cut by its diagonals and the
// side (e1, e2). A1: (e2, e3, -e1, -e4) square with e5 in the triangle cut
// by its diagonals and the side (e2, e3). A zero determinant anywhere gives
// Region::boundary.
RegionVerdict degree3_region_predicates(const std::array<Vec3, 5>& e);

// Edge directions e1..e5 of an a1 or a3 configuration in the labelling of
// the degree-3 argument: e1, e2 from t to its legs (lower first), e3, e4
// from the legs of the other trivalent vertex to it (lower first) and e5
// from t to the other trivalent vertex.
std::array<Vec3, 5> degree3_edges(const std::string& name, const WConfiguration& x, const WPlan& p);

}  // namespace csi
