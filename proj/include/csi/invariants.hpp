#pragma once

#include <map>
#include <string>
#include <vector>

#include "csi/algebra.hpp"
#include "csi/curve.hpp"
#include "csi/integrator.hpp"

namespace csi {

// A quantity that is, to first order, a function of independent Monte Carlo
// estimates. grad[i] is the derivative with respect to estimate i times that
// estimate's standard error.
struct Uncertain {
  double value = 0;
  std::map<int, double> grad;

  static Uncertain exact(double v) { return {v, {}}; }
  static Uncertain measured(double v, double std_error, int source) { return {v, {{source, std_error}}}; }
  double std_error() const;

  Uncertain& operator+=(const Uncertain& o);
  Uncertain& operator-=(const Uncertain& o) { return *this += -1.0 * o; }
  friend Uncertain operator+(Uncertain a, const Uncertain& b) { return a += b; }
  friend Uncertain operator-(Uncertain a, const Uncertain& b) { return a -= b; }
  friend Uncertain operator*(double c, Uncertain a);
  friend Uncertain operator*(const Uncertain& a, const Uncertain& b);
};

// Floating combination of degree-n classes in the basis of a reducer.
struct SeriesPart {
  int degree = 0;
  int k = 0;
  std::vector<CanonicalKey> basis;
  std::vector<Uncertain> coefficient;
};

// Graded series truncated at parts.size() - 1.
struct Series {
  SupportModel support;
  std::vector<SeriesPart> parts;
  int max_degree() const { return static_cast<int>(parts.size()) - 1; }
};

struct ZResult {
  Series z;
  std::vector<std::vector<DiagramIntegral>> integrals;  // per degree, empty at 0
  std::vector<Uncertain> framing;                       // I_L(theta_m) per component
};

// sum over degree-n diagram integrals of I/|Aut| [Gamma], in the basis of
// A_n^k (k = 0: A_n). `source_base` numbers the estimates.
SeriesPart assemble_part(const SupportModel& support, int n, int k, const std::vector<DiagramIntegral>& integrals,
                         int source_base);

// Z(L) up to max_degree (<= 3). Degree 3 is slow and noisy.
ZResult z_series(const LinkCurve& c, int max_degree, const IntegrateOptions& opt);

// alpha truncated at max_degree with the exactly known parts: [theta]/2 in
// degree 1, zero in degrees 2 and 3.
GradedVector anomaly_series(int max_degree);

// S * prod_m exp(x_m alpha^(m)) with floating x_m.
Series apply_exp(const Series& s, const std::vector<Uncertain>& x, const GradedVector& alpha);
// Z0 = Z prod_m exp(-I_L(theta_m) alpha^(m)).
Series z0(const ZResult& z, const GradedVector& alpha);

struct LinkingResult {
  MCEstimate estimate;
  int nearest = 0;
  int crossing_oracle = 0;
  bool warning = false;  // residual above 0.1 or disagreement with the oracle
};

LinkingResult linking_number(const LinkCurve& c, int a, int b, const IntegrateOptions& opt);
// I_L(theta_m).
MCEstimate self_linking(const LinkCurve& c, int m, const IntegrateOptions& opt);

struct V2Result {
  Uncertain value;
  int nearest = 0;
  bool warning = false;  // |value - nearest| > 3 stderr
  ZResult z;
};

// Keys of the degree-2 chord diagrams on one circle: parallel and crossed.
CanonicalKey par_key();
CanonicalKey cr_key();

// Coefficient of [cr] in Z_2 in the basis {[par], [cr]}, plus 1/24.
V2Result v2(const LinkCurve& c, const IntegrateOptions& opt);

struct LatticeReport {
  int n = 0;
  int k = 0;
  std::vector<double> framings;
  // Lattice basis in coordinates of A_n^k, rows; may have fewer rows than
  // the dimension when the generators do not span.
  std::vector<std::vector<Rational>> lattice_basis;
  std::vector<Uncertain> coordinates;
  std::vector<long> nearest;
  // Part of Z_n^k outside the span of the lattice, in A_n^k coordinates.
  std::vector<double> outside;
  double worst_sigma = 0;  // max |coordinate - nearest| / stderr
  double worst_residual = 0;
  bool ok = false;  // all coordinates within 3 stderr (or 1e-9) of integers
};

// Expresses Z_n^k in a basis of the lattice generated by the beta values of
// principal diagrams. Throws PreconditionError unless every I_L(theta_m) is
// within 0.05 of an integer.
LatticeReport lattice_check(const LinkCurve& c, int n, int k, const IntegrateOptions& opt);
LatticeReport lattice_check(const ZResult& z, int n, int k);

// Row basis of the integer span of rational row vectors (Hermite normal
// form of the rows after clearing denominators).
std::vector<std::vector<Rational>> lattice_basis(const std::vector<std::vector<Rational>>& generators);

}  // namespace csi
