#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "csi/combinatorics.hpp"
#include "csi/diagram.hpp"

namespace csi {

using Rational = mpq_class;

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);

// Sign relating the STU relation to the vertex orientation conventions:
// T = kStuSign * (U - S), where T has cyclic order (leg, x, y) at its
// trivalent vertex, U joins the earlier point on M to y and the later one
// to x, and S joins the earlier point to x and the later one to y.
constexpr int kStuSign = 1;

// Formal rational combination of oriented diagram classes of one degree on
// one support. Terms are keyed by canonical form; AS is applied on insert.
class ClassVector {
 public:
  ClassVector() = default;
  ClassVector(SupportModel support, int degree);
  static ClassVector of(const OrientedDiagram& d, const Rational& c = 1);

  const SupportModel& support() const { return support_; }
  int degree() const { return degree_; }
  const std::map<CanonicalKey, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const OrientedDiagram& d, const Rational& c);
  // Coefficient of the canonically oriented representative of key.
  void add_key(const CanonicalKey& key, const Rational& c);
  Rational coefficient(const CanonicalKey& key) const;

  ClassVector& operator+=(const ClassVector& o);
  ClassVector& operator-=(const ClassVector& o);
  ClassVector& operator*=(const Rational& c);
  friend ClassVector operator+(ClassVector a, const ClassVector& b) { return a += b; }
  friend ClassVector operator-(ClassVector a, const ClassVector& b) { return a -= b; }
  friend ClassVector operator*(const Rational& c, ClassVector a) { return a *= c; }
  friend bool operator==(const ClassVector& a, const ClassVector& b) {
    return a.support_ == b.support_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const ClassVector& o) const;
  SupportModel support_;
  int degree_ = 0;
  std::map<CanonicalKey, Rational> terms_;
};

// Canonically oriented representative of a class key.
OrientedDiagram representative(const SupportModel& support, const CanonicalKey& key);

enum class RelationKind { stu, ihx, killed };

struct Relation {
  RelationKind kind;
  ClassVector relator;  // set to zero
};

using RelationSet = std::vector<Relation>;

// All STU relators (one per leg of every trivalent vertex on M) and IHX
// relators (one per internal edge) among degree-n diagrams. Relations with
// a term that would need a double edge are omitted.
RelationSet generate_relations(const SupportModel& support, int n);

// STU at the leg p of trivalent vertex t: returns (U, S) with T = kStuSign*(U - S)
// for T the given oriented diagram with bit(p) = +1.
std::pair<OrientedDiagram, OrientedDiagram> stu_resolution(const OrientedDiagram& T, int t, int p);

// IHX at the internal edge (u, v) of I. With u's cyclic order (a, b, v) and
// v's (u, c, e): H joins u to a, c and v to b, e; X joins u to b, c and v to
// a, e; I = H - X. Vertex ids follow DiagramBuilder::from(I).compaction().
// Returns false when H or X would need a double edge.
bool ihx_resolution(const OrientedDiagram& I, int u, int v, OrientedDiagram& H, OrientedDiagram& X);

// Echelon reduction of degree-n classes on M modulo AS/IHX/STU and, when
// k >= 2, the extra relations [Γ] = 0 for subprincipal Γ with u_Γ = k - 1
// (the quotient A_n^k). k = 0 selects the plain space A_n(M).
class Reducer {
 public:
  Reducer(const SupportModel& support, int n, int k = 0);

  const SupportModel& support() const { return support_; }
  int degree() const { return n_; }
  int k() const { return k_; }
  int dimension() const { return static_cast<int>(basis_.size()); }
  // Chord diagram classes left free by the elimination, in key order.
  const std::vector<CanonicalKey>& basis() const { return basis_; }
  const RelationSet& relations() const { return relations_; }

  std::vector<Rational> coordinates(const ClassVector& v) const;
  // Normal form: a combination of basis classes only.
  ClassVector reduce(const ClassVector& v) const;
  bool is_zero(const ClassVector& v) const { return reduce(v).is_zero(); }
  ClassVector from_coordinates(const std::vector<Rational>& coords) const;

 private:
  using Row = std::map<int, Rational>;
  Row to_row(const ClassVector& v) const;
  void reduce_row(Row& r) const;
  void insert_row(Row r);

  SupportModel support_;
  int n_ = 0;
  int k_ = 0;
  std::vector<CanonicalKey> columns_;
  std::map<CanonicalKey, int> column_of_;
  std::map<int, Row> pivots_;
  std::vector<CanonicalKey> basis_;
  std::map<int, int> basis_index_;
  RelationSet relations_;
};

// Shared, thread-safe cache of reducers keyed by (support, n, k).
std::shared_ptr<const Reducer> reducer_for(const SupportModel& support, int n, int k = 0);

// Concatenation product on the line support J.
ClassVector product(const ClassVector& u, const ClassVector& v);
// Inserts the line diagram a into component m of v, between the univalent
// vertices at ranks position-1 and position of that component.
ClassVector insert(const ClassVector& a, const ClassVector& v, int m, int position = 0);

// Graded element: entry d holds the degree-d part.
using GradedVector = std::vector<ClassVector>;
GradedVector graded_unit(const SupportModel& support, int max_degree);

// v · exp(x a^(m)) truncated at max_degree; a is a graded element on J
// without degree-0 part, v a graded element on M.
GradedVector exp_action(const GradedVector& a, const Rational& x, const GradedVector& v, int m, int max_degree);

// Exact coefficients of the powers of x: entry [d][j] is the degree-d part
// of the coefficient of x^j (the 1/j! included), for use with a floating x.
std::vector<std::vector<ClassVector>> exp_action_terms(const GradedVector& a, const GradedVector& v, int m,
                                                       int max_degree);

// Line diagrams used by the anomaly: degree-1 chord and the three degree-3
// H-shapes with leg patterns AABB (a1), ABAB (a2) and ABBA (a3).
OrientedDiagram line_theta();
OrientedDiagram line_tripod();
OrientedDiagram anomaly_diagram(const std::string& name);

// Closes a line diagram into a diagram on one circle.
OrientedDiagram close_line(const OrientedDiagram& d);

// Vector record format: "coefficient p/q" line followed by a diagram block;
// records separated by "---".
ClassVector parse_class_vector(const std::string& text);
std::string format_class_vector(const ClassVector& v);

}  // namespace csi
