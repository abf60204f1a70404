#include "csi/algebra.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <tuple>

#include "csi/errors.hpp"

namespace csi {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& s) {
  Rational q;
  auto slash = s.find('/');
  if (slash != std::string::npos && s.find_first_not_of("0", slash + 1) == std::string::npos)
    throw InputError("zero denominator in '" + s + "'");
  if (q.set_str(s, 10) != 0) throw InputError("bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

ClassVector::ClassVector(SupportModel support, int degree) : support_(std::move(support)), degree_(degree) {}

ClassVector ClassVector::of(const OrientedDiagram& d, const Rational& c) {
  ClassVector v(d.diagram().support(), csi::degree(d.diagram()));
  v.add(d, c);
  return v;
}

void ClassVector::add(const OrientedDiagram& d, const Rational& c) {
  if (!(d.diagram().support() == support_)) throw InputError("diagram support differs from vector support");
  if (csi::degree(d.diagram()) != degree_) throw InputError("diagram degree differs from vector degree");
  auto cls = oriented_class(d);
  if (cls.sign == 0 || c == 0) return;
  add_key(cls.key, cls.sign * c);
}

void ClassVector::add_key(const CanonicalKey& key, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(key, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational ClassVector::coefficient(const CanonicalKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

void ClassVector::check_compatible(const ClassVector& o) const {
  if (!(support_ == o.support_) || degree_ != o.degree_)
    throw InputError("class vectors of different degree or support");
}

ClassVector& ClassVector::operator+=(const ClassVector& o) {
  check_compatible(o);
  for (const auto& [k, c] : o.terms_) add_key(k, c);
  return *this;
}

ClassVector& ClassVector::operator-=(const ClassVector& o) {
  check_compatible(o);
  for (const auto& [k, c] : o.terms_) add_key(k, -c);
  return *this;
}

ClassVector& ClassVector::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, x] : terms_) x *= c;
  return *this;
}

OrientedDiagram representative(const SupportModel& support, const CanonicalKey& key) {
  return OrientedDiagram(decode_key(support, key));
}

std::pair<OrientedDiagram, OrientedDiagram> stu_resolution(const OrientedDiagram& T, int t, int p) {
  const Diagram& d = T.diagram();
  if (d.is_univalent(t) || !d.is_univalent(p) || !d.adjacent(t, p))
    throw PreconditionError("STU needs a trivalent vertex and one of its legs");
  auto c = T.cyclic(t);
  while (c[0] != p) std::rotate(c.begin(), c.begin() + 1, c.end());
  int x = c[1], y = c[2];
  int comp = d.component(p), pos = d.rank(p);

  auto resolve = [&](bool u_term) {
    DiagramBuilder b = DiagramBuilder::from(T);
    b.remove_edge(p, t);
    b.remove_edge(t, x);
    b.remove_edge(t, y);
    b.remove_vertex(p);
    b.remove_vertex(t);
    int p1 = b.add_univalent(comp, pos);
    int p2 = b.add_univalent(comp, pos + 1);
    int to_x = u_term ? p2 : p1;
    int to_y = u_term ? p1 : p2;
    b.add_edge(to_x, x);
    b.add_edge(to_y, y);
    if (!d.is_univalent(x)) b.rename_in_cyclic(x, t, to_x);
    if (!d.is_univalent(y)) b.rename_in_cyclic(y, t, to_y);
    return b.build();
  };
  return {resolve(true), resolve(false)};
}

// Jacobi form D(x,y|z,w): vertex u has cyclic order (x, y, v), vertex v has
// (u, z, w). Returns false when the result would need a double edge.
static bool jacobi(const OrientedDiagram& base, int u, int v, const std::array<int, 4>& old_nb,
            const std::array<int, 4>& new_nb, OrientedDiagram& out) {
  try {
    DiagramBuilder b = DiagramBuilder::from(base);
    b.remove_edge(u, old_nb[0]);
    b.remove_edge(u, old_nb[1]);
    b.remove_edge(v, old_nb[2]);
    b.remove_edge(v, old_nb[3]);
    b.add_edge(u, new_nb[0]);
    b.add_edge(u, new_nb[1]);
    b.add_edge(v, new_nb[2]);
    b.add_edge(v, new_nb[3]);
    b.cyclic[u] = {new_nb[0], new_nb[1], v};
    b.cyclic[v] = {u, new_nb[2], new_nb[3]};
    // outer vertices keep their cyclic slot but may now point to the other end
    const Diagram& d = base.diagram();
    for (int i = 0; i < 4; ++i) {
      int w = new_nb[i];
      if (d.is_univalent(w)) continue;
      int was = (old_nb[0] == w || old_nb[1] == w) ? u : v;
      int now = i < 2 ? u : v;
      if (was != now) b.rename_in_cyclic(w, was, now);
    }
    out = b.build();
  } catch (const StructureError&) {
    return false;
  }
  return true;
}

bool ihx_resolution(const OrientedDiagram& I, int u, int v, OrientedDiagram& H, OrientedDiagram& X) {
  auto cu = I.cyclic(u);
  while (cu[2] != v) std::rotate(cu.begin(), cu.begin() + 1, cu.end());
  auto cv = I.cyclic(v);
  while (cv[0] != u) std::rotate(cv.begin(), cv.begin() + 1, cv.end());
  int a = cu[0], b = cu[1], c = cv[1], e = cv[2];
  std::array<int, 4> old_nb{a, b, c, e};
  return jacobi(I, u, v, old_nb, {a, c, b, e}, H) && jacobi(I, u, v, old_nb, {b, c, a, e}, X);
}

RelationSet generate_relations(const SupportModel& support, int n) {
  RelationSet out;
  for (const auto& d : enumerate_diagrams(support, n)) {
    OrientedDiagram T(d);
    for (int t : d.trivalent()) {
      for (int p : d.neighbors(t)) {
        if (!d.is_univalent(p)) continue;
        auto [U, S] = stu_resolution(T, t, p);
        ClassVector r = ClassVector::of(T);
        r -= Rational(kStuSign * T.bit(p)) * (ClassVector::of(U) - ClassVector::of(S));
        if (!r.is_zero()) out.push_back({RelationKind::stu, r});
      }
      for (int v : d.neighbors(t)) {
        if (d.is_univalent(v) || v < t) continue;
        OrientedDiagram H, X;
        if (!ihx_resolution(T, t, v, H, X)) continue;
        ClassVector r = ClassVector::of(T) - ClassVector::of(H) + ClassVector::of(X);
        if (!r.is_zero()) out.push_back({RelationKind::ihx, r});
      }
    }
  }
  return out;
}

Reducer::Reducer(const SupportModel& support, int n, int k) : support_(support), n_(n), k_(k) {
  if (k != 0 && (k < 2 || k > 2 * n))
    throw PreconditionError("quotient A_n^k needs 2 <= k <= 2n (got n=" + std::to_string(n) +
                            ", k=" + std::to_string(k) + ")");
  auto diagrams = enumerate_diagrams(support, n);
  int nc = support.size();
  for (const auto& d : diagrams) {
    auto cls = oriented_class(OrientedDiagram(d));
    if (cls.sign != 0) columns_.push_back(cls.key);
  }
  std::stable_sort(columns_.begin(), columns_.end(), [nc](const CanonicalKey& a, const CanonicalKey& b) {
    if (a[nc] != b[nc]) return a[nc] > b[nc];
    return a < b;
  });
  for (int i = 0; i < static_cast<int>(columns_.size()); ++i) column_of_[columns_[i]] = i;

  relations_ = generate_relations(support, n);
  if (k >= 2)
    for (const auto& d : diagrams)
      if (d.univalent_count() == k - 1 && is_subprincipal(d)) {
        ClassVector r = ClassVector::of(OrientedDiagram(d));
        if (!r.is_zero()) relations_.push_back({RelationKind::killed, r});
      }
  for (const auto& rel : relations_) insert_row(to_row(rel.relator));

  for (int i = 0; i < static_cast<int>(columns_.size()); ++i)
    if (!pivots_.count(i)) {
      if (columns_[i][nc] != 0) throw StructureError("elimination left a trivalent diagram free");
      basis_index_[i] = static_cast<int>(basis_.size());
      basis_.push_back(columns_[i]);
    }
}

Reducer::Row Reducer::to_row(const ClassVector& v) const {
  if (!(v.support() == support_) || v.degree() != n_)
    throw InputError("vector has degree " + std::to_string(v.degree()) + ", reducer expects " + std::to_string(n_));
  Row r;
  for (const auto& [key, c] : v.terms()) {
    auto it = column_of_.find(key);
    if (it == column_of_.end()) throw StructureError("class not among the enumerated diagrams");
    r[it->second] = c;
  }
  return r;
}

void Reducer::reduce_row(Row& r) const {
  auto it = r.begin();
  while (it != r.end()) {
    auto p = pivots_.find(it->first);
    if (p == pivots_.end()) {
      ++it;
      continue;
    }
    int col = it->first;
    Rational f = it->second;
    for (const auto& [c, x] : p->second) {
      auto [slot, fresh] = r.emplace(c, 0);
      slot->second -= f * x;
      if (slot->second == 0) r.erase(slot);
    }
    it = r.upper_bound(col);
  }
}

void Reducer::insert_row(Row r) {
  // Reduce only by leading terms so far; the stored rows stay echelon.
  while (!r.empty()) {
    auto lead = r.begin();
    auto p = pivots_.find(lead->first);
    if (p == pivots_.end()) {
      Rational inv = 1 / lead->second;
      for (auto& [c, x] : r) x *= inv;
      pivots_[lead->first] = std::move(r);
      return;
    }
    Rational f = lead->second;
    for (const auto& [c, x] : p->second) {
      auto [slot, fresh] = r.emplace(c, 0);
      slot->second -= f * x;
      if (slot->second == 0) r.erase(slot);
    }
  }
}

std::vector<Rational> Reducer::coordinates(const ClassVector& v) const {
  Row r = to_row(v);
  reduce_row(r);
  std::vector<Rational> out(basis_.size(), 0);
  for (const auto& [c, x] : r) out[basis_index_.at(c)] = x;
  return out;
}

ClassVector Reducer::reduce(const ClassVector& v) const { return from_coordinates(coordinates(v)); }

ClassVector Reducer::from_coordinates(const std::vector<Rational>& coords) const {
  if (coords.size() != basis_.size()) throw InputError("coordinate vector has the wrong length");
  ClassVector out(support_, n_);
  for (size_t i = 0; i < coords.size(); ++i) out.add_key(basis_[i], coords[i]);
  return out;
}

std::shared_ptr<const Reducer> reducer_for(const SupportModel& support, int n, int k) {
  static std::mutex mu;
  static std::map<std::tuple<std::string, int, int>, std::shared_ptr<const Reducer>> cache;
  auto key = std::make_tuple(support.describe(), n, k);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto r = std::make_shared<const Reducer>(support, n, k);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, r).first->second;
}

namespace {

// Appends the vertices of `piece` (a diagram on a line) into component m of
// builder b starting at the given position.
void splice(DiagramBuilder& b, const OrientedDiagram& piece, int m, int position) {
  const Diagram& d = piece.diagram();
  if (d.support().size() != 1 || !d.support().is_line(0)) throw InputError("inserted diagram must live on a line");
  std::vector<int> id(d.vertex_count());
  int pos = position;
  for (int v : d.placements()[0]) id[v] = b.add_univalent(m, pos++, piece.bit(v));
  for (int t : d.trivalent()) id[t] = b.add_trivalent({-1, -1, -1});
  for (int t : d.trivalent()) {
    const auto& c = piece.cyclic(t);
    b.cyclic[id[t]] = {id[c[0]], id[c[1]], id[c[2]]};
  }
  for (const auto& e : d.edges()) b.add_edge(id[e.a], id[e.b]);
}

}  // namespace

ClassVector product(const ClassVector& u, const ClassVector& v) {
  if (!(u.support() == v.support()) || u.support().size() != 1 || !u.support().is_line(0))
    throw InputError("product needs two vectors on the same line support");
  ClassVector out(u.support(), u.degree() + v.degree());
  for (const auto& [ku, cu] : u.terms())
    for (const auto& [kv, cv] : v.terms()) {
      DiagramBuilder b = DiagramBuilder::from(representative(u.support(), ku));
      splice(b, representative(v.support(), kv), 0, static_cast<int>(b.placements[0].size()));
      out.add(b.build(), cu * cv);
    }
  return out;
}

ClassVector insert(const ClassVector& a, const ClassVector& v, int m, int position) {
  if (m < 0 || m >= v.support().size()) throw InputError("unknown component index " + std::to_string(m));
  ClassVector out(v.support(), a.degree() + v.degree());
  for (const auto& [kv, cv] : v.terms())
    for (const auto& [ka, ca] : a.terms()) {
      DiagramBuilder b = DiagramBuilder::from(representative(v.support(), kv));
      int size = static_cast<int>(b.placements[m].size());
      splice(b, representative(a.support(), ka), m, std::clamp(position, 0, size));
      out.add(b.build(), ca * cv);
    }
  return out;
}

GradedVector graded_unit(const SupportModel& support, int max_degree) {
  GradedVector g;
  for (int d = 0; d <= max_degree; ++d) g.emplace_back(support, d);
  g[0].add(OrientedDiagram(Diagram::empty(support)), 1);
  return g;
}

namespace {

GradedVector graded_product(const GradedVector& a, const GradedVector& b, int max_degree) {
  GradedVector out = graded_unit(a[0].support(), max_degree);
  out[0] = ClassVector(a[0].support(), 0);
  for (int i = 0; i <= max_degree && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j <= max_degree && j < static_cast<int>(b.size()); ++j)
      if (!a[i].is_zero() && !b[j].is_zero()) out[i + j] += product(a[i], b[j]);
  return out;
}

std::vector<GradedVector> powers(const GradedVector& a, int max_degree) {
  if (!a.empty() && !a[0].is_zero()) throw InputError("exponent must have no degree-0 part");
  std::vector<GradedVector> p{graded_unit(SupportModel::line(), max_degree)};
  for (int j = 1; j <= max_degree; ++j) p.push_back(graded_product(p.back(), a, max_degree));
  return p;
}

}  // namespace

std::vector<std::vector<ClassVector>> exp_action_terms(const GradedVector& a, const GradedVector& v, int m,
                                                       int max_degree) {
  const SupportModel& M = v.at(0).support();
  auto P = powers(a, max_degree);
  std::vector<std::vector<ClassVector>> out(max_degree + 1);
  Rational fact = 1;
  for (int j = 0; j <= max_degree; ++j) {
    if (j > 0) fact *= j;
    for (int d = 0; d <= max_degree; ++d) {
      ClassVector acc(M, d);
      for (int d1 = 0; d1 <= d; ++d1) {
        int d2 = d - d1;
        if (d2 >= static_cast<int>(v.size()) || P[j][d1].is_zero() || v[d2].is_zero()) continue;
        acc += insert(P[j][d1], v[d2], m);
      }
      acc *= Rational(1) / fact;
      out[d].push_back(acc);
    }
  }
  return out;
}

GradedVector exp_action(const GradedVector& a, const Rational& x, const GradedVector& v, int m, int max_degree) {
  auto terms = exp_action_terms(a, v, m, max_degree);
  GradedVector out;
  for (int d = 0; d <= max_degree; ++d) {
    ClassVector acc(v.at(0).support(), d);
    Rational xp = 1;
    for (int j = 0; j <= max_degree; ++j) {
      acc += xp * terms[d][j];
      xp *= x;
    }
    out.push_back(acc);
  }
  return out;
}

OrientedDiagram line_theta() { return parse_diagram("line J: a b\nedges: a-b\n"); }

OrientedDiagram line_tripod() {
  return parse_diagram("line J: a b c\ntrivalent: t\nedges: a-t b-t c-t\norient t: a b c\n");
}

OrientedDiagram anomaly_diagram(const std::string& name) {
  // Legs z1 < z2 < z3 < z4 on the line; t and s are the trivalent ends of
  // the internal edge.
  if (name == "a1")
    return parse_diagram(
        "line J: z1 z2 z3 z4\ntrivalent: t s\nedges: z1-t z2-t z3-s z4-s t-s\norient t: s z1 z2\norient s: t z3 z4\n");
  if (name == "a2")
    return parse_diagram(
        "line J: z1 z2 z3 z4\ntrivalent: t s\nedges: z1-t z3-t z2-s z4-s t-s\norient t: s z1 z3\norient s: t z2 z4\n");
  if (name == "a3")
    return parse_diagram(
        "line J: z1 z2 z3 z4\ntrivalent: t s\nedges: z1-t z4-t z2-s z3-s t-s\norient t: s z1 z4\norient s: t z2 z3\n");
  if (name == "theta") return line_theta();
  if (name == "tripod") return line_tripod();
  throw InputError("unknown line diagram '" + name + "' (theta, tripod, a1, a2, a3)");
}

OrientedDiagram close_line(const OrientedDiagram& d) {
  DiagramBuilder b = DiagramBuilder::from(d);
  if (b.support.size() != 1) throw InputError("closing needs a single line component");
  b.support = SupportModel::circle();
  return b.build();
}

ClassVector parse_class_vector(const std::string& text) {
  ClassVector out;
  bool first = true;
  for (const auto& rec : split_records(text)) {
    std::istringstream in(rec);
    std::string line, body;
    Rational coef = 1;
    bool have = false;
    while (std::getline(in, line)) {
      std::istringstream w(line);
      std::string head;
      w >> head;
      if (head == "coefficient") {
        std::string q;
        w >> q;
        coef = parse_rational(q);
        have = true;
      } else {
        body += line + "\n";
      }
    }
    if (!have) throw InputError("vector record without a coefficient line");
    auto d = parse_diagram(body);
    if (first) {
      out = ClassVector(d.diagram().support(), degree(d.diagram()));
      first = false;
    }
    out.add(d, coef);
  }
  if (first) throw InputError("empty vector file");
  return out;
}

std::string format_class_vector(const ClassVector& v) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, c] : v.terms()) {
    if (!first) out << "---\n";
    first = false;
    out << "coefficient " << to_string(c) << "\n" << format_diagram(representative(v.support(), k));
  }
  return out.str();
}

}  // namespace csi
