#include "csi/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "csi/errors.hpp"

namespace csi {

int degree(const Diagram& d) {
  int v = d.vertex_count();
  if (v % 2 != 0) throw StructureError("odd vertex count");
  int n = v / 2;
  if (d.edge_count() - d.trivalent_count() != n || d.edge_count() + d.univalent_count() != 3 * n)
    throw StructureError("degree formulas disagree");
  return n;
}

HalfEdgeCount half_edge_count_check(const Diagram& d, const std::vector<int>& A) {
  if (A.empty()) throw PreconditionError("half-edge count needs a nonempty subset");
  std::vector<char> in(d.vertex_count(), 0);
  for (int v : A) {
    if (v < 0 || v >= d.vertex_count()) throw InputError("vertex out of range");
    in[v] = 1;
  }
  HalfEdgeCount c;
  for (const auto& e : d.edges()) {
    int k = in[e.a] + in[e.b];
    if (k == 2) ++c.inner;
    if (k == 1) ++c.outer;
  }
  int rhs = 0;
  for (int v = 0; v < d.vertex_count(); ++v)
    if (in[v]) rhs += d.is_univalent(v) ? 1 : 3;
  if (2 * c.inner + c.outer != rhs) throw StructureError("half-edge count identity fails");
  return c;
}

std::vector<std::vector<int>> connected_trivalent_subsets(const Diagram& d) {
  const auto& T = d.trivalent();
  int t = static_cast<int>(T.size());
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << t); ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    std::vector<int> A;
    for (int i = 0; i < t; ++i)
      if (mask >> i & 1) A.push_back(T[i]);
    // flood fill inside A
    std::vector<int> reached{A[0]};
    for (size_t i = 0; i < reached.size(); ++i)
      for (int w : d.neighbors(reached[i]))
        if (std::binary_search(A.begin(), A.end(), w) &&
            std::find(reached.begin(), reached.end(), w) == reached.end())
          reached.push_back(w);
    if (reached.size() == A.size()) out.push_back(A);
  }
  return out;
}

bool is_principal(const Diagram& d) {
  for (const auto& A : connected_trivalent_subsets(d))
    if (half_edge_count_check(d, A).outer < 4) return false;
  return true;
}

bool is_subprincipal(const Diagram& d) {
  std::vector<std::vector<int>> tight;
  for (const auto& A : connected_trivalent_subsets(d)) {
    int outer = half_edge_count_check(d, A).outer;
    if (outer < 3) return false;
    if (outer == 3) tight.push_back(A);
  }
  for (size_t i = 0; i < tight.size(); ++i)
    for (size_t j = i + 1; j < tight.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(tight[i].begin(), tight[i].end(), tight[j].begin(), tight[j].end(),
                            std::back_inserter(common));
      if (common.empty()) return false;
    }
  return true;
}

namespace {

// Explores every admissible labelling that is canonical up to the choices
// made: a rotation per circle component, then a breadth-first numbering of
// trivalent vertices branching over the order of fresh neighbours. The set
// of labellings produced is isomorphism invariant, so its minimum code is a
// canonical form and the minimisers form a torsor under Aut.
class CanonicalSearch {
 public:
  explicit CanonicalSearch(const Diagram& d) : d_(d), label_(d.vertex_count(), -1), order_(d.vertex_count(), -1) {
    for (const auto& p : d.placements()) header_.push_back(static_cast<int>(p.size()));
    header_.push_back(d.trivalent_count());
  }

  void run() { rotate(0, 0); }

  const CanonicalKey& best() const { return best_; }
  const std::vector<std::vector<int>>& minimisers() const { return minimisers_; }

 private:
  void rotate(int comp, int next) {
    if (comp == d_.support().size()) {
      extend(0, next);
      return;
    }
    const auto& p = d_.placements()[comp];
    int k = static_cast<int>(p.size());
    int rotations = (k == 0 || d_.support().is_line(comp)) ? 1 : k;
    for (int r = 0; r < rotations; ++r) {
      for (int i = 0; i < k; ++i) {
        int v = p[(i + r) % k];
        label_[v] = next + i;
        order_[next + i] = v;
      }
      rotate(comp + 1, next + k);
      for (int i = 0; i < k; ++i) label_[p[i]] = -1;
    }
  }

  void extend(int cursor, int next) {
    while (cursor < next) {
      int v = order_[cursor];
      std::vector<int> fresh;
      for (int w : d_.neighbors(v))
        if (label_[w] < 0) fresh.push_back(w);
      if (fresh.empty()) {
        ++cursor;
        continue;
      }
      std::sort(fresh.begin(), fresh.end());
      int k = static_cast<int>(fresh.size());
      do {
        for (int i = 0; i < k; ++i) {
          label_[fresh[i]] = next + i;
          order_[next + i] = fresh[i];
        }
        extend(cursor + 1, next + k);
        for (int i = 0; i < k; ++i) label_[fresh[i]] = -1;
      } while (std::next_permutation(fresh.begin(), fresh.end()));
      return;
    }
    evaluate();
  }

  void evaluate() {
    code_.assign(header_.begin(), header_.end());
    pairs_.clear();
    for (const auto& e : d_.edges()) {
      int a = label_[e.a], b = label_[e.b];
      if (a > b) std::swap(a, b);
      pairs_.emplace_back(a, b);
    }
    std::sort(pairs_.begin(), pairs_.end());
    for (const auto& [a, b] : pairs_) {
      code_.push_back(a);
      code_.push_back(b);
    }
    if (minimisers_.empty() || code_ < best_) {
      best_ = code_;
      minimisers_.assign(1, label_);
    } else if (code_ == best_) {
      minimisers_.push_back(label_);
    }
  }

  const Diagram& d_;
  std::vector<int> label_;
  std::vector<int> order_;
  CanonicalKey header_;
  CanonicalKey code_;
  std::vector<std::pair<int, int>> pairs_;
  CanonicalKey best_;
  std::vector<std::vector<int>> minimisers_;
};

int orientation_sign(const OrientedDiagram& od, const std::vector<int>& label) {
  const Diagram& d = od.diagram();
  int sign = 1;
  for (int v = 0; v < d.vertex_count(); ++v) {
    if (d.is_univalent(v)) {
      sign *= od.bit(v);
    } else {
      const auto& c = od.cyclic(v);
      sign *= triple_sign(label[c[0]], label[c[1]], label[c[2]]);
    }
  }
  return sign;
}

}  // namespace

CanonicalForm canonical_form(const Diagram& d) {
  CanonicalSearch s(d);
  s.run();
  CanonicalForm f;
  f.key = s.best();
  f.relabel = s.minimisers().front();
  f.automorphisms = static_cast<int>(s.minimisers().size());
  return f;
}

int automorphism_count(const Diagram& d) { return canonical_form(d).automorphisms; }

OrientedClass oriented_class(const OrientedDiagram& od) {
  CanonicalSearch s(od.diagram());
  s.run();
  OrientedClass c;
  c.key = s.best();
  c.sign = orientation_sign(od, s.minimisers().front());
  for (const auto& lab : s.minimisers())
    if (orientation_sign(od, lab) != c.sign) {
      c.sign = 0;
      break;
    }
  return c;
}

Diagram decode_key(const SupportModel& support, const CanonicalKey& key) {
  int nc = support.size();
  if (static_cast<int>(key.size()) < nc + 1) throw StructureError("canonical key too short");
  std::vector<std::vector<int>> placements(nc);
  int next = 0;
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < key[c]; ++i) placements[c].push_back(next++);
  std::vector<int> trivalent;
  for (int i = 0; i < key[nc]; ++i) trivalent.push_back(next++);
  std::vector<Edge> edges;
  for (size_t i = nc + 1; i + 1 < key.size(); i += 2) edges.push_back({key[i], key[i + 1]});
  return Diagram(support, placements, trivalent, edges);
}

namespace {

class GraphEnumerator {
 public:
  GraphEnumerator(const SupportModel& support, std::vector<int> counts, int t,
                  std::map<CanonicalKey, Diagram>& found)
      : support_(support), found_(found) {
    int next = 0;
    for (int c : counts) {
      placements_.emplace_back();
      for (int i = 0; i < c; ++i) placements_.back().push_back(next++);
    }
    u_ = next;
    for (int i = 0; i < t; ++i) trivalent_.push_back(next++);
    v_ = next;
    rem_.assign(v_, 3);
    for (int i = 0; i < u_; ++i) rem_[i] = 1;
    adj_.assign(v_, std::vector<char>(v_, 0));
  }

  void run() { step(); }

 private:
  void step() {
    int v = 0;
    while (v < v_ && rem_[v] == 0) ++v;
    if (v == v_) {
      emit();
      return;
    }
    int floor = v;
    for (int w = v + 1; w < v_; ++w)
      if (adj_[v][w]) floor = w;
    for (int w = floor + 1; w < v_; ++w) {
      if (rem_[w] == 0 || adj_[v][w]) continue;
      if (w >= u_ && untouched(w)) {
        bool earlier = false;
        for (int x = std::max(u_, floor + 1); x < w; ++x)
          if (untouched(x)) earlier = true;
        if (earlier) continue;
      }
      link(v, w, 1);
      edges_.push_back({v, w});
      step();
      edges_.pop_back();
      link(v, w, -1);
    }
  }

  bool untouched(int w) const { return rem_[w] == 3; }

  void link(int v, int w, int sign) {
    adj_[v][w] = adj_[w][v] = sign > 0;
    rem_[v] -= sign;
    rem_[w] -= sign;
  }

  void emit() {
    Diagram d;
    try {
      d = Diagram(support_, placements_, trivalent_, edges_);
    } catch (const StructureError&) {
      return;  // some component misses the support
    }
    auto f = canonical_form(d);
    if (!found_.count(f.key)) found_.emplace(f.key, decode_key(support_, f.key));
  }

  const SupportModel& support_;
  std::map<CanonicalKey, Diagram>& found_;
  std::vector<std::vector<int>> placements_;
  std::vector<int> trivalent_;
  std::vector<Edge> edges_;
  std::vector<int> rem_;
  std::vector<std::vector<char>> adj_;
  int u_ = 0;
  int v_ = 0;
};

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int i = 0; i <= total; ++i) {
    cur.push_back(i);
    compositions(total - i, parts, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Diagram> enumerate_diagrams(const SupportModel& support, int n) {
  if (n < 0) throw InputError("negative degree");
  if (n > kMaxEnumerationDegree)
    throw CapabilityError("enumeration supports degree <= " + std::to_string(kMaxEnumerationDegree));
  if (n == 0) return {Diagram::empty(support)};
  std::vector<Diagram> out;
  for (int t = 0; t <= 2 * n; ++t) {
    int u = 2 * n - t;
    if (u == 0) continue;
    std::map<CanonicalKey, Diagram> found;
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(u, support.size(), cur, comps);
    for (const auto& counts : comps) GraphEnumerator(support, counts, t, found).run();
    for (auto& [k, d] : found) out.push_back(std::move(d));
  }
  return out;
}

QuotientGraph quotient_diagram(const Diagram& d, const std::vector<int>& A) {
  if (A.empty()) throw PreconditionError("quotient needs a nonempty subset");
  std::vector<char> in(d.vertex_count(), 0);
  for (int v : A) {
    if (v < 0 || v >= d.vertex_count()) throw InputError("vertex out of range");
    in[v] = 1;
  }
  QuotientGraph q;
  q.image.assign(d.vertex_count(), -1);
  int next = 0;
  q.collapsed = -1;
  for (int v = 0; v < d.vertex_count(); ++v) {
    if (in[v]) {
      if (q.collapsed < 0) q.collapsed = next++;
      q.image[v] = q.collapsed;
    } else {
      q.image[v] = next++;
    }
  }
  q.vertex_count = next;
  q.on_support.assign(next, false);
  for (int v = 0; v < d.vertex_count(); ++v)
    if (d.is_univalent(v)) q.on_support[q.image[v]] = true;
  for (const auto& e : d.edges()) {
    if (in[e.a] && in[e.b]) continue;
    Edge f{q.image[e.a], q.image[e.b]};
    if (f.a > f.b) std::swap(f.a, f.b);
    q.edges.push_back(f);
  }
  std::sort(q.edges.begin(), q.edges.end());
  return q;
}

}  // namespace csi
