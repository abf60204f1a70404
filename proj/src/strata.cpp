#include "csi/strata.hpp"

#include <algorithm>

#include "csi/combinatorics.hpp"
#include "csi/errors.hpp"

namespace csi {

namespace {

VertexMask full_mask(int n) { return n >= 32 ? ~VertexMask{0} : (VertexMask{1} << n) - 1; }

bool laminar(VertexMask a, VertexMask b) {
  VertexMask c = a & b;
  return c == 0 || c == a || c == b;
}

void extend_family(const std::vector<VertexMask>& R, size_t from, std::vector<VertexMask>& chosen,
                   const Graph& g, std::vector<StratumFamily>& out) {
  StratumFamily f{g, chosen};
  std::sort(f.sets.begin(), f.sets.end());
  out.push_back(std::move(f));
  for (size_t i = from; i < R.size(); ++i) {
    bool ok = true;
    for (VertexMask m : chosen) ok = ok && laminar(m, R[i]);
    if (!ok) continue;
    chosen.push_back(R[i]);
    extend_family(R, i + 1, chosen, g, out);
    chosen.pop_back();
  }
}

}  // namespace

bool is_connected(const Graph& g, VertexMask subset) {
  if (subset == 0) return false;
  VertexMask reached = subset & (~subset + 1);
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& e : g.edges) {
      VertexMask a = VertexMask{1} << e.a, b = VertexMask{1} << e.b;
      if (!(subset & a) || !(subset & b)) continue;
      if ((reached & a) && !(reached & b)) reached |= b, grew = true;
      if ((reached & b) && !(reached & a)) reached |= a, grew = true;
    }
  }
  return reached == subset;
}

std::vector<VertexMask> connected_subsets(const Graph& g) {
  if (g.n > 20) throw CapabilityError("strata enumeration limited to 20 vertices");
  std::vector<VertexMask> out;
  for (VertexMask m = 1; m <= full_mask(g.n); ++m)
    if (__builtin_popcount(m) >= 2 && is_connected(g, m)) out.push_back(m);
  return out;
}

std::vector<StratumFamily> enumerate_strata(const Graph& g) {
  if (g.n < 2) throw PreconditionError("strata need at least two vertices");
  VertexMask all = full_mask(g.n);
  if (!is_connected(g, all)) throw PreconditionError("strata need a connected graph");
  std::vector<VertexMask> R;
  for (VertexMask m : connected_subsets(g))
    if (m != all) R.push_back(m);
  std::vector<StratumFamily> out;
  std::vector<VertexMask> chosen{all};
  extend_family(R, 0, chosen, g, out);
  return out;
}

Graph collision_graph(const Diagram& d) {
  Graph g{d.vertex_count(), d.edges()};
  for (int a = 0; a < d.vertex_count(); ++a)
    for (int b = a + 1; b < d.vertex_count(); ++b)
      if (d.is_univalent(a) && d.is_univalent(b) && !d.adjacent(a, b)) g.edges.push_back({a, b});
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::string face_type_name(FaceType t) {
  switch (t) {
    case FaceType::a: return "a";
    case FaceType::a_prime: return "a'";
    case FaceType::b: return "b";
    case FaceType::c1: return "c1";
    case FaceType::c2: return "c2";
    case FaceType::d: return "d";
    case FaceType::e: return "e";
  }
  return "?";
}

FaceLabel classify_total_collapse(const Diagram& d) {
  if (d.univalent_count() == 0) throw PreconditionError("total collapse needs univalent vertices");
  int occupied = 0;
  for (const auto& p : d.placements()) occupied += !p.empty();
  if (occupied > 1) throw PreconditionError("total collapse would collide different components");
  FaceLabel f;
  f.diagram = d;
  for (int v = 0; v < d.vertex_count(); ++v) f.A.push_back(v);
  auto c = half_edge_count_check(d, f.A);
  f.inner = c.inner;
  f.outer = c.outer;
  f.type = FaceType::a;
  f.degenerate = is_degenerate_face(f);
  return f;
}

FaceLabel classify_face(const Diagram& d, std::vector<int> A) {
  std::sort(A.begin(), A.end());
  A.erase(std::unique(A.begin(), A.end()), A.end());
  int V = d.vertex_count();
  if (A.size() < 2) throw PreconditionError("face subset needs at least two vertices");
  if (static_cast<int>(A.size()) == V) throw PreconditionError("A = V is the total collapse face");
  if (V > 20) throw CapabilityError("face classification limited to 20 vertices");
  VertexMask mask = 0;
  for (int v : A) {
    if (v < 0 || v >= V) throw InputError("vertex out of range");
    mask |= VertexMask{1} << v;
  }
  if (!is_connected(collision_graph(d), mask)) throw PreconditionError("A is not connected");

  std::vector<int> onM;
  for (int v : A)
    if (d.is_univalent(v)) onM.push_back(v);
  if (!onM.empty()) {
    int comp = d.component(onM[0]);
    for (int v : onM)
      if (d.component(v) != comp) throw PreconditionError("A collides points of different components");
    const auto& p = d.placements()[comp];
    int k = static_cast<int>(p.size()), m = static_cast<int>(onM.size());
    auto in_A = [&](int v) { return std::binary_search(onM.begin(), onM.end(), v); };
    bool consecutive = false;
    if (d.support().is_line(comp)) {
      int lo = k, hi = -1;
      for (int v : onM) lo = std::min(lo, d.rank(v)), hi = std::max(hi, d.rank(v));
      consecutive = hi - lo + 1 == m;
    } else {
      for (int s = 0; s < k && !consecutive; ++s) {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) ok = in_A(p[(s + i) % k]);
        consecutive = ok;
      }
    }
    if (!consecutive) throw PreconditionError("univalent vertices of A are not consecutive on M");
  }

  FaceLabel f;
  f.diagram = d;
  f.A = A;
  auto c = half_edge_count_check(d, A);
  f.inner = c.inner;
  f.outer = c.outer;
  bool contains_U = static_cast<int>(onM.size()) == d.univalent_count();
  bool inside_T = onM.empty();
  if (contains_U)
    f.type = FaceType::b;
  else if (c.outer == 0)
    f.type = FaceType::a_prime;
  else if (A.size() == 2)
    f.type = inside_T ? FaceType::c1 : FaceType::c2;
  else
    f.type = FaceType::d;
  f.degenerate = is_degenerate_face(f);
  return f;
}

bool is_degenerate_face(const FaceLabel& f) {
  const Diagram& d = f.diagram;
  switch (f.type) {
    case FaceType::a: {
      Graph g{d.vertex_count(), d.edges()};
      return !is_connected(g, full_mask(d.vertex_count()));
    }
    case FaceType::a_prime: {
      Graph g{d.vertex_count(), d.edges()};
      VertexMask m = 0;
      for (int v : f.A) m |= VertexMask{1} << v;
      return !is_connected(g, m);
    }
    case FaceType::b:
      return true;
    case FaceType::c1:
    case FaceType::c2:
      return false;
    case FaceType::e:
      return true;
    case FaceType::d: {
      auto inA = [&](int v) { return std::binary_search(f.A.begin(), f.A.end(), v); };
      bool inside_T = true;
      for (int v : f.A) inside_T = inside_T && !d.is_univalent(v);
      for (const auto& e : d.edges()) {
        if (inA(e.a) == inA(e.b)) continue;
        int v = inA(e.a) ? e.a : e.b;
        int inner_at_v = 0;
        for (int w : d.neighbors(v))
          if (inA(w)) ++inner_at_v;
        if (inner_at_v < 2) return true;
      }
      if (inside_T) return !(f.outer == 3 || f.outer == 4);
      return !(f.outer == 1 || f.outer == 2);
    }
  }
  return true;
}

std::vector<FaceLabel> enumerate_faces(const Diagram& d) {
  std::vector<FaceLabel> out;
  if (d.univalent_count() == 0) return out;
  try {
    out.push_back(classify_total_collapse(d));
  } catch (const PreconditionError&) {
  }
  Graph g = collision_graph(d);
  VertexMask all = full_mask(d.vertex_count());
  for (VertexMask m : connected_subsets(g)) {
    if (m == all) continue;
    std::vector<int> A;
    for (int v = 0; v < d.vertex_count(); ++v)
      if (m >> v & 1) A.push_back(v);
    try {
      out.push_back(classify_face(d, A));
    } catch (const PreconditionError&) {
    }
  }
  return out;
}

}  // namespace csi
