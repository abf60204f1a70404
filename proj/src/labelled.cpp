#include "csi/labelled.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "csi/combinatorics.hpp"
#include "csi/errors.hpp"

namespace csi {

std::vector<int> LabelledDiagram::absent_labels() const {
  std::vector<bool> used(N() + 1, false);
  for (int l : label)
    if (l >= 1 && l <= N()) used[l] = true;
  std::vector<int> out;
  for (int l = 1; l <= N(); ++l)
    if (!used[l]) out.push_back(l);
  return out;
}

int LabelledDiagram::head(int edge) const {
  const Edge& e = diagram.diagram().edges().at(edge);
  return tail.at(edge) == e.a ? e.b : e.a;
}

void LabelledDiagram::validate() const {
  const Diagram& d = diagram.diagram();
  if (visible() != d.edge_count() || static_cast<int>(tail.size()) != d.edge_count())
    throw StructureError("labelling does not cover the edges");
  if (d.vertex_count() != 2 * n) throw StructureError("labelled diagram needs #V = 2n");
  if (visible() > N()) throw StructureError("more visible edges than labels (e > N)");
  auto sorted = label;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw StructureError("edge labels must be distinct");
  for (int i = 0; i < visible(); ++i) {
    if (label[i] < 1 || label[i] > N()) throw StructureError("edge label out of range 1..N");
    const Edge& e = d.edges()[i];
    if (tail[i] != e.a && tail[i] != e.b) throw StructureError("edge tail is not an endpoint");
  }
  if (d.univalent_count() != N() - visible() + k) throw StructureError("labelled diagram needs u = #E^a + k");
  if (!is_subprincipal(d)) throw StructureError("labelled diagram must be subprincipal");
}

LabelledDiagram LabelledDiagram::standard(const OrientedDiagram& d) {
  return standard(d, d.diagram().univalent_count());
}

LabelledDiagram LabelledDiagram::standard(const OrientedDiagram& d, int k) {
  LabelledDiagram g;
  g.diagram = d;
  g.n = degree(d.diagram());
  g.k = k;
  for (int i = 0; i < d.diagram().edge_count(); ++i) {
    g.label.push_back(i + 1);
    g.tail.push_back(d.diagram().edges()[i].a);
  }
  return g;
}

Rational beta_coefficient(int N, int e) {
  if (e > N || e < 0) throw StructureError("beta needs 0 <= e <= N");
  mpz_class num = 1, den = 1;
  for (int i = 2; i <= N - e; ++i) num *= i;
  for (int i = 2; i <= N; ++i) den *= i;
  den <<= e;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

BetaValue beta(const LabelledDiagram& g) {
  return {beta_coefficient(g.N(), g.visible()), g.diagram, g.n, g.k};
}

ClassVector standard_beta(const LabelledDiagram& g) { return beta(g).value(); }

namespace {

struct Labelling {
  std::vector<int> label;
  std::vector<bool> flip;
};

// Injective labellings of e edges by 1..N with `flips` free direction bits;
// exhaustive up to opt.max_labellings, sampled beyond.
std::vector<Labelling> labellings(int e, int N, int flips, const GluingOptions& opt, std::uint64_t salt) {
  std::int64_t total = std::int64_t{1} << flips;
  for (int i = 0; i < e; ++i) total *= N - i;
  auto decode = [&](std::int64_t idx) {
    Labelling l;
    l.flip.resize(flips);
    for (int i = 0; i < flips; ++i) l.flip[i] = (idx >> i) & 1;
    idx >>= flips;
    std::vector<int> pool(N);
    for (int i = 0; i < N; ++i) pool[i] = i + 1;
    for (int i = 0; i < e; ++i) {
      int base = N - i;
      int pick = static_cast<int>(idx % base);
      idx /= base;
      l.label.push_back(pool[pick]);
      pool.erase(pool.begin() + pick);
    }
    return l;
  };
  std::vector<Labelling> out;
  if (total <= opt.max_labellings) {
    for (std::int64_t i = 0; i < total; ++i) out.push_back(decode(i));
  } else {
    std::mt19937_64 rng(opt.seed ^ (salt * 0x9e3779b97f4a7c15ULL));
    std::uniform_int_distribution<std::int64_t> pick(0, total - 1);
    for (std::int64_t i = 0; i < opt.max_labellings; ++i) out.push_back(decode(pick(rng)));
  }
  return out;
}

int find_edge(const Diagram& d, int a, int b) {
  for (int i = 0; i < d.edge_count(); ++i) {
    const Edge& e = d.edges()[i];
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return i;
  }
  throw StructureError("edge correspondence lost");
}

// Where an edge of the skeleton lands in another member of the family, with
// the images of its two endpoints.
struct EdgeImage {
  int index;
  int end_a;
  int end_b;
};

LabelledDiagram labelled(const OrientedDiagram& d, int n, int k) {
  LabelledDiagram g;
  g.diagram = d;
  g.n = n;
  g.k = k;
  g.label.assign(d.diagram().edge_count(), 0);
  g.tail.assign(d.diagram().edge_count(), -1);
  return g;
}

void apply(LabelledDiagram& g, const std::vector<EdgeImage>& images, const Labelling& l) {
  for (size_t i = 0; i < images.size(); ++i) {
    g.label[images[i].index] = l.label[i];
    g.tail[images[i].index] = l.flip[i] ? images[i].end_b : images[i].end_a;
  }
}

bool valid_labelled_shape(const OrientedDiagram& d, int n, int k) {
  const Diagram& g = d.diagram();
  return g.edge_count() <= 3 * n - k && is_subprincipal(g);
}

}  // namespace

std::vector<StuPrimeInstance> stu_prime_family(const SupportModel& support, int n, int k, const GluingOptions& opt) {
  std::vector<StuPrimeInstance> out;
  const int N = 3 * n - k;
  std::uint64_t salt = 0;
  for (const auto& base : enumerate_diagrams(support, n)) {
    OrientedDiagram T0(base);
    for (int t : base.trivalent())
      for (int p : base.neighbors(t)) {
        if (!base.is_univalent(p)) continue;
        ++salt;
        auto c = T0.cyclic(t);
        while (c[0] != p) std::rotate(c.begin(), c.begin() + 1, c.end());
        const int x = c[1], y = c[2];
        const int comp = base.component(p), pos = base.rank(p);

        DiagramBuilder bt = DiagramBuilder::from(T0);
        auto resolve = [&](bool u_term, int& p1, int& p2) {
          DiagramBuilder b = DiagramBuilder::from(T0);
          b.remove_edge(p, t);
          b.remove_edge(t, x);
          b.remove_edge(t, y);
          b.remove_vertex(p);
          b.remove_vertex(t);
          p1 = b.add_univalent(comp, pos);
          p2 = b.add_univalent(comp, pos + 1);
          int to_x = u_term ? p2 : p1;
          int to_y = u_term ? p1 : p2;
          b.add_edge(to_x, x);
          b.add_edge(to_y, y);
          if (!base.is_univalent(x)) b.rename_in_cyclic(x, t, to_x);
          if (!base.is_univalent(y)) b.rename_in_cyclic(y, t, to_y);
          return b;
        };
        int p1 = 0, p2 = 0;
        DiagramBuilder bu = resolve(true, p1, p2);
        DiagramBuilder bs = resolve(false, p1, p2);
        OrientedDiagram U = bu.build(), S = bs.build(), T = bt.build();
        // All three unlabelled members must be subprincipal, whether or not
        // T carries a labelling.
        if (!valid_labelled_shape(U, n, k) || !valid_labelled_shape(S, n, k) || !is_subprincipal(T.diagram()))
          continue;
        const bool has_absent = U.diagram().edge_count() < N;

        auto cu = bu.compaction(), cs = bs.compaction(), ct = bt.compaction();
        std::vector<EdgeImage> in_u, in_s, in_t;
        for (const Edge& e : bu.edges) {
          auto image = [&](int w, bool to_s) {
            if (w != p1 && w != p2) return w;
            int other = (w == e.a) ? e.b : e.a;
            if (!to_s) return t;
            return other == x ? p1 : p2;
          };
          int sa = image(e.a, true), sb = image(e.b, true);
          int ta = image(e.a, false), tb = image(e.b, false);
          in_u.push_back({find_edge(U.diagram(), cu[e.a], cu[e.b]), cu[e.a], cu[e.b]});
          in_s.push_back({find_edge(S.diagram(), cs[sa], cs[sb]), cs[sa], cs[sb]});
          if (has_absent) in_t.push_back({find_edge(T.diagram(), ct[ta], ct[tb]), ct[ta], ct[tb]});
        }
        const int leg = has_absent ? find_edge(T.diagram(), ct[p], ct[t]) : -1;
        const int eu = static_cast<int>(in_u.size());

        for (const auto& l : labellings(eu, N, eu, opt, salt)) {
          StuPrimeInstance inst{labelled(U, n, k), labelled(S, n, k), {}};
          apply(inst.u, in_u, l);
          apply(inst.s, in_s, l);
          if (has_absent) {
            LabelledDiagram tl = labelled(T, n, k);
            apply(tl, in_t, l);
            for (int a : inst.u.absent_labels()) {
              LabelledDiagram th = tl, tb = tl;
              th.label[leg] = tb.label[leg] = a;
              th.tail[leg] = ct[p];
              tb.tail[leg] = ct[t];
              inst.inserted.emplace_back(std::move(th), std::move(tb));
            }
          }
          out.push_back(std::move(inst));
        }
      }
  }
  return out;
}

std::vector<IhxPrimeInstance> ihx_prime_family(const SupportModel& support, int n, int k, const GluingOptions& opt) {
  std::vector<IhxPrimeInstance> out;
  const int N = 3 * n - k;
  std::uint64_t salt = 1000003;
  for (const auto& base : enumerate_diagrams(support, n)) {
    OrientedDiagram I0(base);
    for (int u : base.trivalent())
      for (int v : base.neighbors(u)) {
        if (base.is_univalent(v) || v < u) continue;
        ++salt;
        OrientedDiagram H, X;
        if (!ihx_resolution(I0, u, v, H, X)) continue;
        DiagramBuilder bi = DiagramBuilder::from(I0);
        auto ci = bi.compaction();
        OrientedDiagram I = bi.build();
        if (!valid_labelled_shape(I, n, k) || !valid_labelled_shape(H, n, k) || !valid_labelled_shape(X, n, k))
          continue;
        const int cu = ci[u], cv = ci[v];
        // Internal edge first so that its direction is the free one.
        std::vector<int> order{find_edge(I.diagram(), cu, cv)};
        for (int i = 0; i < I.diagram().edge_count(); ++i)
          if (i != order[0]) order.push_back(i);
        auto images = [&](const OrientedDiagram& target) {
          std::vector<EdgeImage> im;
          for (int i : order) {
            const Edge& e = I.diagram().edges()[i];
            bool a_in = e.a == cu || e.a == cv, b_in = e.b == cu || e.b == cv;
            if (a_in == b_in) {
              im.push_back({find_edge(target.diagram(), e.a, e.b), e.a, e.b});
              continue;
            }
            int outer = a_in ? e.b : e.a;
            int inner = target.diagram().adjacent(outer, cu) ? cu : cv;
            int a = a_in ? inner : outer, b = a_in ? outer : inner;
            im.push_back({find_edge(target.diagram(), a, b), a, b});
          }
          return im;
        };
        auto in_i = images(I), in_h = images(H), in_x = images(X);
        const int e = I.diagram().edge_count();
        for (auto l : labellings(e, N, e - 1, opt, salt)) {
          l.flip.insert(l.flip.begin(), false);
          IhxPrimeInstance inst{labelled(I, n, k), {}, labelled(H, n, k), {}, labelled(X, n, k), {}};
          apply(inst.ih, in_i, l);
          apply(inst.hd, in_h, l);
          apply(inst.xd, in_x, l);
          l.flip[0] = true;
          inst.ib = inst.ih;
          inst.hg = inst.hd;
          inst.xg = inst.xd;
          apply(inst.ib, in_i, l);
          apply(inst.hg, in_h, l);
          apply(inst.xg, in_x, l);
          out.push_back(std::move(inst));
        }
      }
  }
  return out;
}

namespace {

std::string describe(const LabelledDiagram& g) {
  std::ostringstream out;
  out << format_diagram(g.diagram) << "labels:";
  for (int i = 0; i < g.visible(); ++i)
    out << " " << g.label[i] << "(" << g.diagram.diagram().name(g.tail[i]) << "->"
        << g.diagram.diagram().name(g.head(i)) << ")";
  out << "\n";
  return out.str();
}

}  // namespace

bool check_stu_prime(const std::vector<StuPrimeInstance>& family, const BetaMap& beta_map, const SupportModel& support,
                     int n, int k, std::string* failure) {
  if (family.empty()) return true;
  auto reducer = reducer_for(support, n, k);
  for (const auto& inst : family) {
    ClassVector sum = beta_map(inst.u) - beta_map(inst.s);
    for (const auto& [th, tb] : inst.inserted) sum -= beta_map(th) + beta_map(tb);
    if (!reducer->is_zero(sum)) {
      if (failure) *failure = "STU' fails for\n" + describe(inst.u);
      return false;
    }
  }
  return true;
}

bool check_ihx_prime(const std::vector<IhxPrimeInstance>& family, const BetaMap& beta_map, const SupportModel& support,
                     int n, int k, std::string* failure) {
  if (family.empty()) return true;
  auto reducer = reducer_for(support, n, k);
  for (const auto& inst : family) {
    ClassVector sum = beta_map(inst.ih) + beta_map(inst.ib) - beta_map(inst.hd) - beta_map(inst.hg) +
                      beta_map(inst.xd) + beta_map(inst.xg);
    if (!reducer->is_zero(sum)) {
      if (failure) *failure = "IHX' fails for\n" + describe(inst.ih);
      return false;
    }
  }
  return true;
}

GluingReport check_gluings(const SupportModel& support, int n, int k, const BetaMap& beta_map,
                           const GluingOptions& opt) {
  if (k < 2 || k > 2 * n)
    throw PreconditionError("gluing checks need 2 <= k <= 2n (got n=" + std::to_string(n) + ", k=" +
                            std::to_string(k) + ")");
  GluingReport r;
  r.n = n;
  r.k = k;
  auto stu = stu_prime_family(support, n, k, opt);
  auto ihx = ihx_prime_family(support, n, k, opt);
  r.stu_instances = stu.size();
  r.ihx_instances = ihx.size();
  std::string f1, f2;
  r.stu_ok = check_stu_prime(stu, beta_map, support, n, k, &f1);
  r.ihx_ok = check_ihx_prime(ihx, beta_map, support, n, k, &f2);
  r.failure = f1 + f2;
  return r;
}

std::vector<BetaValue> lattice_generators(const SupportModel& support, int n, int k) {
  std::vector<BetaValue> out;
  for (const auto& d : enumerate_diagrams(support, n)) {
    if (!is_principal(d) || d.edge_count() > 3 * n - k) continue;
    out.push_back(beta(LabelledDiagram::standard(OrientedDiagram(d), k)));
  }
  return out;
}

}  // namespace csi
