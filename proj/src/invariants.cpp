#include "csi/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "csi/combinatorics.hpp"
#include "csi/errors.hpp"
#include "csi/projection.hpp"

namespace csi {

double Uncertain::std_error() const {
  double s = 0;
  for (const auto& [id, g] : grad) s += g * g;
  return std::sqrt(s);
}

Uncertain& Uncertain::operator+=(const Uncertain& o) {
  value += o.value;
  for (const auto& [id, g] : o.grad) grad[id] += g;
  return *this;
}

Uncertain operator*(double c, Uncertain a) {
  a.value *= c;
  for (auto& [id, g] : a.grad) g *= c;
  return a;
}

Uncertain operator*(const Uncertain& a, const Uncertain& b) {
  Uncertain r = b.value * a;
  r += a.value * b;
  r.value = a.value * b.value;
  return r;
}

namespace {

constexpr int kSourcesPerDegree = 100000;

SeriesPart empty_part(const SupportModel& support, int n, int k) {
  auto R = reducer_for(support, n, k);
  SeriesPart p;
  p.degree = n;
  p.k = k;
  p.basis = R->basis();
  p.coefficient.assign(p.basis.size(), Uncertain{});
  return p;
}

ClassVector class_of(const SupportModel& support, const CanonicalKey& key) {
  return ClassVector::of(representative(support, key));
}

}  // namespace

SeriesPart assemble_part(const SupportModel& support, int n, int k, const std::vector<DiagramIntegral>& integrals,
                         int source_base) {
  SeriesPart p = empty_part(support, n, k);
  auto R = reducer_for(support, n, k);
  for (std::size_t i = 0; i < integrals.size(); ++i) {
    const auto& di = integrals[i];
    auto coords = R->coordinates(ClassVector::of(di.diagram));
    Uncertain I = Uncertain::measured(di.estimate.value, di.estimate.std_error, source_base + static_cast<int>(i));
    for (std::size_t b = 0; b < coords.size(); ++b)
      if (coords[b] != 0) p.coefficient[b] += (coords[b].get_d() / di.automorphisms) * I;
  }
  return p;
}

ZResult z_series(const LinkCurve& c, int max_degree, const IntegrateOptions& opt) {
  if (max_degree < 0 || max_degree > 3) throw CapabilityError("Z is available up to degree 3");
  ZResult r;
  r.z.support = c.support();
  r.integrals.resize(max_degree + 1);
  SeriesPart unit = empty_part(r.z.support, 0, 0);
  for (auto& u : unit.coefficient) u = Uncertain::exact(1);
  r.z.parts.push_back(unit);
  for (int n = 1; n <= max_degree; ++n) {
    r.integrals[n] = integrate_degree(c, n, opt);
    r.z.parts.push_back(assemble_part(r.z.support, n, 0, r.integrals[n], n * kSourcesPerDegree));
  }
  r.framing.assign(c.size(), Uncertain{});
  if (max_degree >= 1) {
    for (std::size_t i = 0; i < r.integrals[1].size(); ++i) {
      const auto& di = r.integrals[1][i];
      const auto& pl = di.diagram.diagram().placements();
      for (int m = 0; m < c.size(); ++m)
        if (pl[m].size() == 2)
          r.framing[m] = Uncertain::measured(di.estimate.value, di.estimate.std_error,
                                             kSourcesPerDegree + static_cast<int>(i));
    }
  }
  return r;
}

GradedVector anomaly_series(int max_degree) {
  GradedVector a;
  for (int d = 0; d <= max_degree; ++d) a.emplace_back(SupportModel::line(), d);
  if (max_degree >= 1) a[1] = ClassVector::of(line_theta(), Rational(1, 2));
  return a;
}

Series apply_exp(const Series& s, const std::vector<Uncertain>& x, const GradedVector& alpha) {
  const int D = s.max_degree();
  Series cur = s;
  for (int m = 0; m < static_cast<int>(x.size()); ++m) {
    Series next;
    next.support = s.support;
    for (int d = 0; d <= D; ++d) next.parts.push_back(empty_part(s.support, d, cur.parts[d].k));
    std::vector<Uncertain> xp{Uncertain::exact(1)};
    for (int j = 1; j <= D; ++j) xp.push_back(xp.back() * x[m]);
    for (int d = 0; d <= D; ++d) {
      const SeriesPart& part = cur.parts[d];
      for (std::size_t b = 0; b < part.basis.size(); ++b) {
        GradedVector v;
        for (int e = 0; e <= D; ++e) v.emplace_back(s.support, e);
        v[d] = class_of(s.support, part.basis[b]);
        auto terms = exp_action_terms(alpha, v, m, D);
        for (int d2 = d; d2 <= D; ++d2) {
          auto R = reducer_for(s.support, d2, next.parts[d2].k);
          for (int j = 0; j <= D; ++j) {
            if (terms[d2][j].is_zero()) continue;
            auto coords = R->coordinates(terms[d2][j]);
            Uncertain f = xp[j] * part.coefficient[b];
            for (std::size_t i = 0; i < coords.size(); ++i)
              if (coords[i] != 0) next.parts[d2].coefficient[i] += coords[i].get_d() * f;
          }
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Series z0(const ZResult& z, const GradedVector& alpha) {
  std::vector<Uncertain> x;
  for (const auto& f : z.framing) x.push_back(-1.0 * f);
  return apply_exp(z.z, x, alpha);
}

namespace {

OrientedDiagram chord_between(const LinkCurve& c, int a, int b) {
  if (a < 0 || b < 0 || a >= c.size() || b >= c.size()) throw InputError("component index out of range");
  DiagramBuilder db;
  db.support = c.support();
  db.placements.resize(c.size());
  int u = db.add_univalent(a, 0);
  int v = db.add_univalent(b, a == b ? 1 : 0);
  db.add_edge(u, v);
  return db.build();
}

}  // namespace

LinkingResult linking_number(const LinkCurve& c, int a, int b, const IntegrateOptions& opt) {
  if (a == b) throw InputError("linking number needs two distinct components");
  LinkingResult r;
  r.estimate = integrate_diagram(chord_between(c, a, b), c, opt);
  r.nearest = static_cast<int>(std::lround(r.estimate.value));
  r.crossing_oracle = linking_number_by_crossings(project(c), a, b);
  r.warning = std::fabs(r.estimate.value - r.nearest) > 0.1 || r.nearest != r.crossing_oracle;
  return r;
}

MCEstimate self_linking(const LinkCurve& c, int m, const IntegrateOptions& opt) {
  return integrate_diagram(chord_between(c, m, m), c, opt);
}

CanonicalKey par_key() { return oriented_class(parse_diagram("component S1: a b c d\nedges: a-b c-d\n")).key; }
CanonicalKey cr_key() { return oriented_class(parse_diagram("component S1: a b c d\nedges: a-c b-d\n")).key; }

V2Result v2(const LinkCurve& c, const IntegrateOptions& opt) {
  if (c.size() != 1) throw InputError("v2 needs a knot (one component)");
  V2Result r;
  r.z = z_series(c, 2, opt);
  const SeriesPart& p = r.z.z.parts[2];
  auto it = std::find(p.basis.begin(), p.basis.end(), cr_key());
  if (it == p.basis.end() || std::find(p.basis.begin(), p.basis.end(), par_key()) == p.basis.end())
    throw StructureError("degree-2 basis is not {par, cr}");
  r.value = p.coefficient[it - p.basis.begin()] + Uncertain::exact(1.0 / 24);
  r.nearest = static_cast<int>(std::lround(r.value.value));
  r.warning = std::fabs(r.value.value - r.nearest) > 3 * r.value.std_error();
  return r;
}

std::vector<std::vector<Rational>> lattice_basis(const std::vector<std::vector<Rational>>& generators) {
  if (generators.empty()) return {};
  const std::size_t d = generators[0].size();
  mpz_class den = 1;
  for (const auto& g : generators)
    for (const auto& q : g) den = lcm(den, q.get_den());
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& g : generators) {
    std::vector<mpz_class> r(d);
    for (std::size_t j = 0; j < d; ++j) {
      Rational v = g[j] * den;
      r[j] = v.get_num();
    }
    rows.push_back(std::move(r));
  }
  std::size_t top = 0;
  for (std::size_t col = 0; col < d && top < rows.size(); ++col) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[top], rows[best]);
      bool others = false;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[top][col].get_mpz_t());
        for (std::size_t j = col; j < d; ++j) rows[i][j] -= q * rows[top][j];
        if (rows[i][col] != 0) others = true;
      }
      if (!others) break;
    }
    if (rows[top][col] == 0) continue;
    if (rows[top][col] < 0)
      for (auto& x : rows[top]) x = -x;
    for (std::size_t i = 0; i < top; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[top][col].get_mpz_t());
      for (std::size_t j = col; j < d; ++j) rows[i][j] -= q * rows[top][j];
    }
    ++top;
  }
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < top; ++i) {
    std::vector<Rational> r(d);
    for (std::size_t j = 0; j < d; ++j) {
      r[j] = Rational(rows[i][j], den);
      r[j].canonicalize();
    }
    out.push_back(std::move(r));
  }
  return out;
}

LatticeReport lattice_check(const ZResult& z, int n, int k) {
  if (n < 1 || n >= static_cast<int>(z.integrals.size())) throw PreconditionError("Z is not available at that degree");
  if (k < 2 || k > 2 * n) throw PreconditionError("lattice check needs 2 <= k <= 2n");
  LatticeReport r;
  r.n = n;
  r.k = k;
  for (const auto& f : z.framing) {
    r.framings.push_back(f.value);
    if (std::fabs(f.value - std::round(f.value)) > 0.05)
      throw PreconditionError("framing I(theta) = " + std::to_string(f.value) + " is not within 0.05 of an integer");
  }
  const SupportModel& sup = z.z.support;
  auto R = reducer_for(sup, n, k);
  std::vector<std::vector<Rational>> gens;
  for (const auto& b : lattice_generators(sup, n, k)) gens.push_back(R->coordinates(b.value()));
  r.lattice_basis = lattice_basis(gens);

  SeriesPart zk = assemble_part(sup, n, k, z.integrals[n], n * kSourcesPerDegree);
  std::vector<Uncertain> rest = zk.coefficient;
  for (const auto& row : r.lattice_basis) {
    std::size_t piv = 0;
    while (row[piv] == 0) ++piv;
    Uncertain c = (1.0 / row[piv].get_d()) * rest[piv];
    for (std::size_t j = 0; j < row.size(); ++j)
      if (row[j] != 0) rest[j] -= row[j].get_d() * c;
    r.coordinates.push_back(c);
  }
  for (const auto& u : rest) r.outside.push_back(u.value);
  r.ok = true;
  for (const auto& c : r.coordinates) {
    long nearest = std::lround(c.value);
    r.nearest.push_back(nearest);
    double res = std::fabs(c.value - nearest);
    double se = c.std_error();
    r.worst_residual = std::max(r.worst_residual, res);
    if (se > 0) r.worst_sigma = std::max(r.worst_sigma, res / se);
    if (!(res <= 3 * se || res <= 1e-9)) r.ok = false;
  }
  for (const auto& u : rest)
    if (std::fabs(u.value) > 3 * u.std_error() + 1e-9) r.ok = false;
  return r;
}

LatticeReport lattice_check(const LinkCurve& c, int n, int k, const IntegrateOptions& opt) {
  return lattice_check(z_series(c, n, opt), n, k);
}

}  // namespace csi
