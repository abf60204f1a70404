// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "csi/anomaly.hpp"
#include "csi/invariants.hpp"
#include "csi/projection.hpp"
#include "csi/strata.hpp"
#include "oracles.hpp"

using namespace csi;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

IntegrateOptions options(double samples, std::uint64_t seed) {
  IntegrateOptions o;
  o.mc.samples = static_cast<std::uint64_t>(samples);
  o.mc.seed = seed;
  return o;
}

OrientedDiagram knot(const std::string& text) { return parse_diagram(text); }

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::string pm(double v, double se) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f +- %.5f", v, se);
  return buf;
}

void criterion1(Verdict& v) {
  const auto S1 = SupportModel::circle();
  v.require(enumerate_diagrams(S1, 0).size() == 1, "one diagram at n = 0");
  v.require(enumerate_diagrams(S1, 1).size() == 1, "one diagram at n = 1");
  long subsets = 0, diagrams = 0;
  bool identity = true, principal = true;
  for (int n = 0; n <= 3; ++n)
    for (const auto& d : enumerate_diagrams(S1, n)) {
      ++diagrams;
      int V = d.vertex_count();
      for (unsigned mask = 1; mask < (1u << V); ++mask) {
        std::vector<int> A;
        for (int x = 0; x < V; ++x)
          if (mask >> x & 1) A.push_back(x);
        try {
          half_edge_count_check(d, A);
        } catch (const std::exception&) {
          identity = false;
        }
        ++subsets;
      }
      principal = principal && is_principal(d) == oracle::brute_principal(d, false) &&
                  is_subprincipal(d) == oracle::brute_principal(d, true);
    }
  v.require(identity, "half-edge identity");
  v.require(principal, "principality against brute force");
  v.detail << diagrams << " diagrams, " << subsets << " subsets";
}

void criterion2(Verdict& v) {
  int checks = 0;
  for (const auto& M : {SupportModel::circle(), SupportModel::line()})
    for (int n = 1; n <= 3; ++n)
      for (int k = 2; k <= 2 * n; ++k) {
        auto r = check_gluings(M, n, k);
        ++checks;
        v.require(r.ok(), M.describe() + " n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
  const auto J = SupportModel::line();
  bool commutative = true;
  std::vector<std::vector<Diagram>> by_degree;
  for (int n = 0; n <= 3; ++n) by_degree.push_back(enumerate_diagrams(J, n));
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j) {
      auto red = reducer_for(J, i + j);
      for (const auto& a : by_degree[i])
        for (const auto& b : by_degree[j]) {
          auto x = ClassVector::of(OrientedDiagram(a)), y = ClassVector::of(OrientedDiagram(b));
          commutative = commutative && red->is_zero(product(x, y) - product(y, x));
        }
    }
  v.require(commutative, "product commutativity");
  bool place_free = true;
  const auto S1 = SupportModel::circle();
  for (int da = 1; da <= 3; ++da)
    for (const auto& a : enumerate_diagrams(J, da)) {
      OrientedDiagram ao(a);
      bool connected = true;
      try {
        make_wplan(ao);
      } catch (const InputError&) {
        connected = false;
      }
      if (!connected) continue;
      for (int dv = 0; da + dv <= 3; ++dv) {
        auto red = reducer_for(S1, da + dv);
        for (const auto& d : enumerate_diagrams(S1, dv)) {
          auto vc = ClassVector::of(OrientedDiagram(d));
          auto ac = ClassVector::of(ao);
          auto first = insert(ac, vc, 0, 0);
          for (int pos = 1; pos <= d.univalent_count(); ++pos)
            place_free = place_free && red->is_zero(insert(ac, vc, 0, pos) - first);
        }
      }
    }
  v.require(place_free, "insertion place independence");
  bool four_t = true;
  for (int n = 2; n <= 3; ++n) {
    oracle::FourTerm ft(n);
    auto red = reducer_for(S1, n);
    for (const auto& rel : ft.relations) {
      ClassVector x(S1, n);
      for (auto [c, coef] : rel)
        x.add(OrientedDiagram(oracle::FourTerm::to_diagram(ft.classes[c])), Rational(static_cast<long>(coef)));
      four_t = four_t && red->is_zero(x);
    }
  }
  v.require(four_t, "4T from STU");
  v.detail << checks << " gluing checks";
}

void criterion3(Verdict& v) {
  auto hopf = linking_number(catalog("hopf-link"), 0, 1, options(1e6, 31));
  auto unlink = linking_number(catalog("unlink-2"), 0, 1, options(1e6, 32));
  v.require(std::fabs(hopf.estimate.value - 1) <= 0.02, "hopf within 0.02 of 1");
  v.require(std::fabs(unlink.estimate.value) <= 0.02, "unlink within 0.02 of 0");
  v.require(hopf.nearest == hopf.crossing_oracle && unlink.nearest == unlink.crossing_oracle, "crossing oracle");
  v.detail << "hopf " << pm(hopf.estimate.value, hopf.estimate.std_error) << " (oracle " << hopf.crossing_oracle
           << "), unlink " << pm(unlink.estimate.value, unlink.estimate.std_error) << " (oracle "
           << unlink.crossing_oracle << ")";
}

void criterion4(Verdict& v) {
  LinkCurve c = catalog("unknot-round");
  IntegrandPlan p = make_plan(LabelledDiagram::standard(knot("component S1: a b\nedges: a-b\n")), c);
  Stream rng(41, 0);
  Configuration x;
  int nonzero = 0, points = 0;
  while (points < 1000) {
    sample_configuration(p, c, rng, x);
    if (norm(x.point[0] - x.point[1]) < 1e-9) continue;
    ++points;
    nonzero += integrand(p, x) != 0.0;
  }
  v.require(nonzero == 0, "integrand exactly zero");
  v.detail << points << " configurations, " << nonzero << " nonzero";
}

void criterion5(Verdict& v) {
  auto e = integrate_diagram(knot("component S1: a b c\ntrivalent: t\nedges: a-t b-t c-t\n"), catalog("unknot-round"),
                             options(1e7, 51));
  v.require(std::fabs(e.value - 0.125) <= 0.01, "within 0.01 of 1/8");
  v.detail << "I = " << pm(e.value, e.std_error) << ", rejection rate " << e.rejection_rate();
}

void criterion6(Verdict& v) {
  const std::pair<const char*, int> knots[] = {
      {"unknot-round", 0}, {"trefoil", 1}, {"figure8", oracle::gauss_diagram_v2(catalog("figure8"))}};
  for (auto [name, expected] : knots) {
    V2Result r = v2(catalog(name), options(4e6, 61));
    v.require(std::fabs(r.value.value - expected) <= 0.05, std::string(name) + " within 0.05");
    v.detail << name << " " << pm(r.value.value, r.value.std_error()) << " (expected " << expected << ") ";
  }
}

void criterion7(Verdict& v) {
  MCOptions o = options(1e6, 71).mc;
  MCEstimate f = f_gamma(line_diagram("theta"), o);
  AlphaResult a = anomaly_alpha(1, o);
  double a1 = a.alpha.parts[1].coefficient[0].value;
  v.require(std::fabs(f.value - 1) <= 0.005, "f_theta within 0.005 of 1");
  v.require(std::fabs(a1 - 0.5) <= 0.005, "alpha_1 within 0.005 of 1/2");
  v.detail << "f_theta " << pm(f.value, f.std_error) << ", alpha_1 " << a1;
}

void criterion8(Verdict& v) {
  // With loops and double edges excluded, the tripod is the only connected
  // degree-2 line diagram.
  int connected = 0;
  for (const auto& d : enumerate_diagrams(SupportModel::line(), 2)) {
    try {
      make_wplan(OrientedDiagram(d));
      ++connected;
    } catch (const InputError&) {
    }
  }
  v.require(connected == 1, "one connected degree-2 line diagram");
  MCEstimate f = f_gamma(line_diagram("tripod"), options(1e7, 81).mc);
  v.require(f.std_error <= 0.01, "stderr at most 0.01");
  v.require(std::fabs(f.value) <= 3 * f.std_error + 1e-12, "within 3 stderr of 0");
  v.detail << connected << " diagram(s); tripod f = " << pm(f.value, f.std_error);
}

void criterion9(Verdict& v) {
  MCEstimate a1 = f_gamma(line_diagram("a1"), options(1e7, 91).mc);
  MCEstimate a3 = f_gamma(line_diagram("a3"), options(1e7, 92).mc);
  double se = std::hypot(a1.std_error, a3.std_error);
  v.require(std::fabs(a1.value - a3.value) <= 3 * se, "f_a1 - f_a3 within 3 combined stderr");
  v.require(a1.std_error <= 0.05 && a3.std_error <= 0.05, "stderr at most 0.05");
  int region_ok = 0, total = 0;
  for (const char* name : {"a1", "a3"}) {
    WPlan p = make_wplan(line_diagram(name));
    Stream rng(93, 0);
    WConfiguration x;
    Region want = std::string(name) == "a1" ? Region::a1 : Region::a3;
    for (int i = 0; i < 1000; ++i) {
      sample_w(p, rng, x);
      RegionVerdict r = degree3_region_predicates(degree3_edges(name, x, p));
      region_ok += r.square && r.square_swapped && r.region == want;
      ++total;
    }
  }
  v.require(region_ok == total, "forward images in their regions");
  std::mt19937_64 rng(94);
  std::normal_distribution<double> g;
  auto unit = [&] { return normalized(Vec3{g(rng), g(rng), g(rng)}); };
  int substitution_ok = 0, squares = 0;
  while (squares < 1000) {
    Vec3 e1 = unit(), e2 = unit(), e3 = unit(), e4 = unit();
    bool sq = is_square(e1, e2, e3, e4);
    if (!sq) continue;
    ++squares;
    substitution_ok += is_square(e2, e3, -e1, -e4) && orientation_sign(-e1, -e2, -e3) == -orientation_sign(e1, e2, e3);
  }
  v.require(substitution_ok == squares, "square substitution symmetry");
  const auto J = SupportModel::line();
  auto red = reducer_for(J, 3);
  v.require(red->is_zero(ClassVector::of(anomaly_diagram("a2"))), "[a2] = 0");
  v.require(red->is_zero(ClassVector::of(anomaly_diagram("a3")) + ClassVector::of(anomaly_diagram("a1"))),
            "[a3] = -[a1]");
  v.detail << "f_a1 " << pm(a1.value, a1.std_error) << ", f_a3 " << pm(a3.value, a3.std_error) << "; regions "
           << region_ok << "/" << total << ", substitution " << substitution_ok << "/" << squares;
}

void criterion10(Verdict& v) {
  for (const char* name : {"unknot-round", "unknot-planar-perturbed", "trefoil", "hopf-link"}) {
    for (const auto& row : framing_report(catalog(name), options(4e6, 101))) {
      v.require(row.residual <= 0.02, std::string(name) + " component " + std::to_string(row.component));
      v.detail << name << "[" << row.component << "] " << row.self_linking.value << " + 2(" << row.disc.value
               << ") -> " << row.nearest << " ";
    }
  }
}

void criterion11(Verdict& v) {
  Series s[2];
  const char* names[2] = {"trefoil", "trefoil-alt"};
  for (int i = 0; i < 2; ++i) {
    ZResult z = z_series(catalog(names[i]), 2, options(4e6, 111));
    s[i] = z0(z, anomaly_series(2));
  }
  for (int d = 1; d <= 2; ++d)
    for (std::size_t b = 0; b < s[0].parts[d].coefficient.size(); ++b) {
      const auto &x = s[0].parts[d].coefficient[b], &y = s[1].parts[d].coefficient[b];
      double se = std::hypot(x.std_error(), y.std_error());
      v.require(std::fabs(x.value - y.value) <= 3 * se + 1e-12, "degree " + std::to_string(d) + " coefficient");
      v.detail << "Z0_" << d << "[" << b << "] " << pm(x.value, x.std_error()) << " vs " << pm(y.value, y.std_error())
               << " ";
    }
}

void criterion12(Verdict& v) {
  for (const char* name : {"unknot-round", "trefoil-framed", "hopf-link"}) {
    ZResult z = z_series(catalog(name), 2, options(2e6, 121));
    std::vector<std::pair<int, int>> cases{{1, 2}, {2, 2}, {2, 3}, {2, 4}};
    for (auto [n, k] : cases) {
      LatticeReport r = lattice_check(z, n, k);
      v.require(r.ok, std::string(name) + " n=" + std::to_string(n) + " k=" + std::to_string(k));
      v.detail << name << " n" << n << "k" << k << " worst " << r.worst_sigma << "sd ";
    }
  }
}

void criterion13(Verdict& v) {
  LinkCurve c = catalog("figure8");
  OrientedDiagram tripod = knot("component S1: a b c\ntrivalent: t\nedges: a-t b-t c-t\n");
  auto run = [&](int workers, Kernel k) {
    IntegrateOptions o = options(2e5, 131);
    o.mc.workers = workers;
    o.kernel = k;
    return integrate_diagram(tripod, c, o);
  };
  Kernel fast = cpu_has_avx2() ? Kernel::avx2 : Kernel::scalar;
  auto a = run(1, fast), b = run(3, fast), s = run(2, Kernel::scalar), again = run(1, fast);
  v.require(bit_equal(a.value, b.value) && bit_equal(a.std_error, b.std_error), "integral across workers");
  v.require(bit_equal(a.value, again.value), "integral rerun");
  v.require(bit_equal(a.value, s.value), "integral across kernels");
  MCOptions o1 = options(5e4, 132).mc, o3 = o1;
  o1.workers = 1;
  o3.workers = 3;
  auto f1 = f_gamma(line_diagram("a2"), o1), f3 = f_gamma(line_diagram("a2"), o3);
  v.require(bit_equal(f1.value, f3.value) && bit_equal(f1.std_error, f3.std_error), "anomaly across workers");
  v.detail << "tripod " << a.value << ", f_a2 " << f1.value;
}

}  // namespace

int main(int argc, char** argv) {
  // optional arguments select criteria by number
  const std::vector<std::function<void(Verdict&)>> criteria{criterion1, criterion2,  criterion3,  criterion4, criterion5,
                                                            criterion6, criterion7,  criterion8,  criterion9, criterion10,
                                                            criterion11, criterion12, criterion13};
  int failed = 0;
  std::vector<bool> selected(criteria.size(), argc < 2);
  for (int a = 1; a < argc; ++a) {
    std::size_t n = std::strtoul(argv[a], nullptr, 10);
    if (n >= 1 && n <= criteria.size()) selected[n - 1] = true;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i](v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, v.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
