#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "csi/algebra.hpp"
#include "csi/diagram.hpp"

namespace csi {

// Oriented diagram with its visible edges labelled by distinct integers in
// 1..N (N = 3n - k) and directed: edge i carries half-edges 2l-1 (at tail[i])
// and 2l (at the other end), l = label[i]. Labels not used are absent edges.
struct LabelledDiagram {
  OrientedDiagram diagram;
  int n = 0;
  int k = 0;
  std::vector<int> label;  // per edge of diagram.diagram().edges()
  std::vector<int> tail;

  int N() const { return 3 * n - k; }
  int visible() const { return static_cast<int>(label.size()); }
  std::vector<int> absent_labels() const;
  int head(int edge) const;
  // Throws StructureError when a defining condition fails.
  void validate() const;

  // Labels 1..e in edge order, each edge directed from e.a to e.b, with the
  // smallest k that leaves no absent edge (k = u).
  static LabelledDiagram standard(const OrientedDiagram& d);
  static LabelledDiagram standard(const OrientedDiagram& d, int k);
};

// (N - e)! / (N! 2^e)
Rational beta_coefficient(int N, int e);

struct BetaValue {
  Rational coefficient;
  OrientedDiagram diagram;
  int n = 0;
  int k = 0;
  ClassVector value() const { return ClassVector::of(diagram, coefficient); }
};

// Throws StructureError when e > N.
BetaValue beta(const LabelledDiagram& g);

// A labelled-diagram map into (unreduced) class vectors; the gluing checks
// reduce in A_n^k.
using BetaMap = std::function<ClassVector(const LabelledDiagram&)>;
ClassVector standard_beta(const LabelledDiagram& g);

// u - s = sum over absent labels l of (th_l + tb_l), where th/tb carry the
// new leg edge with label l directed from M to the trivalent vertex and back.
struct StuPrimeInstance {
  LabelledDiagram u;
  LabelledDiagram s;
  std::vector<std::pair<LabelledDiagram, LabelledDiagram>> inserted;
};

// ih + ib = hd + hg - xd - xg; the two members of each pair differ by the
// direction of the collapsed internal edge.
struct IhxPrimeInstance {
  LabelledDiagram ih, ib, hd, hg, xd, xg;
};

struct GluingOptions {
  // Labellings per skeleton: all of them when there are at most this many,
  // otherwise this many drawn at random.
  std::int64_t max_labellings = 512;
  std::uint64_t seed = 0x5eed;
};

std::vector<StuPrimeInstance> stu_prime_family(const SupportModel& support, int n, int k,
                                               const GluingOptions& opt = {});
std::vector<IhxPrimeInstance> ihx_prime_family(const SupportModel& support, int n, int k,
                                               const GluingOptions& opt = {});

// Exact verification in A_n^k; on failure `failure` (when given) describes
// the first offending instance.
bool check_stu_prime(const std::vector<StuPrimeInstance>& family, const BetaMap& beta, const SupportModel& support,
                     int n, int k, std::string* failure = nullptr);
bool check_ihx_prime(const std::vector<IhxPrimeInstance>& family, const BetaMap& beta, const SupportModel& support,
                     int n, int k, std::string* failure = nullptr);

struct GluingReport {
  int n = 0;
  int k = 0;
  std::size_t stu_instances = 0;
  std::size_t ihx_instances = 0;
  bool stu_ok = false;
  bool ihx_ok = false;
  std::string failure;
  bool ok() const { return stu_ok && ihx_ok; }
};

GluingReport check_gluings(const SupportModel& support, int n, int k, const BetaMap& beta = standard_beta,
                           const GluingOptions& opt = {});

// beta of every principal degree-n diagram with e <= N, standard labelling.
std::vector<BetaValue> lattice_generators(const SupportModel& support, int n, int k);

}  // namespace csi
