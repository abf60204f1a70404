#pragma once

#include <array>
#include <compare>
#include <iosfwd>
#include <string>
#include <vector>

namespace csi {

enum class ComponentKind { circle, line };

// The one-manifold carrying the univalent vertices. Components are
// labelled and never permuted by automorphisms.
class SupportModel {
 public:
  SupportModel() = default;
  explicit SupportModel(std::vector<std::string> names, ComponentKind kind = ComponentKind::circle);
  SupportModel(std::vector<std::string> names, std::vector<ComponentKind> kinds);

  static SupportModel circle() { return SupportModel({"S1"}); }
  static SupportModel circles(int count);
  static SupportModel line() { return SupportModel({"J"}, ComponentKind::line); }
  // "S1", "J", "R" or "<k>S1" for k labelled circles.
  static SupportModel parse(const std::string& text);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int c) const { return names_.at(c); }
  ComponentKind kind(int c) const { return kinds_.at(c); }
  bool is_line(int c) const { return kinds_.at(c) == ComponentKind::line; }
  int index_of(const std::string& name) const;
  std::string describe() const;

  friend bool operator==(const SupportModel&, const SupportModel&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<ComponentKind> kinds_;
};

struct Edge {
  int a = 0;
  int b = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Unoriented diagram. Vertex ids are 0..V-1; each univalent vertex sits on
// one component at a rank in that component's (cyclic or linear) order.
class Diagram {
 public:
  Diagram() = default;
  // Throws StructureError unless the data forms a valid diagram.
  Diagram(SupportModel support, std::vector<std::vector<int>> placements, std::vector<int> trivalent,
          std::vector<Edge> edges, std::vector<std::string> names = {});

  static Diagram empty(SupportModel support);

  const SupportModel& support() const { return support_; }
  int vertex_count() const { return static_cast<int>(component_.size()); }
  int univalent_count() const { return univalent_; }
  int trivalent_count() const { return vertex_count() - univalent_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool is_univalent(int v) const { return component_.at(v) >= 0; }
  int component(int v) const { return component_.at(v); }
  int rank(int v) const { return rank_.at(v); }
  const std::vector<std::vector<int>>& placements() const { return placements_; }
  const std::vector<int>& trivalent() const { return trivalent_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_.at(v); }
  bool adjacent(int v, int w) const;
  std::string name(int v) const;

 private:
  SupportModel support_;
  std::vector<std::vector<int>> placements_;
  std::vector<int> trivalent_;
  std::vector<Edge> edges_;
  std::vector<std::string> names_;
  std::vector<int> component_;
  std::vector<int> rank_;
  std::vector<std::vector<int>> adjacency_;
  int univalent_ = 0;
};

// Orientation data: a cyclic order of the three neighbours of every
// trivalent vertex (no double edges, so neighbours name the edges) and a
// local orientation bit for every univalent vertex (+1 agrees with M).
class OrientedDiagram {
 public:
  OrientedDiagram() = default;
  // Default orientation: ascending neighbour ids, all bits +1.
  explicit OrientedDiagram(Diagram d);

  const Diagram& diagram() const { return base_; }
  const std::array<int, 3>& cyclic(int t) const { return cyclic_.at(t); }
  int bit(int u) const { return bit_.at(u); }
  void set_cyclic(int t, std::array<int, 3> order);
  void set_bit(int u, int bit);
  // Reverse the orientation at one vertex.
  OrientedDiagram flipped(int v) const;

 private:
  Diagram base_;
  std::vector<std::array<int, 3>> cyclic_;
  std::vector<int> bit_;
};

// Mutable scratch form of an oriented diagram with sparse vertex ids;
// build() compacts ids and validates.
struct DiagramBuilder {
  SupportModel support;
  std::vector<std::vector<int>> placements;
  std::vector<int> trivalent;
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> cyclic;  // indexed by id, trivalent only
  std::vector<int> bits;                   // indexed by id, univalent only
  int next_id = 0;

  static DiagramBuilder from(const OrientedDiagram& d);
  int add_univalent(int comp, int position, int bit = 1);
  int add_trivalent(std::array<int, 3> order);
  void remove_edge(int a, int b);
  // Drops v from the placement or trivalent lists; edges are left alone.
  void remove_vertex(int v);
  void add_edge(int a, int b) { edges.push_back({a, b}); }
  // Replaces neighbour `from` by `to` in the cyclic order at t.
  void rename_in_cyclic(int t, int from, int to);
  // Throws StructureError when the result is not a valid diagram.
  OrientedDiagram build() const;
  // Old id -> id in build()'s output (-1 for removed vertices).
  std::vector<int> compaction() const;
};

// Permutation sign of a triple relative to ascending order (+1 for the
// three cyclic rotations of the sorted triple).
int triple_sign(int a, int b, int c);

// Text format:
//   component <id>: v1 v2 ...     circle component, univalent names in order
//   line <id>: v1 v2 ...          line component
//   trivalent: t1 t2 ...
//   edges: a-b c-d ...
//   orient <t>: x y z             cyclic order at t, given by neighbour names
//   reversed: u1 u2 ...           univalent vertices with bit -1
// '#' starts a comment.
OrientedDiagram parse_diagram(const std::string& text);
std::string format_diagram(const OrientedDiagram& d);
std::string format_diagram(const Diagram& d);
// Splits a stream of records separated by lines consisting of "---".
std::vector<std::string> split_records(const std::string& text);
std::string read_file(const std::string& path);

}  // namespace csi
