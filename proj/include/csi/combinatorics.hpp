#pragma once

#include <vector>

#include "csi/diagram.hpp"

namespace csi {

int degree(const Diagram& d);

struct HalfEdgeCount {
  int inner = 0;  // #E_A: edges with both ends in A
  int outer = 0;  // #E'_A: edges with exactly one end in A
};

// Counts E_A and E'_A and asserts 2#E_A + #E'_A = 3#(A∩T) + #(A∩U).
HalfEdgeCount half_edge_count_check(const Diagram& d, const std::vector<int>& A);

bool is_principal(const Diagram& d);
bool is_subprincipal(const Diagram& d);

// Sorted vertex subsets of T that induce a connected subgraph, #A > 1.
std::vector<std::vector<int>> connected_trivalent_subsets(const Diagram& d);

// Canonical key: per-component univalent counts, trivalent count, then the
// sorted edge list under the lexicographically minimal admissible labelling.
// Canonical labels put univalent vertices first, component by component in
// support order, then trivalent vertices.
using CanonicalKey = std::vector<int>;

struct CanonicalForm {
  CanonicalKey key;
  std::vector<int> relabel;  // old vertex id -> canonical id (one minimiser)
  int automorphisms = 1;
};

CanonicalForm canonical_form(const Diagram& d);
int automorphism_count(const Diagram& d);
// Rebuilds the canonical representative from its key.
Diagram decode_key(const SupportModel& support, const CanonicalKey& key);

// Class of an oriented diagram: canonical key plus the sign relating its
// orientation to the canonical one (ascending neighbours, bits +1). Sign 0
// means an orientation-reversing automorphism kills the class.
struct OrientedClass {
  CanonicalKey key;
  int sign = 1;
};

OrientedClass oriented_class(const OrientedDiagram& d);

// One representative per isomorphism class, ordered by (trivalent count, key).
std::vector<Diagram> enumerate_diagrams(const SupportModel& support, int n);

constexpr int kMaxEnumerationDegree = 4;

// Γ/A: A identified to one vertex, E_A deleted. May carry multi-edges.
struct QuotientGraph {
  int vertex_count = 0;
  int collapsed = 0;               // id of the vertex A collapses to
  std::vector<int> image;          // original vertex -> quotient vertex
  std::vector<Edge> edges;         // images of E \ E_A, multi-edges kept
  std::vector<bool> on_support;    // quotient vertex carries a univalent vertex
};

QuotientGraph quotient_diagram(const Diagram& d, const std::vector<int>& A);

}  // namespace csi
