#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csi/diagram.hpp"

namespace csi {

using VertexMask = std::uint32_t;

struct Graph {
  int n = 0;
  std::vector<Edge> edges;
};

// Members are bitmasks over the graph's vertices, sorted ascending; the
// full vertex set is always present.
struct StratumFamily {
  Graph graph;
  std::vector<VertexMask> sets;
};

bool is_connected(const Graph& g, VertexMask subset);
// R: connected vertex subsets of size >= 2, ascending by mask.
std::vector<VertexMask> connected_subsets(const Graph& g);
std::vector<StratumFamily> enumerate_strata(const Graph& g);

// Γ's graph with every pair of univalent vertices joined: collisions on M
// make univalent vertices adjacent for the purposes of strata.
Graph collision_graph(const Diagram& d);

enum class FaceType { a, a_prime, b, c1, c2, d, e };
std::string face_type_name(FaceType t);

struct FaceLabel {
  Diagram diagram;
  std::vector<int> A;  // sorted; all vertices for type (a)
  FaceType type = FaceType::a;
  int inner = 0;  // #E_A
  int outer = 0;  // #E'_A
  bool degenerate = true;
};

// The face where every vertex collapses to one point of M.
FaceLabel classify_total_collapse(const Diagram& d);
// The face S = {V, A}. Throws PreconditionError unless A is a proper
// connected subset (in the collision graph) of size >= 2 whose univalent
// vertices are consecutive on a single component.
FaceLabel classify_face(const Diagram& d, std::vector<int> A);
bool is_degenerate_face(const FaceLabel& f);
// Every codimension-one face of d: the total collapse plus all valid A.
std::vector<FaceLabel> enumerate_faces(const Diagram& d);

}  // namespace csi
