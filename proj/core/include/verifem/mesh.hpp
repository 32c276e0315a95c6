#pragma once

#include <array>
#include <functional>
#include <vector>

#include "verifem/types.hpp"

namespace verifem {

enum class EdgeTag { interior, dirichlet, neumann };

// Undirected mesh edge. Node ids are stored in canonical order n0 < n1; the
// canonical tangent runs n0 -> n1 and the canonical normal points away from
// elem[0]. Adjacent element ids are ascending, elem[1] = -1 on the boundary,
// so the element owning the canonical orientation (sign +1) is always the one
// with the lower id, and boundary edges carry sign +1 for their only element.
struct Edge {
  int n0 = -1;
  int n1 = -1;
  std::array<int, 2> elem{-1, -1};
  EdgeTag tag = EdgeTag::interior;

  bool on_boundary() const { return elem[1] < 0; }
};

struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> elements;  // CCW node triples
  std::vector<Edge> edges;                   // sorted by (n0, n1)
  // Edge ids per element; local edge k sits opposite local node k.
  std::vector<std::array<int, 3>> element_edges;
  std::vector<std::vector<int>> node_elements;  // ascending element ids
  std::vector<std::vector<int>> node_edges;     // ascending edge ids
  std::vector<char> boundary_node;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  double area(int e) const;
  Vec2 centroid(int e) const;
  // Gradients of the three barycentric coordinates of element e in physical
  // coordinates, row a = grad lambda_a.
  Eigen::Matrix<double, 3, 2> barycentric_gradients(int e) const;

  double edge_length(int g) const;
  Vec2 edge_tangent(int g) const;  // unit, n0 -> n1
  Vec2 edge_normal(int g) const;   // unit, away from elem[0]
  // +1 when e is edge g's elem[0] (canonical side), -1 for the other side.
  int edge_sign(int g, int e) const;
  // Local index (0..2) of edge g within element e.
  int local_edge(int g, int e) const;
  // Local index (0..2) of global node n within element e.
  int local_node(int n, int e) const;

  bool node_on_boundary(int i) const { return boundary_node[i] != 0; }
  double bbox_diagonal() const;
};

// Tag assignment for boundary edges; receives the endpoints in canonical
// order and must return dirichlet or neumann (interior means "untagged" and
// is rejected for boundary edges).
using EdgeTagger = std::function<EdgeTag(const Vec2&, const Vec2&)>;

// Builds the full topology from raw arrays. Throws ValidationError on node
// ids out of range, non-CCW or degenerate triangles, non-manifold edges and
// untagged boundary edges.
Mesh build_mesh(std::vector<Vec2> nodes,
                std::vector<std::array<int, 3>> elements,
                const EdgeTagger& tag_boundary);

// One level of uniform midpoint refinement (each triangle into four). Coarse
// nodes keep their ids in the fine mesh; the midpoint of coarse edge g gets
// id coarse_nodes + g.
struct RefineStep {
  Mesh fine;
  std::vector<int> parent_elem;                  // fine element -> coarse element
  std::vector<int> parent_edge;                  // fine edge -> coarse edge or -1
  std::vector<std::array<int, 2>> node_parents;  // {i, i} for kept nodes
  int coarse_nodes = 0;
};
RefineStep refine_once(const Mesh& mesh);

struct Refinement {
  Mesh fine;
  std::vector<int> parent_elem;   // fine element -> element of the original mesh
  std::vector<RefineStep> steps;  // per level, for nested prolongation
};
Refinement refine_uniform(const Mesh& mesh, int levels);

// Star of a vertex: the support of its hat function.
struct Patch {
  int vertex = -1;
  std::vector<int> elems;   // ascending
  std::vector<int> spokes;  // edges containing the vertex, ascending
  bool interior = false;    // closed fan
};
Patch vertex_patch(const Mesh& mesh, int vertex);

}  // namespace verifem
