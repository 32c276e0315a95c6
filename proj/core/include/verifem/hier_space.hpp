#pragma once

#include <array>
#include <vector>

#include "verifem/basis.hpp"
#include "verifem/loads.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// Scalar continuous hierarchical FE space over a subset of mesh elements.
// Dof order: patch vertices, then per-edge modes (ascending order), then
// per-element interior bubbles. Odd edge modes are stored for the canonical
// (ascending node) direction; element-local sign flips are carried by the
// orientation arrays.
struct HierSpace {
  explicit HierSpace(int degree) : basis(BasisKind::hierarchical, degree) {}

  TriBasis basis;
  std::vector<int> elems;   // global element ids
  std::vector<int> nodes;   // global node ids owning a vertex dof
  std::vector<int> edges;   // global edge ids owning edge dofs
  int n_scalar = 0;

  std::vector<std::vector<int>> elem_dofs;  // local basis dof -> scalar dof
  std::vector<std::array<int, 3>> orient;

  struct DofInfo {
    TriBasis::Dof::Kind kind;
    int entity;  // global node, edge or element id
    int order;
  };
  std::vector<DofInfo> info;
};

HierSpace build_hier_space(const Mesh& mesh, const std::vector<int>& elems,
                           int degree);

// Homogeneous-displacement flags, one per (scalar dof, component), interleaved.
// Vertex dofs inherit the nodal constraints, edge dofs the fixed components of
// their (necessarily boundary) edge; interior dofs are always free.
std::vector<char> hier_fixed(const Mesh& mesh, const LoadCase& loads,
                             const HierSpace& space);

}  // namespace verifem
