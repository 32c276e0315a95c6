#pragma once

#include <iosfwd>
#include <string>

#include "verifem/loads.hpp"
#include "verifem/mesh.hpp"

namespace verifem {

// Plain-text mesh format:
//
//   verifem-mesh 1
//   nodes <n>
//   <x> <y>                 n lines
//   elements <m>
//   <a> <b> <c>             m lines, counter-clockwise node ids
//   boundary
//   <predicate> <condition>
//   ...
//
// Each boundary rule is a predicate plus a condition; the first matching rule
// claims an edge, and every boundary edge must match one. Predicates:
//   on_line x|y <value>         both endpoints on the axis-aligned line
//   on_circle <cx> <cy> <r>     both endpoints at distance r from (cx, cy)
//   default                     matches everything
// Conditions:
//   dirichlet <fx> <fy> <ux> <uy>   fix component c where f c = 1, at value u
//   neumann <tx> <ty>               constant traction
// '#' starts a comment. Body forces are not part of the mesh file; they
// belong to the run configuration.
struct MeshCase {
  Mesh mesh;
  LoadCase loads;
};

MeshCase read_mesh(std::istream& in, const std::string& origin);
MeshCase read_mesh_file(const std::string& path);

void write_mesh_file(const std::string& path, const Mesh& mesh,
                     const LoadCase& loads);

}  // namespace verifem
