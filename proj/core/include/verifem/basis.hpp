#pragma once

#include <array>
#include <vector>

#include "verifem/types.hpp"

namespace verifem {

enum class BasisKind { lagrange, hierarchical };

// Scalar shape functions on the reference triangle (0,0)-(1,0)-(0,1),
// degrees 1 to 4.
//
// Lagrange bases are nodal on the uniform lattice (vertices, then edge nodes,
// then interior nodes) and ignore edge orientations; they are meant for
// single-element solves. Hierarchical bases are the vertex hats, edge modes
// built from integrated Legendre kernels and interior bubbles; edge modes of
// odd degree flip sign with the edge direction, so cross-element continuity
// requires passing per-edge orientations. orient[k] refers to the local edge
// opposite vertex k and is +1 when the local direction (k+1) -> (k+2) agrees
// with the global canonical direction of that edge.
class TriBasis {
 public:
  struct Dof {
    enum Kind { vertex, edge, interior } kind;
    int entity;  // local vertex or local edge id, -1 for interior
    int order;   // polynomial degree of the mode
  };

  TriBasis(BasisKind kind, int degree);

  BasisKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(dofs_.size()); }
  const std::vector<Dof>& dofs() const { return dofs_; }

  VecX eval(const Vec2& xi, const std::array<int, 3>& orient = {1, 1, 1}) const;
  // Gradients in reference coordinates, one row per shape function.
  MatX eval_grad(const Vec2& xi,
                 const std::array<int, 3>& orient = {1, 1, 1}) const;

 private:
  BasisKind kind_;
  int degree_;
  std::vector<Dof> dofs_;
  MatX coeff_;  // lagrange only: monomial coefficients, row per function
};

// Shape functions on the reference edge [0,1]. The hierarchical variant is
// {1-t, t, L2, ..., Ld} with integrated Legendre modes vanishing at both
// endpoints; it matches the trace of TriBasis edge modes on a positively
// oriented edge.
class EdgeBasis {
 public:
  EdgeBasis(BasisKind kind, int degree);
  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  VecX eval(double t) const;

 private:
  BasisKind kind_;
  int degree_;
};

}  // namespace verifem
