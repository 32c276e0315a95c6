#pragma once

#include <vector>

#include "verifem/fem.hpp"
#include "verifem/loads.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

// Edge traction density of polynomial degree 1, stored like EdgeBC data as
// nodal values at the canonical endpoints (row = endpoint, column =
// component) and oriented with the canonical edge sign: the traction exerted
// on element e across edge g is edge_sign(g, e) * eval(g, t).
struct TractionField {
  std::vector<Mat2> values;

  Vec2 eval(int g, double t) const {
    return ((1.0 - t) * values[g].row(0) + t * values[g].row(1)).transpose();
  }
};

enum class CostKind { J0, J1, J2 };
const char* cost_name(CostKind kind);

// Canonically oriented traction of the FE stress on one edge, as endpoint
// values: componentwise the two-sided average on interior edges, the known
// data on traction components, and the one-sided FE traction on
// displacement-fixed components.
Mat2 fe_stress_projection(const Mesh& mesh, const FemSolution& sol,
                          const LoadCase& loads, int g);

// Q_E^(i) = int_E (sigma_h grad phi_i - f_d phi_i), one vector per element of
// the vertex star (in Patch::elems order). These are the element loads every
// reconstruction balances against.
std::vector<Vec2> node_load_vectors(const Mesh& mesh, const FemSolution& sol,
                                    const LoadCase& loads, int vertex);

// Directional 2x2 weight of the distance measure on one edge: identity for
// J0, 1/l^2 identity for J1, and for J2 the split
// (1/l^2) (1+nu)/E [ (1-2nu)/(1-nu) n n^T + 2 (I - n n^T) ].
Mat2 cost_weight_dir(CostKind kind, const Mesh& mesh,
                     const Material& material, int g);

// Weight on the degree-1 edge coefficient space [n0x n0y n1x n1y]: the edge
// mass matrix tensorized with the directional weight, so the quadratic form
// equals the integral of the pointwise weighted square along the edge.
Eigen::Matrix4d cost_weight(CostKind kind, const Mesh& mesh,
                            const Material& material, int g);

// Rigid-body equilibrium residuals of one element under edge tractions h and
// the body force: the three virtual works (x-translation, y-translation,
// rotation about the centroid). Near zero for equilibrated tractions.
Vec3 element_equilibrium_residual(const Mesh& mesh, const LoadCase& loads,
                                  const TractionField& h, int e);

}  // namespace verifem
