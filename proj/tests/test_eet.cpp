#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "verifem/eet.hpp"
#include "verifem/element_solve.hpp"
#include "verifem/estimator.hpp"

using namespace vt;

namespace {

// Hat moment of a linear edge field stored as endpoint rows.
Vec2 hat_moment(const Mesh& mesh, const Mat2& nodal, int g, int vertex) {
  const double l = mesh.edge_length(g);
  const int k = mesh.edges[g].n0 == vertex ? 0 : 1;
  return ((l / 3.0) * nodal.row(k) + (l / 6.0) * nodal.row(1 - k)).transpose();
}

}  // namespace

TEST_SUITE("eet") {

TEST_CASE("system sizes follow the fan topology") {
  Fixture fx = make_fixture("cantilever_sensor");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  int closed_checked = 0;
  for (int i = 0; i < fx.mesh.n_nodes(); ++i) {
    Patch p = vertex_patch(fx.mesh, i);
    NodeSystem s =
        build_node_system(fx.mesh, fx.material, sol, fx.loads, i, CostKind::J0);
    CHECK(s.n_unk == 2 * (int)p.spokes.size());
    if (p.interior) {
      CHECK(s.n_ind == 2 * (int)p.elems.size() - 2);
      CHECK(s.dropped_elem == p.elems.back());
      if (p.elems.size() == 6) {
        CHECK(s.n_unk == 12);
        CHECK(s.n_ind == 10);
        ++closed_checked;
      }
    } else {
      CHECK(s.n_ind == 2 * (int)p.elems.size());
      CHECK(s.dropped_elem == -1);
    }
    CHECK(s.prolongation.rows() == s.n_ind);
    CHECK(s.prolongation.cols() == s.n_unk);
    CHECK(s.enforced.rows() == s.n_enf);
  }
  CHECK(closed_checked > 0);

  Fixture sq = two_triangle_shear();
  FemSolution ssol = assemble_solve(sq.mesh, sq.material, sq.loads);
  for (int i = 0; i < sq.mesh.n_nodes(); ++i) {
    Patch p = vertex_patch(sq.mesh, i);
    NodeSystem s =
        build_node_system(sq.mesh, sq.material, ssol, sq.loads, i, CostKind::J0);
    if (p.elems.size() == 1) {
      CHECK(s.n_unk == 4);
      CHECK(s.n_ind == 2);
    } else {
      CHECK(s.n_unk == 6);
      CHECK(s.n_ind == 4);
    }
    // one enforced row per traction-known component of a boundary spoke
    int enf = 0;
    for (int g : p.spokes)
      if (sq.mesh.edges[g].on_boundary())
        for (int c = 0; c < 2; ++c)
          if (sq.loads.traction_known(sq.mesh, g, c)) ++enf;
    CHECK(s.n_enf == enf);
  }
}

TEST_CASE("patch test tractions are recovered exactly") {
  Fixture fx = make_fixture("patch_test");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  Mat2 s;
  s << 1, 0, 0, 0;

  for (int i = 0; i < fx.mesh.n_nodes(); ++i) {
    NodeSystem sys =
        build_node_system(fx.mesh, fx.material, sol, fx.loads, i, CostKind::J0);
    VecX b = solve_node_system(sys);
    CHECK((b - sys.target).lpNorm<Eigen::Infinity>() <= 1e-10);
  }

  TractionField h = eet_tractions(fx.mesh, fx.material, sol, fx.loads,
                                  CostKind::J0);
  for (int g = 0; g < fx.mesh.n_edges(); ++g) {
    const Vec2 tn = s * fx.mesh.edge_normal(g);
    CHECK((h.values[g].row(0).transpose() - tn).norm() <= 1e-10);
    CHECK((h.values[g].row(1).transpose() - tn).norm() <= 1e-10);
  }

  AdmissibleStress dual =
      element_dual_stress(fx.mesh, fx.material, fx.loads, h, 4);
  auto [theta, esq] = cre(fx.mesh, fx.material, sol, dual);
  CHECK(theta <= 1e-9 * std::sqrt(sol.energy_sq));
}

TEST_CASE("solved moments match a dense constrained least-squares oracle") {
  Fixture fx = two_triangle_shear();
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  for (CostKind cost : {CostKind::J0, CostKind::J2}) {
    for (int i = 0; i < fx.mesh.n_nodes(); ++i) {
      NodeSystem s =
          build_node_system(fx.mesh, fx.material, sol, fx.loads, i, cost);
      MatX c(s.n_enf + s.n_ind, s.n_unk);
      VecX d(s.n_enf + s.n_ind);
      c.topRows(s.n_enf) = s.enforced;
      d.head(s.n_enf) = s.enforced_rhs;
      c.bottomRows(s.n_ind) = s.prolongation;
      d.tail(s.n_ind) = s.prolongation_rhs;
      VecX expect = constrained_lsq_oracle(s.weight, s.target, c, d);
      VecX got = solve_node_system(s);
      const double scale = std::max(1.0, expect.lpNorm<Eigen::Infinity>());
      CHECK((got - expect).lpNorm<Eigen::Infinity>() <= 1e-9 * scale);
    }
  }
}

TEST_CASE("solved moments satisfy all balance rows, kept or dropped") {
  Fixture fx = make_fixture("cantilever_sensor");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  for (int i = 0; i < fx.mesh.n_nodes(); ++i) {
    NodeSystem s =
        build_node_system(fx.mesh, fx.material, sol, fx.loads, i, CostKind::J1);
    VecX b = solve_node_system(s);
    const double scale =
        std::max(1.0, s.prolongation_rhs.lpNorm<Eigen::Infinity>());
    CHECK((s.prolongation * b - s.prolongation_rhs).lpNorm<Eigen::Infinity>() <=
          1e-8 * scale);
    if (s.n_enf > 0)
      CHECK((s.enforced * b - s.enforced_rhs).lpNorm<Eigen::Infinity>() <=
            1e-10 * scale);

    // the dropped fan equation is implied by the load compatibility
    if (s.dropped_elem >= 0) {
      Vec2 r = Vec2::Zero();
      const auto q = node_load_vectors(fx.mesh, sol, fx.loads, i);
      const Patch p = vertex_patch(fx.mesh, i);
      const size_t qi =
          std::find(p.elems.begin(), p.elems.end(), s.dropped_elem) -
          p.elems.begin();
      for (size_t k = 0; k < s.spokes.size(); ++k) {
        const int g = s.spokes[k];
        if (fx.mesh.local_edge(g, s.dropped_elem) < 0) continue;
        r += fx.mesh.edge_sign(g, s.dropped_elem) * b.segment<2>(2 * k);
      }
      CHECK((r - q[qi]).lpNorm<Eigen::Infinity>() <= 1e-8 * scale);
    }
  }
}

TEST_CASE("recovered tractions reproduce the solved hat moments") {
  Fixture fx = make_fixture("plate_with_hole_quarter");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  TractionField h =
      eet_tractions(fx.mesh, fx.material, sol, fx.loads, CostKind::J0);
  for (int i = 0; i < fx.mesh.n_nodes(); ++i) {
    NodeSystem s =
        build_node_system(fx.mesh, fx.material, sol, fx.loads, i, CostKind::J0);
    VecX b = solve_node_system(s);
    for (size_t k = 0; k < s.spokes.size(); ++k) {
      const int g = s.spokes[k];
      const Vec2 m = hat_moment(fx.mesh, h.values[g], g, i);
      const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
      CHECK((m - b.segment<2>(2 * k)).lpNorm<Eigen::Infinity>() <=
            1e-10 * scale);
    }
  }
}

TEST_CASE("recovered tractions take the known boundary values") {
  for (const char* name : {"cantilever_sensor", "plate_with_hole_quarter"}) {
    Fixture fx = make_fixture(name);
    FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
    TractionField h =
        eet_tractions(fx.mesh, fx.material, sol, fx.loads, CostKind::J0);
    double scale = 1.0;
    for (const Mat2& v : h.values)
      scale = std::max(scale, v.cwiseAbs().maxCoeff());
    for (int g = 0; g < fx.mesh.n_edges(); ++g) {
      if (!fx.mesh.edges[g].on_boundary()) continue;
      for (int c = 0; c < 2; ++c) {
        if (!fx.loads.traction_known(fx.mesh, g, c)) continue;
        CHECK(std::abs(h.values[g](0, c) - fx.loads.boundary[g].traction(0, c)) <=
              1e-12 * scale);
        CHECK(std::abs(h.values[g](1, c) - fx.loads.boundary[g].traction(1, c)) <=
              1e-12 * scale);
      }
    }
  }
}

TEST_CASE("tractions equilibrate every element") {
  for (const char* name : {"patch_test", "cantilever_sensor",
                           "plate_with_hole_quarter"}) {
    Fixture fx = make_fixture(name);
    FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
    TractionField h =
        eet_tractions(fx.mesh, fx.material, sol, fx.loads, CostKind::J0);
    for (int e = 0; e < fx.mesh.n_elements(); ++e) {
      Vec3 r = element_equilibrium_residual(fx.mesh, fx.loads, h, e);
      double scale = fx.mesh.area(e) *
                     fx.loads.body_force(fx.mesh.centroid(e)).norm();
      for (int k = 0; k < 3; ++k) {
        const int g = fx.mesh.element_edges[e][k];
        scale += fx.mesh.edge_length(g) * h.values[g].cwiseAbs().maxCoeff();
      }
      CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-9 * std::max(1.0, scale));
    }
  }
}

}  // TEST_SUITE
