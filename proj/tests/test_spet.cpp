#include <cmath>
#include <map>

#include "doctest.h"
#include "support.hpp"
#include "verifem/quadrature.hpp"
#include "verifem/spet.hpp"

using namespace vt;

namespace {

Vec2 phys_point(const Mesh& mesh, int e, const Vec2& xi) {
  const auto& el = mesh.elements[e];
  return (1 - xi[0] - xi[1]) * mesh.nodes[el[0]] + xi[0] * mesh.nodes[el[1]] +
         xi[1] * mesh.nodes[el[2]];
}

// Evaluate the vector field with interleaved coefficients cv on element li of
// the space at reference point xi.
Vec2 space_value(const HierSpace& sp, size_t li, const VecX& cv,
                 const Vec2& xi) {
  const VecX phi = sp.basis.eval(xi, sp.orient[li]);
  Vec2 v = Vec2::Zero();
  for (int j = 0; j < sp.basis.size(); ++j) {
    const int sj = sp.elem_dofs[li][j];
    v[0] += cv[2 * sj] * phi[j];
    v[1] += cv[2 * sj + 1] * phi[j];
  }
  return v;
}

Vec3 space_strain(const Mesh& mesh, const HierSpace& sp, size_t li,
                  const VecX& cv, const Vec2& xi) {
  const int e = sp.elems[li];
  const MatX g =
      physical_gradients(mesh, e, sp.basis.eval_grad(xi, sp.orient[li]));
  Vec3 eps = Vec3::Zero();
  for (int j = 0; j < sp.basis.size(); ++j) {
    const int sj = sp.elem_dofs[li][j];
    eps[0] += cv[2 * sj] * g(j, 0);
    eps[1] += cv[2 * sj + 1] * g(j, 1);
    eps[2] += cv[2 * sj] * g(j, 1) + cv[2 * sj + 1] * g(j, 0);
  }
  return eps;
}

// Weak residual int f.v + int_t F.v - int sigma : eps(v) of a stress field
// given per quadrature point, over the whole space. Also reports the
// magnitude of the integrated terms for a relative tolerance.
template <class StressAt>
std::pair<double, double> weak_gap(const Mesh& mesh, const LoadCase& loads,
                                   const HierSpace& sp, const VecX& cv,
                                   StressAt&& stress_at) {
  const TriRule& tri = triangle_rule(9);
  const EdgeRule& er = edge_rule(10);
  double gap = 0.0, mag = 1.0;
  for (size_t li = 0; li < sp.elems.size(); ++li) {
    const int e = sp.elems[li];
    const double area = mesh.area(e);
    for (size_t q = 0; q < tri.points.size(); ++q) {
      const Vec2& xi = tri.points[q];
      const double w = 2.0 * area * tri.weights[q];
      const Vec2 v = space_value(sp, li, cv, xi);
      const Vec3 eps = space_strain(mesh, sp, li, cv, xi);
      const Vec3 s = stress_at(li, xi);
      const Vec2 f = loads.body_force(phys_point(mesh, e, xi));
      const double work = s[0] * eps[0] + s[1] * eps[1] + s[2] * eps[2];
      gap += w * (f.dot(v) - work);
      mag += w * (std::abs(f.dot(v)) + std::abs(work));
    }
    for (int k = 0; k < 3; ++k) {
      const int g = mesh.element_edges[e][k];
      const Edge& ed = mesh.edges[g];
      if (!ed.on_boundary()) continue;
      const double l = mesh.edge_length(g);
      for (size_t q = 0; q < er.points.size(); ++q) {
        const double t = er.points[q];
        const Vec2 x = (1 - t) * mesh.nodes[ed.n0] + t * mesh.nodes[ed.n1];
        const Vec3 lam = barycentric_coords(mesh, e, x);
        const Vec2 v = space_value(sp, li, cv, Vec2(lam[1], lam[2]));
        const Mat2& tr = loads.boundary[g].traction;
        for (int c = 0; c < 2; ++c) {
          if (!loads.traction_known(mesh, g, c)) continue;
          const double fc = (1 - t) * tr(0, c) + t * tr(1, c);
          gap += l * er.weights[q] * fc * v[c];
          mag += l * er.weights[q] * std::abs(fc * v[c]);
        }
      }
    }
  }
  return {gap, mag};
}

VecX random_admissible(const Mesh& mesh, const LoadCase& loads,
                       const HierSpace& sp, bool high_order_only) {
  const std::vector<char> fixed = hier_fixed(mesh, loads, sp);
  VecX cv = VecX::Zero(2 * sp.n_scalar);
  for (int j = 0; j < sp.n_scalar; ++j)
    for (int c = 0; c < 2; ++c) {
      if (fixed[2 * j + c]) continue;
      if (high_order_only && sp.info[j].kind == TriBasis::Dof::vertex) continue;
      cv[2 * j + c] = uniform(-1, 1);
    }
  return cv;
}

}  // namespace

TEST_SUITE("spet") {

TEST_CASE("patch loads vanish when the FE solution is exact") {
  Fixture fx = make_fixture("patch_test");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  for (int i = 0; i < fx.mesh.n_nodes(); ++i) {
    const Patch p = vertex_patch(fx.mesh, i);
    HierSpace sp = build_hier_space(fx.mesh, p.elems, 4);
    VecX rhs = patch_rhs(fx.mesh, fx.material, sol, fx.loads, sp, i);
    // rows of constrained dofs carry the (nonzero) reaction work and are
    // substituted out by the solver; only the free rows must vanish
    const std::vector<char> fixed = hier_fixed(fx.mesh, fx.loads, sp);
    for (int j = 0; j < 2 * sp.n_scalar; ++j)
      if (!fixed[j]) CHECK(std::abs(rhs[j]) <= 1e-10);
  }
  SpetResult res = spet_estimate(fx.mesh, fx.material, sol, fx.loads, 4);
  CHECK(res.theta <= 1e-9 * std::sqrt(sol.energy_sq));
}

TEST_CASE("only high-order test modes carry load") {
  Fixture fx = make_fixture("cantilever_sensor");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  for (int i : {0, 5, 12, fx.mesh.n_nodes() - 1}) {
    const Patch p = vertex_patch(fx.mesh, i);
    HierSpace sp = build_hier_space(fx.mesh, p.elems, 4);
    VecX rhs = patch_rhs(fx.mesh, fx.material, sol, fx.loads, sp, i);
    bool any = false;
    for (int j = 0; j < sp.n_scalar; ++j) {
      if (sp.info[j].kind == TriBasis::Dof::vertex) {
        CHECK(rhs[2 * j] == 0.0);
        CHECK(rhs[2 * j + 1] == 0.0);
      } else if (rhs[2 * j] != 0.0 || rhs[2 * j + 1] != 0.0) {
        any = true;
      }
    }
    CHECK(any);
  }
}

TEST_CASE("patch loads match direct quadrature") {
  Fixture fx = two_triangle_shear();
  fx.loads.body_c = Vec2(0.3, -0.2);
  fx.loads.body_g << 0.1, 0.0, 0.05, -0.1;
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);

  const TriRule& tri = triangle_rule(10);
  const EdgeRule& er = edge_rule(12);
  for (int i = 0; i < fx.mesh.n_nodes(); ++i) {
    const Patch p = vertex_patch(fx.mesh, i);
    HierSpace sp = build_hier_space(fx.mesh, p.elems, 4);
    VecX rhs = patch_rhs(fx.mesh, fx.material, sol, fx.loads, sp, i);
    VecX oracle = VecX::Zero(rhs.size());
    for (size_t li = 0; li < sp.elems.size(); ++li) {
      const int e = sp.elems[li];
      const int a = fx.mesh.local_node(i, e);
      const Vec2 hat_grad =
          fx.mesh.barycentric_gradients(e).row(a).transpose();
      const double area = fx.mesh.area(e);
      const Vec3& sig = sol.stress[e];
      for (size_t q = 0; q < tri.points.size(); ++q) {
        const Vec2& xi = tri.points[q];
        const double hat = Vec3(1 - xi[0] - xi[1], xi[0], xi[1])[a];
        const double w = 2.0 * area * tri.weights[q];
        const VecX phi = sp.basis.eval(xi, sp.orient[li]);
        const MatX g = physical_gradients(
            fx.mesh, e, sp.basis.eval_grad(xi, sp.orient[li]));
        const Vec2 f = fx.loads.body_force(phys_point(fx.mesh, e, xi));
        for (int j = 0; j < sp.basis.size(); ++j) {
          const int sj = sp.elem_dofs[li][j];
          if (sp.info[sj].kind == TriBasis::Dof::vertex) continue;
          const Vec2 gv = hat * g.row(j).transpose() + phi[j] * hat_grad;
          oracle[2 * sj] +=
              w * (f[0] * hat * phi[j] - sig[0] * gv[0] - sig[2] * gv[1]);
          oracle[2 * sj + 1] +=
              w * (f[1] * hat * phi[j] - sig[1] * gv[1] - sig[2] * gv[0]);
        }
      }
      for (int k = 0; k < 3; ++k) {
        const int g = fx.mesh.element_edges[e][k];
        const Edge& ed = fx.mesh.edges[g];
        if (!ed.on_boundary()) continue;
        const double l = fx.mesh.edge_length(g);
        const Mat2& tr = fx.loads.boundary[g].traction;
        for (size_t q = 0; q < er.points.size(); ++q) {
          const double t = er.points[q];
          const Vec2 x = (1 - t) * fx.mesh.nodes[ed.n0] + t * fx.mesh.nodes[ed.n1];
          const Vec3 lam = barycentric_coords(fx.mesh, e, x);
          const double hat = lam[a];
          const VecX phi = sp.basis.eval(Vec2(lam[1], lam[2]), sp.orient[li]);
          for (int j = 0; j < sp.basis.size(); ++j) {
            const int sj = sp.elem_dofs[li][j];
            if (sp.info[sj].kind == TriBasis::Dof::vertex) continue;
            for (int c = 0; c < 2; ++c) {
              if (!fx.loads.traction_known(fx.mesh, g, c)) continue;
              const double fc = (1 - t) * tr(0, c) + t * tr(1, c);
              oracle[2 * sj + c] += l * er.weights[q] * fc * hat * phi[j];
            }
          }
        }
      }
    }
    const double scale = std::max(1.0, oracle.lpNorm<Eigen::Infinity>());
    CHECK((rhs - oracle).lpNorm<Eigen::Infinity>() <= 1e-10 * scale);
  }
}

TEST_CASE("patch loads assemble to the global weak residual") {
  Fixture fx = make_fixture("cantilever_sensor");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);

  std::vector<int> all(fx.mesh.n_elements());
  for (int e = 0; e < fx.mesh.n_elements(); ++e) all[e] = e;
  HierSpace gs = build_hier_space(fx.mesh, all, 4);
  VecX cv = random_admissible(fx.mesh, fx.loads, gs, true);

  std::map<std::array<int, 3>, int> lookup;
  for (int j = 0; j < gs.n_scalar; ++j)
    lookup[{(int)gs.info[j].kind, gs.info[j].entity, gs.info[j].order}] = j;

  double total = 0.0;
  for (int i = 0; i < fx.mesh.n_nodes(); ++i) {
    const Patch p = vertex_patch(fx.mesh, i);
    HierSpace sp = build_hier_space(fx.mesh, p.elems, 4);
    VecX rhs = patch_rhs(fx.mesh, fx.material, sol, fx.loads, sp, i);
    for (int j = 0; j < sp.n_scalar; ++j) {
      const int gj = lookup.at(
          {(int)sp.info[j].kind, sp.info[j].entity, sp.info[j].order});
      total += rhs[2 * j] * cv[2 * gj] + rhs[2 * j + 1] * cv[2 * gj + 1];
    }
  }

  auto [gap, mag] = weak_gap(fx.mesh, fx.loads, gs, cv, [&](size_t li, const Vec2&) {
    return sol.stress[gs.elems[li]];
  });
  CHECK(std::abs(total - gap) <= 1e-10 * mag);
}

TEST_CASE("the corrected stress is in global weak equilibrium") {
  for (const char* name : {"cantilever_sensor", "plate_with_hole_quarter"}) {
    Fixture fx = make_fixture(name);
    FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
    SpetResult res = spet_estimate(fx.mesh, fx.material, sol, fx.loads, 4);
    CHECK(res.theta > 0.0);
    CHECK(res.element_sq.sum() ==
          doctest::Approx(res.theta * res.theta).epsilon(1e-12));

    std::vector<int> all(fx.mesh.n_elements());
    for (int e = 0; e < fx.mesh.n_elements(); ++e) all[e] = e;
    HierSpace gs = build_hier_space(fx.mesh, all, 4);
    VecX cv = random_admissible(fx.mesh, fx.loads, gs, false);
    auto [gap, mag] =
        weak_gap(fx.mesh, fx.loads, gs, cv, [&](size_t li, const Vec2& xi) {
          return res.stress.eval(fx.mesh, fx.material, gs.elems[li], xi);
        });
    CHECK(std::abs(gap) <= 1e-8 * mag);
  }
}

TEST_CASE("a degree below two is rejected") {
  Fixture fx = two_triangle_shear();
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  CHECK_THROWS_AS(solve_patch(fx.mesh, fx.material, sol, fx.loads, 0, 1),
                  ValidationError);
}

}  // TEST_SUITE
