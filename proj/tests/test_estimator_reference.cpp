#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "verifem/eet.hpp"
#include "verifem/estimator.hpp"
#include "verifem/quadrature.hpp"
#include "verifem/reference.hpp"

using namespace vt;

TEST_SUITE("estimator_reference") {

TEST_CASE("the error measure matches direct quadrature") {
  Fixture fx = two_triangle_shear();
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  TractionField h =
      eet_tractions(fx.mesh, fx.material, sol, fx.loads, CostKind::J0);
  AdmissibleStress dual =
      element_dual_stress(fx.mesh, fx.material, fx.loads, h, 4);
  auto [theta, esq] = cre(fx.mesh, fx.material, sol, dual);

  const Mat3 comp = fx.material.compliance();
  const TriRule& tri = triangle_rule(8);
  double total = 0.0;
  for (int e = 0; e < fx.mesh.n_elements(); ++e) {
    double part = 0.0;
    for (size_t q = 0; q < tri.points.size(); ++q) {
      const Vec3 d = dual.eval(fx.mesh, fx.material, e, tri.points[q]) -
                     sol.stress[e];
      part += 2.0 * fx.mesh.area(e) * tri.weights[q] * d.dot(comp * d);
    }
    CHECK(esq[e] == doctest::Approx(part).epsilon(1e-12));
    total += part;
  }
  CHECK(theta * theta == doctest::Approx(total).epsilon(1e-12));
  CHECK(theta * theta == doctest::Approx(esq.sum()).epsilon(1e-12));
}

TEST_CASE("the error of the FE stress against itself is zero") {
  Fixture fx = two_triangle_shear();
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  AdmissibleStress same(BasisKind::hierarchical, 2, fx.mesh.n_elements());
  for (int e = 0; e < fx.mesh.n_elements(); ++e) same.base[e] = sol.stress[e];
  auto [theta, esq] = cre(fx.mesh, fx.material, sol, same);
  CHECK(theta == 0.0);
  CHECK(esq.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("the guaranteed-bound check accepts only dominating estimates") {
  CHECK(prager_synge_check(1.0, 1.0));
  CHECK(prager_synge_check(812.999, 347.997));
  CHECK(prager_synge_check(556.629, 347.997));
  CHECK(prager_synge_check(1.0 - 1e-9, 1.0));
  CHECK_FALSE(prager_synge_check(1.0 - 1e-8, 1.0));
  CHECK_FALSE(prager_synge_check(0.99, 1.0));
}

TEST_CASE("effectivity combines the two decompositions") {
  VecX esq = VecX::Constant(4, 2.0);
  VecX rsq = VecX::Constant(4, 0.5);
  ErrorReport rep = effectivity("eet", "J0", std::sqrt(esq.sum()), esq,
                                std::sqrt(rsq.sum()), rsq);
  CHECK(rep.eta == doctest::Approx(2.0).epsilon(1e-13));
  for (int e = 0; e < 4; ++e)
    CHECK(rep.local_eta[e] == doctest::Approx(2.0).epsilon(1e-13));

  // vanished reference contributions give no local index
  rsq[2] = 0.0;
  ErrorReport rep2 = effectivity("eet", "J0", std::sqrt(esq.sum()), esq,
                                 std::sqrt(rsq.sum()), rsq);
  CHECK(std::isnan(rep2.local_eta[2]));
  CHECK(std::isfinite(rep2.local_eta[0]));

  ErrorReport spet = effectivity("spet", "", 556.629, esq, 347.997, rsq);
  CHECK(spet.eta == doctest::Approx(1.5995).epsilon(1e-4));
  ErrorReport eet = effectivity("eet", "J0", 812.999, esq, 347.997, rsq);
  CHECK(eet.eta == doctest::Approx(2.3362).epsilon(1e-4));
}

TEST_CASE("zero refinement levels give a zero reference") {
  Fixture fx = two_triangle_shear();
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  ReferenceError ref = reference_error(fx.mesh, fx.material, fx.loads, sol, 0);
  CHECK(ref.value <= 1e-12);
  CHECK(ref.value_direct <= 1e-12);
  CHECK(ref.element_sq.lpNorm<Eigen::Infinity>() <= 1e-24);
}

TEST_CASE("both reference routes agree away from the roundoff floor") {
  for (const char* name : {"cantilever_sensor", "plate_with_hole_quarter"}) {
    Fixture fx = make_fixture(name);
    FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
    ReferenceError ref =
        reference_error(fx.mesh, fx.material, fx.loads, sol, 2);
    CHECK(ref.value > 0.0);
    CHECK(std::abs(ref.value - ref.value_direct) <= 1e-10 * ref.value);
    CHECK(ref.element_sq.sum() ==
          doctest::Approx(ref.value_direct * ref.value_direct).epsilon(1e-12));
    CHECK(ref.element_sq.minCoeff() >= 0.0);
  }
}

TEST_CASE("a deeper overkill mesh never reports a smaller error") {
  Fixture fx = make_fixture("cantilever_sensor");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  ReferenceError r1 = reference_error(fx.mesh, fx.material, fx.loads, sol, 1);
  ReferenceError r2 = reference_error(fx.mesh, fx.material, fx.loads, sol, 2);
  CHECK(r2.value >= r1.value * (1.0 - 1e-12));
}

TEST_CASE("an exactly captured solution has no reference error") {
  Fixture fx = make_fixture("patch_test");
  FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
  ReferenceError ref = reference_error(fx.mesh, fx.material, fx.loads, sol, 2);
  CHECK(ref.value <= 1e-10);
  CHECK(ref.value_direct <= 1e-10);
}

TEST_CASE("prolongation is exact on linear fields") {
  Fixture fx = make_fixture("cantilever_sensor");
  RefineStep step = refine_once(fx.mesh);
  VecX coarse(2 * fx.mesh.n_nodes());
  for (int i = 0; i < fx.mesh.n_nodes(); ++i) {
    const Vec2& x = fx.mesh.nodes[i];
    coarse[2 * i] = 0.3 + 1.7 * x[0] - 0.4 * x[1];
    coarse[2 * i + 1] = -1.1 + 0.6 * x[0] + 2.2 * x[1];
  }
  VecX fine = prolong(step, coarse);
  for (int i = 0; i < step.fine.n_nodes(); ++i) {
    const Vec2& x = step.fine.nodes[i];
    CHECK(fine[2 * i] ==
          doctest::Approx(0.3 + 1.7 * x[0] - 0.4 * x[1]).epsilon(1e-13));
    CHECK(fine[2 * i + 1] ==
          doctest::Approx(-1.1 + 0.6 * x[0] + 2.2 * x[1]).epsilon(1e-13));
  }
}

}  // TEST_SUITE
