#include "verifem/fixtures.hpp"

#include <cmath>

namespace verifem {

namespace {

constexpr double kGeoTol = 1e-9;

bool on_line(const Vec2& a, const Vec2& b, int axis, double value) {
  return std::abs(a[axis] - value) < kGeoTol &&
         std::abs(b[axis] - value) < kGeoTol;
}

bool on_circle(const Vec2& a, const Vec2& b, double radius) {
  return std::abs(a.norm() - radius) < kGeoTol * std::max(1.0, radius) &&
         std::abs(b.norm() - radius) < kGeoTol * std::max(1.0, radius);
}

void apply_boundary(Fixture& fx,
                    const std::function<EdgeBC(const Vec2&, const Vec2&)>& bc) {
  fx.loads.boundary.assign(fx.mesh.n_edges(), EdgeBC{});
  for (int g = 0; g < fx.mesh.n_edges(); ++g) {
    const Edge& ed = fx.mesh.edges[g];
    if (!ed.on_boundary()) continue;
    fx.loads.boundary[g] = bc(fx.mesh.nodes[ed.n0], fx.mesh.nodes[ed.n1]);
  }
  validate_loads(fx.mesh, fx.loads);
}

EdgeBC fix_component(int c) {
  EdgeBC bc;
  bc.fix[c] = true;
  return bc;
}

EdgeBC fix_both() {
  EdgeBC bc;
  bc.fix = {true, true};
  return bc;
}

EdgeBC pull(const Vec2& t) {
  EdgeBC bc;
  bc.traction.row(0) = t.transpose();
  bc.traction.row(1) = t.transpose();
  return bc;
}

Fixture make_patch_test() {
  Fixture fx;
  fx.name = "patch_test";
  const auto tagger = [](const Vec2& a, const Vec2& b) {
    if (on_line(a, b, 0, 0.0) || on_line(a, b, 1, 0.0))
      return EdgeTag::dirichlet;
    return EdgeTag::neumann;
  };
  fx.mesh = rect_mesh(Vec2(0, 0), Vec2(1, 1), 4, 4, tagger);
  apply_boundary(fx, [](const Vec2& a, const Vec2& b) {
    if (on_line(a, b, 0, 0.0)) return fix_component(0);
    if (on_line(a, b, 1, 0.0)) return fix_component(1);
    if (on_line(a, b, 0, 1.0)) return pull(Vec2(1, 0));
    return EdgeBC{};
  });
  return fx;
}

Fixture make_cantilever() {
  Fixture fx;
  fx.name = "cantilever_sensor";
  const auto tagger = [](const Vec2& a, const Vec2& b) {
    return on_line(a, b, 0, 0.0) ? EdgeTag::dirichlet : EdgeTag::neumann;
  };
  fx.mesh = rect_mesh(Vec2(0, 0), Vec2(4, 1), 16, 4, tagger);
  apply_boundary(fx, [](const Vec2& a, const Vec2& b) {
    if (on_line(a, b, 0, 0.0)) return fix_both();
    if (on_line(a, b, 0, 4.0)) return pull(Vec2(0, -1));
    return EdgeBC{};
  });
  return fx;
}

// Quarter plate [0,W]^2 with a hole of radius R at the origin. Polar grid:
// rays at uniform angles, radial nodes graded toward the hole, the outer ring
// following the square outline.
Fixture make_plate_with_hole() {
  constexpr double R = 1.0;
  constexpr double W = 4.0;
  constexpr int nr = 8;
  constexpr int nt = 16;  // even, so a ray hits the (W, W) corner
  constexpr double gamma = 1.5;

  std::vector<Vec2> nodes;
  for (int j = 0; j <= nt; ++j) {
    const double theta = 0.5 * M_PI * j / nt;
    const double outer =
        W / std::max(std::cos(theta), std::sin(theta));
    for (int i = 0; i <= nr; ++i) {
      const double s = std::pow(static_cast<double>(i) / nr, gamma);
      const double r = R + (outer - R) * s;
      nodes.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
  }
  std::vector<std::array<int, 3>> elements;
  const auto id = [](int i, int j) { return j * (nr + 1) + i; };
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < nr; ++i) {
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }

  Fixture fx;
  fx.name = "plate_with_hole_quarter";
  const auto tagger = [](const Vec2& a, const Vec2& b) {
    if (on_line(a, b, 0, 0.0) || on_line(a, b, 1, 0.0))
      return EdgeTag::dirichlet;
    return EdgeTag::neumann;
  };
  fx.mesh = build_mesh(std::move(nodes), std::move(elements), tagger);
  apply_boundary(fx, [](const Vec2& a, const Vec2& b) {
    if (on_line(a, b, 0, 0.0)) return fix_component(0);
    if (on_line(a, b, 1, 0.0)) return fix_component(1);
    if (on_line(a, b, 0, W)) return pull(Vec2(1, 0));
    if (on_line(a, b, 1, W)) return EdgeBC{};
    if (on_circle(a, b, R)) return EdgeBC{};
    return EdgeBC{};
  });
  return fx;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "patch_test", "cantilever_sensor", "plate_with_hole_quarter"};
  return names;
}

Fixture make_fixture(const std::string& name) {
  if (name == "patch_test") return make_patch_test();
  if (name == "cantilever_sensor") return make_cantilever();
  if (name == "plate_with_hole_quarter") return make_plate_with_hole();
  throw ValidationError("unknown fixture: " + name);
}

Fixture refine_fixture(Fixture fx, int levels) {
  for (int l = 0; l < levels; ++l) {
    RefineStep step = refine_once(fx.mesh);
    fx.loads = refine_loads(fx.mesh, step, fx.loads);
    fx.mesh = std::move(step.fine);
  }
  return fx;
}

Fixture two_triangle_shear() {
  Fixture fx;
  fx.name = "two_triangle_shear";
  std::vector<Vec2> nodes = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  std::vector<std::array<int, 3>> elements = {{0, 1, 2}, {0, 2, 3}};
  const auto tagger = [](const Vec2& a, const Vec2& b) {
    return on_line(a, b, 0, 0.0) ? EdgeTag::dirichlet : EdgeTag::neumann;
  };
  fx.mesh = build_mesh(std::move(nodes), std::move(elements), tagger);
  apply_boundary(fx, [](const Vec2& a, const Vec2& b) {
    if (on_line(a, b, 0, 0.0)) return fix_both();
    if (on_line(a, b, 0, 1.0)) return pull(Vec2(0, -1));
    return EdgeBC{};
  });
  return fx;
}

Mesh rect_mesh(const Vec2& lo, const Vec2& hi, int nx, int ny,
               const EdgeTagger& tagger) {
  if (nx < 1 || ny < 1) throw ValidationError("rect_mesh: empty grid");
  std::vector<Vec2> nodes;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      nodes.emplace_back(lo[0] + (hi[0] - lo[0]) * i / nx,
                         lo[1] + (hi[1] - lo[1]) * j / ny);
  std::vector<std::array<int, 3>> elements;
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return build_mesh(std::move(nodes), std::move(elements), tagger);
}

}  // namespace verifem
