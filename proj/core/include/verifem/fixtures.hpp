#pragma once

#include <string>
#include <vector>

#include "verifem/loads.hpp"
#include "verifem/mesh.hpp"
#include "verifem/types.hpp"

namespace verifem {

struct Fixture {
  std::string name;
  Mesh mesh;
  Material material;
  LoadCase loads;
};

// Built-in case roster:
//   patch_test              unit square under uniaxial tension with symmetry
//                           supports; the FE solution is exact.
//   cantilever_sensor       4:1 rectangle clamped on the left, end shear.
//   plate_with_hole_quarter quarter plate with a traction-free hole, graded
//                           toward the hole, uniaxial tension.
const std::vector<std::string>& fixture_names();
Fixture make_fixture(const std::string& name);

// Nested uniform refinement of a fixture, loads included.
Fixture refine_fixture(Fixture fx, int levels);

// Unit square cut into two triangles, clamped left edge, downward shear on
// the right edge. Small enough for dense oracles and hand checks.
Fixture two_triangle_shear();

// Structured triangulated rectangle; boundary rules per fixture.
Mesh rect_mesh(const Vec2& lo, const Vec2& hi, int nx, int ny,
               const EdgeTagger& tagger);

}  // namespace verifem
