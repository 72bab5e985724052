#pragma once

#include <array>
#include <string>
#include <tuple>
#include <vector>

#include "affinefocus/atlas.hpp"
#include "affinefocus/box_model.hpp"

namespace af {

// Named builders for the bundled surfaces and wall models. Every builder is
// deterministic; derived vertex data is certified by validate() in the tests.

// Two charts joined along the vertical wall x = 0, with one focus vertex of
// index k at the origin. The left chart is the rectangle [-delta,0] x
// [-delta_p,delta_p]; the right chart is the cut-and-resheared image of the
// right half, a trapezoid when 2*delta_p > k*delta and a triangle otherwise.
// Throws InvalidParams unless k >= 1 and both sizes are positive.
Atlas focus_box_atlas(long k, const Q& delta, const Q& delta_p);

// Eight-petal flower around the origin. Petal c is the pentagon
// [A, O[c+1], Q[c], P[c], O[c]] (indices mod 8): O are the focus points
// (indices alternating 2,1 from O[0]), Q the outer boundary tips, P the
// inner boundary corners; P and O lie on the segment from Q to A, so each
// petal is a triangle with two straight vertices. Consecutive petals share
// the spoke A->O[c+1] (identity) and the slit O[c+1]->Q[c] vs
// P[c+1]->O[c+1], glued by the parabolic M[c+1] fixing O[c+1].
struct FlowerData {
  Vec2 A;
  std::array<Vec2, 8> O, P, Q;
  std::array<LinZ, 8> M;
};
FlowerData flower_data();
Atlas shuriken_flower();

// Flat octagon around the hub C with eight interior foci o (indices
// alternating 1,2 from o[0]). Panel j is the pentagon
// [C, o[j], b[j], a[j+1], o[j+1]]; b[j]->a[j+1] is a boundary edge.
// Consecutive panels share the hub spoke o[j+1]->C (identity) and the slit
// a[j+1]->o[j+1] vs o[j+1]->b[j+1], glued by the parabolic Pm[j+1] fixing
// o[j+1]. The boundary invariants match the flower's edge for edge.
struct OctagonData {
  Vec2 C;
  std::array<Vec2, 8> o, b, a;
  std::array<LinZ, 8> Pm;
};
OctagonData octagon_data();
Atlas complement_octagon();

// Flower glued to the octagon along their boundaries: a closed surface of
// Euler characteristic 2 with total focus index 24 that is not convex (no
// straight segment leaves the flower). Throws GluingMismatch if the two
// datasets fail the seam compatibility checks.
Atlas black_hole_sphere();

// Eight copies of the triangle {x >= 0, y >= 0, x + y <= 4} (with midpoint
// vertices) glued like the octants of a sphere, with the 12 edge-midpoint
// classes carrying index-2 foci and the 6 corner classes flat. Globally
// convex.
Atlas convex_sphere();

// The closed strip of the convex sphere around the equator of the given
// axis ('X', 'Y' or 'Z'): an annulus with two straight boundary circles
// containing that equator's four foci. Throws InvalidArgument on any other
// axis name.
Atlas convex_sphere_strip(char axis);

// Wall model with k = -1 and a point pair no straight segment joins;
// the same pair is joinable once k is positive.
std::tuple<WallModel, BoxPoint, BoxPoint> negative_k_box_model();

// Re-exports of the bundled wall-model counterexamples.
std::tuple<WallModel, BoxPoint, BoxPoint> focus2_box_model();
std::tuple<WallModel, BoxPoint, BoxPoint> dim3_model();

// Registry for the command-line `example` subcommand.
struct ExampleDescriptor {
  std::string name;
  std::string kind;  // "atlas" or "wall_model"
  std::string notes;
};
const std::vector<ExampleDescriptor>& example_registry();
Atlas build_example_atlas(const std::string& name);
std::tuple<WallModel, BoxPoint, BoxPoint> build_example_model(const std::string& name);

}  // namespace af
