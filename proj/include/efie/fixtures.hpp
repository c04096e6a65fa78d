// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "efie/assembly.hpp"
#include "efie/mesh.hpp"

namespace efie {

/// Two-triangle configuration with Tq = triangle 0 and Tp = triangle 1.
struct PairFixture
{
   PairClass kind;
   SurfaceMesh mesh;
   int tp = 1;
   int tq = 0;
   /// Default perturbation for tabulation.
   ShapePerturbation perturbation;
};

/// Tq is the unit right triangle (0,0,0), (1,0,0), (0,1,0) in every case.
///   near:  Tp = Tq + (1.5, 0.5, 0.25), no shared vertex
///   point: Tp shares vertex (1,0,0)
///   edge:  Tp shares the edge (1,0,0)-(0,1,0), folded out of plane
///   same:  Tp = Tq
PairFixture make_pair_fixture(PairClass kind);

/// n x n grid of squares of side `size / n` in the z = 0 plane, each split
/// along its (0,0)-(1,1) diagonal.
SurfaceMesh make_plate(int n = 4, double size = 1.0);

/// Plane wave used by the gradient checks: oblique incidence, polarization
/// orthogonal to the propagation direction.
PlaneWave default_plane_wave();

/// Looks up a fixture name: near, point, edge, same or plate.
SurfaceMesh fixture_mesh(const std::string &name);
bool is_pair_fixture(const std::string &name);
PairClass pair_class_from_string(const std::string &name);

} // namespace efie
