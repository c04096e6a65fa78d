// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the unit tests: seeded generators for random
// geometry and small comparison utilities.

#pragma once

#include <cmath>
#include <random>

#include "efie/assembly.hpp"
#include "efie/mesh.hpp"

namespace efie::testing {

class Gen
{
public:
   explicit Gen(std::uint64_t seed) : rng_(seed) {}

   double uniform(double lo = -1.0, double hi = 1.0)
   {
      return std::uniform_real_distribution<double>(lo, hi)(rng_);
   }
   int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
   Vec3d vec(double scale = 1.0) { return {scale * uniform(), scale * uniform(), scale * uniform()}; }

   /// Triangle with area at least `min_area` and no angle below ~5 degrees.
   Tri<double> triangle(double min_area = 0.05)
   {
      for (;;)
      {
         Tri<double> t{vec(), vec(), vec()};
         if (triangle_area(t) < min_area) { continue; }
         bool ok = true;
         for (int i = 0; i < 3; ++i)
         {
            const Vec3d a = t[(i + 1) % 3] - t[i], b = t[(i + 2) % 3] - t[i];
            ok = ok && dot(a, b) / (norm(a) * norm(b)) < std::cos(0.09);
         }
         if (ok) { return t; }
      }
   }

   /// Random barycentric point in the closed triangle.
   std::array<double, 3> bary()
   {
      double a = uniform(0.0, 1.0), b = uniform(0.0, 1.0);
      if (a + b > 1.0)
      {
         a = 1.0 - a;
         b = 1.0 - b;
      }
      return {1.0 - a - b, a, b};
   }

private:
   std::mt19937_64 rng_;
};

inline double rel_diff(cdouble a, cdouble b) { return std::abs(a - b) / std::abs(b); }

inline double rel_diff(const Mat3c &a, const Mat3c &b)
{
   double num = 0.0, den = 0.0;
   for (int j = 0; j < 3; ++j)
   {
      for (int i = 0; i < 3; ++i)
      {
         num += std::norm(a[j][i] - b[j][i]);
         den += std::norm(b[j][i]);
      }
   }
   return std::sqrt(num / den);
}

inline SurfaceMesh unit_pair()
{
   // Two triangles sharing the edge (1,0,0)-(0,1,0), flat.
   return SurfaceMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, {{0, 1, 2}, {1, 3, 2}});
}

/// Regular octahedron: a closed 8-triangle surface, outward winding.
inline SurfaceMesh octahedron()
{
   std::vector<Vec3d> v{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
   std::vector<std::array<int, 3>> t{{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                     {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
   return SurfaceMesh(std::move(v), std::move(t));
}

} // namespace efie::testing
