// SPDX-License-Identifier: Apache-2.0

#include "efie/fixtures.hpp"

#include <cmath>

namespace efie {

PairFixture make_pair_fixture(PairClass kind)
{
   const Vec3d a{0.0, 0.0, 0.0}, b{1.0, 0.0, 0.0}, c{0.0, 1.0, 0.0};
   std::vector<Vec3d> v{a, b, c};
   std::vector<std::array<int, 3>> t{{0, 1, 2}};
   // Perturb the first vertex of Tq shared with Tp, out of plane.
   ShapePerturbation p{0, {0.0, 0.0, 1.0}};
   switch (kind)
   {
      case PairClass::near:
      {
         const Vec3d shift{1.5, 0.5, 0.25};
         v.insert(v.end(), {a + shift, b + shift, c + shift});
         t.push_back({3, 4, 5});
         break;
      }
      case PairClass::point:
         v.insert(v.end(), {{2.0, 0.0, 0.0}, {1.5, 1.0, 0.5}});
         t.push_back({1, 3, 4});
         p.node = 1;
         break;
      case PairClass::edge:
         v.push_back({1.0, 1.0, 0.5});
         t.push_back({1, 2, 3});
         p.node = 1;
         break;
      case PairClass::same:
         // Normal motion of a flat self pair leaves every integral unchanged
         // to first order, so tabulate an in-plane direction instead.
         p.tau = {1.0, 0.0, 0.0};
         break;
   }
   return {kind, SurfaceMesh(std::move(v), std::move(t)), kind == PairClass::same ? 0 : 1, 0, p};
}

SurfaceMesh make_plate(int n, double size)
{
   if (n < 1) { throw Error("plate needs at least one cell per side"); }
   if (!(size > 0.0)) { throw Error("plate size must be positive"); }
   std::vector<Vec3d> v;
   const double h = size / n;
   for (int j = 0; j <= n; ++j)
   {
      for (int i = 0; i <= n; ++i) { v.push_back({i * h, j * h, 0.0}); }
   }
   auto id = [n](int i, int j) { return j * (n + 1) + i; };
   std::vector<std::array<int, 3>> t;
   for (int j = 0; j < n; ++j)
   {
      for (int i = 0; i < n; ++i)
      {
         t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
         t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
   }
   return SurfaceMesh(std::move(v), std::move(t));
}

PlaneWave default_plane_wave()
{
   PlaneWave w;
   const Vec3d khat{0.3, -0.2, -std::sqrt(1.0 - 0.09 - 0.04)};
   w.khat = khat;
   // E0 orthogonal to khat
   const Vec3d e = cross(khat, Vec3d{0.0, 1.0, 0.0});
   w.E0 = Vec3c(e / norm(e));
   return w;
}

bool is_pair_fixture(const std::string &name)
{
   return name == "near" || name == "point" || name == "edge" || name == "same";
}

PairClass pair_class_from_string(const std::string &name)
{
   if (name == "near") { return PairClass::near; }
   if (name == "point") { return PairClass::point; }
   if (name == "edge") { return PairClass::edge; }
   if (name == "same") { return PairClass::same; }
   throw Error("unknown pair fixture '" + name + "'");
}

SurfaceMesh fixture_mesh(const std::string &name)
{
   if (name == "plate") { return make_plate(); }
   return make_pair_fixture(pair_class_from_string(name)).mesh;
}

} // namespace efie
