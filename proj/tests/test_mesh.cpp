// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "efie/fixtures.hpp"
#include "efie/mesh.hpp"
#include "testing.hpp"

using namespace efie;
using efie::testing::Gen;

namespace {

SurfaceMesh parse(const std::string &text)
{
   std::istringstream in(text);
   return read_mesh(in);
}

} // namespace

TEST_CASE("mesh file with one triangle")
{
   const auto m = parse("# single\n3 1\n0 0 0\n1 0 0\n0 1 0\n0 1 2\n");
   CHECK(m.num_triangles() == 1);
   CHECK(m.area(0) == doctest::Approx(0.5).epsilon(1e-15));
   CHECK(DofMap(m).size() == 0);
   CHECK(m.edges().size() == 3);
}

TEST_CASE("two triangles sharing an edge give one dof")
{
   const auto m = parse("4 2\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n0 1 2\n1 3 2\n");
   const DofMap d(m);
   REQUIRE(d.size() == 1);
   const Dof &dof = d.dof(0);
   CHECK(dof.triangles == std::array<int, 2>{0, 1});
   CHECK(dof.sign[0] == 1);
   CHECK(dof.sign[1] == -1);
   CHECK(m.triangle(0)[dof.local[0]] == 0);  // opposite the shared edge
   CHECK(m.triangle(1)[dof.local[1]] == 3);
}

TEST_CASE("mesh validation errors")
{
   CHECK_THROWS_AS(parse("3 1\n0 0 0\n1 0 0\n0 1 0\n0 1 1\n"), MeshError);
   CHECK_THROWS_AS(parse("3 1\n0 0 0\n1 0 0\n2 0 0\n0 1 2\n"), MeshError);
   CHECK_THROWS_AS(parse("3 1\n0 0 0\n1 0 0\n0 1 0\n0 1 5\n"), MeshError);
   CHECK_THROWS_AS(parse("3 2\n0 0 0\n1 0 0\n0 1 0\n0 1 2\n2 1 0\n"), MeshError);
   CHECK_THROWS_AS(parse("3 1\n0 0 0\n1 0 x\n0 1 0\n0 1 2\n"), Error);
   CHECK_THROWS_AS(parse("3 2\n0 0 0\n1 0 0\n0 1 0\n0 1 2\n"), Error);
   // three triangles on one edge
   CHECK_THROWS_AS(parse("5 3\n0 0 0\n1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 1 2\n1 0 3\n0 1 4\n"), MeshError);
   // hanging node: vertex 4 lies inside edge 1-2 of the first triangle
   CHECK_THROWS_AS(parse("5 3\n0 0 0\n2 0 0\n0 2 0\n2 2 0\n1 1 0\n0 1 2\n1 3 4\n4 3 2\n"), MeshError);
}

TEST_CASE("mesh round trip through the text format")
{
   const auto m = make_plate(3, 1.5);
   std::ostringstream out;
   write_mesh(out, m);
   const auto back = parse(out.str());
   REQUIRE(back.num_vertices() == m.num_vertices());
   REQUIRE(back.num_triangles() == m.num_triangles());
   for (int v = 0; v < static_cast<int>(m.num_vertices()); ++v)
   {
      CHECK(back.vertex(v).x == m.vertex(v).x);
      CHECK(back.vertex(v).y == m.vertex(v).y);
      CHECK(back.vertex(v).z == m.vertex(v).z);
   }
   CHECK(back.triangles() == m.triangles());
}

TEST_CASE("hat functions")
{
   const auto m = testing::unit_pair();
   CHECK(hat_value(m, 0, 0, {1.0, 0.0, 0.0}) == 1.0);
   CHECK(hat_value(m, 0, 3, {0.2, 0.3, 0.5}) == 0.0);
   CHECK(hat_value(m, 1, 2, {1.0 / 3, 1.0 / 3, 1.0 / 3}) == doctest::Approx(1.0 / 3));

   const Vec3d g = hat_surface_gradient(m, 0, 0);
   CHECK(g.x == doctest::Approx(-1.0));
   CHECK(g.y == doctest::Approx(-1.0));
   CHECK(g.z == 0.0);
   const Vec3d z = hat_surface_gradient(m, 0, 3);
   CHECK((z.x == 0.0 && z.y == 0.0 && z.z == 0.0));
}

TEST_CASE("hat gradient geometry and partition of unity on random triangles")
{
   Gen gen(11);
   for (int c = 0; c < 200; ++c)
   {
      const auto t = gen.triangle();
      const SurfaceMesh m({t[0], t[1], t[2]}, {{0, 1, 2}});
      const Vec3d n = m.normal(0);
      Vec3d sum{};
      const auto b = gen.bary();
      double lam = 0.0;
      for (int v = 0; v < 3; ++v)
      {
         const Vec3d g = hat_surface_gradient(m, 0, v);
         sum += g;
         lam += hat_value(m, 0, v, b);
         CHECK(std::abs(dot(g, n)) <= 1e-14 * norm(g));
         // |grad lambda| = 1 / height over the opposite edge
         const Vec3d e = t[(v + 2) % 3] - t[(v + 1) % 3];
         const double height = 2.0 * m.area(0) / norm(e);
         CHECK(norm(g) * height == doctest::Approx(1.0).epsilon(1e-13));
      }
      CHECK(norm(sum) <= 1e-14 * norm(hat_surface_gradient(m, 0, 0)) * 10);
      CHECK(std::abs(lam - 1.0) <= 1e-14);
   }
}

TEST_CASE("raviart-thomas shape functions")
{
   const auto m = testing::unit_pair();
   // identity map on the reference triangle: basis at vertex (0,0) is y itself
   const Vec3d u = rt_eval(m, 0, 0, {0.25, 0.5, 0.25});
   CHECK(u.x == doctest::Approx(0.5));
   CHECK(u.y == doctest::Approx(0.25));
   CHECK(u.z == 0.0);
   for (int i = 0; i < 3; ++i)
   {
      CHECK(rt_div(m, 0, i) == doctest::Approx(1.0 / m.area(0)));
      CHECK(rt_div(m, 1, i) == doctest::Approx(1.0 / m.area(1)));
   }

   // reversed winding: same functions, same divergence
   const SurfaceMesh r({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 2, 1}});
   const Vec3d ur = rt_eval(r, 0, 0, {0.25, 0.25, 0.5});
   CHECK(ur.x == doctest::Approx(u.x));
   CHECK(ur.y == doctest::Approx(u.y));
   CHECK(rt_div(r, 0, 0) == doctest::Approx(rt_div(m, 0, 0)));
}

TEST_CASE("normal trace is continuous across an interior edge")
{
   Gen gen(5);
   for (int c = 0; c < 20; ++c)
   {
      // flat pair with a random shared edge
      const Vec3d a{0, 0, 0}, b{1.0 + gen.uniform(0, 1), gen.uniform(), 0};
      const Vec3d p{gen.uniform(0.2, 1), gen.uniform(1.5, 2), 0}, q{gen.uniform(0.2, 1), -gen.uniform(1.5, 2), 0};
      const SurfaceMesh m({a, b, p, q}, {{0, 1, 2}, {1, 0, 3}});
      const DofMap d(m);
      REQUIRE(d.size() == 1);
      const Dof &dof = d.dof(0);
      const Vec3d nu = cross(b - a, Vec3d{0, 0, 1}) / norm(b - a);  // edge normal, fixed
      const Vec3d mid = 0.5 * (a + b);
      double flux[2];
      for (int s = 0; s < 2; ++s)
      {
         const int t = dof.triangles[s];
         const auto tri = m.corners(t);
         flux[s] = dof.sign[s] * dot(rt_shape(tri, dof.local[s], mid), nu);
      }
      CHECK(std::abs(flux[0] - flux[1]) <= 1e-12 * std::abs(flux[0]));
      // unit flux: normal component times edge length is one
      CHECK(std::abs(flux[0]) * norm(b - a) == doctest::Approx(1.0).epsilon(1e-12));
   }
}

TEST_CASE("dof signs are opposite and slots are consistent")
{
   const auto m = make_plate(4, 1.0);
   const DofMap d(m);
   CHECK(d.size() == 40);
   for (int g = 0; g < static_cast<int>(d.size()); ++g)
   {
      const Dof &dof = d.dof(g);
      CHECK(dof.sign[0] == -dof.sign[1]);
      CHECK(dof.triangles[0] < dof.triangles[1]);
      for (int s = 0; s < 2; ++s)
      {
         const auto &slot = d.slot(dof.triangles[s], dof.local[s]);
         CHECK(slot.dof == g);
         CHECK(slot.sign == dof.sign[s]);
      }
   }
}

TEST_CASE("deform_mesh")
{
   const auto m = make_plate(2, 1.0);
   const auto same = deform_mesh(m, {4, {0.3, 0.1, 0.2}}, 0.0);
   for (int v = 0; v < 9; ++v)
   {
      CHECK(same.vertex(v).x == m.vertex(v).x);
      CHECK(same.vertex(v).z == m.vertex(v).z);
   }
   const auto lifted = deform_mesh(m, {4, {0, 0, 1}}, 0.1);
   for (int v = 0; v < 9; ++v)
   {
      CHECK(lifted.vertex(v).x == m.vertex(v).x);
      CHECK(lifted.vertex(v).y == m.vertex(v).y);
      CHECK(lifted.vertex(v).z == (v == 4 ? 0.1 : 0.0));
   }
   CHECK(lifted.triangles() == m.triangles());

   // affine in s
   const ShapePerturbation p{4, {0.3, -0.2, 0.1}};
   const auto twice = deform_mesh(deform_mesh(m, p, 0.125), p, 0.25);
   const auto once = deform_mesh(m, p, 0.375);
   CHECK(norm(twice.vertex(4) - once.vertex(4)) <= 1e-15);

   CHECK_THROWS_AS(deform_mesh(m, {99, {1, 0, 0}}, 0.1), Error);
   // collapsing a triangle is rejected
   CHECK_THROWS_AS(deform_mesh(testing::unit_pair(), {0, {1, 1, 0}}, 0.5), Error);
}

TEST_CASE("area derivative under in-plane node motion")
{
   // d|T|/ds = |T| tau . grad lambda_m on a flat mesh
   const auto m = testing::unit_pair();
   Gen gen(3);
   for (int c = 0; c < 10; ++c)
   {
      const ShapePerturbation p{gen.integer(0, 3), {gen.uniform(), gen.uniform(), 0.0}};
      const double h = 1e-6;
      const auto plus = deform_mesh(m, p, h), minus = deform_mesh(m, p, -h);
      for (int t = 0; t < 2; ++t)
      {
         const double fd = (plus.area(t) - minus.area(t)) / (2 * h);
         const double exact = m.area(t) * dot(p.tau, hat_surface_gradient(m, t, p.node));
         CHECK(fd == doctest::Approx(exact).epsilon(1e-8));
      }
   }
}

TEST_CASE("classify_pair")
{
   for (PairClass k : {PairClass::near, PairClass::point, PairClass::edge, PairClass::same})
   {
      const auto f = make_pair_fixture(k);
      CHECK(classify_pair(f.mesh, f.tp, f.tq) == k);
      CHECK(classify_pair(f.mesh, f.tq, f.tp) == k);
   }
   const auto m = make_plate(3, 1.0);
   for (int a = 0; a < 18; ++a)
   {
      for (int b = 0; b < 18; ++b) { CHECK(classify_pair(m, a, b) == classify_pair(m, b, a)); }
   }
}
