// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "efie/oracle.hpp"
#include "efie/potentials.hpp"
#include "testing.hpp"

using namespace efie;
using efie::testing::Gen;

namespace {

double rel3(const Vec3d &a, const Vec3d &b) { return norm(a - b) / norm(b); }

Tri<double> equilateral(double side = 1.0)
{
   const double h = side * std::sqrt(3.0) / 2;
   return {Vec3d{0, 0, 0}, Vec3d{side, 0, 0}, Vec3d{side / 2, h, 0}};
}

} // namespace

TEST_CASE("symmetry above the centroid of an equilateral triangle")
{
   const auto t = equilateral();
   const Vec3d c = (t[0] + t[1] + t[2]) / 3.0;
   for (double d : {0.0, 0.05, 0.7, -0.3})
   {
      const auto p = analytic_potentials(c + Vec3d{0, 0, d}, t);
      CHECK(std::abs(p.grad_one_over_r.x) <= 1e-14);
      CHECK(std::abs(p.grad_one_over_r.y) <= 1e-14);
      CHECK(std::abs(p.grad_r.x) <= 1e-15);
      CHECK(std::abs(p.grad_r.y) <= 1e-15);
      for (int j = 0; j < 3; ++j)
      {
         CHECK(p.lambda_over_r[j] == doctest::Approx(p.one_over_r / 3).epsilon(1e-13));
      }
   }
}

TEST_CASE("far field")
{
   const auto t = equilateral();
   const Vec3d c = (t[0] + t[1] + t[2]) / 3.0;
   const double area = triangle_area(t);
   for (double d : {10.0, 100.0, 1000.0})
   {
      const auto p = analytic_potentials(c + Vec3d{0.3 * d, -0.2 * d, 0.9 * d}, t);
      const double dist = d * std::sqrt(0.09 + 0.04 + 0.81);
      CHECK(std::abs(p.one_over_r - area / dist) <= 0.1 * area / dist / (dist * dist));
   }
}

TEST_CASE("closed forms against the adaptive oracle")
{
   Gen gen(42);
   double worst = 0.0, worst_inv = 0.0;
   for (int c = 0; c < 100; ++c)
   {
      const auto t = gen.triangle();
      const Vec3d n = cross(t[1] - t[0], t[2] - t[0]);
      Vec3d x = gen.vec(1.5);
      // keep x off the plane for the gradient terms
      const double d = dot(x - t[0], n) / norm(n);
      if (std::abs(d) < 1e-3) { x = x + n * (0.01 / norm(n)); }
      const auto a = analytic_potentials(x, t);
      const auto o = oracle::potentials(x, t);
      worst_inv = std::max(worst_inv, std::abs(a.one_over_r - o.one_over_r) / o.one_over_r);
      worst = std::max({worst, std::abs(a.r - o.r) / o.r, rel3(a.grad_one_over_r, o.grad_one_over_r),
                        rel3(a.grad_r, o.grad_r)});
      for (int j = 0; j < 3; ++j)
      {
         worst = std::max(worst, std::abs(a.lambda_over_r[j] - o.lambda_over_r[j]) / o.one_over_r);
         worst = std::max(worst, norm(a.lambda_grad_one_over_r[j] - o.lambda_grad_one_over_r[j]) /
                                    norm(o.grad_one_over_r));
      }
   }
   CHECK(worst_inv <= 1e-10);
   CHECK(worst <= 1e-8);
}

TEST_CASE("observation point on the triangle")
{
   Gen gen(8);
   for (int c = 0; c < 10; ++c)
   {
      const auto t = gen.triangle(0.2);
      const auto b = gen.bary();
      const Vec3d x = bary_point(t, b);
      const auto a = analytic_potentials(x, t);
      // in-plane gradients are hypersingular, so only the weak kernels go to the oracle
      auto f = [&](const Vec3d &y) -> Eigen::VectorXcd {
         Eigen::VectorXcd v(2);
         const double R = norm(x - y);
         v << 1.0 / R, R;
         return v;
      };
      const Eigen::VectorXcd o = oracle::integrate_triangle_around(f, 2, t, x);
      CHECK(std::isfinite(a.one_over_r));
      CHECK(a.one_over_r == doctest::Approx(o[0].real()).epsilon(1e-10));
      CHECK(a.r == doctest::Approx(o[1].real()).epsilon(1e-10));
   }
}

TEST_CASE("moment consistency")
{
   Gen gen(4);
   for (int c = 0; c < 100; ++c)
   {
      const auto t = gen.triangle();
      const auto p = analytic_potentials(gen.vec(2.0), t);
      const double s = p.lambda_over_r[0] + p.lambda_over_r[1] + p.lambda_over_r[2];
      CHECK(std::abs(s - p.one_over_r) <= 1e-12 * p.one_over_r);
      Vec3d g = p.lambda_grad_one_over_r[0] + p.lambda_grad_one_over_r[1] + p.lambda_grad_one_over_r[2];
      CHECK(norm(g - p.grad_one_over_r) <= 1e-12 * norm(p.grad_one_over_r));
   }
}

TEST_CASE("crossing the plane")
{
   const auto t = equilateral();
   const Vec3d c = bary_point(t, {0.2, 0.5, 0.3});
   const auto above = analytic_potentials(c + Vec3d{0, 0, 1e-10}, t);
   const auto below = analytic_potentials(c - Vec3d{0, 0, 1e-10}, t);
   const auto on = analytic_potentials(c, t);
   CHECK(above.one_over_r == doctest::Approx(below.one_over_r).epsilon(1e-8));
   CHECK(on.one_over_r == doctest::Approx(above.one_over_r).epsilon(1e-8));
   // normal part of int grad(1/R) jumps by -4 pi across the triangle
   CHECK(above.grad_one_over_r.z == doctest::Approx(-2 * pi).epsilon(1e-8));
   CHECK(below.grad_one_over_r.z == doctest::Approx(2 * pi).epsilon(1e-8));
   CHECK(on.grad_one_over_r.z == 0.0);
   // outside the triangle there is no jump
   const Vec3d out{2.0, 2.0, 0.0};
   const auto oa = analytic_potentials(out + Vec3d{0, 0, 1e-10}, t);
   const auto ob = analytic_potentials(out - Vec3d{0, 0, 1e-10}, t);
   CHECK(std::abs(oa.grad_one_over_r.z - ob.grad_one_over_r.z) <= 1e-8);
}

TEST_CASE("higher moments used by the derivative path")
{
   Gen gen(21);
   for (int c = 0; c < 10; ++c)
   {
      const auto t = gen.triangle();
      const Vec3d n = cross(t[1] - t[0], t[2] - t[0]) / norm(cross(t[1] - t[0], t[2] - t[0]));
      const Vec3d x = bary_point(t, gen.bary()) + n * gen.uniform(0.05, 0.5) + gen.vec(0.3);
      const TrianglePotentials<double> pot(x, t, 3);
      // all monomials (r.e1)^a (r.e2)^b (r.n)^c with a+b+c <= 3, q = -3 and -1
      std::vector<std::array<int, 4>> idx;
      for (int q : {-3, -1})
      {
         for (int a = 0; a <= 3; ++a)
         {
            for (int b = 0; a + b <= 3; ++b)
            {
               for (int cc = 0; a + b + cc <= 3; ++cc) { idx.push_back({q, a, b, cc}); }
            }
         }
      }
      auto f = [&](const Vec3d &y) {
         Eigen::VectorXcd v(static_cast<Eigen::Index>(idx.size()));
         const Vec3d r = x - y;
         const double R = norm(r);
         const double l[3] = {dot(r, pot.e1()), dot(r, pot.e2()), dot(r, pot.normal())};
         for (std::size_t i = 0; i < idx.size(); ++i)
         {
            const auto [q, a, b, cc] = idx[i];
            v[static_cast<Eigen::Index>(i)] =
               std::pow(l[0], a) * std::pow(l[1], b) * std::pow(l[2], cc) * std::pow(R, q);
         }
         return v;
      };
      const auto ref = oracle::integrate_triangle_around(f, static_cast<int>(idx.size()), t, x);
      for (std::size_t i = 0; i < idx.size(); ++i)
      {
         const auto [q, a, b, cc] = idx[i];
         const double got = pot.moment(q, a, b, cc);
         const double want = ref[static_cast<Eigen::Index>(i)].real();
         INFO("q = " << q << " (" << a << ", " << b << ", " << cc << ")");
         // normalize by the matching |r|-power integral
         const double scale = std::abs(pot.moment(q, 0, 0, 0)) * std::pow(norm(x - t[0]) + 2.0, a + b + cc);
         CHECK(std::abs(got - want) <= 1e-10 * scale);
      }
   }
}
