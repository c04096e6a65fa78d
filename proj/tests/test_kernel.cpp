// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "efie/dual.hpp"
#include "efie/kernel.hpp"
#include "testing.hpp"

using namespace efie;
using efie::testing::Gen;

TEST_CASE("green values")
{
   CHECK(std::abs(green(0.0, 1.0) - cdouble(1.0 / (4 * pi))) <= 1e-17);
   CHECK(std::abs(green(1.0, pi) - cdouble(-1.0 / (4 * pi * pi))) <= 1e-16);
   CHECK(std::abs(green(1.0, pi) - cdouble(-0.02533030, 0.0)) <= 1e-8);
   CHECK_THROWS_AS(green(1.0, 0.0), Error);

   // d/dr g_1(r) at r = 1 is g_1(1) (i - 1)
   const DualComplex g = green(1.0, DualReal(1.0, 1.0));
   const cdouble expected = green(1.0, 1.0) * (imag_unit - 1.0);
   CHECK(std::abs(g.der - expected) <= 1e-15 * std::abs(expected));
   CHECK(g.val == green(1.0, 1.0));
}

TEST_CASE("green gradient")
{
   const auto g0 = green_gradient(0.0, Vec3d{1, 0, 0});
   CHECK(std::abs(g0.x - cdouble(-1.0 / (4 * pi))) <= 1e-17);
   CHECK(g0.y == cdouble(0.0));
   CHECK_THROWS_AS(green_gradient(1.0, Vec3d{}), Error);

   Gen gen(1);
   for (int c = 0; c < 50; ++c)
   {
      const Vec3d r = gen.vec();
      const auto a = green_gradient(1.3, r), b = green_gradient(1.3, -r);
      for (int i = 0; i < 3; ++i) { CHECK(a[i] == -b[i]); }
   }

   const double k = 2.0, h = 1e-6;
   const Vec3d r{0.3, -0.4, 1.2};
   const auto g = green_gradient(k, r);
   for (int i = 0; i < 3; ++i)
   {
      Vec3d p = r, m = r;
      p[i] += h;
      m[i] -= h;
      const cdouble fd = (green(k, norm(p)) - green(k, norm(m))) / (2 * h);
      CHECK(std::abs(fd - g[i]) <= 1e-8 * norm(g));
   }
}

TEST_CASE("smooth remainder")
{
   const cdouble limit = imag_unit / (4 * pi);
   CHECK(green_smooth(1.0, 0.0) == limit);
   CHECK(std::abs(green_smooth(1.0, 1e-8) - limit) <= 1e-12);
   for (double r : {1e-6, 0.1, 1.0, 7.0}) { CHECK(std::abs(green_smooth(0.0, r)) == 0.0); }

   // g_b - g_b(0) = O(r^2): shrinking r tenfold shrinks the change a hundredfold
   const cdouble d3 = green_smooth(1.0, 1e-3) - limit, d4 = green_smooth(1.0, 1e-4) - limit;
   CHECK(std::abs(d3) / std::abs(d4) == doctest::Approx(100.0).epsilon(1e-4));

   const auto z = green_gradient_smooth(1.0, Vec3d{});
   CHECK((z.x == cdouble(0.0) && z.y == cdouble(0.0) && z.z == cdouble(0.0)));
}

TEST_CASE("kernel split identity")
{
   for (double k : {0.5, 1.0, 3.0})
   {
      for (double r = 1e-6; r <= 10.0; r *= 1.37)
      {
         const cdouble gb = green_smooth(k, r);
         const double gs = green_singular(k, r);
         const cdouble full = green(k, r);
         INFO("k = " << k << ", r = " << r);
         // the two parts cancel for kr > 1, so rounding scales with the parts, not the sum
         const double eps = std::numeric_limits<double>::epsilon();
         CHECK(std::abs(gb + gs - full) <= 4 * eps * (std::abs(gb) + std::abs(gs) + std::abs(full)));
      }
   }
}

TEST_CASE("smooth gradient agrees with the difference of the full and singular gradients")
{
   Gen gen(2);
   for (int c = 0; c < 200; ++c)
   {
      const double k = gen.uniform(0.1, 3.0);
      const Vec3d r = gen.vec(std::pow(10.0, gen.uniform(-2.0, 0.5)));
      const double R = norm(r);
      const auto full = green_gradient(k, r);
      const auto smooth = green_gradient_smooth(k, r);
      // grad g_s = (-1/(4 pi R^3) - k^2/(8 pi R)) r
      const double s = -1.0 / (4 * pi * R * R * R) - k * k / (8 * pi * R);
      for (int i = 0; i < 3; ++i)
      {
         const cdouble expect = full[i] - s * r[i];
         CHECK(std::abs(smooth[i] - expect) <= 1e-12 * (std::abs(full[i]) + std::abs(s * r[i])) + 1e-15);
      }
   }
}

TEST_CASE("series and direct branches meet")
{
   const double k = 1.0;
   const double r = detail::kSeriesLimit / k;
   const cdouble lo = green_smooth(k, std::nextafter(r, 0.0)), hi = green_smooth(k, r);
   CHECK(std::abs(lo - hi) <= 1e-14);
   const auto glo = green_gradient_smooth(k, Vec3d{std::nextafter(r, 0.0), 0, 0});
   const auto ghi = green_gradient_smooth(k, Vec3d{r, 0, 0});
   CHECK(std::abs(glo.x - ghi.x) <= 1e-13);
}

namespace {

// Random composition of the dual-number operations, applied to plain and
// dual arguments alike.
struct Program
{
   std::vector<int> ops;
   std::vector<double> c;

   template <typename R>
   complex_of<R> operator()(R v) const
   {
      using std::sqrt;
      for (std::size_t i = 0; i < ops.size(); ++i)
      {
         const double a = c[2 * i], b = c[2 * i + 1];
         switch (ops[i])
         {
            case 0: v = v * a + b; break;
            case 1: v = v * v * 0.5 + b; break;
            case 2: v = 1.0 / (v * v + 1.0 + b); break;
            case 3: v = sqrt(v * v + 1.0 + b); break;
            case 4: v = v / (1.0 + v * v) - a; break;
            default: v = a - v * b; break;
         }
      }
      return expi(v * 2.0) * (v + 1.0) / (v * v + 2.0);
   }
};

} // namespace

TEST_CASE("dual derivatives of random compositions")
{
   Gen gen(99);
   for (int f = 0; f < 50; ++f)
   {
      Program p;
      const int len = gen.integer(2, 8);
      for (int i = 0; i < len; ++i)
      {
         p.ops.push_back(gen.integer(0, 5));
         p.c.push_back(gen.uniform(0.5, 1.5));
         p.c.push_back(gen.uniform(0.0, 1.0));
      }
      const double t = gen.uniform();
      const DualComplex d = p(DualReal(t, 1.0));
      const double h = 1e-6;
      const cdouble fd = (p(t + h) - p(t - h)) / (2 * h);
      INFO("program " << f);
      CHECK(d.val == p(t));
      // truncation O(h^2) plus rounding of order eps / h on the O(1) intermediates
      CHECK(std::abs(d.der - fd) <= 1e-7 * std::abs(fd) + 1e-9 * (1.0 + std::abs(p(t))));
   }
}
