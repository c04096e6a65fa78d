// SPDX-License-Identifier: Apache-2.0

#include "efie/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace efie::oracle {

namespace {

struct Rule1d
{
   std::vector<double> x, w;  // on [0, 1]
};

template <unsigned N>
Rule1d make_gauss()
{
   using G = boost::math::quadrature::gauss<double, N>;
   Rule1d r;
   const auto &a = G::abscissa();
   const auto &w = G::weights();
   for (std::size_t i = 0; i < a.size(); ++i)
   {
      const bool centre = a[i] == 0.0;
      r.x.push_back(0.5 * (1.0 + a[i]));
      r.w.push_back(0.5 * w[i]);
      if (!centre)
      {
         r.x.push_back(0.5 * (1.0 - a[i]));
         r.w.push_back(0.5 * w[i]);
      }
   }
   return r;
}

const Rule1d &coarse()
{
   static const Rule1d r = make_gauss<10>();
   return r;
}

const Rule1d &fine()
{
   static const Rule1d r = make_gauss<15>();
   return r;
}

using SquareFn = std::function<Eigen::VectorXcd(double u, double v)>;

Eigen::VectorXcd tensor(const SquareFn &f, int size, const Rule1d &r, double u0, double u1, double v0, double v1)
{
   Eigen::VectorXcd s = Eigen::VectorXcd::Zero(size);
   const double du = u1 - u0, dv = v1 - v0;
   for (std::size_t i = 0; i < r.x.size(); ++i)
   {
      for (std::size_t j = 0; j < r.x.size(); ++j)
      {
         s += (r.w[i] * r.w[j] * du * dv) * f(u0 + du * r.x[i], v0 + dv * r.x[j]);
      }
   }
   return s;
}

Eigen::VectorXcd adapt(const SquareFn &f, int size, double u0, double u1, double v0, double v1,
                       const Eigen::VectorXcd &estimate, double tol, int depth, const AdaptiveOptions &opt)
{
   const Eigen::VectorXcd lo = tensor(f, size, coarse(), u0, u1, v0, v1);
   // below a few ulps of the cell value the rule difference is rounding noise
   const double floor = 64.0 * std::numeric_limits<double>::epsilon() * estimate.lpNorm<Eigen::Infinity>();
   if ((estimate - lo).lpNorm<Eigen::Infinity>() <= std::max(tol, floor) || depth >= opt.max_depth)
   {
      return estimate;
   }
   const double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
   const double ub[3] = {u0, um, u1}, vb[3] = {v0, vm, v1};
   Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(size);
   for (int a = 0; a < 2; ++a)
   {
      for (int b = 0; b < 2; ++b)
      {
         const Eigen::VectorXcd child = tensor(f, size, fine(), ub[a], ub[a + 1], vb[b], vb[b + 1]);
         sum += adapt(f, size, ub[a], ub[a + 1], vb[b], vb[b + 1], child, 0.5 * tol, depth + 1, opt);
      }
   }
   return sum;
}

Eigen::VectorXcd integrate_square(const SquareFn &f, int size, const AdaptiveOptions &opt)
{
   const Eigen::VectorXcd first = tensor(f, size, fine(), 0.0, 1.0, 0.0, 1.0);
   const double tol = std::max(opt.abs_tol, opt.rel_tol * first.lpNorm<Eigen::Infinity>());
   return adapt(f, size, 0.0, 1.0, 0.0, 1.0, first, tol, 0, opt);
}

} // namespace

Eigen::VectorXcd integrate_triangle(const Integrand &f, int size, const Tri<double> &tri, int apex,
                                    const AdaptiveOptions &opt)
{
   const Vec3d A = tri[apex], B = tri[(apex + 1) % 3], C = tri[(apex + 2) % 3];
   const double twice_area = norm(cross(B - A, C - A));
   // y = A + u (B - A) + u v (C - B), dy = 2|T| u du dv
   auto g = [&](double u, double v) -> Eigen::VectorXcd {
      const Vec3d y = A + u * (B - A) + (u * v) * (C - B);
      return (twice_area * u) * f(y);
   };
   return integrate_square(g, size, opt);
}

Eigen::VectorXcd integrate_triangle_around(const Integrand &f, int size, const Tri<double> &tri, const Vec3d &x,
                                           const AdaptiveOptions &opt)
{
   const Vec3d n2 = cross(tri[1] - tri[0], tri[2] - tri[0]);
   const double nn = dot(n2, n2);
   const Vec3d p = x - n2 * (dot(x - tri[0], n2) / nn);
   Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(size);
   for (int i = 0; i < 3; ++i)
   {
      const Tri<double> sub{p, tri[i], tri[(i + 1) % 3]};
      const double signed_area = dot(cross(sub[1] - sub[0], sub[2] - sub[0]), n2) / nn;
      if (std::abs(signed_area) < 1e-14) { continue; }
      const double sign = signed_area > 0.0 ? 1.0 : -1.0;
      sum += sign * integrate_triangle(f, size, sub, 0, opt);
   }
   return sum;
}

AnalyticPotentials potentials(const Vec3d &x, const Tri<double> &tri, const AdaptiveOptions &opt)
{
   std::array<Vec3d, 3> g;
   for (int j = 0; j < 3; ++j) { g[j] = barycentric_gradient(tri, j); }
   // layout: 1/R, R, grad(1/R)[3], grad R[3], lambda_j/R [3], lambda_j grad(1/R) [9]
   constexpr int size = 20;
   auto f = [&](const Vec3d &y) -> Eigen::VectorXcd {
      Eigen::VectorXcd v(size);
      const Vec3d r = x - y;
      const double R = norm(r);
      const Vec3d grad_inv = r * (-1.0 / (R * R * R));
      v[0] = 1.0 / R;
      v[1] = R;
      for (int c = 0; c < 3; ++c)
      {
         v[2 + c] = grad_inv[c];
         v[5 + c] = r[c] / R;
      }
      for (int j = 0; j < 3; ++j)
      {
         const double lam = 1.0 + dot(g[j], y - tri[j]);
         v[8 + j] = lam / R;
         for (int c = 0; c < 3; ++c) { v[11 + 3 * j + c] = lam * grad_inv[c]; }
      }
      return v;
   };
   const Eigen::VectorXcd s = integrate_triangle_around(f, size, tri, x, opt);
   AnalyticPotentials out;
   out.one_over_r = s[0].real();
   out.r = s[1].real();
   for (int c = 0; c < 3; ++c)
   {
      out.grad_one_over_r[c] = s[2 + c].real();
      out.grad_r[c] = s[5 + c].real();
   }
   for (int j = 0; j < 3; ++j)
   {
      out.lambda_over_r[j] = s[8 + j].real();
      for (int c = 0; c < 3; ++c) { out.lambda_grad_one_over_r[j][c] = s[11 + 3 * j + c].real(); }
   }
   return out;
}

PairIntegralResult pair_integrals(const Tri<double> &tp, const Tri<double> &tq, double k,
                                  const AdaptiveOptions &opt)
{
   const double ap = triangle_area(tp), aq = triangle_area(tq);
   // inner: int g, int g y over tp; outer integrand assembled per (j, i)
   auto inner = [&](const Vec3d &x) {
      auto g = [&](const Vec3d &y) -> Eigen::VectorXcd {
         Eigen::VectorXcd v(4);
         const cdouble gv = std::exp(imag_unit * (k * norm(x - y))) / (4.0 * pi * norm(x - y));
         v << gv, gv * y.x, gv * y.y, gv * y.z;
         return v;
      };
      return integrate_triangle_around(g, 4, tp, x, opt);
   };
   constexpr int size = 10;  // I1[3][3], int int g
   auto outer = [&](const Vec3d &x) -> Eigen::VectorXcd {
      const Eigen::VectorXcd s = inner(x);
      const Vec3c s1{s[1], s[2], s[3]};
      Eigen::VectorXcd v(size);
      for (int j = 0; j < 3; ++j)
      {
         const Vec3d vj = (x - tq[j]) / (2.0 * aq);
         for (int i = 0; i < 3; ++i)
         {
            const Vec3c ui = (s1 - Vec3c(tp[i]) * s[0]) / (2.0 * ap);
            v[3 * j + i] = dot(Vec3c(vj), ui);
         }
      }
      v[9] = s[0];
      return v;
   };
   const Eigen::VectorXcd t = integrate_triangle(outer, size, tq, 0, opt);
   PairIntegralResult r;
   for (int j = 0; j < 3; ++j)
   {
      for (int i = 0; i < 3; ++i)
      {
         r.I1[j][i] = t[3 * j + i];
         r.I2[j][i] = t[9] / (aq * ap);
      }
   }
   return r;
}

std::array<cdouble, 3> local_rhs(const Tri<double> &tri, const PlaneWave &wave, double k, const AdaptiveOptions &opt)
{
   const double area = triangle_area(tri);
   auto f = [&](const Vec3d &x) -> Eigen::VectorXcd {
      Eigen::VectorXcd v(3);
      const cdouble phase = std::exp(imag_unit * (k * dot(wave.khat, x)));
      for (int i = 0; i < 3; ++i) { v[i] = dot(Vec3c((x - tri[i]) / (2.0 * area)), wave.E0) * phase; }
      return v;
   };
   const Eigen::VectorXcd s = integrate_triangle(f, 3, tri, 0, opt);
   return {s[0], s[1], s[2]};
}

} // namespace efie::oracle
