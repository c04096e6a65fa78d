// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>

#include "efie/vec3.hpp"

namespace efie {

/// Closed-form integrals over a flat triangle T of the form
///
///     int_T r^alpha R^q dy,   r = x - y,  R = |r|,
///
/// for an observation point x, q in {-3, -1, 1} and monomials r^alpha of
/// total degree up to `order`. Computed by reducing surface moments to
/// edge line integrals with the divergence theorem in the triangle plane.
///
/// Monomials are expressed in a local frame (e1, e2, n) where n is the
/// unit normal given by the winding order and the third component of r is
/// the signed height d of x above the plane.
///
/// When x lies in the plane and inside T the normal component of
/// int grad(1/R) is a jump; the principal value (zero solid angle) is
/// returned in that case.
template <typename R>
class TrianglePotentials
{
public:
   /// `order` is 1 (scalars and first moments, q = -1 and 1) or 3 (adds
   /// q = -3 and moments of degree two and three for q = -3 and -1).
   TrianglePotentials(const Vec3<R> &x, const Tri<R> &tri, int order = 1);

   const Vec3<R> &e1() const { return e1_; }
   const Vec3<R> &e2() const { return e2_; }
   const Vec3<R> &normal() const { return n_; }
   const R &height() const { return d_; }
   /// Signed solid angle subtended by T at x (positive on the normal side).
   const R &solid_angle() const { return omega_; }

   /// int_T R^q dy for q = -1 or 1.
   R scalar(int q) const { return q < 0 ? Fm1_[0][0] : Fp1_[0][0]; }

   /// int_T (r.e1)^a (r.e2)^b (r.n)^c R^q dy.
   R moment(int q, int a, int b, int c) const;

   /// Component of a global vector in the local frame.
   template <typename V>
   auto to_local(const Vec3<V> &v) const
   {
      return Vec3<decltype(dot(v, e1_))>{dot(v, e1_), dot(v, e2_), dot(v, n_)};
   }
   template <typename V>
   auto to_global(const Vec3<V> &v) const
   {
      return e1_ * v.x + e2_ * v.y + n_ * v.z;
   }

   /// int_T r R^q dy in global coordinates, q in {-3, -1, 1}.
   Vec3<R> first_moment(int q) const
   {
      return to_global(Vec3<R>{moment(q, 1, 0, 0), moment(q, 0, 1, 0), moment(q, 0, 0, 1)});
   }

private:
   struct EdgeData
   {
      std::array<R, 2> m, l;  // outward normal and tangent in the plane
      R t0, sm, sp, rm, rp, r0sq;
      R f;                    // int 1/R ds
      R L1, L3;               // int R ds, int R^3 ds
   };

   // int over the edge of xi^beta R^q for |beta| <= 2, q in {-1, 1}
   R edge_moment(const EdgeData &e, int b1, int b2, int q) const;

   Vec3<R> e1_, e2_, n_;
   R d_{}, omega_{};
   std::array<EdgeData, 3> edges_;
   int order_;
   // In-plane moments int xi1^a xi2^b R^q, xi = in-plane offset of y
   // from the projection of x; index [a][b].
   R Fm3_[4][4]{}, Fm1_[4][4]{}, Fp1_[2][2]{};
};

namespace detail {

/// log((R+ + s+)/(R- + s-)) evaluated without cancellation.
template <typename R>
R edge_log(const R &sm, const R &sp, const R &rm, const R &rp, const R &r0sq)
{
   using std::log;
   if (sm >= 0.0) { return log((rp + sp) / (rm + sm)); }
   if (sp <= 0.0) { return log((rm - sm) / (rp - sp)); }
   return log((rp + sp) * (rm - sm) / r0sq);
}

template <typename R>
R solid_angle(const Vec3<R> &x, const Tri<R> &tri)
{
   using std::atan2;
   using std::sqrt;
   Vec3<R> a = tri[0] - x, b = tri[1] - x, c = tri[2] - x;
   R la = norm(a), lb = norm(b), lc = norm(c);
   R num = dot(a, cross(b, c));
   R den = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
   // In the plane and inside the triangle: principal value.
   if (den < 0.0 && std::abs(value_of(num)) <= 1e-12 * value_of(la * lb * lc))
   {
      return R(0.0);
   }
   return -2.0 * atan2(num, den);
}

} // namespace detail

template <typename R>
TrianglePotentials<R>::TrianglePotentials(const Vec3<R> &x, const Tri<R> &tri, int order)
   : order_(order)
{
   using std::sqrt;
   Vec3<R> n2 = twice_area_normal(tri);
   n_ = n2 / norm(n2);
   Vec3<R> a = tri[1] - tri[0];
   e1_ = a / norm(a);
   e2_ = cross(n_, e1_);
   d_ = dot(x - tri[0], n_);
   omega_ = detail::solid_angle(x, tri);

   std::array<std::array<R, 2>, 3> p;
   for (int k = 0; k < 3; ++k)
   {
      Vec3<R> rel = tri[k] - x;
      p[k] = {dot(rel, e1_), dot(rel, e2_)};
   }
   const R d2 = d_ * d_;
   R sum_t0f{}, sum_t0L1{};
   for (int i = 0; i < 3; ++i)
   {
      EdgeData &e = edges_[i];
      const auto &pm = p[(i + 1) % 3];
      const auto &pp = p[(i + 2) % 3];
      R dx = pp[0] - pm[0], dy = pp[1] - pm[1];
      R len = sqrt(dx * dx + dy * dy);
      e.l = {dx / len, dy / len};
      e.m = {e.l[1], -e.l[0]};
      e.t0 = pm[0] * e.m[0] + pm[1] * e.m[1];
      e.sm = pm[0] * e.l[0] + pm[1] * e.l[1];
      e.sp = pp[0] * e.l[0] + pp[1] * e.l[1];
      e.r0sq = e.t0 * e.t0 + d2;
      e.rm = sqrt(e.r0sq + e.sm * e.sm);
      e.rp = sqrt(e.r0sq + e.sp * e.sp);
      e.f = detail::edge_log(e.sm, e.sp, e.rm, e.rp, e.r0sq);
      e.L1 = 0.5 * (e.sp * e.rp - e.sm * e.rm + e.r0sq * e.f);
      e.L3 = 0.25 * (e.sp * e.rp * e.rp * e.rp - e.sm * e.rm * e.rm * e.rm + 3.0 * e.r0sq * e.L1);
      sum_t0f += e.t0 * e.f;
      sum_t0L1 += e.t0 * e.L1;
   }

   Fm1_[0][0] = sum_t0f - d_ * omega_;
   Fp1_[0][0] = (sum_t0L1 + d2 * Fm1_[0][0]) / 3.0;
   for (int a = 0; a < 2; ++a)
   {
      R s1{}, s3{};
      for (const auto &e : edges_)
      {
         s1 += e.m[a] * e.L1;
         s3 += e.m[a] * e.L3;
      }
      Fm1_[a == 0 ? 1 : 0][a == 0 ? 0 : 1] = s1;
      Fp1_[a == 0 ? 1 : 0][a == 0 ? 0 : 1] = s3 / 3.0;
   }
   if (order_ < 3) { return; }

   // F_q(beta + e_dir) = 1/(q+2) [ sum_i m_i,dir E_i(beta, q+2) - beta_dir F_{q+2}(beta - e_dir) ]
   auto raise = [&](int q, int a, int b) -> R {
      const int dir = a > 0 ? 0 : 1;
      const int b1 = a - (dir == 0), b2 = b - (dir == 1);
      R s{};
      for (const auto &e : edges_) { s += e.m[dir] * edge_moment(e, b1, b2, q + 2); }
      const int beta_dir = dir == 0 ? b1 : b2;
      if (beta_dir > 0)
      {
         const int c1 = b1 - (dir == 0), c2 = b2 - (dir == 1);
         const R &lower = q == -3 ? Fm1_[c1][c2] : Fp1_[c1][c2];
         s -= static_cast<double>(beta_dir) * lower;
      }
      return s / static_cast<double>(q + 2);
   };
   for (int deg = 1; deg <= 3; ++deg)
   {
      for (int a = deg; a >= 0; --a)
      {
         const int b = deg - a;
         Fm3_[a][b] = raise(-3, a, b);
         if (deg >= 2) { Fm1_[a][b] = raise(-1, a, b); }
      }
   }
}

template <typename R>
R TrianglePotentials<R>::edge_moment(const EdgeData &e, int b1, int b2, int q) const
{
   // xi on the edge is t0 m + s l; expand xi1^b1 xi2^b2 in powers of s.
   std::array<R, 3> c{R(1.0), R(0.0), R(0.0)};
   auto mul_linear = [&](const R &c0, const R &c1) {
      c = {c[0] * c0, c[1] * c0 + c[0] * c1, c[2] * c0 + c[1] * c1};
   };
   for (int k = 0; k < b1; ++k) { mul_linear(e.t0 * e.m[0], e.l[0]); }
   for (int k = 0; k < b2; ++k) { mul_linear(e.t0 * e.m[1], e.l[1]); }

   R k0, k1, k2;
   if (q == -1)
   {
      k0 = e.f;
      k1 = e.rp - e.rm;
      k2 = e.L1 - e.r0sq * e.f;
   }
   else
   {
      k0 = e.L1;
      k1 = (e.rp * e.rp * e.rp - e.rm * e.rm * e.rm) / 3.0;
      k2 = e.L3 - e.r0sq * e.L1;
   }
   R out = c[0] * k0;
   if (b1 + b2 >= 1) { out += c[1] * k1; }
   if (b1 + b2 >= 2) { out += c[2] * k2; }
   return out;
}

template <typename R>
R TrianglePotentials<R>::moment(int q, int a, int b, int c) const
{
   R dc(1.0);
   for (int k = 0; k < c; ++k) { dc = dc * d_; }
   const double sgn = ((a + b) % 2 == 0) ? 1.0 : -1.0;
   switch (q)
   {
      case -3:
         if (a == 0 && b == 0)
         {
            // int R^-3 = solid angle / d (unbounded in the plane), d^c int R^-3 = d^(c-1) * solid angle
            if (c == 0) { return omega_ / d_; }
            R dcm(1.0);
            for (int k = 1; k < c; ++k) { dcm = dcm * d_; }
            return dcm * omega_;
         }
         return sgn * dc * Fm3_[a][b];
      case -1: return sgn * dc * Fm1_[a][b];
      default: return sgn * dc * Fp1_[a][b];
   }
}

/// Potential integrals of a flat triangle at one observation point.
/// lambda_j are the barycentric coordinates of T (affinely extended).
struct AnalyticPotentials
{
   double one_over_r = 0.0;                    // int 1/R
   double r = 0.0;                             // int R
   Vec3d grad_one_over_r;                      // int grad_x (1/R)
   Vec3d grad_r;                               // int grad_x R
   std::array<double, 3> lambda_over_r{};      // int lambda_j / R
   std::array<Vec3d, 3> lambda_grad_one_over_r; // int lambda_j grad_x (1/R)
};

AnalyticPotentials analytic_potentials(const Vec3d &x, const Tri<double> &tri);

} // namespace efie
