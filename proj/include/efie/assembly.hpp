// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "efie/kernel.hpp"
#include "efie/mesh.hpp"
#include "efie/potentials.hpp"
#include "efie/quadrature.hpp"

namespace efie {

template <typename C>
using Mat3 = std::array<std::array<C, 3>, 3>;
using Mat3c = Mat3<cdouble>;

struct MaterialParams
{
   double omega = 1.0;
   double epsilon = 1.0;
   double mu = 1.0;

   double k() const { return omega * std::sqrt(mu * epsilon); }
   /// Coefficient of I2 in the bilinear form, i/(omega eps).
   cdouble charge_coefficient() const { return imag_unit / (omega * epsilon); }
   /// Coefficient of I1, -i omega mu.
   cdouble current_coefficient() const { return -imag_unit * (omega * mu); }
   void validate() const;
};

enum class Strategy { subtraction, plain };

/// I1[j][i] = int_Tq v_j . int_Tp g u_i and I2 likewise with divergences;
/// rows are test functions on Tq, columns trial functions on Tp.
struct PairIntegralResult
{
   Mat3c I1{};
   Mat3c I2{};
};

template <typename C>
struct PairIntegrals
{
   Mat3<C> I1{};
   Mat3<C> I2{};
};

/// Incident plane wave E0 exp(i k khat . x).
struct PlaneWave
{
   Vec3c E0{};
   Vec3d khat{0.0, 0.0, -1.0};
   void validate() const;
};

namespace detail {

/// Galerkin integrals with the outer (test) integral on `out` and the inner
/// (trial) integral on `in`. Result indices are [out local][in local].
/// With subtraction the g_s part of the inner integral is evaluated in
/// closed form and the remainder by the rule.
template <typename R>
PairIntegrals<complex_of<R>> one_sided_integrals(const Tri<R> &out, const Tri<R> &in, double k,
                                                 const QuadratureRule &rule, Strategy strategy)
{
   using C = complex_of<R>;
   PairIntegrals<C> res;
   const R area_out = triangle_area(out);
   const R area_in = triangle_area(in);
   C scalar_sum{};
   for (int ox = 0; ox < rule.npoints(); ++ox)
   {
      const Vec3<R> x = bary_point(out, rule.points[ox]);
      C s0{};
      Vec3<C> s1{};  // int g (y - x) dy
      for (int iy = 0; iy < rule.npoints(); ++iy)
      {
         const Vec3<R> y = bary_point(in, rule.points[iy]);
         const Vec3<R> yx = y - x;
         const R wy = rule.weights[iy] * area_in;
         C g = strategy == Strategy::subtraction ? green_smooth(k, norm(yx)) : green(k, norm(yx));
         C wg = wy * g;
         s0 += wg;
         s1 += yx * wg;
      }
      if (strategy == Strategy::subtraction)
      {
         TrianglePotentials<R> pot(x, in, 1);
         const double c1 = 1.0 / (4.0 * pi), c2 = k * k / (8.0 * pi);
         s0 += C(c1 * pot.scalar(-1) - c2 * pot.scalar(1));
         // y - x = -r
         const Vec3<R> m = pot.first_moment(-1) * c1 - pot.first_moment(1) * c2;
         s1 -= Vec3<C>(m);
      }
      const R wx = rule.weights[ox] * area_out;
      scalar_sum += wx * s0;
      for (int i = 0; i < 3; ++i)
      {
         // int g u_i dy = (s1 + (x - P_i) s0) / (2 |T_in|)
         const Vec3<C> gu = (s1 + (x - in[i]) * s0) / (2.0 * area_in);
         for (int j = 0; j < 3; ++j)
         {
            const Vec3<R> v = (x - out[j]) / (2.0 * area_out);
            res.I1[j][i] += wx * dot(v, gu);
         }
      }
   }
   const C i2 = scalar_sum / (area_out * area_in);
   for (auto &row : res.I2) { row.fill(i2); }
   return res;
}

template <typename C>
Mat3<C> symmetrize(const Mat3<C> &a, const Mat3<C> &bt)
{
   Mat3<C> r;
   for (int j = 0; j < 3; ++j)
   {
      for (int i = 0; i < 3; ++i) { r[j][i] = 0.5 * (a[j][i] + bt[i][j]); }
   }
   return r;
}

} // namespace detail

/// Pair integrals averaged over both assignments of the outer and inner
/// roles, which makes them exactly reciprocal: I(Tp,Tq) = I(Tq,Tp)^T.
template <typename R>
PairIntegrals<complex_of<R>> pair_integrals(const Tri<R> &tp, const Tri<R> &tq, double k,
                                            const QuadratureRule &rule, Strategy strategy)
{
   auto a = detail::one_sided_integrals(tq, tp, k, rule, strategy);
   auto b = detail::one_sided_integrals(tp, tq, k, rule, strategy);
   return {detail::symmetrize(a.I1, b.I1), detail::symmetrize(a.I2, b.I2)};
}

/// a_pq = (i/(omega eps)) I2 - i omega mu I1.
template <typename R>
Mat3<complex_of<R>> local_pair_matrix(const Tri<R> &tp, const Tri<R> &tq, const MaterialParams &params,
                                      const QuadratureRule &rule, Strategy strategy = Strategy::subtraction)
{
   auto I = pair_integrals(tp, tq, params.k(), rule, strategy);
   Mat3<complex_of<R>> a;
   const cdouble c2 = params.charge_coefficient(), c1 = params.current_coefficient();
   for (int j = 0; j < 3; ++j)
   {
      for (int i = 0; i < 3; ++i) { a[j][i] = c2 * I.I2[j][i] + c1 * I.I1[j][i]; }
   }
   return a;
}

/// Mesh-level wrappers. `plain` is only accepted for non-touching pairs.
PairIntegralResult pair_integrals(const SurfaceMesh &mesh, int tp, int tq, const MaterialParams &params,
                                  const QuadratureRule &rule, Strategy strategy = Strategy::subtraction);
Mat3c local_pair_matrix(const SurfaceMesh &mesh, int tp, int tq, const MaterialParams &params,
                        const QuadratureRule &rule, Strategy strategy = Strategy::subtraction);

/// Dense EFIE matrix. Entry (g(q,j), g(p,i)) accumulates
/// sign(q,j) sign(p,i) a_pq[j][i] over triangle pairs in row-major (q,p) order.
Eigen::MatrixXcd assemble_system(const SurfaceMesh &mesh, const DofMap &dofs, const MaterialParams &params,
                                 const QuadratureRule &rule, bool parallel = true);

/// b[g] = sum over the two sides of sign * int_T f_i . E0 e^{ik khat.x} dx.
Eigen::VectorXcd rhs_plane_wave(const SurfaceMesh &mesh, const DofMap &dofs, const PlaneWave &wave,
                                const MaterialParams &params, const QuadratureRule &rule);

/// Local RHS contributions int_T f_i . e_p dx, templated for dual evaluation.
template <typename R>
std::array<complex_of<R>, 3> local_rhs(const Tri<R> &tri, const PlaneWave &wave, double k,
                                       const QuadratureRule &rule)
{
   using C = complex_of<R>;
   std::array<C, 3> out{};
   const R area = triangle_area(tri);
   for (int q = 0; q < rule.npoints(); ++q)
   {
      const Vec3<R> x = bary_point(tri, rule.points[q]);
      const C phase = expi(k * dot(wave.khat, x));
      const R w = rule.weights[q] * area;
      for (int i = 0; i < 3; ++i)
      {
         const Vec3<R> f = (x - tri[i]) / (2.0 * area);
         out[i] += (w * dot(f, wave.E0)) * phase;
      }
   }
   return out;
}

struct SystemState
{
   Eigen::MatrixXcd A;
   Eigen::VectorXcd b;
   Eigen::VectorXcd x;
};

} // namespace efie
