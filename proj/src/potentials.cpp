// SPDX-License-Identifier: Apache-2.0

#include "efie/potentials.hpp"

#include "efie/mesh.hpp"

namespace efie {

template class TrianglePotentials<double>;
template class TrianglePotentials<DualReal>;

AnalyticPotentials analytic_potentials(const Vec3d &x, const Tri<double> &tri)
{
   TrianglePotentials<double> pot(x, tri, 3);
   AnalyticPotentials out;
   out.one_over_r = pot.scalar(-1);
   out.r = pot.scalar(1);
   const Vec3d m3 = pot.first_moment(-3);
   const Vec3d m1 = pot.first_moment(-1);
   out.grad_one_over_r = -m3;
   out.grad_r = m1;

   // int r r^T / R^3 in the local frame
   std::array<std::array<double, 3>, 3> rr{};
   for (int i = 0; i < 3; ++i)
   {
      for (int j = 0; j < 3; ++j)
      {
         std::array<int, 3> pw{0, 0, 0};
         ++pw[i];
         ++pw[j];
         rr[i][j] = pot.moment(-3, pw[0], pw[1], pw[2]);
      }
   }
   for (int j = 0; j < 3; ++j)
   {
      const Vec3d g = barycentric_gradient(tri, j);
      const double lam_x = dot(g, x - tri[(j + 1) % 3]);
      out.lambda_over_r[j] = lam_x * out.one_over_r - dot(g, m1);
      const Vec3d gl = pot.to_local(g);
      Vec3d rrg_local{};
      for (int i = 0; i < 3; ++i)
      {
         rrg_local[i] = rr[i][0] * gl.x + rr[i][1] * gl.y + rr[i][2] * gl.z;
      }
      out.lambda_grad_one_over_r[j] = -(m3 * lam_x - pot.to_global(rrg_local));
   }
   return out;
}

} // namespace efie
