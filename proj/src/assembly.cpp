// SPDX-License-Identifier: Apache-2.0

#include "efie/assembly.hpp"

#include <string>
#include <vector>

#include "efie/parallel.hpp"

namespace efie {

void MaterialParams::validate() const
{
   if (!(omega > 0.0) || !(epsilon > 0.0) || !(mu > 0.0) || !std::isfinite(omega) ||
       !std::isfinite(epsilon) || !std::isfinite(mu))
   {
      throw Error("material parameters omega, epsilon, mu must be positive and finite");
   }
}

void PlaneWave::validate() const
{
   if (std::abs(norm(khat) - 1.0) > 1e-12) { throw Error("plane wave direction must be a unit vector"); }
   const cdouble t = dot(E0, Vec3c(khat));
   if (std::abs(t) > 1e-12 * std::max(1.0, norm(E0)))
   {
      throw Error("plane wave amplitude must be transverse to the propagation direction");
   }
}

PairIntegralResult pair_integrals(const SurfaceMesh &mesh, int tp, int tq, const MaterialParams &params,
                                  const QuadratureRule &rule, Strategy strategy)
{
   if (strategy == Strategy::plain && classify_pair(mesh, tp, tq) != PairClass::near)
   {
      throw Error("plain quadrature requested for a touching triangle pair (" +
                  std::string(to_string(classify_pair(mesh, tp, tq))) + ")");
   }
   auto I = pair_integrals(mesh.corners(tp), mesh.corners(tq), params.k(), rule, strategy);
   return {I.I1, I.I2};
}

Mat3c local_pair_matrix(const SurfaceMesh &mesh, int tp, int tq, const MaterialParams &params,
                        const QuadratureRule &rule, Strategy strategy)
{
   if (strategy == Strategy::plain && classify_pair(mesh, tp, tq) != PairClass::near)
   {
      throw Error("plain quadrature requested for a touching triangle pair");
   }
   return local_pair_matrix(mesh.corners(tp), mesh.corners(tq), params, rule, strategy);
}

Eigen::MatrixXcd assemble_system(const SurfaceMesh &mesh, const DofMap &dofs, const MaterialParams &params,
                                 const QuadratureRule &rule, bool parallel)
{
   params.validate();
   const int nt = static_cast<int>(mesh.num_triangles());
   const int n = static_cast<int>(dofs.size());

   // Pairs (p, q) with p <= q; the (q, p) block is the exact transpose.
   std::vector<std::array<int, 2>> pairs;
   pairs.reserve(static_cast<std::size_t>(nt) * (nt + 1) / 2);
   for (int p = 0; p < nt; ++p)
   {
      for (int q = p; q < nt; ++q) { pairs.push_back({p, q}); }
   }
   std::vector<Mat3c> blocks(pairs.size());
   parallel_for(pairs.size(), parallel, [&](std::size_t idx) {
      const auto [p, q] = pairs[idx];
      blocks[idx] = local_pair_matrix(mesh.corners(p), mesh.corners(q), params, rule);
   });
   auto pair_index = [nt](int p, int q) {
      // position of (p, q), p <= q, in the row-major upper triangle
      return static_cast<std::size_t>(p) * nt - static_cast<std::size_t>(p) * (p - 1) / 2 + (q - p);
   };

   Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
   for (int q = 0; q < nt; ++q)
   {
      for (int p = 0; p < nt; ++p)
      {
         // block a_pq has rows on q (test) and columns on p (trial)
         const bool stored = p <= q;
         const Mat3c &blk = stored ? blocks[pair_index(p, q)] : blocks[pair_index(q, p)];
         for (int j = 0; j < 3; ++j)
         {
            const auto &row = dofs.slot(q, j);
            if (row.dof < 0) { continue; }
            for (int i = 0; i < 3; ++i)
            {
               const auto &col = dofs.slot(p, i);
               if (col.dof < 0) { continue; }
               const cdouble a = stored ? blk[j][i] : blk[i][j];
               A(row.dof, col.dof) += static_cast<double>(row.sign * col.sign) * a;
            }
         }
      }
   }
   return A;
}

Eigen::VectorXcd rhs_plane_wave(const SurfaceMesh &mesh, const DofMap &dofs, const PlaneWave &wave,
                                const MaterialParams &params, const QuadratureRule &rule)
{
   wave.validate();
   Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dofs.size()));
   for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t)
   {
      const auto loc = local_rhs(mesh.corners(t), wave, params.k(), rule);
      for (int i = 0; i < 3; ++i)
      {
         const auto &s = dofs.slot(t, i);
         if (s.dof >= 0) { b(s.dof) += static_cast<double>(s.sign) * loc[i]; }
      }
   }
   return b;
}

} // namespace efie
