// SPDX-License-Identifier: Apache-2.0

#include "efie/shapederiv.hpp"

#include <vector>

#include "efie/kernel.hpp"
#include "efie/parallel.hpp"
#include "efie/potentials.hpp"

namespace efie {

double lemma1_distance_derivative(const Vec3d &x, const Vec3d &y, const Vec3d &tau, double lambda_x,
                                  double lambda_y)
{
   const Vec3d r = x - y;
   const double R = norm(r);
   if (!(R > 0.0)) { throw Error("lemma1_distance_derivative: coincident points"); }
   return dot(r, tau) * (lambda_x - lambda_y) / R;
}

Mat3d lemma1_jacobian_term(const SurfaceMesh &mesh, int tq, int tp, const ShapePerturbation &p)
{
   const Vec3d gx = hat_surface_gradient(mesh, tq, p.node);
   const Vec3d gy = hat_surface_gradient(mesh, tp, p.node);
   Mat3d T{};
   for (int a = 0; a < 3; ++a)
   {
      for (int b = 0; b < 3; ++b) { T[a][b] = gx[a] * p.tau[b] + p.tau[a] * gy[b]; }
   }
   return T;
}

cdouble kernel_shape_derivative_product(const Vec3d &x, const Vec3d &y, const Vec3d &tau, double lambda_x,
                                        double lambda_y, double k)
{
   const Vec3d r = x - y;
   const double R = norm(r);
   if (!(R > 0.0)) { throw Error("kernel_shape_derivative: coincident points"); }
   return green(k, R) * (imag_unit * k - 1.0 / R) * (dot(r, tau) * (lambda_x - lambda_y) / R);
}

cdouble kernel_shape_derivative(const Vec3d &x, const Vec3d &y, const Vec3d &tau, double lambda_x,
                                double lambda_y, double k)
{
   // tau . grad g = rho(|r|) (tau . r); avoids cancellation in the complex dot product
   const Vec3d r = x - y;
   const double R = norm(r);
   if (!(R > 0.0)) { throw Error("kernel_shape_derivative: coincident points"); }
   return green_radial(k, R) * dot(tau, r) * (lambda_x - lambda_y);
}

namespace {

struct OneSided
{
   Mat3c dI1{};
   Mat3c dI2{};
};

// Index counts of a monomial r_i r_j ... in the local frame.
struct Powers
{
   int a = 0, b = 0, c = 0;
   Powers with(int i) const
   {
      Powers p = *this;
      (i == 0 ? p.a : (i == 1 ? p.b : p.c)) += 1;
      return p;
   }
};

// Analytical derivative with the outer integral on `out` and the inner on
// `in`. m_out / m_in are the local indices of the moving node or -1.
OneSided one_sided_derivative(const Tri<double> &out, int m_out, const Tri<double> &in, int m_in, bool same,
                              const Vec3d &tau, double k, const QuadratureRule &rule, double singular_scale)
{
   OneSided res;
   const double area_out = triangle_area(out);
   const double area_in = triangle_area(in);
   const Vec3d gx = m_out >= 0 ? barycentric_gradient(out, m_out) : Vec3d{};
   const Vec3d gy = m_in >= 0 ? barycentric_gradient(in, m_in) : Vec3d{};
   const Vec3c tau_c(tau);
   const double c1 = 1.0 / (4.0 * pi);
   const double c2 = singular_scale * k * k / (8.0 * pi);

   cdouble charge_sum{};
   for (int ox = 0; ox < rule.npoints(); ++ox)
   {
      const Vec3d x = bary_point(out, rule.points[ox]);
      const double lam_x = m_out >= 0 ? rule.points[ox][m_out] : 0.0;

      // Smooth remainder by the rule.
      cdouble s0{}, g0{};
      Vec3c s1{}, g1{};
      for (int iy = 0; iy < rule.npoints(); ++iy)
      {
         const Vec3d y = bary_point(in, rule.points[iy]);
         const double lam_y = m_in >= 0 ? rule.points[iy][m_in] : 0.0;
         const Vec3d r = x - y;
         const double wy = rule.weights[iy] * area_in;
         const cdouble gb = green_smooth(k, norm(r));
         const cdouble dg = dot(tau_c, green_gradient_smooth(k, r)) * (lam_x - lam_y);
         s0 += wy * gb;
         s1 += (-r) * (wy * gb);
         g0 += wy * dg;
         g1 += (-r) * (wy * dg);
      }

      // Subtracted kernel in closed form. lambda_m(x) - lambda_m(y) = c + a.r
      // with a the gradient on `in` and c the mismatch of the two affine pieces.
      TrianglePotentials<double> pot(x, in, 3);
      const Vec3d a = gy;
      double c = 0.0;
      if (!same)
      {
         const double lam_in_x = m_in >= 0 ? 1.0 + dot(gy, x - in[m_in]) : 0.0;
         c = lam_x - lam_in_x;
      }
      s0 += c1 * pot.scalar(-1) - c2 * pot.scalar(1);
      s1 -= Vec3c(pot.first_moment(-1) * c1 - pot.first_moment(1) * c2);

      // K = c1 R^-3 + c2 R^-1; tau . grad g_s = -(tau.r) K
      auto kmom = [&](const Powers &p) {
         return c1 * pot.moment(-3, p.a, p.b, p.c) + c2 * pot.moment(-1, p.a, p.b, p.c);
      };
      const Vec3d tl = pot.to_local(tau);
      const Vec3d al = pot.to_local(a);
      double b0 = 0.0;
      Vec3d b1l{};
      for (int i = 0; i < 3; ++i)
      {
         const Powers pi_ = Powers{}.with(i);
         b0 += c * tl[i] * kmom(pi_);
         for (int l = 0; l < 3; ++l)
         {
            b1l[l] += c * tl[i] * kmom(pi_.with(l));
         }
         for (int j = 0; j < 3; ++j)
         {
            const Powers pij = pi_.with(j);
            const double ta = tl[i] * al[j];
            if (ta == 0.0) { continue; }
            b0 += ta * kmom(pij);
            for (int l = 0; l < 3; ++l) { b1l[l] += ta * kmom(pij.with(l)); }
         }
      }
      // int tau.grad g_s (dlambda) = -B0 and int tau.grad g_s (dlambda)(y - x) = +B1
      g0 += -b0;
      g1 += Vec3c(pot.to_global(b1l));

      const double wx = rule.weights[ox] * area_out;
      charge_sum += wx * g0;
      for (int i = 0; i < 3; ++i)
      {
         const Vec3d e = x - in[i];
         const Vec3c gu = (s1 + Vec3c(e) * s0) / (2.0 * area_in);
         for (int j = 0; j < 3; ++j)
         {
            const Vec3d v = (x - out[j]) / (2.0 * area_out);
            const cdouble jac = dot(v, gx) * dot(tau_c, gu) + dot(v, tau) * dot(Vec3c(gy), gu);
            const cdouble grad = (dot(Vec3c(v), g1) + dot(v, e) * g0) / (2.0 * area_in);
            res.dI1[j][i] += wx * (jac + grad);
         }
      }
   }
   const cdouble i2 = charge_sum / (area_out * area_in);
   for (auto &row : res.dI2) { row.fill(i2); }
   return res;
}

Mat3c combine(const MaterialParams &params, const Mat3c &I1, const Mat3c &I2)
{
   Mat3c a;
   const cdouble c2 = params.charge_coefficient(), c1 = params.current_coefficient();
   for (int j = 0; j < 3; ++j)
   {
      for (int i = 0; i < 3; ++i) { a[j][i] = c2 * I2[j][i] + c1 * I1[j][i]; }
   }
   return a;
}

bool touches(const SurfaceMesh &mesh, int t, int m) { return mesh.local_index(t, m) >= 0; }

Tri<DualReal> seeded_corners(const SurfaceMesh &mesh, int t, const ShapePerturbation &p)
{
   Tri<DualReal> tri;
   const auto &ids = mesh.triangle(t);
   for (int k = 0; k < 3; ++k)
   {
      const Vec3d &v = mesh.vertex(ids[k]);
      const Vec3d d = ids[k] == p.node ? p.tau : Vec3d{};
      tri[k] = {DualReal(v.x, d.x), DualReal(v.y, d.y), DualReal(v.z, d.z)};
   }
   return tri;
}

void check_perturbation(const SurfaceMesh &mesh, const ShapePerturbation &p)
{
   if (p.node < 0 || p.node >= static_cast<int>(mesh.num_vertices()))
   {
      throw Error("perturbation node " + std::to_string(p.node) + " out of range");
   }
}

} // namespace

PairDerivative d_pair(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                      const MaterialParams &params, const QuadratureRule &rule, const DerivOptions &opt)
{
   check_perturbation(mesh, p);
   PairDerivative out;
   const int mp = mesh.local_index(tp, p.node);
   const int mq = mesh.local_index(tq, p.node);
   if (mp < 0 && mq < 0) { return out; }  // exactly zero off the node's star
   const auto Tp = mesh.corners(tp);
   const auto Tq = mesh.corners(tq);
   const bool same = tp == tq;
   const double k = params.k();
   auto a = one_sided_derivative(Tq, mq, Tp, mp, same, p.tau, k, rule, opt.singular_scale);
   auto b = one_sided_derivative(Tp, mp, Tq, mq, same, p.tau, k, rule, opt.singular_scale);
   out.dI1 = detail::symmetrize(a.dI1, b.dI1);
   out.dI2 = detail::symmetrize(a.dI2, b.dI2);
   out.dA_local = combine(params, out.dI1, out.dI2);
   return out;
}

Mat3c d_pair_I1(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p, const MaterialParams &params,
                const QuadratureRule &rule)
{
   return d_pair(mesh, tp, tq, p, params, rule).dI1;
}

Mat3c d_pair_I2(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p, const MaterialParams &params,
                const QuadratureRule &rule)
{
   return d_pair(mesh, tp, tq, p, params, rule).dI2;
}

Mat3c d_local_pair_matrix(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                          const MaterialParams &params, const QuadratureRule &rule, const DerivOptions &opt)
{
   return d_pair(mesh, tp, tq, p, params, rule, opt).dA_local;
}

AdPairResult ad_pair(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                     const MaterialParams &params, const QuadratureRule &rule)
{
   check_perturbation(mesh, p);
   const auto Tp = seeded_corners(mesh, tp, p);
   const auto Tq = seeded_corners(mesh, tq, p);
   auto I = pair_integrals(Tp, Tq, params.k(), rule, Strategy::subtraction);
   AdPairResult out;
   const cdouble c2 = params.charge_coefficient(), c1 = params.current_coefficient();
   for (int j = 0; j < 3; ++j)
   {
      for (int i = 0; i < 3; ++i)
      {
         // same expression as local_pair_matrix so the value channel matches bitwise
         const DualComplex a = c2 * I.I2[j][i] + c1 * I.I1[j][i];
         out.value[j][i] = a.val;
         out.derivative[j][i] = a.der;
         out.integrals.dI1[j][i] = I.I1[j][i].der;
         out.integrals.dI2[j][i] = I.I2[j][i].der;
      }
   }
   out.integrals.dA_local = out.derivative;
   return out;
}

Mat3c ad_local_pair_matrix(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                           const MaterialParams &params, const QuadratureRule &rule)
{
   return ad_pair(mesh, tp, tq, p, params, rule).derivative;
}

Mat3c fd_local_pair_matrix(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                           const MaterialParams &params, const QuadratureRule &rule, double h, FdScheme scheme)
{
   if (!(h > 0.0)) { throw Error("finite-difference step must be positive"); }
   check_perturbation(mesh, p);
   const SurfaceMesh plus = deform_mesh(mesh, p, h);
   const Mat3c fp = local_pair_matrix(plus, tp, tq, params, rule);
   const SurfaceMesh base = scheme == FdScheme::forward ? mesh : deform_mesh(mesh, p, -h);
   const Mat3c f0 = local_pair_matrix(base, tp, tq, params, rule);
   const double step = scheme == FdScheme::forward ? h : 2.0 * h;
   Mat3c d;
   for (int j = 0; j < 3; ++j)
   {
      for (int i = 0; i < 3; ++i) { d[j][i] = (fp[j][i] - f0[j][i]) / step; }
   }
   return d;
}

namespace {

// Row-major accumulation over (q, p) of the blocks of pairs touching the node.
template <typename BlockFn>
Eigen::MatrixXcd accumulate_touching(const SurfaceMesh &mesh, const DofMap &dofs, int node, bool parallel,
                                     BlockFn &&block)
{
   const int nt = static_cast<int>(mesh.num_triangles());
   std::vector<std::array<int, 2>> pairs;  // p <= q
   for (int p = 0; p < nt; ++p)
   {
      for (int q = p; q < nt; ++q)
      {
         if (touches(mesh, p, node) || touches(mesh, q, node)) { pairs.push_back({p, q}); }
      }
   }
   std::vector<Mat3c> blocks(pairs.size());
   parallel_for(pairs.size(), parallel, [&](std::size_t idx) { blocks[idx] = block(pairs[idx][0], pairs[idx][1]); });

   std::vector<int> index(static_cast<std::size_t>(nt) * nt, -1);
   for (std::size_t idx = 0; idx < pairs.size(); ++idx)
   {
      index[static_cast<std::size_t>(pairs[idx][0]) * nt + pairs[idx][1]] = static_cast<int>(idx);
   }
   const int n = static_cast<int>(dofs.size());
   Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
   for (int q = 0; q < nt; ++q)
   {
      for (int p = 0; p < nt; ++p)
      {
         const bool stored = p <= q;
         const int idx = stored ? index[static_cast<std::size_t>(p) * nt + q] : index[static_cast<std::size_t>(q) * nt + p];
         if (idx < 0) { continue; }
         const Mat3c &blk = blocks[idx];
         for (int j = 0; j < 3; ++j)
         {
            const auto &row = dofs.slot(q, j);
            if (row.dof < 0) { continue; }
            for (int i = 0; i < 3; ++i)
            {
               const auto &col = dofs.slot(p, i);
               if (col.dof < 0) { continue; }
               A(row.dof, col.dof) += static_cast<double>(row.sign * col.sign) * (stored ? blk[j][i] : blk[i][j]);
            }
         }
      }
   }
   return A;
}

} // namespace

MatrixDerivative d_assemble(const SurfaceMesh &mesh, const DofMap &dofs, const MaterialParams &params,
                            const QuadratureRule &rule, const ShapePerturbation &p, const PlaneWave &wave,
                            bool parallel, const DerivOptions &opt)
{
   check_perturbation(mesh, p);
   params.validate();
   MatrixDerivative out;
   out.perturbation = p;
   out.dA = accumulate_touching(mesh, dofs, p.node, parallel, [&](int tp, int tq) {
      return d_local_pair_matrix(mesh, tp, tq, p, params, rule, opt);
   });
   out.db = d_rhs_plane_wave(mesh, dofs, wave, params, rule, p);
   return out;
}

Eigen::MatrixXcd ad_assemble(const SurfaceMesh &mesh, const DofMap &dofs, const MaterialParams &params,
                             const QuadratureRule &rule, const ShapePerturbation &p)
{
   check_perturbation(mesh, p);
   return accumulate_touching(mesh, dofs, p.node, false, [&](int tp, int tq) {
      return ad_local_pair_matrix(mesh, tp, tq, p, params, rule);
   });
}

Eigen::VectorXcd d_rhs_plane_wave(const SurfaceMesh &mesh, const DofMap &dofs, const PlaneWave &wave,
                                  const MaterialParams &params, const QuadratureRule &rule,
                                  const ShapePerturbation &p)
{
   check_perturbation(mesh, p);
   wave.validate();
   const double k = params.k();
   const cdouble phase_rate = imag_unit * (k * dot(wave.khat, p.tau));
   Eigen::VectorXcd db = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dofs.size()));
   for (int t : mesh.star(p.node))
   {
      const auto tri = mesh.corners(t);
      const int m = mesh.local_index(t, p.node);
      const Vec3d g = barycentric_gradient(tri, m);
      const double area = triangle_area(tri);
      std::array<cdouble, 3> loc{};
      for (int q = 0; q < rule.npoints(); ++q)
      {
         const Vec3d x = bary_point(tri, rule.points[q]);
         const Vec3c e = wave.E0 * expi(k * dot(wave.khat, x));
         const double lam = rule.points[q][m];
         const double w = rule.weights[q] * area;
         for (int i = 0; i < 3; ++i)
         {
            const Vec3d f = (x - tri[i]) / (2.0 * area);
            loc[i] += w * (dot(g, f) * dot(Vec3c(p.tau), e) + lam * dot(f, e) * phase_rate);
         }
      }
      for (int i = 0; i < 3; ++i)
      {
         const auto &s = dofs.slot(t, i);
         if (s.dof >= 0) { db(s.dof) += static_cast<double>(s.sign) * loc[i]; }
      }
   }
   return db;
}

Eigen::VectorXcd ad_rhs_plane_wave(const SurfaceMesh &mesh, const DofMap &dofs, const PlaneWave &wave,
                                   const MaterialParams &params, const QuadratureRule &rule,
                                   const ShapePerturbation &p)
{
   check_perturbation(mesh, p);
   wave.validate();
   Eigen::VectorXcd db = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dofs.size()));
   for (int t : mesh.star(p.node))
   {
      const auto loc = local_rhs(seeded_corners(mesh, t, p), wave, params.k(), rule);
      for (int i = 0; i < 3; ++i)
      {
         const auto &s = dofs.slot(t, i);
         if (s.dof >= 0) { db(s.dof) += static_cast<double>(s.sign) * loc[i].der; }
      }
   }
   return db;
}

double frobenius(const Mat3c &a)
{
   double s = 0.0;
   for (const auto &row : a)
   {
      for (const auto &v : row) { s += std::norm(v); }
   }
   return std::sqrt(s);
}

double relative_frobenius(const Mat3c &a, const Mat3c &b, const Mat3c &ref)
{
   Mat3c d;
   for (int j = 0; j < 3; ++j)
   {
      for (int i = 0; i < 3; ++i) { d[j][i] = a[j][i] - b[j][i]; }
   }
   return frobenius(d) / frobenius(ref);
}

} // namespace efie
