// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include <Eigen/Dense>

#include "efie/assembly.hpp"
#include "efie/mesh.hpp"
#include "efie/quadrature.hpp"

namespace efie {

// Shape derivatives under the node deformation F_s(x) = x + s tau lambda_m(x),
// taken at s = 0. Three independent backends are provided:
//
//  * analytical: the pulled-back integrals differentiated under the integral
//    sign, evaluated with the same singular/smooth kernel split and rule as
//    the value code;
//  * ad: the value code run with dual numbers seeded by the vertex velocities;
//  * fd: finite differences of the value code across deformed meshes.

using Mat3d = std::array<std::array<double, 3>, 3>;

/// d/ds |F_s(x) - F_s(y)| at s = 0.
double lemma1_distance_derivative(const Vec3d &x, const Vec3d &y, const Vec3d &tau, double lambda_x,
                                  double lambda_y);

/// d/ds F_s'(x)^T F_s'(y) at s = 0 for x in tq and y in tp:
/// grad(lambda_m)|_tq tau^T + tau grad(lambda_m)|_tp^T.
Mat3d lemma1_jacobian_term(const SurfaceMesh &mesh, int tq, int tp, const ShapePerturbation &p);

/// d/ds g_k(F_s(x) - F_s(y)) at s = 0, in the product form
/// g (ik - 1/R) (x-y).tau (lambda_x - lambda_y) / R.
cdouble kernel_shape_derivative_product(const Vec3d &x, const Vec3d &y, const Vec3d &tau, double lambda_x,
                                        double lambda_y, double k);
/// The same quantity as tau . grad g_k(x - y) (lambda_x - lambda_y).
cdouble kernel_shape_derivative(const Vec3d &x, const Vec3d &y, const Vec3d &tau, double lambda_x,
                                double lambda_y, double k);

/// Derivatives of the pair integrals and of the local matrix; indices as
/// in PairIntegralResult (rows test on tq, columns trial on tp).
struct PairDerivative
{
   Mat3c dI1{};
   Mat3c dI2{};
   Mat3c dA_local{};
};

/// Options for the analytical backend.
struct DerivOptions
{
   /// Multiplies the k^2 coefficient of the subtracted kernel in the
   /// analytical backend only. Anything but 1 breaks agreement with the
   /// AD backend; used to check that the verification detects it.
   double singular_scale = 1.0;
};

PairDerivative d_pair(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                      const MaterialParams &params, const QuadratureRule &rule, const DerivOptions &opt = {});
Mat3c d_pair_I1(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p, const MaterialParams &params,
                const QuadratureRule &rule);
Mat3c d_pair_I2(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p, const MaterialParams &params,
                const QuadratureRule &rule);
Mat3c d_local_pair_matrix(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                          const MaterialParams &params, const QuadratureRule &rule, const DerivOptions &opt = {});

/// Dual-number evaluation of the value code.
struct AdPairResult
{
   Mat3c value{};
   Mat3c derivative{};
   PairDerivative integrals{};  // dI1, dI2 and dA_local from the derivative channel
};

AdPairResult ad_pair(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                     const MaterialParams &params, const QuadratureRule &rule);
Mat3c ad_local_pair_matrix(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                           const MaterialParams &params, const QuadratureRule &rule);

enum class FdScheme { forward, central };

Mat3c fd_local_pair_matrix(const SurfaceMesh &mesh, int tp, int tq, const ShapePerturbation &p,
                           const MaterialParams &params, const QuadratureRule &rule, double h = 1e-8,
                           FdScheme scheme = FdScheme::forward);

struct MatrixDerivative
{
   Eigen::MatrixXcd dA;
   Eigen::VectorXcd db;
   ShapePerturbation perturbation;
};

/// dA accumulated from the analytical pair derivatives of the pairs touching
/// the perturbed node; db from d_rhs_plane_wave.
MatrixDerivative d_assemble(const SurfaceMesh &mesh, const DofMap &dofs, const MaterialParams &params,
                            const QuadratureRule &rule, const ShapePerturbation &p, const PlaneWave &wave,
                            bool parallel = true, const DerivOptions &opt = {});

/// d/ds of the plane-wave right-hand side:
/// int_T (grad lambda_m . f)(tau . e) + lambda_m (f . e) ik (khat . tau) dx.
Eigen::VectorXcd d_rhs_plane_wave(const SurfaceMesh &mesh, const DofMap &dofs, const PlaneWave &wave,
                                  const MaterialParams &params, const QuadratureRule &rule,
                                  const ShapePerturbation &p);

/// Dual-number counterparts of the global derivatives.
Eigen::MatrixXcd ad_assemble(const SurfaceMesh &mesh, const DofMap &dofs, const MaterialParams &params,
                             const QuadratureRule &rule, const ShapePerturbation &p);
Eigen::VectorXcd ad_rhs_plane_wave(const SurfaceMesh &mesh, const DofMap &dofs, const PlaneWave &wave,
                                   const MaterialParams &params, const QuadratureRule &rule,
                                   const ShapePerturbation &p);

/// ||a - b||_F / ||ref||_F.
double relative_frobenius(const Mat3c &a, const Mat3c &b, const Mat3c &ref);
double frobenius(const Mat3c &a);

} // namespace efie
