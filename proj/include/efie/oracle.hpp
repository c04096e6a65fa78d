// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include <Eigen/Dense>

#include "efie/assembly.hpp"
#include "efie/potentials.hpp"

namespace efie::oracle {

// Reference integrators built on adaptive subdivision with tensor
// Gauss-Legendre rules. Independent of the closed-form potentials and the
// triangle rules used by the production code; slow, used for checking.

using Integrand = std::function<Eigen::VectorXcd(const Vec3d &y)>;

struct AdaptiveOptions
{
   double rel_tol = 1e-13;
   double abs_tol = 1e-300;
   int max_depth = 16;
};

/// int_T f(y) dy with T collapsed from vertex `apex` (tri[apex] is mapped to
/// one side of the unit square), so an integrable 1/|y - tri[apex]|
/// singularity is removed by the Jacobian.
Eigen::VectorXcd integrate_triangle(const Integrand &f, int size, const Tri<double> &tri, int apex = 0,
                                    const AdaptiveOptions &opt = {});

/// int_T f(y) dy for an integrand singular or nearly singular at the
/// orthogonal projection of x onto the plane of T: T is split into
/// signed sub-triangles with apex at that projection.
Eigen::VectorXcd integrate_triangle_around(const Integrand &f, int size, const Tri<double> &tri, const Vec3d &x,
                                           const AdaptiveOptions &opt = {});

/// Reference values for analytic_potentials. The gradient entries require
/// x off the plane of T or outside T.
AnalyticPotentials potentials(const Vec3d &x, const Tri<double> &tri, const AdaptiveOptions &opt = {});

/// Reference I1/I2 (no kernel split) with outer integral on tq and inner on tp.
PairIntegralResult pair_integrals(const Tri<double> &tp, const Tri<double> &tq, double k,
                                  const AdaptiveOptions &opt = {});

/// Reference plane-wave right-hand side on one triangle.
std::array<cdouble, 3> local_rhs(const Tri<double> &tri, const PlaneWave &wave, double k,
                                 const AdaptiveOptions &opt = {});

} // namespace efie::oracle
