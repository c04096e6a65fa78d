// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "efie/assembly.hpp"
#include "efie/mesh.hpp"
#include "efie/shapederiv.hpp"

namespace efie {

/// Dense LU with partial pivoting. Throws if the factorization is singular
/// or the relative residual exceeds 1e-10; warns on stderr when the
/// condition estimate exceeds 1e12.
Eigen::VectorXcd solve(const Eigen::MatrixXcd &A, const Eigen::VectorXcd &b);

/// Solves A^H y = rhs with the same checks.
Eigen::VectorXcd solve_adjoint(const Eigen::MatrixXcd &A, const Eigen::VectorXcd &rhs);

/// Real objective of the solution vector. Gradients use the convention
/// grad J = grad_{Re x} J + i grad_{Im x} J, so dJ = Re[(grad J)^H dx].
struct ObjectiveSpec
{
   enum class Kind { quadratic_power, linear_functional };
   Kind kind = Kind::quadratic_power;
   Eigen::MatrixXcd W;  // Hermitian PSD, quadratic_power
   Eigen::VectorXcd c;  // linear_functional

   static ObjectiveSpec quadratic(Eigen::MatrixXcd W);
   static ObjectiveSpec functional(Eigen::VectorXcd c);
   void validate(Eigen::Index n) const;
};

double objective_value(const ObjectiveSpec &spec, const Eigen::VectorXcd &x);
Eigen::VectorXcd objective_gradient_x(const ObjectiveSpec &spec, const Eigen::VectorXcd &x);

/// Design variable: displacement of `node` along Cartesian `axis`.
struct DesignVariable
{
   int node = 0;
   int axis = 0;
   ShapePerturbation perturbation() const;
};

/// Operation counts for the per-variable phase of the adjoint route.
struct OpCount
{
   std::size_t solves = 0;
   std::size_t matvecs = 0;
};

struct GradientResult
{
   std::vector<double> dJ;
   Eigen::VectorXcd gamma;
   OpCount ops;
};

/// Everything the gradient routes need besides the state.
struct GradientProblem
{
   const SurfaceMesh &mesh;
   const DofMap &dofs;
   MaterialParams params;
   QuadratureRule rule;
   PlaneWave wave;
   bool parallel = true;
};

/// Assembles A, b and solves for x.
SystemState solve_state(const GradientProblem &prob);

/// One adjoint solve, then dJ_k = Re[gamma^H (db_k - dA_k x)] per variable.
GradientResult gradient_adjoint(const SystemState &state, const ObjectiveSpec &spec,
                                const std::vector<MatrixDerivative> &derivs);
GradientResult gradient_adjoint(const GradientProblem &prob, const SystemState &state, const ObjectiveSpec &spec,
                                const std::vector<DesignVariable> &vars);

/// Solves A dx = db - dA x and returns Re[(grad J)^H dx].
double gradient_direct(const SystemState &state, const ObjectiveSpec &spec, const MatrixDerivative &deriv);

/// J(x(s)) at the mesh moved by s along the variable, re-assembled and solved.
double objective_at(const GradientProblem &prob, const ObjectiveSpec &spec, const DesignVariable &var, double s);

/// Central difference of the full pipeline.
double gradient_fd(const GradientProblem &prob, const ObjectiveSpec &spec, const DesignVariable &var,
                   double h = 1e-6);

} // namespace efie
