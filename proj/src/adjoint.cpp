// SPDX-License-Identifier: Apache-2.0

#include "efie/adjoint.hpp"

#include <cmath>
#include <iostream>

namespace efie {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kWarnRcond = 1e-12;

Eigen::VectorXcd checked_solve(const Eigen::PartialPivLU<Eigen::MatrixXcd> &lu, const Eigen::MatrixXcd &A,
                               const Eigen::VectorXcd &b)
{
   const double rcond = lu.rcond();
   if (rcond == 0.0 || !std::isfinite(rcond)) { throw Error("solve: singular matrix"); }
   if (rcond < kWarnRcond) { std::cerr << "warning: solve: condition estimate " << 1.0 / rcond << '\n'; }
   Eigen::VectorXcd x = lu.solve(b);
   const double bn = b.norm();
   const double res = (A * x - b).norm();
   if (!x.allFinite() || (bn > 0.0 && res > kResidualTol * bn) || (bn == 0.0 && res > 0.0))
   {
      throw Error("solve: residual " + std::to_string(bn > 0.0 ? res / bn : res) + " exceeds tolerance");
   }
   return x;
}

void check_square(const Eigen::MatrixXcd &A, const Eigen::VectorXcd &b)
{
   if (A.rows() != A.cols() || A.rows() != b.size()) { throw Error("solve: dimension mismatch"); }
   if (A.rows() == 0) { throw Error("solve: empty system"); }
}

} // namespace

Eigen::VectorXcd solve(const Eigen::MatrixXcd &A, const Eigen::VectorXcd &b)
{
   check_square(A, b);
   Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
   return checked_solve(lu, A, b);
}

Eigen::VectorXcd solve_adjoint(const Eigen::MatrixXcd &A, const Eigen::VectorXcd &rhs)
{
   check_square(A, rhs);
   const Eigen::MatrixXcd AH = A.adjoint();
   Eigen::PartialPivLU<Eigen::MatrixXcd> lu(AH);
   return checked_solve(lu, AH, rhs);
}

ObjectiveSpec ObjectiveSpec::quadratic(Eigen::MatrixXcd W)
{
   ObjectiveSpec s;
   s.kind = Kind::quadratic_power;
   s.W = std::move(W);
   return s;
}

ObjectiveSpec ObjectiveSpec::functional(Eigen::VectorXcd c)
{
   ObjectiveSpec s;
   s.kind = Kind::linear_functional;
   s.c = std::move(c);
   return s;
}

void ObjectiveSpec::validate(Eigen::Index n) const
{
   if (kind == Kind::quadratic_power)
   {
      if (W.rows() != n || W.cols() != n) { throw Error("objective: W has wrong size"); }
      const double scale = std::max(W.norm(), 1.0);
      if ((W - W.adjoint()).norm() > 1e-12 * scale) { throw Error("objective: W is not Hermitian"); }
   }
   else if (c.size() != n) { throw Error("objective: c has wrong size"); }
}

double objective_value(const ObjectiveSpec &spec, const Eigen::VectorXcd &x)
{
   spec.validate(x.size());
   if (spec.kind == ObjectiveSpec::Kind::quadratic_power) { return x.dot(spec.W * x).real(); }
   return std::norm(spec.c.dot(x));
}

Eigen::VectorXcd objective_gradient_x(const ObjectiveSpec &spec, const Eigen::VectorXcd &x)
{
   spec.validate(x.size());
   if (spec.kind == ObjectiveSpec::Kind::quadratic_power) { return 2.0 * (spec.W * x); }
   return 2.0 * spec.c.dot(x) * spec.c;
}

ShapePerturbation DesignVariable::perturbation() const
{
   if (axis < 0 || axis > 2) { throw Error("design variable axis must be 0, 1 or 2"); }
   ShapePerturbation p;
   p.node = node;
   p.tau[axis] = 1.0;
   return p;
}

SystemState solve_state(const GradientProblem &prob)
{
   SystemState s;
   s.A = assemble_system(prob.mesh, prob.dofs, prob.params, prob.rule, prob.parallel);
   s.b = rhs_plane_wave(prob.mesh, prob.dofs, prob.wave, prob.params, prob.rule);
   s.x = solve(s.A, s.b);
   return s;
}

GradientResult gradient_adjoint(const SystemState &state, const ObjectiveSpec &spec,
                                const std::vector<MatrixDerivative> &derivs)
{
   GradientResult r;
   const Eigen::VectorXcd g = objective_gradient_x(spec, state.x);
   r.gamma = solve_adjoint(state.A, g);
   ++r.ops.solves;
   r.dJ.reserve(derivs.size());
   for (const auto &d : derivs)
   {
      const Eigen::VectorXcd rhs = d.db - d.dA * state.x;
      ++r.ops.matvecs;
      r.dJ.push_back(r.gamma.dot(rhs).real());
   }
   return r;
}

GradientResult gradient_adjoint(const GradientProblem &prob, const SystemState &state, const ObjectiveSpec &spec,
                                const std::vector<DesignVariable> &vars)
{
   std::vector<MatrixDerivative> derivs;
   derivs.reserve(vars.size());
   for (const auto &v : vars)
   {
      derivs.push_back(d_assemble(prob.mesh, prob.dofs, prob.params, prob.rule, v.perturbation(), prob.wave,
                                  prob.parallel));
   }
   return gradient_adjoint(state, spec, derivs);
}

double gradient_direct(const SystemState &state, const ObjectiveSpec &spec, const MatrixDerivative &deriv)
{
   const Eigen::VectorXcd dx = solve(state.A, deriv.db - deriv.dA * state.x);
   return objective_gradient_x(spec, state.x).dot(dx).real();
}

double objective_at(const GradientProblem &prob, const ObjectiveSpec &spec, const DesignVariable &var, double s)
{
   const SurfaceMesh moved = deform_mesh(prob.mesh, var.perturbation(), s);
   GradientProblem p{moved, prob.dofs, prob.params, prob.rule, prob.wave, prob.parallel};
   return objective_value(spec, solve_state(p).x);
}

double gradient_fd(const GradientProblem &prob, const ObjectiveSpec &spec, const DesignVariable &var, double h)
{
   if (!(h > 0.0)) { throw Error("finite-difference step must be positive"); }
   return (objective_at(prob, spec, var, h) - objective_at(prob, spec, var, -h)) / (2.0 * h);
}

} // namespace efie
