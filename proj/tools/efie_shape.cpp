// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: derivative tables, verification suites, system
// assembly and adjoint gradients.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "efie/adjoint.hpp"
#include "efie/fixtures.hpp"
#include "efie/verify.hpp"

namespace {

using namespace efie;

struct RunConfig
{
   std::string mesh_path;
   std::string fixture;
   std::vector<int> n{supported_rule_sizes().begin(), supported_rule_sizes().end()};
   double h = 1e-8;
   double omega = 1.0, epsilon = 1.0, mu = 1.0;
   int node = -1;
   std::vector<double> tau;
   std::string out;
   std::string format = "csv";
   std::string parallel = "on";
   std::string objective = "power";
   double amplitude = 1.0;
   bool corrupt_subtraction = false;

   MaterialParams params() const { return {omega, epsilon, mu}; }
   bool is_parallel() const { return parallel == "on"; }
   verify::Format fmt() const { return format == "csv" ? verify::Format::csv : verify::Format::text; }

   void validate() const
   {
      if (!mesh_path.empty() && !fixture.empty()) { throw Error("--mesh and --fixture are exclusive"); }
      params().validate();
      if (!(h > 0.0)) { throw Error("--h must be positive"); }
      for (int k : n) { dunavant_rule(k); }
      if (n.empty()) { throw Error("--n needs at least one rule size"); }
      if (!tau.empty() && tau.size() != 3) { throw Error("--tau needs three components"); }
      if (!std::isfinite(amplitude)) { throw Error("--amplitude must be finite"); }
   }

   ShapePerturbation perturbation() const
   {
      if (node < 0) { return {-1, {}}; }
      if (tau.empty()) { throw Error("--node requires --tau"); }
      return {node, {tau[0], tau[1], tau[2]}};
   }

   SurfaceMesh mesh(const std::string &default_fixture) const
   {
      SurfaceMesh m = !mesh_path.empty() ? load_mesh(mesh_path)
                                         : fixture_mesh(fixture.empty() ? default_fixture : fixture);
      if (m.num_triangles() == 0) { throw Error("mesh has no triangles"); }
      if (node >= static_cast<int>(m.num_vertices())) { throw Error("--node out of range"); }
      return m;
   }
};

void emit(const RunConfig &cfg, const std::string &text)
{
   if (cfg.out.empty())
   {
      std::cout << text;
      return;
   }
   std::ofstream f(cfg.out, std::ios::binary);
   if (!f) { throw Error("cannot open " + cfg.out + " for writing"); }
   f << text;
   if (!f) { throw Error("write to " + cfg.out + " failed"); }
}

std::string num(double v)
{
   if (!std::isfinite(v)) { throw Error("non-finite value in output"); }
   char buf[32];
   std::snprintf(buf, sizeof buf, "%.8e", v);
   return buf;
}

int cmd_tables(const RunConfig &cfg)
{
   std::vector<PairClass> kinds;
   if (cfg.fixture.empty() || cfg.fixture == "all")
   {
      kinds = {PairClass::near, PairClass::point, PairClass::edge, PairClass::same};
   }
   else { kinds = {pair_class_from_string(cfg.fixture)}; }
   if (!cfg.mesh_path.empty()) { throw Error("tables runs on the built-in pair fixtures; use --fixture"); }
   verify::Config vc;
   vc.params = cfg.params();
   vc.rule_sizes = cfg.n;
   vc.h = cfg.h;
   vc.parallel = cfg.is_parallel();
   const auto p = cfg.perturbation();
   if (p.node >= 0)
   {
      for (PairClass k : kinds)
      {
         if (p.node >= static_cast<int>(make_pair_fixture(k).mesh.num_vertices()))
         {
            throw Error("--node out of range for fixture " + std::string(to_string(k)));
         }
      }
   }
   emit(cfg, verify::format_tables(verify::compute_tables(vc, kinds, p), cfg.fmt()));
   return 0;
}

int cmd_verify(const RunConfig &cfg)
{
   if (!cfg.mesh_path.empty() || !cfg.fixture.empty())
   {
      // The suites use their own fixtures; a given mesh must still be usable.
      const SurfaceMesh m = cfg.mesh("plate");
      if (DofMap(m).size() == 0) { throw Error("mesh has no interior edges"); }
   }
   verify::Config vc;
   vc.params = cfg.params();
   vc.rule_sizes = cfg.n;
   vc.h = cfg.h;
   vc.parallel = cfg.is_parallel();
   if (cfg.corrupt_subtraction) { vc.deriv.singular_scale = 1.5; }
   const auto results = verify::run_all(vc);
   std::ostringstream os;
   bool ok = true;
   for (const auto &r : results)
   {
      os << verify::format_check(r) << '\n';
      ok = ok && r.pass;
   }
   os << (ok ? "all checks passed\n" : "some checks FAILED\n");
   emit(cfg, os.str());
   return ok ? 0 : 1;
}

int cmd_assemble(const RunConfig &cfg)
{
   const SurfaceMesh mesh = cfg.mesh("plate");
   const DofMap dofs(mesh);
   if (dofs.size() == 0) { throw Error("mesh has no interior edges"); }
   const auto rule = dunavant_rule(cfg.n.front());
   PlaneWave wave = default_plane_wave();
   wave.E0 = wave.E0 * cfg.amplitude;
   const Eigen::MatrixXcd A = assemble_system(mesh, dofs, cfg.params(), rule, cfg.is_parallel());
   const Eigen::VectorXcd b = rhs_plane_wave(mesh, dofs, wave, cfg.params(), rule);
   MatrixDerivative d;
   const bool with_derivative = cfg.node >= 0;
   if (with_derivative)
   {
      d = d_assemble(mesh, dofs, cfg.params(), rule, cfg.perturbation(), wave, cfg.is_parallel());
   }

   std::ostringstream os;
   const bool csv = cfg.format == "csv";
   os << (csv ? "quantity,row,col,re,im\n" : "");
   auto put = [&](const char *q, Eigen::Index r, Eigen::Index c, cdouble v) {
      if (csv) { os << q << ',' << r << ',' << c << ',' << num(v.real()) << ',' << num(v.imag()) << '\n'; }
      else
      {
         char buf[128];
         std::snprintf(buf, sizeof buf, "%-3s %5ld %5ld  %16s  %16s\n", q, static_cast<long>(r), static_cast<long>(c),
                       num(v.real()).c_str(), num(v.imag()).c_str());
         os << buf;
      }
   };
   for (Eigen::Index r = 0; r < A.rows(); ++r)
   {
      for (Eigen::Index c = 0; c < A.cols(); ++c) { put("A", r, c, A(r, c)); }
   }
   for (Eigen::Index r = 0; r < b.size(); ++r) { put("b", r, 0, b(r)); }
   if (with_derivative)
   {
      for (Eigen::Index r = 0; r < A.rows(); ++r)
      {
         for (Eigen::Index c = 0; c < A.cols(); ++c) { put("dA", r, c, d.dA(r, c)); }
      }
      for (Eigen::Index r = 0; r < b.size(); ++r) { put("db", r, 0, d.db(r)); }
   }
   emit(cfg, os.str());
   return 0;
}

int cmd_gradient(const RunConfig &cfg, bool h_given)
{
   const SurfaceMesh mesh = cfg.mesh("plate");
   const DofMap dofs(mesh);
   if (dofs.size() == 0) { throw Error("mesh has no interior edges"); }
   PlaneWave wave = default_plane_wave();
   wave.E0 = wave.E0 * cfg.amplitude;
   GradientProblem prob{mesh, dofs, cfg.params(), dunavant_rule(cfg.n.front()), wave, cfg.is_parallel()};
   const SystemState state = solve_state(prob);
   const auto n = static_cast<Eigen::Index>(dofs.size());

   ObjectiveSpec spec;
   if (cfg.objective == "power") { spec = ObjectiveSpec::quadratic(Eigen::MatrixXcd::Identity(n, n)); }
   else { spec = ObjectiveSpec::functional(Eigen::VectorXcd::Ones(n)); }

   std::vector<DesignVariable> vars;
   for (int m = 0; m < static_cast<int>(mesh.num_vertices()); ++m)
   {
      if (cfg.node >= 0 && m != cfg.node) { continue; }
      for (int a = 0; a < 3; ++a) { vars.push_back({m, a}); }
   }
   std::vector<MatrixDerivative> derivs;
   for (const auto &v : vars)
   {
      derivs.push_back(d_assemble(mesh, dofs, prob.params, prob.rule, v.perturbation(), wave, cfg.is_parallel()));
   }
   const GradientResult adj = gradient_adjoint(state, spec, derivs);
   const double h = h_given ? cfg.h : 1e-6;

   std::ostringstream os;
   const bool csv = cfg.format == "csv";
   os << (csv ? "node,axis,dJ_adjoint,dJ_direct,dJ_fd,rel_adjoint_direct,rel_adjoint_fd\n"
              : "node axis        dJ_adjoint         dJ_direct             dJ_fd   rel(adj,direct)       rel(adj,fd)\n");
   auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
   for (std::size_t k = 0; k < vars.size(); ++k)
   {
      const double direct = gradient_direct(state, spec, derivs[k]);
      const double fd = gradient_fd(prob, spec, vars[k], h);
      const double a = adj.dJ[k];
      const double ra = a == direct ? 0.0 : rel(a, direct), rf = a == fd ? 0.0 : rel(a, fd);
      if (csv)
      {
         os << vars[k].node << ',' << vars[k].axis << ',' << num(a) << ',' << num(direct) << ',' << num(fd) << ','
            << num(ra) << ',' << num(rf) << '\n';
      }
      else
      {
         char buf[160];
         std::snprintf(buf, sizeof buf, "%4d %4d  %16s  %16s  %16s  %16s  %16s\n", vars[k].node, vars[k].axis,
                       num(a).c_str(), num(direct).c_str(), num(fd).c_str(), num(ra).c_str(), num(rf).c_str());
         os << buf;
      }
   }
   emit(cfg, os.str());
   return 0;
}

} // namespace

int main(int argc, char **argv)
{
   CLI::App app{"EFIE shape derivatives: tables, verification, assembly and adjoint gradients"};
   app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
   app.require_subcommand(1);
   RunConfig cfg;

   app.set_help_flag("--help", "Print this help message and exit");
   auto add_common = [&](CLI::App *c) {
      c->set_help_flag("--help", "Print this help message and exit");  // -h is the FD step
      auto *src = c->add_option_group("source");
      src->add_option("--mesh", cfg.mesh_path, "Mesh file")->check(CLI::ExistingFile);
      src->add_option("--fixture", cfg.fixture, "Built-in mesh: near, point, edge, same, plate (tables: or all)")
         ->check(CLI::IsMember({"near", "point", "edge", "same", "plate", "all"}));
      src->require_option(0, 1);
      c->add_option("--n", cfg.n, "Quadrature rule sizes")->delimiter(',')->capture_default_str();
      c->add_option("--h", cfg.h, "Finite-difference step")->capture_default_str();
      c->add_option("--omega", cfg.omega, "Angular frequency")->capture_default_str();
      c->add_option("--epsilon", cfg.epsilon, "Permittivity")->capture_default_str();
      c->add_option("--mu", cfg.mu, "Permeability")->capture_default_str();
      c->add_option("--node", cfg.node, "Perturbed node (gradient: restrict to this node)")->check(CLI::NonNegativeNumber);
      c->add_option("--tau", cfg.tau, "Perturbation direction X,Y,Z")->delimiter(',')->expected(3);
      c->add_option("--out", cfg.out, "Output file (default stdout)");
      c->add_option("--format", cfg.format, "csv or text")->check(CLI::IsMember({"csv", "text"}))->capture_default_str();
      c->add_option("--parallel", cfg.parallel, "on or off")->check(CLI::IsMember({"on", "off"}))->capture_default_str();
   };

   auto *tables = app.add_subcommand("tables", "Derivative tables for the pair fixtures");
   auto *verify = app.add_subcommand("verify", "Run the verification suites");
   auto *assemble = app.add_subcommand("assemble", "Assemble A and b (and dA, db with --node/--tau)");
   auto *gradient = app.add_subcommand("gradient", "Adjoint, direct and finite-difference gradients");
   for (auto *c : {tables, verify, assemble, gradient}) { add_common(c); }
   verify->add_flag("--corrupt-subtraction", cfg.corrupt_subtraction)->group("");
   for (auto *c : {assemble, gradient})
   {
      c->add_option("--amplitude", cfg.amplitude, "Incident field amplitude")->capture_default_str();
   }
   gradient->add_option("--objective", cfg.objective, "power (|x|^2) or functional (|1^H x|^2)")
      ->check(CLI::IsMember({"power", "functional"}))
      ->capture_default_str();

   CLI11_PARSE(app, argc, argv);

   try
   {
      cfg.validate();
      if (tables->parsed()) { return cmd_tables(cfg); }
      if (verify->parsed()) { return cmd_verify(cfg); }
      if (assemble->parsed()) { return cmd_assemble(cfg); }
      return cmd_gradient(cfg, gradient->count("--h") > 0);
   }
   catch (const std::exception &e)
   {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
   }
}
