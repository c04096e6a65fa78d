// SPDX-License-Identifier: Apache-2.0

#include "efie/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "efie/adjoint.hpp"
#include "efie/oracle.hpp"
#include "efie/parallel.hpp"

namespace efie::verify {

namespace {

const std::vector<PairClass> kAllKinds{PairClass::near, PairClass::point, PairClass::edge, PairClass::same};

double im_sum(const Mat3c &a)
{
   double s = 0.0;
   for (const auto &row : a)
   {
      for (const auto &v : row) { s += v.imag(); }
   }
   return s;
}

std::string fmt(double v)
{
   char buf[32];
   std::snprintf(buf, sizeof buf, "%.8e", v);
   return buf;
}

std::string fmt_short(double v)
{
   char buf[32];
   std::snprintf(buf, sizeof buf, "%.3e", v);
   return buf;
}

class Stopwatch
{
public:
   double seconds() const
   {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
   }

private:
   std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Analytical, AD and FD derivative for every fixture x rule x probe.
struct SweepCase
{
   Mat3c analytical, ad, fd;
};

std::vector<SweepCase> triple_sweep(const Config &cfg)
{
   struct Job
   {
      PairClass kind;
      int n;
      ShapePerturbation p;
   };
   std::vector<Job> jobs;
   for (PairClass kind : kAllKinds)
   {
      for (int n : cfg.rule_sizes)
      {
         for (const auto &p : acceptance_probes(kind)) { jobs.push_back({kind, n, p}); }
      }
   }
   std::vector<SweepCase> out(jobs.size());
   parallel_for(jobs.size(), cfg.parallel, [&](std::size_t i) {
      const auto f = make_pair_fixture(jobs[i].kind);
      const auto rule = dunavant_rule(jobs[i].n);
      out[i].analytical = d_local_pair_matrix(f.mesh, f.tp, f.tq, jobs[i].p, cfg.params, rule, cfg.deriv);
      out[i].ad = ad_local_pair_matrix(f.mesh, f.tp, f.tq, jobs[i].p, cfg.params, rule);
      out[i].fd = fd_local_pair_matrix(f.mesh, f.tp, f.tq, jobs[i].p, cfg.params, rule, cfg.h);
   });
   return out;
}

double median(std::vector<double> v)
{
   std::sort(v.begin(), v.end());
   const std::size_t n = v.size();
   return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::vector<ShapePerturbation> acceptance_probes(PairClass kind)
{
   std::array<int, 3> nodes{};
   switch (kind)
   {
      case PairClass::near: nodes = {0, 2, 4}; break;
      case PairClass::point: nodes = {1, 0, 4}; break;
      case PairClass::edge: nodes = {1, 2, 3}; break;
      case PairClass::same: nodes = {0, 1, 2}; break;
   }
   const Vec3d ta{0.6, -0.3, 0.74}, tb{-0.2, 0.9, 0.4};
   std::vector<ShapePerturbation> out;
   for (int m : nodes)
   {
      out.push_back({m, ta});
      out.push_back({m, tb});
   }
   return out;
}

std::vector<FixtureTable> compute_tables(const Config &cfg, const std::vector<PairClass> &kinds,
                                         const ShapePerturbation &override)
{
   std::vector<FixtureTable> tables;
   for (PairClass kind : kinds)
   {
      const auto f = make_pair_fixture(kind);
      tables.push_back({kind, override.node >= 0 ? override : f.perturbation, {}});
      tables.back().rows.resize(cfg.rule_sizes.size());
   }
   const std::size_t nr = cfg.rule_sizes.size();
   parallel_for(kinds.size() * nr, cfg.parallel, [&](std::size_t cell) {
      FixtureTable &t = tables[cell / nr];
      const int n = cfg.rule_sizes[cell % nr];
      const auto f = make_pair_fixture(t.kind);
      const auto rule = dunavant_rule(n);
      const Mat3c an = d_local_pair_matrix(f.mesh, f.tp, f.tq, t.perturbation, cfg.params, rule, cfg.deriv);
      const Mat3c ad = ad_local_pair_matrix(f.mesh, f.tp, f.tq, t.perturbation, cfg.params, rule);
      const Mat3c fd = fd_local_pair_matrix(f.mesh, f.tp, f.tq, t.perturbation, cfg.params, rule, cfg.h);
      TableRow &r = t.rows[cell % nr];
      r.n = n;
      r.im_analytical = im_sum(an);
      r.im_ad = im_sum(ad);
      r.im_fd = im_sum(fd);
      r.rel_ad = relative_frobenius(ad, an, an);
      r.rel_fd = relative_frobenius(fd, an, an);
   });
   return tables;
}

std::string format_tables(const std::vector<FixtureTable> &tables, Format format)
{
   for (const auto &t : tables)
   {
      for (const auto &r : t.rows)
      {
         for (double v : {r.im_analytical, r.im_ad, r.im_fd, r.rel_ad, r.rel_fd})
         {
            if (!std::isfinite(v))
            {
               throw Error(std::string("non-finite table value for fixture ") + to_string(t.kind));
            }
         }
      }
   }
   std::ostringstream os;
   if (format == Format::csv)
   {
      os << "fixture,n,im_analytical,im_ad,im_fd,rel_ad,rel_fd\n";
      for (const auto &t : tables)
      {
         for (const auto &r : t.rows)
         {
            os << to_string(t.kind) << ',' << r.n << ',' << fmt(r.im_analytical) << ',' << fmt(r.im_ad) << ','
               << fmt(r.im_fd) << ',' << fmt(r.rel_ad) << ',' << fmt(r.rel_fd) << '\n';
         }
      }
      return os.str();
   }
   char line[256];
   for (const auto &t : tables)
   {
      const auto &p = t.perturbation;
      std::snprintf(line, sizeof line, "%s pair, node %d, tau = (%g, %g, %g)\n", to_string(t.kind), p.node,
                    p.tau.x, p.tau.y, p.tau.z);
      os << line << "\nIm sum of d a_pq / ds\n";
      std::snprintf(line, sizeof line, "%4s  %16s  %16s  %16s\n", "n", "Analytical", "AD", "FD");
      os << line;
      for (const auto &r : t.rows)
      {
         std::snprintf(line, sizeof line, "%4d  %16s  %16s  %16s\n", r.n, fmt(r.im_analytical).c_str(),
                       fmt(r.im_ad).c_str(), fmt(r.im_fd).c_str());
         os << line;
      }
      os << "\nRelative Frobenius difference to analytical\n";
      std::snprintf(line, sizeof line, "%4s  %16s  %16s\n", "n", "AD", "FD");
      os << line;
      for (const auto &r : t.rows)
      {
         std::snprintf(line, sizeof line, "%4d  %16s  %16s\n", r.n, fmt(r.rel_ad).c_str(), fmt(r.rel_fd).c_str());
         os << line;
      }
      os << '\n';
   }
   return os.str();
}

CheckResult check_ad_agreement(const Config &cfg)
{
   Stopwatch sw;
   const auto cases = triple_sweep(cfg);
   double worst = 0.0;
   for (const auto &c : cases) { worst = std::max(worst, relative_frobenius(c.analytical, c.ad, c.analytical)); }
   const double t = sw.seconds();
   CheckResult r{1, "AD vs analytical", worst, 1e-12, false, ""};
   r.pass = worst <= r.tolerance && t < 10.0;
   r.detail = std::to_string(cases.size()) + " cases, " + fmt_short(t) + " s";
   return r;
}

CheckResult check_fd_agreement(const Config &cfg)
{
   Stopwatch sw;
   const auto cases = triple_sweep(cfg);
   std::vector<double> rel;
   for (const auto &c : cases) { rel.push_back(relative_frobenius(c.fd, c.analytical, c.analytical)); }
   const double t = sw.seconds();
   const auto [lo, hi] = std::minmax_element(rel.begin(), rel.end());
   const double med = median(rel);
   CheckResult r{2, "forward FD vs analytical", med, 1e-6, false, ""};
   r.pass = *lo >= 1e-9 && *hi <= 1e-5 && med >= 1e-8 && med <= 1e-6 && t < 10.0;
   r.detail = "median, range [" + fmt_short(*lo) + ", " + fmt_short(*hi) + "] in [1e-9, 1e-5], median in [1e-8, 1e-6], " +
              fmt_short(t) + " s";
   return r;
}

CheckResult check_translation_invariance(const Config &cfg)
{
   double worst = 0.0;
   for (PairClass kind : kAllKinds)
   {
      const auto f = make_pair_fixture(kind);
      for (int n : cfg.rule_sizes)
      {
         const auto rule = dunavant_rule(n);
         for (int axis = 0; axis < 3; ++axis)
         {
            Vec3d tau{};
            tau[axis] = 1.0;
            Mat3c sum{};
            double biggest = 0.0;
            for (int m = 0; m < static_cast<int>(f.mesh.num_vertices()); ++m)
            {
               const Mat3c d = d_local_pair_matrix(f.mesh, f.tp, f.tq, {m, tau}, cfg.params, rule, cfg.deriv);
               biggest = std::max(biggest, frobenius(d));
               for (int j = 0; j < 3; ++j)
               {
                  for (int i = 0; i < 3; ++i) { sum[j][i] += d[j][i]; }
               }
            }
            const double s = frobenius(sum);
            if (s > 0.0) { worst = std::max(worst, biggest > 0.0 ? s / biggest : INFINITY); }
         }
      }
   }
   CheckResult r{3, "rigid translation invariance", worst, 1e-12, false, "max |sum_m dA|/max_m |dA_m|"};
   r.pass = worst <= r.tolerance;
   return r;
}

CheckResult check_locality(const Config &cfg)
{
   // Every pair of a plate mesh against every node outside the pair.
   const SurfaceMesh mesh = make_plate(2, 1.0);
   const auto rule = dunavant_rule(cfg.rule_sizes.empty() ? 7 : cfg.rule_sizes.front());
   const int nt = static_cast<int>(mesh.num_triangles());
   const Vec3d tau{0.6, -0.3, 0.74};
   double worst = 0.0;
   int probes = 0;
   for (int tp = 0; tp < nt; ++tp)
   {
      for (int tq = 0; tq < nt; ++tq)
      {
         for (int m = 0; m < static_cast<int>(mesh.num_vertices()); ++m)
         {
            if (mesh.local_index(tp, m) >= 0 || mesh.local_index(tq, m) >= 0) { continue; }
            ++probes;
            for (const Mat3c &d : {d_local_pair_matrix(mesh, tp, tq, {m, tau}, cfg.params, rule, cfg.deriv),
                                   ad_local_pair_matrix(mesh, tp, tq, {m, tau}, cfg.params, rule)})
            {
               for (const auto &row : d)
               {
                  for (const auto &v : row)
                  {
                     if (v != cdouble(0.0)) { worst = std::max(worst, std::max(std::abs(v), 1e-300)); }
                  }
               }
            }
         }
      }
   }
   CheckResult r{4, "locality", worst, 0.0, worst == 0.0,
                 "max |entry| over " + std::to_string(probes) + " disjoint (pair, node) probes"};
   return r;
}

CheckResult check_kernel_identity(const Config &cfg)
{
   std::mt19937_64 rng(20240501);
   std::uniform_real_distribution<double> u(-1.0, 1.0), lam(0.0, 1.0);
   const double k = cfg.params.k();
   double worst = 0.0;
   for (int i = 0; i < 1000; ++i)
   {
      const Vec3d x{u(rng), u(rng), u(rng)}, y{u(rng), u(rng), u(rng)}, tau{u(rng), u(rng), u(rng)};
      const double lx = lam(rng), ly = lam(rng);
      const cdouble a = kernel_shape_derivative_product(x, y, tau, lx, ly, k);
      const cdouble b = kernel_shape_derivative(x, y, tau, lx, ly, k);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
   }
   CheckResult r{5, "kernel derivative forms", worst, 1e-14, false, "1000 random point pairs"};
   r.pass = worst <= r.tolerance;
   return r;
}

CheckResult check_system_symmetry(const Config &cfg)
{
   const SurfaceMesh mesh = make_plate(4, 1.0);
   const DofMap dofs(mesh);
   const auto rule = dunavant_rule(7);
   const Eigen::MatrixXcd A = assemble_system(mesh, dofs, cfg.params, rule, cfg.parallel);
   const double sa = (A - A.transpose()).norm() / A.norm();
   double sd = 0.0;
   for (const ShapePerturbation &p : {ShapePerturbation{12, {0.6, -0.3, 0.74}}, ShapePerturbation{0, {-0.2, 0.9, 0.4}},
                                      ShapePerturbation{7, {1.0, 0.0, 0.0}}})
   {
      const auto d = d_assemble(mesh, dofs, cfg.params, rule, p, default_plane_wave(), cfg.parallel, cfg.deriv);
      sd = std::max(sd, (d.dA - d.dA.transpose()).norm() / d.dA.norm());
   }
   CheckResult r{6, "system symmetry", std::max(sa, sd), 1e-12, false,
                 "A: " + fmt_short(sa) + ", dA: " + fmt_short(sd) + " (32-triangle plate)"};
   r.pass = std::max(sa, sd) <= r.tolerance;
   return r;
}

CheckResult check_subtraction_consistency(const Config &cfg)
{
   const auto f = make_pair_fixture(PairClass::near);
   const auto rule = dunavant_rule(16);
   const auto s = pair_integrals(f.mesh, f.tp, f.tq, cfg.params, rule, Strategy::subtraction);
   const auto p = pair_integrals(f.mesh, f.tp, f.tq, cfg.params, rule, Strategy::plain);
   const double strategies = std::max(relative_frobenius(s.I1, p.I1, p.I1), relative_frobenius(s.I2, p.I2, p.I2));

   std::mt19937_64 rng(977);
   std::uniform_real_distribution<double> u(-1.0, 1.0);
   double potentials = 0.0;
   for (int c = 0; c < 100;)
   {
      const Tri<double> t{Vec3d{u(rng), u(rng), u(rng)}, Vec3d{u(rng), u(rng), u(rng)},
                          Vec3d{u(rng), u(rng), u(rng)}};
      const Vec3d x{1.5 * u(rng), 1.5 * u(rng), 1.5 * u(rng)};
      if (triangle_area(t) < 0.05) { continue; }
      ++c;
      const auto a = analytic_potentials(x, t);
      const auto o = oracle::potentials(x, t);
      auto rel = [](const std::vector<double> &av, const std::vector<double> &ov) {
         double num = 0.0, den = 0.0;
         for (std::size_t i = 0; i < av.size(); ++i)
         {
            num += (av[i] - ov[i]) * (av[i] - ov[i]);
            den += ov[i] * ov[i];
         }
         return std::sqrt(num / den);
      };
      auto flat3 = [](const Vec3d &v) { return std::vector<double>{v.x, v.y, v.z}; };
      auto flat9 = [](const std::array<Vec3d, 3> &v) {
         std::vector<double> out;
         for (const auto &e : v) { out.insert(out.end(), {e.x, e.y, e.z}); }
         return out;
      };
      potentials = std::max({potentials, rel({a.one_over_r}, {o.one_over_r}), rel({a.r}, {o.r}),
                             rel(flat3(a.grad_one_over_r), flat3(o.grad_one_over_r)),
                             rel(flat3(a.grad_r), flat3(o.grad_r)),
                             rel({a.lambda_over_r.begin(), a.lambda_over_r.end()},
                                 {o.lambda_over_r.begin(), o.lambda_over_r.end()}),
                             rel(flat9(a.lambda_grad_one_over_r), flat9(o.lambda_grad_one_over_r))});
   }
   CheckResult r{7, "subtraction consistency", strategies, 1e-9, false,
                 "near fixture, n = 16, subtraction vs plain: I1 " + fmt_short(relative_frobenius(s.I1, p.I1, p.I1)) +
                    ", I2 " + fmt_short(relative_frobenius(s.I2, p.I2, p.I2)) + "; potentials vs adaptive oracle: " +
                    fmt_short(potentials) + " (tol 1e-8, 100 cases)"};
   r.pass = strategies <= 1e-9 && potentials <= 1e-8;
   return r;
}

CheckResult check_adjoint(const Config &cfg)
{
   Stopwatch sw;
   const SurfaceMesh mesh = make_plate(4, 1.0);
   const DofMap dofs(mesh);
   GradientProblem prob{mesh, dofs, cfg.params, dunavant_rule(7), default_plane_wave(), cfg.parallel};
   const SystemState state = solve_state(prob);
   const auto n = static_cast<Eigen::Index>(dofs.size());

   std::mt19937_64 rng(31337);
   std::vector<DesignVariable> vars;
   std::set<std::pair<int, int>> seen;
   std::uniform_int_distribution<int> node(0, static_cast<int>(mesh.num_vertices()) - 1), axis(0, 2);
   while (vars.size() < 10)
   {
      const DesignVariable v{node(rng), axis(rng)};
      if (seen.insert({v.node, v.axis}).second) { vars.push_back(v); }
   }
   std::normal_distribution<double> g;
   Eigen::VectorXcd c(n);
   for (Eigen::Index i = 0; i < n; ++i) { c[i] = cdouble(g(rng), g(rng)); }
   const std::vector<ObjectiveSpec> specs{ObjectiveSpec::quadratic(Eigen::MatrixXcd::Identity(n, n)),
                                          ObjectiveSpec::functional(c)};

   std::vector<MatrixDerivative> derivs;
   for (const auto &v : vars)
   {
      derivs.push_back(d_assemble(mesh, dofs, cfg.params, prob.rule, v.perturbation(), prob.wave, cfg.parallel,
                                  cfg.deriv));
   }
   double route = 0.0, fd = 0.0;
   for (const auto &spec : specs)
   {
      const GradientResult adj = gradient_adjoint(state, spec, derivs);
      for (std::size_t k = 0; k < vars.size(); ++k)
      {
         const double direct = gradient_direct(state, spec, derivs[k]);
         const double eps = std::numeric_limits<double>::min();
         route = std::max(route, std::abs(adj.dJ[k] - direct) / std::max(std::abs(direct), eps));
         const double fdv = gradient_fd(prob, spec, vars[k], 1e-6);
         fd = std::max(fd, std::abs(adj.dJ[k] - fdv) / std::max(std::abs(fdv), eps));
      }
   }
   const double t = sw.seconds();
   CheckResult r{8, "adjoint gradient", route, 1e-12, false,
                 "adjoint vs central FD: " + fmt_short(fd) + " (tol 1e-5), 10 variables x 2 objectives, " +
                    fmt_short(t) + " s"};
   r.pass = route <= 1e-12 && fd <= 1e-5 && t < 30.0;
   return r;
}

std::vector<SweepPoint> h_sweep(const Config &cfg, PairClass kind, int n, FdScheme scheme)
{
   const auto f = make_pair_fixture(kind);
   const auto rule = dunavant_rule(n);
   const Mat3c an = d_local_pair_matrix(f.mesh, f.tp, f.tq, f.perturbation, cfg.params, rule, cfg.deriv);
   std::vector<SweepPoint> out;
   for (int e = 4; e <= 12; ++e)
   {
      const double h = std::pow(10.0, -e);
      const Mat3c fd = fd_local_pair_matrix(f.mesh, f.tp, f.tq, f.perturbation, cfg.params, rule, h, scheme);
      out.push_back({h, relative_frobenius(fd, an, an)});
   }
   return out;
}

CheckResult check_h_sweep(const Config &cfg)
{
   const auto sweep = h_sweep(cfg, PairClass::edge, 7);
   std::size_t best = 0;
   bool increasing = true, decreasing = true;
   std::string detail = "errors:";
   for (std::size_t i = 0; i < sweep.size(); ++i)
   {
      if (sweep[i].error < sweep[best].error) { best = i; }
      if (i > 0)
      {
         increasing = increasing && sweep[i].error >= sweep[i - 1].error;
         decreasing = decreasing && sweep[i].error <= sweep[i - 1].error;
      }
      detail += " " + fmt_short(sweep[i].error);
   }
   CheckResult r{9, "FD step sweep", sweep[best].h, 0.0, false, "h at minimum; " + detail};
   r.pass = !increasing && !decreasing && best > 0 && best + 1 < sweep.size();
   return r;
}

CheckResult check_determinism(const Config &cfg)
{
   Config a = cfg, b = cfg;
   a.parallel = true;
   b.parallel = false;
   std::size_t diff = 0;
   for (Format f : {Format::csv, Format::text})
   {
      const std::string sa = format_tables(compute_tables(a, kAllKinds), f);
      const std::string sb = format_tables(compute_tables(b, kAllKinds), f);
      const auto m = std::mismatch(sa.begin(), sa.end(), sb.begin(), sb.end());
      if (m.first != sa.end() || m.second != sb.end()) { ++diff; }
   }
   CheckResult r{10, "determinism", static_cast<double>(diff), 0.0, diff == 0,
                 "tables (csv and text) with parallel on and off"};
   return r;
}

std::vector<CheckResult> run_all(const Config &cfg)
{
   return {check_ad_agreement(cfg),     check_fd_agreement(cfg),    check_translation_invariance(cfg),
           check_locality(cfg),         check_kernel_identity(cfg), check_system_symmetry(cfg),
           check_subtraction_consistency(cfg), check_adjoint(cfg),  check_h_sweep(cfg),
           check_determinism(cfg)};
}

std::string format_check(const CheckResult &r)
{
   char buf[160];
   std::snprintf(buf, sizeof buf, "[%s] %2d %-30s measured %.3e  tolerance %.1e", r.pass ? "PASS" : "FAIL", r.id,
                 r.name.c_str(), r.measured, r.tolerance);
   std::string s = buf;
   if (!r.detail.empty()) { s += "  (" + r.detail + ")"; }
   return s;
}

} // namespace efie::verify
