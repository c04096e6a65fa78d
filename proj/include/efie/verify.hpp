// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "efie/assembly.hpp"
#include "efie/fixtures.hpp"
#include "efie/shapederiv.hpp"

namespace efie::verify {

struct Config
{
   MaterialParams params;
   std::vector<int> rule_sizes{supported_rule_sizes().begin(), supported_rule_sizes().end()};
   double h = 1e-8;
   bool parallel = true;
   /// Applied to the analytical backend only (mutation testing).
   DerivOptions deriv;
};

/// One row per quadrature size: imaginary part of the sum of the nine
/// entries of d a_pq / ds for each backend, and the relative Frobenius
/// differences of the AD and FD matrices against the analytical one.
struct TableRow
{
   int n = 0;
   double im_analytical = 0.0;
   double im_ad = 0.0;
   double im_fd = 0.0;
   double rel_ad = 0.0;
   double rel_fd = 0.0;
};

struct FixtureTable
{
   PairClass kind;
   ShapePerturbation perturbation;
   std::vector<TableRow> rows;
};

/// Tables for the given fixtures with their default perturbations, or
/// with `override` when its node is non-negative.
std::vector<FixtureTable> compute_tables(const Config &cfg, const std::vector<PairClass> &kinds,
                                         const ShapePerturbation &override = {-1, {}});

enum class Format { csv, text };

/// Throws if any value is not finite.
std::string format_tables(const std::vector<FixtureTable> &tables, Format format);

/// Six (node, direction) probes per fixture: three nodes, two directions.
std::vector<ShapePerturbation> acceptance_probes(PairClass kind);

struct CheckResult
{
   int id = 0;
   std::string name;
   double measured = 0.0;
   double tolerance = 0.0;
   bool pass = false;
   std::string detail;
};

CheckResult check_ad_agreement(const Config &cfg);
CheckResult check_fd_agreement(const Config &cfg);
CheckResult check_translation_invariance(const Config &cfg);
CheckResult check_locality(const Config &cfg);
CheckResult check_kernel_identity(const Config &cfg);
CheckResult check_system_symmetry(const Config &cfg);
CheckResult check_subtraction_consistency(const Config &cfg);
CheckResult check_adjoint(const Config &cfg);
CheckResult check_h_sweep(const Config &cfg);
CheckResult check_determinism(const Config &cfg);

/// FD error against the analytical derivative for h = 1e-4 ... 1e-12.
struct SweepPoint
{
   double h;
   double error;
};
std::vector<SweepPoint> h_sweep(const Config &cfg, PairClass kind, int n, FdScheme scheme = FdScheme::forward);

std::vector<CheckResult> run_all(const Config &cfg);

/// "[PASS] 1 name: measured ... (tolerance ...) detail"
std::string format_check(const CheckResult &r);

} // namespace efie::verify
