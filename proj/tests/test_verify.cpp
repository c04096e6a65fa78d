// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "efie/verify.hpp"

using namespace efie;
using namespace efie::verify;

namespace {

std::vector<std::string> split(const std::string &s, char sep)
{
   std::vector<std::string> out;
   std::string item;
   std::istringstream in(s);
   while (std::getline(in, item, sep)) { out.push_back(item); }
   return out;
}

} // namespace

TEST_CASE("csv tables parse back to the computed values")
{
   Config cfg;
   cfg.rule_sizes = {3, 7};
   const std::vector<PairClass> kinds{PairClass::near, PairClass::same};
   const auto tables = compute_tables(cfg, kinds);
   REQUIRE(tables.size() == 2);
   const auto lines = split(format_tables(tables, Format::csv), '\n');
   REQUIRE(lines.size() == 1 + 2 * 2);
   CHECK(lines[0] == "fixture,n,im_analytical,im_ad,im_fd,rel_ad,rel_fd");
   std::size_t line = 1;
   for (const auto &t : tables)
   {
      for (const auto &row : t.rows)
      {
         const auto cells = split(lines[line++], ',');
         REQUIRE(cells.size() == 7);
         CHECK(cells[0] == to_string(t.kind));
         CHECK(std::stoi(cells[1]) == row.n);
         // nine significant digits survive the round trip
         CHECK(std::stod(cells[2]) == doctest::Approx(row.im_analytical).epsilon(1e-8));
         CHECK(std::stod(cells[3]) == doctest::Approx(row.im_ad).epsilon(1e-8));
         CHECK(std::stod(cells[4]) == doctest::Approx(row.im_fd).epsilon(1e-8));
         CHECK(std::stod(cells[5]) == doctest::Approx(row.rel_ad).epsilon(1e-8));
         CHECK(std::stod(cells[6]) == doctest::Approx(row.rel_fd).epsilon(1e-8));
      }
   }
   CHECK(!format_tables(tables, Format::text).empty());
}

TEST_CASE("tables take an explicit perturbation")
{
   Config cfg;
   cfg.rule_sizes = {4};
   const ShapePerturbation p{1, {0.2, -0.4, 0.5}};
   const auto t = compute_tables(cfg, {PairClass::edge}, p);
   REQUIRE(t.size() == 1);
   CHECK(t[0].perturbation.node == 1);
   CHECK(t[0].perturbation.tau.z == 0.5);
   CHECK(t[0].rows.size() == 1);
   CHECK(t[0].rows[0].rel_ad <= 1e-12);
}

TEST_CASE("non-finite values are refused")
{
   FixtureTable t{PairClass::near, {0, {0, 0, 1}}, {TableRow{3, 1.0, 1.0, std::nan(""), 0.0, 0.0}}};
   CHECK_THROWS_AS(format_tables({t}, Format::csv), Error);
   t.rows[0].im_fd = 1.0;
   t.rows[0].rel_ad = INFINITY;
   CHECK_THROWS_AS(format_tables({t}, Format::text), Error);
}

TEST_CASE("six distinct probes per fixture, all touching the pair")
{
   for (auto kind : {PairClass::near, PairClass::point, PairClass::edge, PairClass::same})
   {
      const auto probes = acceptance_probes(kind);
      CHECK(probes.size() == 6);
      const auto f = make_pair_fixture(kind);
      std::set<std::pair<int, double>> seen;
      for (const auto &p : probes)
      {
         CHECK((f.mesh.local_index(f.tp, p.node) >= 0 || f.mesh.local_index(f.tq, p.node) >= 0));
         seen.insert({p.node, p.tau.x});
      }
      CHECK(seen.size() == 6);
   }
}

TEST_CASE("step sweep covers nine decades")
{
   const auto sweep = h_sweep(Config{}, PairClass::near, 3);
   REQUIRE(sweep.size() == 9);
   CHECK(sweep.front().h == doctest::Approx(1e-4));
   CHECK(sweep.back().h == doctest::Approx(1e-12));
   for (const auto &p : sweep) { CHECK(std::isfinite(p.error)); }
}

TEST_CASE("check lines")
{
   const CheckResult ok{3, "translation invariance", 1.5e-15, 1e-12, true, ""};
   const CheckResult bad{7, "subtraction consistency", 9e-8, 1e-9, false, "n = 16"};
   CHECK(format_check(ok).rfind("[PASS]", 0) == 0);
   CHECK(format_check(bad).rfind("[FAIL]", 0) == 0);
   CHECK(format_check(bad).find("n = 16") != std::string::npos);
}
