// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: evaluates every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exits 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "efie/verify.hpp"

int main(int argc, char **argv)
{
   CLI::App app{"Shape-derivative acceptance criteria"};
   std::string parallel = "on";
   app.add_option("--parallel", parallel, "Parallel pair evaluation")->check(CLI::IsMember({"on", "off"}));
   CLI11_PARSE(app, argc, argv);

   efie::verify::Config cfg;
   cfg.parallel = parallel == "on";
   const auto start = std::chrono::steady_clock::now();
   int failed = 0;
   try
   {
      for (const auto &r : efie::verify::run_all(cfg))
      {
         std::cout << efie::verify::format_check(r) << '\n';
         failed += r.pass ? 0 : 1;
      }
   }
   catch (const std::exception &e)
   {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
   }
   const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
   std::printf("%d of 10 criteria failed (parallel %s, %.2f s)\n", failed, parallel.c_str(), seconds);
   return failed == 0 ? 0 : 1;
}
