// SPDX-License-Identifier: Apache-2.0

#include "efie/quadrature.hpp"

#include <cmath>
#include <string>

#include "efie/mesh.hpp"

namespace efie {

namespace {

constexpr std::array<int, 8> kSizes{1, 3, 4, 6, 7, 12, 13, 16};

// Orbit generators: (a, b) expands to the three permutations of (a, b, b);
// (a, b, c) to all six permutations; a lone weight is the centroid.
struct Builder
{
   QuadratureRule rule;

   Builder &centroid(double w)
   {
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(w);
      return *this;
   }
   Builder &orbit3(double a, double w)
   {
      double b = 0.5 * (1.0 - a);
      for (int k = 0; k < 3; ++k)
      {
         std::array<double, 3> p{b, b, b};
         p[k] = a;
         rule.points.push_back(p);
         rule.weights.push_back(w);
      }
      return *this;
   }
   Builder &orbit6(double a, double b, double w)
   {
      double c = 1.0 - a - b;
      const std::array<std::array<double, 3>, 6> perms{
         {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}};
      for (const auto &p : perms)
      {
         rule.points.push_back(p);
         rule.weights.push_back(w);
      }
      return *this;
   }
};

QuadratureRule make_rule(int n)
{
   Builder b;
   switch (n)
   {
      case 1:
         b.rule.degree = 1;
         b.centroid(1.0);
         break;
      case 3:
         b.rule.degree = 2;
         b.orbit3(2.0 / 3.0, 1.0 / 3.0);
         break;
      case 4:
         b.rule.degree = 3;
         b.centroid(-27.0 / 48.0).orbit3(0.6, 25.0 / 48.0);
         break;
      case 6:
         b.rule.degree = 4;
         b.orbit3(0.108103018168070, 0.223381589678011)
            .orbit3(0.816847572980459, 0.109951743655322);
         break;
      case 7:
      {
         b.rule.degree = 5;
         const double s15 = std::sqrt(15.0);
         b.centroid(9.0 / 40.0)
            .orbit3((9.0 - 2.0 * s15) / 21.0, (155.0 + s15) / 1200.0)
            .orbit3((9.0 + 2.0 * s15) / 21.0, (155.0 - s15) / 1200.0);
         break;
      }
      case 12:
         b.rule.degree = 6;
         b.orbit3(0.501426509658179, 0.116786275726379)
            .orbit3(0.873821971016996, 0.050844906370207)
            .orbit6(0.053145049844817, 0.310352451033784, 0.082851075618374);
         break;
      case 13:
         b.rule.degree = 7;
         b.centroid(-0.149570044467682)
            .orbit3(0.479308067841920, 0.175615257433208)
            .orbit3(0.869739794195568, 0.053347235608838)
            .orbit6(0.048690315425316, 0.312865496004874, 0.077113760890257);
         break;
      case 16:
         b.rule.degree = 8;
         b.centroid(0.144315607677787)
            .orbit3(0.081414823414554, 0.095091634267285)
            .orbit3(0.658861384496480, 0.103217370534718)
            .orbit3(0.898905543365938, 0.032458497623198)
            .orbit6(0.008394777409958, 0.263112829634638, 0.027230314174435);
         break;
      default:
         break;
   }
   return b.rule;
}

} // namespace

std::span<const int> supported_rule_sizes() { return kSizes; }

const QuadratureRule &dunavant_rule(int n)
{
   static const std::array<QuadratureRule, kSizes.size()> rules = [] {
      std::array<QuadratureRule, kSizes.size()> r;
      for (std::size_t i = 0; i < kSizes.size(); ++i) { r[i] = make_rule(kSizes[i]); }
      return r;
   }();
   for (std::size_t i = 0; i < kSizes.size(); ++i)
   {
      if (kSizes[i] == n) { return rules[i]; }
   }
   throw Error("unsupported quadrature size n=" + std::to_string(n) +
               " (supported: 1, 3, 4, 6, 7, 12, 13, 16)");
}

} // namespace efie
