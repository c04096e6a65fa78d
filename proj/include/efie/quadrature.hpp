// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <vector>

namespace efie {

/// Symmetric triangle rule. Weights are normalized to sum to one, so a
/// rule integrates f over T as |T| * sum_i w_i f(x_i).
struct QuadratureRule
{
   int degree = 0;
   std::vector<std::array<double, 3>> points;  // barycentric
   std::vector<double> weights;

   int npoints() const { return static_cast<int>(points.size()); }
};

/// Point counts of the supported Dunavant rules, degrees 1 through 8.
std::span<const int> supported_rule_sizes();

/// Dunavant rule with `n` points; throws efie::Error for unsupported n.
const QuadratureRule &dunavant_rule(int n);

} // namespace efie
