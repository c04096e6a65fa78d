// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>

#include "efie/dual.hpp"

namespace efie {

using cdouble = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cdouble imag_unit{0.0, 1.0};

/// Complex counterpart of a real scalar type: `double` maps to
/// `std::complex<double>`, `Dual<double>` to `Dual<std::complex<double>>`.
template <typename R>
using complex_of = std::conditional_t<is_dual_v<R>, DualComplex, cdouble>;

/// e^{i x} for real x.
inline cdouble expi(double x) { return {std::cos(x), std::sin(x)}; }

inline DualComplex expi(const DualReal &x)
{
   cdouble e{std::cos(x.val), std::sin(x.val)};
   return {e, imag_unit * e * x.der};
}

} // namespace efie
