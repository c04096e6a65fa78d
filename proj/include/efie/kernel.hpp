// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>

#include "efie/mesh.hpp"
#include "efie/vec3.hpp"

namespace efie {

// Helmholtz kernel g_k(r) = e^{ikr} / (4 pi r) and its split
//
//     g_k = g_s + g_b,   g_s(r) = 1/(4 pi r) - k^2 r / (8 pi)
//
// where g_s collects the two non-smooth odd-power terms of the expansion
// and g_b is the bounded remainder with g_b(0) = ik/(4 pi).
//
// All functions are templated on the real scalar type so the same code
// path serves plain and dual-number evaluation.

namespace detail {

// Below this value of kr the remainder is evaluated from its power series.
inline constexpr double kSeriesLimit = 0.5;
inline constexpr int kSeriesTerms = 24;

// c_n = i^n / n! for n = 3 .. kSeriesTerms
inline const std::array<cdouble, kSeriesTerms + 1> &series_coefficients()
{
   static const auto c = [] {
      std::array<cdouble, kSeriesTerms + 1> a{};
      cdouble ipow = 1.0;
      double fact = 1.0;
      for (int n = 0; n <= kSeriesTerms; ++n)
      {
         if (n > 0) { fact *= n; }
         a[n] = ipow / fact;
         ipow *= imag_unit;
      }
      return a;
   }();
   return c;
}

} // namespace detail

template <typename R>
complex_of<R> green(double k, const R &r)
{
   if (!(value_of(r) > 0.0)) { throw Error("green: distance must be positive"); }
   return expi(k * r) / (4.0 * pi * r);
}

/// rho(r) = g_k(r)(ik - 1/r)/r, so that grad g_k(rvec) = rho(|rvec|) rvec.
template <typename R>
complex_of<R> green_radial(double k, const R &r)
{
   if (!(value_of(r) > 0.0)) { throw Error("green_gradient: zero separation"); }
   complex_of<R> g = expi(k * r) / (4.0 * pi * r);
   return g * (imag_unit * k - 1.0 / r) / r;
}

/// Gradient g_k(|r|)(ik - 1/|r|) r/|r|.
template <typename R>
Vec3<complex_of<R>> green_gradient(double k, const Vec3<R> &rvec)
{
   return rvec * green_radial(k, norm(rvec));
}

/// Singular part 1/(4 pi r) - k^2 r/(8 pi).
template <typename R>
R green_singular(double k, const R &r)
{
   return 1.0 / (4.0 * pi * r) - (k * k / (8.0 * pi)) * r;
}

/// Smooth remainder g_k - g_s; finite at r = 0.
template <typename R>
complex_of<R> green_smooth(double k, const R &r)
{
   using C = complex_of<R>;
   const R z = k * r;
   if (value_of(r) == 0.0) { return C(imag_unit * (k / (4.0 * pi))); }
   if (value_of(z) < detail::kSeriesLimit)
   {
      // h(z)/r = k z^2 sum_{n>=3} i^n z^(n-3) / n!
      const auto &c = detail::series_coefficients();
      C s(c[detail::kSeriesTerms]);
      for (int n = detail::kSeriesTerms - 1; n >= 3; --n) { s = s * z + c[n]; }
      return (imag_unit * k + (k * z * z) * s) / (4.0 * pi);
   }
   return (imag_unit * k + (expi(z) - 1.0 - imag_unit * z + 0.5 * z * z) / r) / (4.0 * pi);
}

/// Gradient of the smooth remainder; vanishes at r = 0.
template <typename R>
Vec3<complex_of<R>> green_gradient_smooth(double k, const Vec3<R> &rvec)
{
   using C = complex_of<R>;
   const R r = norm(rvec);
   if (value_of(r) == 0.0) { return {}; }
   const R z = k * r;
   if (value_of(z) < detail::kSeriesLimit)
   {
      // (k^3 / 4 pi) sum_{n>=3} (n-1) i^n z^(n-3) / n!  times r
      const auto &c = detail::series_coefficients();
      C s(c[detail::kSeriesTerms] * static_cast<double>(detail::kSeriesTerms - 1));
      for (int n = detail::kSeriesTerms - 1; n >= 3; --n)
      {
         s = s * z + c[n] * static_cast<double>(n - 1);
      }
      return rvec * (s * (k * k * k / (4.0 * pi)));
   }
   C g = expi(z) / (4.0 * pi * r);
   C dg = g * (imag_unit * k - 1.0 / r) + 1.0 / (4.0 * pi * r * r) + k * k / (8.0 * pi);
   return rvec * (dg / r);
}

} // namespace efie
