// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace efie {

/// Forward-mode dual number carrying one derivative channel.
///
/// `V` is either `double` or `std::complex<double>`. Mixed real/complex
/// arithmetic is supported so that geometry can stay real while kernel
/// values become complex. The value channel of every operation is computed
/// with exactly the same floating-point expression as the plain scalar
/// code, so a templated routine evaluated with `Dual` reproduces the plain
/// result bit for bit in `val`.
template <typename V>
struct Dual
{
   V val{};
   V der{};

   constexpr Dual() = default;
   constexpr Dual(V v) : val(v) {}
   constexpr Dual(V v, V d) : val(v), der(d) {}

   template <typename W>
      requires(!std::is_same_v<V, W> && std::is_convertible_v<W, V>)
   constexpr Dual(const Dual<W> &o) : val(o.val), der(o.der) {}

   Dual &operator+=(const Dual &o) { val += o.val; der += o.der; return *this; }
   Dual &operator-=(const Dual &o) { val -= o.val; der -= o.der; return *this; }
   Dual &operator*=(const Dual &o)
   {
      der = der * o.val + val * o.der;
      val *= o.val;
      return *this;
   }
};

using DualReal = Dual<double>;
using DualComplex = Dual<std::complex<double>>;

template <typename T>
struct is_dual : std::false_type {};
template <typename V>
struct is_dual<Dual<V>> : std::true_type {};
template <typename T>
inline constexpr bool is_dual_v = is_dual<T>::value;

template <typename T>
concept PlainScalar = std::is_arithmetic_v<T> || std::is_same_v<T, std::complex<double>>;

// Dual (op) Dual

template <typename A, typename B>
constexpr auto operator+(const Dual<A> &a, const Dual<B> &b)
{
   using V = decltype(a.val + b.val);
   return Dual<V>{a.val + b.val, a.der + b.der};
}

template <typename A, typename B>
constexpr auto operator-(const Dual<A> &a, const Dual<B> &b)
{
   using V = decltype(a.val - b.val);
   return Dual<V>{a.val - b.val, a.der - b.der};
}

template <typename A, typename B>
constexpr auto operator*(const Dual<A> &a, const Dual<B> &b)
{
   using V = decltype(a.val * b.val);
   return Dual<V>{a.val * b.val, a.der * b.val + a.val * b.der};
}

template <typename A, typename B>
constexpr auto operator/(const Dual<A> &a, const Dual<B> &b)
{
   using V = decltype(a.val / b.val);
   V q = a.val / b.val;
   return Dual<V>{q, (a.der - q * b.der) / b.val};
}

template <typename A>
constexpr Dual<A> operator-(const Dual<A> &a)
{
   return {-a.val, -a.der};
}

// Dual (op) plain and plain (op) Dual

template <typename A, PlainScalar S>
constexpr auto operator+(const Dual<A> &a, S s)
{
   using V = decltype(a.val + s);
   return Dual<V>{a.val + s, V(a.der)};
}

template <typename A, PlainScalar S>
constexpr auto operator+(S s, const Dual<A> &a)
{
   using V = decltype(s + a.val);
   return Dual<V>{s + a.val, V(a.der)};
}

template <typename A, PlainScalar S>
constexpr auto operator-(const Dual<A> &a, S s)
{
   using V = decltype(a.val - s);
   return Dual<V>{a.val - s, V(a.der)};
}

template <typename A, PlainScalar S>
constexpr auto operator-(S s, const Dual<A> &a)
{
   using V = decltype(s - a.val);
   return Dual<V>{s - a.val, V(-a.der)};
}

template <typename A, PlainScalar S>
constexpr auto operator*(const Dual<A> &a, S s)
{
   using V = decltype(a.val * s);
   return Dual<V>{a.val * s, a.der * s};
}

template <typename A, PlainScalar S>
constexpr auto operator*(S s, const Dual<A> &a)
{
   using V = decltype(s * a.val);
   return Dual<V>{s * a.val, s * a.der};
}

template <typename A, PlainScalar S>
constexpr auto operator/(const Dual<A> &a, S s)
{
   using V = decltype(a.val / s);
   return Dual<V>{a.val / s, a.der / s};
}

template <typename A, PlainScalar S>
constexpr auto operator/(S s, const Dual<A> &a)
{
   using V = decltype(s / a.val);
   V q = s / a.val;
   return Dual<V>{q, -(q * a.der) / a.val};
}

// Comparisons act on the value channel only.

template <typename S>
constexpr bool operator<(const Dual<double> &a, S b) requires std::is_arithmetic_v<S> { return a.val < b; }
template <typename S>
constexpr bool operator>(const Dual<double> &a, S b) requires std::is_arithmetic_v<S> { return a.val > b; }
template <typename S>
constexpr bool operator<=(const Dual<double> &a, S b) requires std::is_arithmetic_v<S> { return a.val <= b; }
template <typename S>
constexpr bool operator>=(const Dual<double> &a, S b) requires std::is_arithmetic_v<S> { return a.val >= b; }

// Elementary functions (real channel)

inline DualReal sqrt(const DualReal &a)
{
   double r = std::sqrt(a.val);
   return {r, a.der / (2.0 * r)};
}

inline DualReal log(const DualReal &a)
{
   return {std::log(a.val), a.der / a.val};
}

inline DualReal atan2(const DualReal &y, const DualReal &x)
{
   double den = x.val * x.val + y.val * y.val;
   return {std::atan2(y.val, x.val), (x.val * y.der - y.val * x.der) / den};
}

inline DualReal cos(const DualReal &a)
{
   return {std::cos(a.val), -std::sin(a.val) * a.der};
}

inline DualReal sin(const DualReal &a)
{
   return {std::sin(a.val), std::cos(a.val) * a.der};
}

inline DualComplex exp(const DualComplex &a)
{
   std::complex<double> e = std::exp(a.val);
   return {e, e * a.der};
}

/// Value channel of a plain or dual scalar.
inline double value_of(double a) { return a; }
inline double value_of(const DualReal &a) { return a.val; }
inline std::complex<double> value_of(const std::complex<double> &a) { return a; }
inline std::complex<double> value_of(const DualComplex &a) { return a.val; }

/// Derivative channel (zero for plain scalars).
inline double derivative_of(double) { return 0.0; }
inline double derivative_of(const DualReal &a) { return a.der; }
inline std::complex<double> derivative_of(const std::complex<double> &) { return {}; }
inline std::complex<double> derivative_of(const DualComplex &a) { return a.der; }

} // namespace efie
