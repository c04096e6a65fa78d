// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>

#include "efie/scalar.hpp"

namespace efie {

/// Small fixed 3-vector. `T` may be a real, complex or dual scalar.
template <typename T>
struct Vec3
{
   T x{}, y{}, z{};

   constexpr Vec3() = default;
   constexpr Vec3(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

   template <typename U>
      requires(!std::is_same_v<T, U> && std::is_convertible_v<U, T>)
   constexpr Vec3(const Vec3<U> &o) : x(o.x), y(o.y), z(o.z) {}

   constexpr T &operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
   constexpr const T &operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

   template <typename U>
   Vec3 &operator+=(const Vec3<U> &o) { x += o.x; y += o.y; z += o.z; return *this; }
   template <typename U>
   Vec3 &operator-=(const Vec3<U> &o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
};

using Vec3d = Vec3<double>;
using Vec3c = Vec3<cdouble>;

template <typename A, typename B>
constexpr auto operator+(const Vec3<A> &a, const Vec3<B> &b)
{
   using T = decltype(a.x + b.x);
   return Vec3<T>{a.x + b.x, a.y + b.y, a.z + b.z};
}

template <typename A, typename B>
constexpr auto operator-(const Vec3<A> &a, const Vec3<B> &b)
{
   using T = decltype(a.x - b.x);
   return Vec3<T>{a.x - b.x, a.y - b.y, a.z - b.z};
}

template <typename A>
constexpr Vec3<A> operator-(const Vec3<A> &a)
{
   return {-a.x, -a.y, -a.z};
}

template <typename A, typename S>
constexpr auto operator*(const Vec3<A> &a, const S &s)
{
   using T = decltype(a.x * s);
   return Vec3<T>{a.x * s, a.y * s, a.z * s};
}

template <typename A, typename S>
constexpr auto operator*(const S &s, const Vec3<A> &a)
{
   using T = decltype(s * a.x);
   return Vec3<T>{s * a.x, s * a.y, s * a.z};
}

template <typename A, typename S>
constexpr auto operator/(const Vec3<A> &a, const S &s)
{
   using T = decltype(a.x / s);
   return Vec3<T>{a.x / s, a.y / s, a.z / s};
}

/// Bilinear dot product (no conjugation).
template <typename A, typename B>
constexpr auto dot(const Vec3<A> &a, const Vec3<B> &b)
{
   return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename A, typename B>
constexpr auto cross(const Vec3<A> &a, const Vec3<B> &b)
{
   using T = decltype(a.y * b.z - a.z * b.y);
   return Vec3<T>{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <typename T>
T norm(const Vec3<T> &a)
{
   using std::sqrt;
   return sqrt(dot(a, a));
}

inline double norm(const Vec3c &a)
{
   return std::sqrt(std::norm(a.x) + std::norm(a.y) + std::norm(a.z));
}

inline Vec3d value_of(const Vec3<DualReal> &a) { return {a.x.val, a.y.val, a.z.val}; }
inline Vec3d value_of(const Vec3d &a) { return a; }

/// Triangle vertices in winding order.
template <typename T>
using Tri = std::array<Vec3<T>, 3>;

/// Point with barycentric coordinates `l` on triangle `t`.
template <typename T>
Vec3<T> bary_point(const Tri<T> &t, const std::array<double, 3> &l)
{
   return t[0] * l[0] + t[1] * l[1] + t[2] * l[2];
}

/// Unnormalized normal (V1-V0)x(V2-V0); its norm is twice the area.
template <typename T>
Vec3<T> twice_area_normal(const Tri<T> &t)
{
   return cross(t[1] - t[0], t[2] - t[0]);
}

template <typename T>
T triangle_area(const Tri<T> &t)
{
   return norm(twice_area_normal(t)) * 0.5;
}

} // namespace efie
