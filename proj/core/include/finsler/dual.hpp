#pragma once

// Forward-mode dual and hyper-dual numbers.
//
// Dual<T>      = v + d*eps,                    eps^2 = 0
// HyperDual<T> = f + a*e1 + b*e2 + ab*e1*e2,   e1^2 = e2^2 = 0
//
// Both are templated on the coefficient type so they nest: a
// HyperDual<Dual<double>> carries third-order mixed derivatives.

#include <cmath>
#include <concepts>
#include <type_traits>

namespace finsler {

template <class T>
struct Dual;
template <class T>
struct HyperDual;

template <class S>
concept Arithmetic = std::is_arithmetic_v<S>;

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(const T& value, const T& deriv) : v(value), d(deriv) {}
  template <Arithmetic S>
  constexpr Dual(S value) : v(T(value)), d(T(0)) {}  // NOLINT: implicit by design of scalar promotion
  template <class U>
    requires(!Arithmetic<U> && std::is_convertible_v<U, T>)
  constexpr Dual(const U& value) : v(T(value)), d(T(0)) {}  // NOLINT

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    const T inv = T(1) / o.v;
    v = v * inv;
    d = (d - v * o.d) * inv;
    return *this;
  }
};

template <class T>
struct HyperDual {
  T f{};
  T a{};
  T b{};
  T ab{};

  constexpr HyperDual() = default;
  constexpr HyperDual(const T& f0, const T& a0, const T& b0, const T& ab0) : f(f0), a(a0), b(b0), ab(ab0) {}
  template <Arithmetic S>
  constexpr HyperDual(S value) : f(T(value)), a(T(0)), b(T(0)), ab(T(0)) {}  // NOLINT
  template <class U>
    requires(!Arithmetic<U> && std::is_convertible_v<U, T>)
  constexpr HyperDual(const U& value) : f(T(value)), a(T(0)), b(T(0)), ab(T(0)) {}  // NOLINT

  HyperDual& operator+=(const HyperDual& o) { f += o.f; a += o.a; b += o.b; ab += o.ab; return *this; }
  HyperDual& operator-=(const HyperDual& o) { f -= o.f; a -= o.a; b -= o.b; ab -= o.ab; return *this; }
  HyperDual& operator*=(const HyperDual& o) {
    ab = f * o.ab + a * o.b + b * o.a + ab * o.f;
    a = f * o.a + a * o.f;
    b = f * o.b + b * o.f;
    f = f * o.f;
    return *this;
  }
  HyperDual& operator/=(const HyperDual& o);
};

// ---- primal value extraction ------------------------------------------------

inline constexpr double primal(double x) { return x; }
template <class T>
constexpr double primal(const Dual<T>& x) { return primal(x.v); }
template <class T>
constexpr double primal(const HyperDual<T>& x) { return primal(x.f); }

// ---- chain rule helpers -----------------------------------------------------

// g(x) for a univariate g with g(v) = g0, g'(v) = g1 (and g''(v) = g2).
template <class T>
Dual<T> chain(const Dual<T>& x, const T& g0, const T& g1) {
  return {g0, g1 * x.d};
}
template <class T>
HyperDual<T> chain(const HyperDual<T>& x, const T& g0, const T& g1, const T& g2) {
  return {g0, g1 * x.a, g1 * x.b, g1 * x.ab + g2 * x.a * x.b};
}

template <class T>
HyperDual<T> reciprocal(const HyperDual<T>& x) {
  const T inv = T(1) / x.f;
  const T inv2 = inv * inv;
  return chain(x, inv, -inv2, T(2) * inv2 * inv);
}
template <class T>
HyperDual<T>& HyperDual<T>::operator/=(const HyperDual& o) {
  return *this *= reciprocal(o);
}

// ---- arithmetic -------------------------------------------------------------

#define FINSLER_DUAL_BINARY(Type)                                                              \
  template <class T>                                                                           \
  Type<T> operator+(Type<T> x, const Type<T>& y) { return x += y; }                            \
  template <class T>                                                                           \
  Type<T> operator-(Type<T> x, const Type<T>& y) { return x -= y; }                            \
  template <class T>                                                                           \
  Type<T> operator*(Type<T> x, const Type<T>& y) { return x *= y; }                            \
  template <class T>                                                                           \
  Type<T> operator/(Type<T> x, const Type<T>& y) { return x /= y; }                            \
  template <class T, Arithmetic S>                                                             \
  Type<T> operator+(Type<T> x, S y) { return x += Type<T>(y); }                                \
  template <class T, Arithmetic S>                                                             \
  Type<T> operator+(S x, const Type<T>& y) { return Type<T>(x) += y; }                         \
  template <class T, Arithmetic S>                                                             \
  Type<T> operator-(Type<T> x, S y) { return x -= Type<T>(y); }                                \
  template <class T, Arithmetic S>                                                             \
  Type<T> operator-(S x, const Type<T>& y) { return Type<T>(x) -= y; }                         \
  template <class T, Arithmetic S>                                                             \
  Type<T> operator*(Type<T> x, S y) { return x *= Type<T>(y); }                                \
  template <class T, Arithmetic S>                                                             \
  Type<T> operator*(S x, const Type<T>& y) { return Type<T>(x) *= y; }                         \
  template <class T, Arithmetic S>                                                             \
  Type<T> operator/(Type<T> x, S y) { return x /= Type<T>(y); }                                \
  template <class T, Arithmetic S>                                                             \
  Type<T> operator/(S x, const Type<T>& y) { return Type<T>(x) /= y; }                         \
  template <class T>                                                                           \
  Type<T> operator-(const Type<T>& x) { return Type<T>(0) -= x; }                              \
  template <class T>                                                                           \
  Type<T> operator+(const Type<T>& x) { return x; }                                            \
  template <class T>                                                                           \
  bool operator<(const Type<T>& x, const Type<T>& y) { return primal(x) < primal(y); }         \
  template <class T>                                                                           \
  bool operator>(const Type<T>& x, const Type<T>& y) { return primal(x) > primal(y); }

FINSLER_DUAL_BINARY(Dual)
FINSLER_DUAL_BINARY(HyperDual)

#undef FINSLER_DUAL_BINARY

// ---- elementary functions ---------------------------------------------------

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  const T e = exp(x.v);
  return chain(x, e, e);
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return chain(x, T(log(x.v)), T(T(1) / x.v));
}
template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return chain(x, T(sin(x.v)), T(cos(x.v)));
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return chain(x, T(cos(x.v)), T(-sin(x.v)));
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  const T s = sqrt(x.v);
  return chain(x, s, T(T(0.5) / s));
}
template <class T>
Dual<T> pow(const Dual<T>& x, double c) {
  using std::pow;
  return chain(x, T(pow(x.v, c)), T(c * pow(x.v, c - 1.0)));
}

template <class T>
HyperDual<T> exp(const HyperDual<T>& x) {
  using std::exp;
  const T e = exp(x.f);
  return chain(x, e, e, e);
}
template <class T>
HyperDual<T> log(const HyperDual<T>& x) {
  using std::log;
  const T inv = T(1) / x.f;
  return chain(x, T(log(x.f)), inv, T(-(inv * inv)));
}
template <class T>
HyperDual<T> sin(const HyperDual<T>& x) {
  using std::cos;
  using std::sin;
  const T s = sin(x.f);
  return chain(x, s, T(cos(x.f)), T(-s));
}
template <class T>
HyperDual<T> cos(const HyperDual<T>& x) {
  using std::cos;
  using std::sin;
  const T c = cos(x.f);
  return chain(x, c, T(-sin(x.f)), T(-c));
}
template <class T>
HyperDual<T> sqrt(const HyperDual<T>& x) {
  using std::sqrt;
  const T s = sqrt(x.f);
  const T g1 = T(0.5) / s;
  return chain(x, s, g1, T(-g1 / (T(2) * x.f)));
}
template <class T>
HyperDual<T> pow(const HyperDual<T>& x, double c) {
  using std::pow;
  return chain(x, T(pow(x.f, c)), T(c * pow(x.f, c - 1.0)), T(c * (c - 1.0) * pow(x.f, c - 2.0)));
}

template <class T>
Dual<T> pow(const Dual<T>& x, const Dual<T>& y) {
  return exp(y * log(x));
}
template <class T>
HyperDual<T> pow(const HyperDual<T>& x, const HyperDual<T>& y) {
  return exp(y * log(x));
}

// x^n for integer n by repeated squaring; valid for negative bases.
template <class T>
T ipow(T x, long long n) {
  if (n < 0) return T(1) / ipow(x, -n);
  T result(1);
  while (n > 0) {
    if (n & 1) result = result * x;
    x = x * x;
    n >>= 1;
  }
  return result;
}

}  // namespace finsler
