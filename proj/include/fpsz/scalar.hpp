#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "fpsz/errors.hpp"
#include "fpsz/rational.hpp"

namespace fpsz {

enum class Backend { Rational, Float };

inline const char* backend_name(Backend b) { return b == Backend::Rational ? "rational" : "float"; }

// Uniform arithmetic surface over the four scalar types the library runs on:
// Rational and ComplexRational (exact), double and std::complex<double>.
template <class T>
struct Field;

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <>
struct Field<double> {
  using Real = double;
  static constexpr bool exact = false;
  static constexpr bool complex = false;
  static constexpr Backend backend = Backend::Float;

  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_exact(const ComplexRational& z) {
    if (!z.is_real()) throw BackendMismatch("complex moment in a real computation");
    return z.re.get_d();
  }
  static double from_float(std::complex<double> z) {
    if (z.imag() != 0.0) throw BackendMismatch("complex moment in a real computation");
    return z.real();
  }
  static double conj(double x) { return x; }
  static double real(double x) { return x; }
  static double norm(double x) { return x * x; }
  static bool is_zero(double x) { return x == 0.0; }
  static double to_double(double x) { return x; }
  static double log(double x) { return std::log(x); }
  static std::string str(double x) { return format_double(x); }
};

template <>
struct Field<std::complex<double>> {
  using Real = double;
  using T = std::complex<double>;
  static constexpr bool exact = false;
  static constexpr bool complex = true;
  static constexpr Backend backend = Backend::Float;

  static T zero() { return {}; }
  static T one() { return {1.0, 0.0}; }
  static T from_exact(const ComplexRational& z) { return to_complex(z); }
  static T from_float(T z) { return z; }
  static T conj(const T& x) { return std::conj(x); }
  static double real(const T& x) { return x.real(); }
  static double norm(const T& x) { return std::norm(x); }
  static bool is_zero(const T& x) { return x == T{}; }
  static double to_double(double x) { return x; }
  static double log(double x) { return std::log(x); }
  static std::string str(const T& x) {
    if (x.imag() == 0.0) return format_double(x.real());
    return format_double(x.real()) + (x.imag() < 0 ? "-" : "+") + format_double(std::fabs(x.imag())) +
           "i";
  }
};

template <>
struct Field<Rational> {
  using Real = Rational;
  static constexpr bool exact = true;
  static constexpr bool complex = false;
  static constexpr Backend backend = Backend::Rational;

  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_exact(const ComplexRational& z) {
    if (!z.is_real()) throw BackendMismatch("complex moment in a real computation");
    return z.re;
  }
  static Rational from_float(std::complex<double>) {
    throw BackendMismatch("float-only law used with the rational backend");
  }
  static Rational conj(const Rational& x) { return x; }
  static Rational real(const Rational& x) { return x; }
  static Rational norm(const Rational& x) { return x * x; }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static double log(const Rational& x) { return log_abs(x); }
  static std::string str(const Rational& x) { return to_string(x); }
};

template <>
struct Field<ComplexRational> {
  using Real = Rational;
  using T = ComplexRational;
  static constexpr bool exact = true;
  static constexpr bool complex = true;
  static constexpr Backend backend = Backend::Rational;

  static T zero() { return T(0); }
  static T one() { return T(1); }
  static T from_exact(const T& z) { return z; }
  static T from_float(std::complex<double>) {
    throw BackendMismatch("float-only law used with the rational backend");
  }
  static T conj(const T& x) { return fpsz::conj(x); }
  static Rational real(const T& x) { return x.re; }
  static Rational norm(const T& x) { return fpsz::norm(x); }
  static bool is_zero(const T& x) { return sgn(x.re) == 0 && sgn(x.im) == 0; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static double log(const Rational& x) { return log_abs(x); }
  static std::string str(const T& x) { return to_string(x); }
};

template <class T>
using RealOf = typename Field<T>::Real;

template <class T>
inline T real_to_scalar(const RealOf<T>& x) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return T(x, 0.0);
  } else if constexpr (std::is_same_v<T, ComplexRational>) {
    return T(x);
  } else {
    return x;
  }
}

// |a - b| <= tol * max(1, |a|, |b|)
inline bool close_mixed(double a, double b, double tol) {
  double scale = std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace fpsz
