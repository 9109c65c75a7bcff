#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace fpsz {

using Rational = mpq_class;
using Integer = mpz_class;

// Element of Q(i). std::complex<T> is only specified for floating T.
struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() = default;
  ComplexRational(Rational real) : re(std::move(real)) {}  // NOLINT(implicit)
  ComplexRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}
  ComplexRational(long value) : re(value) {}  // NOLINT(implicit)

  bool is_real() const { return sgn(im) == 0; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& o) {
    Rational den = o.re * o.re + o.im * o.im;
    Rational r = (re * o.re + im * o.im) / den;
    Rational i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) {
    return {Rational(-a.re), Rational(-a.im)};
  }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

inline ComplexRational conj(const ComplexRational& z) { return {z.re, Rational(-z.im)}; }
inline Rational norm(const ComplexRational& z) { return z.re * z.re + z.im * z.im; }

Integer binomial(unsigned long n, unsigned long k);
Integer catalan(unsigned long k);

// Natural log of |x| without overflow for huge numerators/denominators.
double log_abs(const Rational& x);
double log_abs(const Integer& x);

Rational pow(const Rational& base, long exponent);
ComplexRational pow(const ComplexRational& base, long exponent);

// Accepts "p", "p/q", and decimal literals such as "-0.125" or "3e-2"; the
// decimal forms are converted exactly.
Rational parse_rational(std::string_view text);

// Exact rational value of a double (every finite double is dyadic).
Rational exact_from_double(double x);

std::string to_string(const Rational& x);
std::string to_string(const ComplexRational& z);

inline std::complex<double> to_complex(const ComplexRational& z) {
  return {z.re.get_d(), z.im.get_d()};
}

}  // namespace fpsz
