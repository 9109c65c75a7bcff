#include "fpsz/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "fpsz/errors.hpp"

namespace fpsz {

Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Integer catalan(unsigned long k) {
  Integer out = binomial(2 * k, k);
  out /= static_cast<unsigned long>(k + 1);
  return out;
}

double log_abs(const Integer& x) {
  if (sgn(x) == 0) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::numbers::ln2;
}

double log_abs(const Rational& x) {
  if (sgn(x) == 0) return -std::numeric_limits<double>::infinity();
  return log_abs(Integer(x.get_num())) - log_abs(Integer(x.get_den()));
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (sgn(base) == 0) throw std::domain_error("zero to a negative power");
    return pow(Rational(1 / base), -exponent);
  }
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational out(num, den);
  out.canonicalize();
  return out;
}

ComplexRational pow(const ComplexRational& base, long exponent) {
  if (exponent < 0) return pow(ComplexRational(1) / base, -exponent);
  ComplexRational result(1);
  ComplexRational b = base;
  auto e = static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1UL) result *= b;
    e >>= 1U;
    if (e != 0) b *= b;
  }
  return result;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw ConfigError("empty rational literal");

  if (s.find('/') != std::string::npos) {
    Rational out;
    if (out.set_str(s, 10) != 0 || sgn(out.get_den()) == 0)
      throw ConfigError("bad rational literal '" + s + "'");
    out.canonicalize();
    return out;
  }

  // decimal: [sign] digits [. digits] [e|E [sign] digits]
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    digits.push_back(s[i++]);
    seen_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits.push_back(s[i++]);
      --scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw ConfigError("bad rational literal '" + s + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      throw ConfigError("bad exponent in '" + s + "'");
    }
    i += used;
    scale += e;
  }
  if (i != s.size()) throw ConfigError("bad rational literal '" + s + "'");

  Integer mant(digits, 10);
  if (negative) mant = -mant;
  Rational out(mant);
  if (scale != 0) out *= pow(Rational(10), scale);
  return out;
}

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw ConfigError("non-finite number");
  Rational out(x);  // mpq_set_d is exact
  return out;
}

std::string to_string(const Rational& x) { return x.get_str(); }

std::string to_string(const ComplexRational& z) {
  if (z.is_real()) return to_string(z.re);
  std::string out = to_string(z.re);
  out += sgn(z.im) < 0 ? "-" : "+";
  out += to_string(Rational(abs(z.im)));
  out += "i";
  return out;
}

}  // namespace fpsz
