#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpsz/rational.hpp"
#include "fpsz/scalar.hpp"
#include "fpsz/words.hpp"

namespace fpsz {

// A law parameter: always has a double value, and an exact value when the
// parameter was given as an integer, fraction, or decimal string.
struct Param {
  double value = 0.0;
  std::optional<Rational> exact;

  Param() = default;
  Param(Rational r) : value(r.get_d()), exact(std::move(r)) {}  // NOLINT(implicit)
  Param(long v) : Param(Rational(v)) {}                        // NOLINT(implicit)
  static Param inexact(double v) {
    Param p;
    p.value = v;
    return p;
  }
};

struct ComplexParam {
  Param re;
  Param im = Param(0L);
};

enum class LawFamily { Semicircle, Arcsine, FreePoisson, TwoPoint, Haar, Moments };

// What an explicit moment table does past its last entry.
enum class TableTail { Unsupported, Zero };

const char* law_family_name(LawFamily f);

// A single variable's *-distribution given by its moment functional.
// Self-adjoint laws expose m_k = tau(x^k), k >= 0. Unitary laws expose
// c_k = tau(u^k) for all integers k with c_{-k} = conj(c_k).
class MarginalLaw {
 public:
  // Semicircle of radius 2*scale centred at `shift`; m_{2k} = scale^{2k} Catalan(k).
  static MarginalLaw semicircle(Param scale = Param(1L), Param shift = Param(0L));
  // Arcsine law on [-2*scale, 2*scale]; m_{2k} = scale^{2k} binom(2k, k).
  static MarginalLaw arcsine(Param scale = Param(1L), Param shift = Param(0L));
  // Free Poisson (Marchenko-Pastur) with rate lambda and jump size `jump`.
  static MarginalLaw free_poisson(Param rate, Param jump = Param(1L), Param shift = Param(0L));
  // weight * delta_left + (1 - weight) * delta_right.
  static MarginalLaw two_point(Param left = Param(-1L), Param right = Param(1L),
                               Param weight = Param(Rational(1, 2)));
  static MarginalLaw haar();
  // Explicit table m_0..m_K (self-adjoint) or c_0..c_K (unitary). Validated
  // eagerly: m_0 = 1, positive semidefinite Hankel/Toeplitz matrix, |c_k| <= 1.
  static MarginalLaw from_moments(VariableKind kind, std::vector<ComplexParam> table,
                                  TableTail tail = TableTail::Unsupported,
                                  std::string name = "moments");

  VariableKind kind() const { return kind_; }
  LawFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  // True when every parameter is rational, so moments are exact.
  bool exact() const { return exact_; }
  // Largest supported |k|, if bounded.
  std::optional<int> max_order() const;

  ComplexRational exact_moment(int k) const;
  std::complex<double> float_moment(int k) const;

  template <class T>
  T moment(int k) const {
    if constexpr (Field<T>::exact) {
      return Field<T>::from_exact(exact_moment(k));
    } else {
      return Field<T>::from_float(float_moment(k));
    }
  }

  // Same law for x + c; only meaningful for self-adjoint laws.
  MarginalLaw shifted(Param c) const;

 private:
  MarginalLaw() = default;
  void check_order(int k) const;
  void validate_table() const;

  VariableKind kind_ = VariableKind::SelfAdjoint;
  LawFamily family_ = LawFamily::Moments;
  std::string name_;
  bool exact_ = true;
  std::vector<Param> params_;
  Param shift_ = Param(0L);
  std::vector<ComplexParam> table_;
  TableTail tail_ = TableTail::Unsupported;
};

}  // namespace fpsz
