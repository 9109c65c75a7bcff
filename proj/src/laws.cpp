#include "fpsz/laws.hpp"

#include <cmath>
#include <cstdlib>

#include "fpsz/errors.hpp"
#include "fpsz/linalg.hpp"

namespace fpsz {

const char* law_family_name(LawFamily f) {
  switch (f) {
    case LawFamily::Semicircle:
      return "semicircle";
    case LawFamily::Arcsine:
      return "arcsine";
    case LawFamily::FreePoisson:
      return "free_poisson";
    case LawFamily::TwoPoint:
      return "two_point";
    case LawFamily::Haar:
      return "haar";
    case LawFamily::Moments:
      return "moments";
  }
  return "?";
}

namespace {

template <class R>
R param_as(const Param& p) {
  if constexpr (std::is_same_v<R, Rational>) {
    return *p.exact;
  } else {
    return p.value;
  }
}

template <class R>
R from_integer(const Integer& z) {
  if constexpr (std::is_same_v<R, Rational>) {
    return Rational(z);
  } else {
    return z.get_d();
  }
}

template <class R>
R int_pow(const R& base, int k) {
  if constexpr (std::is_same_v<R, Rational>) {
    return pow(base, k);
  } else {
    return std::pow(base, k);
  }
}

template <class R>
R base_moment(LawFamily family, const std::vector<Param>& params, int k) {
  switch (family) {
    case LawFamily::Semicircle: {
      if (k % 2 != 0) return R(0);
      R a = param_as<R>(params[0]);
      return R(int_pow(a, k) * from_integer<R>(catalan(static_cast<unsigned long>(k / 2))));
    }
    case LawFamily::Arcsine: {
      if (k % 2 != 0) return R(0);
      R a = param_as<R>(params[0]);
      return R(int_pow(a, k) *
               from_integer<R>(binomial(static_cast<unsigned long>(k), static_cast<unsigned long>(k / 2))));
    }
    case LawFamily::FreePoisson: {
      if (k == 0) return R(1);
      R rate = param_as<R>(params[0]);
      R jump = param_as<R>(params[1]);
      // Narayana polynomial: sum_j N(k, j) rate^j
      R total(0);
      auto uk = static_cast<unsigned long>(k);
      for (unsigned long j = 1; j <= uk; ++j) {
        Integer narayana = binomial(uk, j) * binomial(uk, j - 1);
        narayana /= uk;
        total += from_integer<R>(narayana) * int_pow(rate, static_cast<int>(j));
      }
      return R(total * int_pow(jump, k));
    }
    case LawFamily::TwoPoint: {
      R left = param_as<R>(params[0]);
      R right = param_as<R>(params[1]);
      R w = param_as<R>(params[2]);
      return R(w * int_pow(left, k) + (R(1) - w) * int_pow(right, k));
    }
    case LawFamily::Haar:
    case LawFamily::Moments:
      break;
  }
  return R(0);
}

template <class R>
R shifted_moment(LawFamily family, const std::vector<Param>& params, const Param& shift, int k) {
  R c = param_as<R>(shift);
  if (c == R(0)) return base_moment<R>(family, params, k);
  R total(0);
  auto uk = static_cast<unsigned long>(k);
  for (unsigned long i = 0; i <= uk; ++i)
    total += from_integer<R>(binomial(uk, i)) * int_pow(c, static_cast<int>(uk - i)) *
             base_moment<R>(family, params, static_cast<int>(i));
  return total;
}

bool all_exact(const std::vector<Param>& ps) {
  for (const Param& p : ps)
    if (!p.exact) return false;
  return true;
}

}  // namespace

MarginalLaw MarginalLaw::semicircle(Param scale, Param shift) {
  if (!(scale.value > 0)) throw InvalidLaw("semicircle scale must be positive");
  MarginalLaw law;
  law.family_ = LawFamily::Semicircle;
  law.name_ = "semicircle";
  law.params_ = {std::move(scale)};
  law.shift_ = std::move(shift);
  law.exact_ = all_exact(law.params_) && law.shift_.exact.has_value();
  return law;
}

MarginalLaw MarginalLaw::arcsine(Param scale, Param shift) {
  if (!(scale.value > 0)) throw InvalidLaw("arcsine scale must be positive");
  MarginalLaw law;
  law.family_ = LawFamily::Arcsine;
  law.name_ = "arcsine";
  law.params_ = {std::move(scale)};
  law.shift_ = std::move(shift);
  law.exact_ = all_exact(law.params_) && law.shift_.exact.has_value();
  return law;
}

MarginalLaw MarginalLaw::free_poisson(Param rate, Param jump, Param shift) {
  if (!(rate.value > 0)) throw InvalidLaw("free_poisson rate must be positive");
  if (jump.value == 0) throw InvalidLaw("free_poisson jump must be nonzero");
  MarginalLaw law;
  law.family_ = LawFamily::FreePoisson;
  law.name_ = "free_poisson";
  law.params_ = {std::move(rate), std::move(jump)};
  law.shift_ = std::move(shift);
  law.exact_ = all_exact(law.params_) && law.shift_.exact.has_value();
  return law;
}

MarginalLaw MarginalLaw::two_point(Param left, Param right, Param weight) {
  if (!(weight.value >= 0 && weight.value <= 1)) throw InvalidLaw("two_point weight must lie in [0, 1]");
  MarginalLaw law;
  law.family_ = LawFamily::TwoPoint;
  law.name_ = "two_point";
  law.params_ = {std::move(left), std::move(right), std::move(weight)};
  law.exact_ = all_exact(law.params_);
  return law;
}

MarginalLaw MarginalLaw::haar() {
  MarginalLaw law;
  law.kind_ = VariableKind::Unitary;
  law.family_ = LawFamily::Haar;
  law.name_ = "haar";
  return law;
}

MarginalLaw MarginalLaw::from_moments(VariableKind kind, std::vector<ComplexParam> table, TableTail tail,
                                      std::string name) {
  if (table.empty()) throw InvalidLaw("empty moment table");
  MarginalLaw law;
  law.kind_ = kind;
  law.family_ = LawFamily::Moments;
  law.name_ = std::move(name);
  law.tail_ = tail;
  law.exact_ = true;
  for (const ComplexParam& c : table) {
    if (!c.re.exact || !c.im.exact) law.exact_ = false;
    if (kind == VariableKind::SelfAdjoint && c.im.value != 0)
      throw InvalidLaw("self-adjoint moments must be real");
  }
  law.table_ = std::move(table);
  law.validate_table();
  return law;
}

std::optional<int> MarginalLaw::max_order() const {
  if (family_ == LawFamily::Moments && tail_ == TableTail::Unsupported)
    return static_cast<int>(table_.size()) - 1;
  return std::nullopt;
}

void MarginalLaw::check_order(int k) const {
  if (kind_ == VariableKind::SelfAdjoint && k < 0) throw OrderUnsupported(name_, k);
  if (auto m = max_order(); m && std::abs(k) > *m) throw OrderUnsupported(name_, k);
}

ComplexRational MarginalLaw::exact_moment(int k) const {
  check_order(k);
  if (!exact_) throw BackendMismatch("law '" + name_ + "' has float-only parameters");
  if (kind_ == VariableKind::Unitary && k < 0) return conj(exact_moment(-k));
  switch (family_) {
    case LawFamily::Haar:
      return k == 0 ? ComplexRational(1) : ComplexRational(0);
    case LawFamily::Moments: {
      auto idx = static_cast<std::size_t>(k);
      if (idx >= table_.size()) return ComplexRational(0);
      return {*table_[idx].re.exact, *table_[idx].im.exact};
    }
    default:
      return shifted_moment<Rational>(family_, params_, shift_, k);
  }
}

std::complex<double> MarginalLaw::float_moment(int k) const {
  if (exact_) return to_complex(exact_moment(k));
  check_order(k);
  if (kind_ == VariableKind::Unitary && k < 0) return std::conj(float_moment(-k));
  switch (family_) {
    case LawFamily::Haar:
      return k == 0 ? 1.0 : 0.0;
    case LawFamily::Moments: {
      auto idx = static_cast<std::size_t>(k);
      if (idx >= table_.size()) return 0.0;
      return {table_[idx].re.value, table_[idx].im.value};
    }
    default:
      return shifted_moment<double>(family_, params_, shift_, k);
  }
}

MarginalLaw MarginalLaw::shifted(Param c) const {
  if (kind_ != VariableKind::SelfAdjoint) throw InvalidLaw("only self-adjoint laws can be shifted");
  if (family_ == LawFamily::Moments || family_ == LawFamily::TwoPoint) {
    if (tail_ == TableTail::Zero) throw InvalidLaw("cannot shift a zero-tailed moment table");
    // Re-tabulate: shifting a table needs all its orders.
    const int top = static_cast<int>(table_.size()) - 1;
    if (family_ == LawFamily::TwoPoint) {
      MarginalLaw out = *this;
      out.params_[0] = exact_ && c.exact ? Param(Rational(*params_[0].exact + *c.exact))
                                         : Param::inexact(params_[0].value + c.value);
      out.params_[1] = exact_ && c.exact ? Param(Rational(*params_[1].exact + *c.exact))
                                         : Param::inexact(params_[1].value + c.value);
      out.exact_ = all_exact(out.params_);
      return out;
    }
    std::vector<ComplexParam> table;
    for (int k = 0; k <= top; ++k) {
      if (exact_ && c.exact) {
        Rational total(0);
        for (int i = 0; i <= k; ++i)
          total += Rational(binomial(static_cast<unsigned long>(k), static_cast<unsigned long>(i))) *
                   pow(*c.exact, k - i) * exact_moment(i).re;
        table.push_back({Param(total)});
      } else {
        double total = 0;
        for (int i = 0; i <= k; ++i)
          total += binomial(static_cast<unsigned long>(k), static_cast<unsigned long>(i)).get_d() *
                   std::pow(c.value, k - i) * float_moment(i).real();
        table.push_back({Param::inexact(total)});
      }
    }
    return from_moments(kind_, std::move(table), tail_, name_);
  }
  MarginalLaw out = *this;
  if (shift_.exact && c.exact) {
    out.shift_ = Param(Rational(*shift_.exact + *c.exact));
  } else {
    out.shift_ = Param::inexact(shift_.value + c.value);
  }
  out.exact_ = all_exact(out.params_) && out.shift_.exact.has_value();
  return out;
}

void MarginalLaw::validate_table() const {
  const auto& m0 = table_.front();
  bool unit = m0.re.exact ? (*m0.re.exact == 1 && m0.im.exact && sgn(*m0.im.exact) == 0)
                          : (std::fabs(m0.re.value - 1) < 1e-12 && std::fabs(m0.im.value) < 1e-12);
  if (!unit) throw InvalidLaw("moment table for '" + name_ + "' must start with m_0 = 1");

  const int top = static_cast<int>(table_.size()) - 1;
  if (kind_ == VariableKind::SelfAdjoint) {
    const int size = top / 2 + 1;
    bool ok = false;
    if (exact_) {
      Matrix<Rational> h(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
          h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
              *table_[static_cast<std::size_t>(i + j)].re.exact;
      ok = is_psd(h);
    } else {
      Matrix<double> h(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
          h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
              table_[static_cast<std::size_t>(i + j)].re.value;
      ok = is_psd(h);
    }
    if (!ok) throw InvalidLaw("moment table for '" + name_ + "' has an indefinite Hankel matrix");
    return;
  }

  const auto size = static_cast<std::size_t>(top + 1);
  for (const ComplexParam& c : table_)
    if (std::hypot(c.re.value, c.im.value) > 1 + 1e-12)
      throw InvalidLaw("unitary moment table for '" + name_ + "' has |c_k| > 1");
  bool ok = false;
  if (exact_) {
    Matrix<ComplexRational> t(size, size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j)
        t(i, j) = exact_moment(static_cast<int>(j) - static_cast<int>(i));
    ok = is_psd(t);
  } else {
    Matrix<std::complex<double>> t(size, size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j)
        t(i, j) = float_moment(static_cast<int>(j) - static_cast<int>(i));
    ok = is_psd(t);
  }
  if (!ok) throw InvalidLaw("moment table for '" + name_ + "' has an indefinite Toeplitz matrix");
}

}  // namespace fpsz
