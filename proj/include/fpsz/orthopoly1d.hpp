#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "fpsz/density.hpp"
#include "fpsz/errors.hpp"
#include "fpsz/laws.hpp"
#include "fpsz/linalg.hpp"
#include "fpsz/scalar.hpp"

namespace fpsz {

inline constexpr double kSingularTolerance = 1e-12;

// (i, j) entry tau((x^i)^* x^j): m_{i+j} for self-adjoint laws (Hankel),
// c_{j-i} for unitary laws (Toeplitz).
template <class T>
Matrix<T> moment_matrix_1d(const MarginalLaw& law, int size) {
  const auto n = static_cast<std::size_t>(size);
  Matrix<T> h(n, n);
  const bool unitary = law.kind() == VariableKind::Unitary;
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          law.template moment<T>(unitary ? j - i : i + j);
  return h;
}

// D_{q+1}: determinant of the q x q moment matrix, with D_1 = 1 for q = 0.
template <class T>
T hankel_det_1d(const MarginalLaw& law, int q) {
  if (q == 0) return Field<T>::one();
  return determinant(moment_matrix_1d<T>(law, q));
}

// Squared norms ||P_q||^2 of the monic orthogonal polynomials, q = 0, 1, ...
template <class R>
struct NormSequence {
  std::vector<R> values;
  std::vector<double> logs;
  // First q with ||P_q||^2 at or below the singularity tolerance; values stop
  // before it.
  std::optional<int> degenerate_at;
  Backend backend = Backend::Float;

  int count() const { return static_cast<int>(values.size()); }
  void require(int q_max, const std::string& law_name) const {
    if (degenerate_at && *degenerate_at <= q_max)
      throw DegenerateAt(law_name + " at order " + std::to_string(*degenerate_at), *degenerate_at);
  }
};

template <class T>
NormSequence<RealOf<T>> make_norms(std::vector<RealOf<T>> values, std::optional<int> degenerate) {
  NormSequence<RealOf<T>> out;
  out.logs.reserve(values.size());
  for (const auto& v : values) out.logs.push_back(Field<T>::log(v));
  out.values = std::move(values);
  out.degenerate_at = degenerate;
  out.backend = Field<T>::backend;
  return out;
}

// Cholesky-pivot route: the LDL^* pivots of the (q_max+1)-square moment matrix.
template <class T>
NormSequence<RealOf<T>> orth_norms_1d(const MarginalLaw& law, int q_max,
                                      double rel_tol = kSingularTolerance) {
  auto f = ldl_factor(moment_matrix_1d<T>(law, q_max + 1), rel_tol);
  std::optional<int> degenerate;
  if (f.singular_at) degenerate = static_cast<int>(*f.singular_at);
  return make_norms<T>(std::move(f.pivots), degenerate);
}

// Minor-ratio route: ||P_q||^2 = D_{q+2} / D_{q+1} from independent determinants.
template <class T>
NormSequence<RealOf<T>> orth_norms_1d_minor_ratio(const MarginalLaw& law, int q_max,
                                                  double rel_tol = kSingularTolerance) {
  auto h = moment_matrix_1d<T>(law, q_max + 1);
  std::vector<RealOf<T>> values;
  std::optional<int> degenerate;
  RealOf<T> previous = Field<T>::real(Field<T>::one());
  double largest = 0.0;
  for (int q = 0; q <= q_max; ++q) {
    RealOf<T> det = Field<T>::real(determinant(h.leading(static_cast<std::size_t>(q + 1))));
    RealOf<T> ratio = det / previous;
    bool singular = false;
    if constexpr (Field<T>::exact) {
      singular = sgn(ratio) <= 0;
    } else {
      singular = !(ratio > 0.0) || (q > 0 && ratio <= rel_tol * largest);
      largest = std::fmax(largest, ratio);
    }
    if (singular) {
      degenerate = q;
      break;
    }
    values.push_back(ratio);
    previous = det;
  }
  return make_norms<T>(std::move(values), degenerate);
}

// Three-term recurrence x P_q = P_{q+1} + b_{q+1} P_q + a_q^2 P_{q-1}.
// Entry i holds a_{i+1}^2 and b_{i+1}.
template <class R>
struct JacobiCoeffs {
  std::vector<R> a_squared;
  std::vector<R> b;

  std::size_t count() const { return b.size(); }
  std::vector<double> a() const {
    std::vector<double> out;
    for (const R& v : a_squared) {
      if constexpr (std::is_same_v<R, double>) {
        out.push_back(std::sqrt(v));
      } else {
        out.push_back(std::sqrt(v.get_d()));
      }
    }
    return out;
  }
  // Natural logs of a_j, computed from a_j^2 without rounding a_j first.
  std::vector<double> log_a() const {
    std::vector<double> out;
    for (const R& v : a_squared) out.push_back(0.5 * Field<R>::log(v));
    return out;
  }
};

// Coefficients of the monic orthogonal polynomials P_0..P_q_max in the
// monomial basis (row q = coefficients of P_q, lowest degree first).
template <class T>
Matrix<T> monic_coefficients(const LdlFactor<T>& f, std::size_t count) {
  Matrix<T> inv = unit_lower_inverse(f.lower, count);
  if constexpr (Field<T>::complex)
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j) inv(i, j) = Field<T>::conj(inv(i, j));
  return inv;
}

// Jacobi coefficients a_1..a_count, b_1..b_count of a self-adjoint law,
// from Cholesky pivots (a_q^2 = ||P_q||^2 / ||P_{q-1}||^2) and inner-product
// ratios (b_{q+1} = <x P_q, P_q> / ||P_q||^2). T is Rational or double.
template <class T>
JacobiCoeffs<T> jacobi_coeffs(const MarginalLaw& law, int count, double rel_tol = kSingularTolerance) {
  static_assert(!Field<T>::complex, "Jacobi coefficients are real");
  if (law.kind() != VariableKind::SelfAdjoint) throw ConfigError("Jacobi coefficients need a self-adjoint law");
  const auto size = static_cast<std::size_t>(count + 1);
  auto f = ldl_factor(moment_matrix_1d<T>(law, count + 1), rel_tol);
  if (f.singular_at) {
    int q = static_cast<int>(*f.singular_at);
    throw DegenerateAt(law.name() + " at order " + std::to_string(q), q);
  }
  Matrix<T> p = monic_coefficients(f, size);
  JacobiCoeffs<T> out;
  for (int q = 1; q <= count; ++q)
    out.a_squared.push_back(f.pivots[static_cast<std::size_t>(q)] / f.pivots[static_cast<std::size_t>(q - 1)]);
  for (int q = 0; q < count; ++q) {
    T xpp = Field<T>::zero();
    for (int i = 0; i <= q; ++i)
      for (int k = 0; k <= q; ++k)
        xpp += p(static_cast<std::size_t>(q), static_cast<std::size_t>(i)) *
               p(static_cast<std::size_t>(q), static_cast<std::size_t>(k)) * law.template moment<T>(i + k + 1);
    out.b.push_back(xpp / f.pivots[static_cast<std::size_t>(q)]);
  }
  return out;
}

// tau(x^k), k = 0..max_order, induced by the recurrence: (J^k)_{00} with J
// tridiagonal (diagonal b, superdiagonal 1, subdiagonal a^2).
template <class R>
std::vector<R> moments_from_jacobi(const JacobiCoeffs<R>& coeffs, int max_order) {
  const std::size_t n = coeffs.count();
  std::vector<R> v(n + 1, R(0));
  v[0] = R(1);
  std::vector<R> out{R(1)};
  for (int k = 1; k <= max_order; ++k) {
    std::vector<R> next(n + 1, R(0));
    for (std::size_t i = 0; i < n; ++i) {
      // (J v)_i = a_i^2 v_{i-1} + b_{i+1} v_i + v_{i+1}
      R s = coeffs.b[i] * v[i] + v[i + 1];
      if (i > 0) s += coeffs.a_squared[i - 1] * v[i - 1];
      next[i] = s;
    }
    v = std::move(next);
    out.push_back(v[0]);
  }
  return out;
}

// P_{q+1}(u) = u P_q(u) - conj(alpha_q) Q_q(u), Q_{q+1}(u) = Q_q(u) - alpha_q u P_q(u),
// P_0 = Q_0 = 1. norms[q] = ||P_q||^2 = prod_{j<q} (1 - |alpha_j|^2).
template <class C>
struct VerblunskyCoeffs {
  std::vector<C> alpha;
  std::vector<RealOf<C>> norms;

  std::size_t count() const { return alpha.size(); }
};

// Szego recursion run against the circle moments c_k of a unitary law:
// conj(alpha_q) = tau(u P_q(u)) / ||P_q||^2. C is ComplexRational or
// std::complex<double>. Throws DegenerateAt(q) when ||P_q|| vanishes.
template <class C>
VerblunskyCoeffs<C> verblunsky_coeffs(const MarginalLaw& law, int count, double rel_tol = kSingularTolerance) {
  static_assert(Field<C>::complex, "Verblunsky coefficients are complex");
  using F = Field<C>;
  if (law.kind() != VariableKind::Unitary) throw ConfigError("Verblunsky coefficients need a unitary law");
  std::vector<C> p{F::one()};
  std::vector<C> q{F::one()};
  VerblunskyCoeffs<C> out;
  out.norms.push_back(F::real(F::one()));
  for (int step = 0; step < count; ++step) {
    C s = F::zero();
    for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * law.template moment<C>(static_cast<int>(k) + 1);
    C alpha_bar = s / real_to_scalar<C>(out.norms.back());
    C alpha = F::conj(alpha_bar);
    RealOf<C> shrink = RealOf<C>(1) - F::norm(alpha);
    bool degenerate = false;
    if constexpr (F::exact) {
      degenerate = sgn(shrink) <= 0;
    } else {
      degenerate = !(shrink > rel_tol);
    }
    out.alpha.push_back(alpha);
    if (degenerate) throw DegenerateAt(law.name() + " at order " + std::to_string(step + 1), step + 1);
    out.norms.push_back(out.norms.back() * shrink);
    std::vector<C> up(p.size() + 1, F::zero());  // u P_q
    for (std::size_t k = 0; k < p.size(); ++k) up[k + 1] = p[k];
    std::vector<C> next_p = up;
    std::vector<C> next_q(up.size(), F::zero());
    for (std::size_t k = 0; k < q.size(); ++k) {
      next_p[k] -= alpha_bar * q[k];
      next_q[k] = q[k];
    }
    for (std::size_t k = 0; k < up.size(); ++k) next_q[k] -= alpha * up[k];
    p = std::move(next_p);
    q = std::move(next_q);
  }
  return out;
}

struct SzegoRow {
  int q = 0;
  double norm = 0.0;       // ||P_q||_2
  double predicted = 0.0;  // sqrt(2 pi) 2^{-q} exp(S / 2)
  double ratio = 0.0;      // norm / predicted
  double variant = 0.0;    // alternative normalization pi^{-1/2} 2^q exp(-(1/2pi) int log w(t) dt / sqrt(1-t^2))
};

struct SzegoReport {
  std::string density;
  double log_mean = 0.0;  // S = (1/2pi) int log(w(cos t)|sin t|) dt
  Backend backend = Backend::Float;
  std::vector<SzegoRow> rows;
};

// Classical monic Szego asymptote for q in [q_min, q_max]; the norms come from
// the density's moments through orth_norms_1d.
SzegoReport szego_asymptote_1d(const DensitySpec& density, int q_min, int q_max, double rel_tol = 1e-8);

}  // namespace fpsz
