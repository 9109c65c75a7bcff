#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpsz/freemoments.hpp"
#include "fpsz/orthopoly1d.hpp"
#include "fpsz/rational.hpp"
#include "fpsz/scalar.hpp"
#include "fpsz/words.hpp"

namespace fpsz {

// E_n(x) = sum_{j>=1} ln ||P_j(x)||^2 / n^j truncated at J, with a bound on
// the neglected tail.
struct EntropyEstimate {
  int n = 2;
  double value = 0.0;
  int truncation = 0;
  double tail_bound = 0.0;
  std::vector<double> terms;  // per-order contributions to `value`
  // Same sum under the alternative prefactor (2(n-1)/n for Jacobi, (n-1)/n
  // over m >= 1 for Verblunsky); differs from `value` except in trivial cases.
  std::optional<double> variant;
};

// sum_{j>J} (c1 + c2 j) / n^j with c1, c2 fitted by least squares to the last
// half of |samples| (samples[i] belongs to order first_order + i), doubled and
// raised to an envelope of every fitted sample.
double linear_tail_bound(std::span<const double> samples, int first_order, int n, int J);

// Norm route. Uses exact norms when the law has rational parameters.
// Throws DegenerateLaw if some ||P_j|| with j <= J vanishes.
EntropyEstimate entropy_number(const MarginalLaw& law, int n, int J);

// E_n = (2n / (n-1)) sum_{j>=1} ln a_j / n^j.
EntropyEstimate entropy_from_jacobi(std::span<const double> log_a, int n);
template <class R>
EntropyEstimate entropy_from_jacobi(const JacobiCoeffs<R>& coeffs, int n) {
  auto logs = coeffs.log_a();
  return entropy_from_jacobi(std::span<const double>(logs), n);
}

// E_n = (1 / (n-1)) sum_{m>=0} ln(1 - |alpha_m|^2) / n^m. Input entry m is
// ln(1 - |alpha_m|^2).
EntropyEstimate entropy_from_verblunsky(std::span<const double> log_shrink, int n);
template <class C>
EntropyEstimate entropy_from_verblunsky(const VerblunskyCoeffs<C>& coeffs, int n) {
  std::vector<double> logs;
  for (const C& a : coeffs.alpha) logs.push_back(Field<C>::log(RealOf<C>(RealOf<C>(1) - Field<C>::norm(a))));
  return entropy_from_verblunsky(std::span<const double>(logs), n);
}

// ln ||P_{k,j}||^2 for every variable k (0-based) and order j = 0..q_max.
struct LogNormTable {
  int n = 0;
  int q_max = 0;
  std::vector<std::vector<double>> logs;

  double log_norm(int variable, int order) const {
    return logs[static_cast<std::size_t>(variable)][static_cast<std::size_t>(order)];
  }
  // C_j = sum_k ln ||P_{k,j}||^2
  double column_sum(int order) const;
};

// Exact counterpart of LogNormTable.
struct ExactNormTable {
  int n = 0;
  int q_max = 0;
  std::vector<std::vector<Rational>> values;
};

// One-variable norms of every marginal through q_max. Exact arithmetic is
// used whenever the family is exact-capable. Throws DegenerateLaw.
LogNormTable log_norm_table(const FreeFamily& family, int q_max);
ExactNormTable exact_norm_table(const FreeFamily& family, int q_max);

enum class SqRoute { Enumerate, ClosedForm };

// ln s_q / n^q, with s_q the product of ||P_a||^2 over the n^q words of length q.
// Enumerate: sum over words of the block norms (product rule for free families).
// ClosedForm: ln s_q = C_q + 2(n-1) sum_{j<q} n^{q-1-j} C_j + (n-1)^2 sum_{j<=q-2} (q-1-j) n^{q-2-j} C_j.
double scaled_log_sq(const LogNormTable& table, int q, SqRoute route, int threads = 1,
                     std::uint64_t cap = kDefaultEnumerationCap);
double scaled_log_sq(const FreeFamily& family, int q, SqRoute route, int threads = 1);

// The closed form with (q-2-j) in place of (q-1-j) in the (n-1)^2 term; kept
// for reporting its deviation from the enumeration route.
double scaled_log_sq_variant(const LogNormTable& table, int q);

// d_q = (n-1) sum_k sum_{j<q} n^{q-j-1} ln ||P_{k,j}||^2 + C_q (unscaled).
double recursion_forcing(const LogNormTable& table, int q);

// Exact s_q by enumeration and by the closed form with integer exponents.
Rational exact_sq_enumerate(const ExactNormTable& table, int q);
Rational exact_sq_closed_form(const ExactNormTable& table, int q);

// Solution of c_q - r sum_{j<q} c_j = d_q (q >= 2) in closed form:
// c_q = r (1+r)^{q-2} c_1 + r sum_{j=2}^{q-1} (1+r)^{q-1-j} d_j + d_q.
// `d` holds d_2..d_Q; the result holds c_1..c_Q.
template <class T>
std::vector<T> recursion_closed_form(const T& r, const T& c1, std::span<const T> d) {
  std::vector<T> c{c1};
  const std::size_t top = d.size() + 1;  // Q
  std::vector<T> growth{T(1)};           // (1+r)^k
  for (std::size_t k = 1; k <= top; ++k) growth.push_back(T(growth.back() * (T(1) + r)));
  for (std::size_t q = 2; q <= top; ++q) {
    T value = T(r * growth[q - 2] * c1);
    for (std::size_t j = 2; j + 1 <= q; ++j) value += r * growth[q - 1 - j] * d[j - 2];
    value += d[q - 2];
    c.push_back(std::move(value));
  }
  return c;
}

struct PredictedLimit {
  double value = 0.0;  // ((n-1)/n) sum_k E_n(x_k)
  double tail_bound = 0.0;
  std::vector<EntropyEstimate> marginals;
};

PredictedLimit predicted_limit(const FreeFamily& family, int J);

enum class TraceRoute { Direct, Factored };

struct TraceRow {
  int q = 0;
  TraceRoute route = TraceRoute::Factored;
  double ln_sq_scaled = 0.0;  // ln s_q / n^q
  double lnD_ratio = 0.0;     // ln D_{q+1} / (q n^q)
  double predicted = 0.0;
  double gap = 0.0;  // lnD_ratio - predicted
  std::optional<double> crosscheck_delta;
};

struct TraceOptions {
  int truncation = 60;
  std::optional<Backend> direct_backend;  // defaults to the family's backend
  int threads = 1;
  double route_tolerance = 1e-9;
  double singular_tolerance = kSingularTolerance;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

struct ConvergenceTrace {
  int n = 0;
  PredictedLimit limit;
  std::vector<TraceRow> rows;
  // Largest |delta| / max(1, |direct|, |factored|) over the overlap.
  double max_crosscheck = 0.0;
  bool routes_agree = true;
  // q r_q - (q-1) r_{q-1} at the largest factored q; removes the 1/q term of
  // the factored ratio r_q.
  std::optional<double> richardson;
  // ln s_q / n^q from the (q-2-j) variant minus the corrected closed form, per q.
  std::vector<double> variant_closed_form_delta;
};

// Throws DegenerateLaw when a marginal or the direct Gram matrix is singular.
ConvergenceTrace convergence_trace(const FreeFamily& family, int q_direct_max, int q_factored_max,
                                   const TraceOptions& options = {});

// CSV with header q,route,ln_sq_scaled,lnD_ratio,predicted,gap,crosscheck_delta.
std::string trace_csv(const ConvergenceTrace& trace);

const char* route_name(TraceRoute r);

}  // namespace fpsz
