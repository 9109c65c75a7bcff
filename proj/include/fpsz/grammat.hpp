#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "fpsz/errors.hpp"
#include "fpsz/freemoments.hpp"
#include "fpsz/linalg.hpp"
#include "fpsz/orthopoly1d.hpp"
#include "fpsz/parallel.hpp"
#include "fpsz/words.hpp"

namespace fpsz {

// Index set {x_a : |a| < q}.
struct LengthCut {
  int q = 1;
};

// Index set {x_a : a < gamma} in graded lexicographic order.
struct WordCut {
  Word gamma;
};

using Cut = std::variant<LengthCut, WordCut>;

struct GramOptions {
  int threads = 1;
  double singular_tolerance = kSingularTolerance;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

std::vector<Word> index_words(int n, const Cut& cut, std::uint64_t cap = kDefaultEnumerationCap);

// All positive words up to and including `alpha`.
std::vector<Word> words_through(const Word& alpha, std::uint64_t cap = kDefaultEnumerationCap);

// (a, b) entry tau(x_a^* x_b). Entries on and above the diagonal are computed
// in parallel; the rest follow from Hermitian symmetry.
template <class T>
Matrix<T> gram_matrix(const MomentEngine<T>& engine, std::span<const Word> index, int threads = 1) {
  const std::size_t n = index.size();
  Matrix<T> g(n, n);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) g(i, j) = engine.gram_entry(index[i], index[j]);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = Field<T>::conj(g(j, i));
  return g;
}

template <class T>
Matrix<T> gram_matrix(const MomentEngine<T>& engine, const Cut& cut, const GramOptions& options = {}) {
  auto index = index_words(engine.family().size(), cut, options.enumeration_cap);
  return gram_matrix(engine, std::span<const Word>(index), options.threads);
}

template <class T>
struct GramReport {
  std::vector<Word> index_words;
  std::size_t dimension = 0;
  // Exact determinant (rational backend only); zero when singular.
  std::optional<RealOf<T>> determinant;
  // Sum of log pivots; -inf when singular.
  double log_det = 0.0;
  // ||P_a||^2 for each index word up to the singular point.
  std::vector<RealOf<T>> pivots;
  std::vector<double> log_pivots;
  std::optional<Word> singular;
  std::optional<RealOf<T>> singular_pivot;
  Backend backend = Field<T>::backend;
};

// Gram determinant over the cut with Gram-Schmidt pivots. A nonpositive pivot
// marks an algebraic relation among the variables: the report records the
// word and stops there.
template <class T>
GramReport<T> hankel_det(const MomentEngine<T>& engine, const Cut& cut, const GramOptions& options = {}) {
  GramReport<T> report;
  report.index_words = index_words(engine.family().size(), cut, options.enumeration_cap);
  report.dimension = report.index_words.size();
  auto g = gram_matrix(engine, std::span<const Word>(report.index_words), options.threads);
  auto f = ldl_factor(g, options.singular_tolerance);
  report.pivots = std::move(f.pivots);
  double log_det = 0.0;
  for (const auto& p : report.pivots) {
    report.log_pivots.push_back(Field<T>::log(p));
    log_det += report.log_pivots.back();
  }
  if (f.singular_at) {
    report.singular = report.index_words[*f.singular_at];
    report.singular_pivot = f.singular_pivot;
    report.log_det = -std::numeric_limits<double>::infinity();
  } else {
    report.log_det = log_det;
  }
  if constexpr (Field<T>::exact) {
    RealOf<T> det(1);
    if (f.singular_at) {
      det = 0;
    } else {
      for (const auto& p : report.pivots) det *= p;
    }
    report.determinant = det;
  }
  return report;
}

// ||P_alpha||^2: the last pivot of the Gram matrix over {b <= alpha}.
template <class T>
RealOf<T> orth_norm(const MomentEngine<T>& engine, const Word& alpha, const GramOptions& options = {}) {
  auto index = words_through(alpha, options.enumeration_cap);
  auto g = gram_matrix(engine, std::span<const Word>(index), options.threads);
  auto f = ldl_factor(g, options.singular_tolerance);
  if (f.singular_at) {
    auto at = static_cast<int>(*f.singular_at);
    throw DegenerateAt("word " + to_string(index[*f.singular_at]), at);
  }
  return f.pivots.back();
}

// P_alpha = x_alpha + sum_{b < alpha} coeff_b x_b.
template <class T>
struct PolyExpansion {
  Word target;
  std::vector<Word> words;  // all b <= alpha, ascending; last is alpha
  std::vector<T> coefficients;
  RealOf<T> norm_squared;
};

// Solves the normal equations sum_c G(b, c) coeff_c = -G(b, alpha) for b < alpha.
template <class T>
PolyExpansion<T> gram_schmidt_expand(const MomentEngine<T>& engine, const Word& alpha,
                                     const GramOptions& options = {}) {
  PolyExpansion<T> out;
  out.target = alpha;
  out.words = words_through(alpha, options.enumeration_cap);
  const std::size_t m = out.words.size() - 1;
  auto g = gram_matrix(engine, std::span<const Word>(out.words), options.threads);
  auto full = ldl_factor(g, options.singular_tolerance);
  if (full.singular_at) {
    auto at = static_cast<int>(*full.singular_at);
    throw DegenerateAt("word " + to_string(out.words[*full.singular_at]), at);
  }
  LdlFactor<T> head;
  head.lower = full.lower.leading(m);
  head.pivots.assign(full.pivots.begin(), full.pivots.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<T> rhs(m);
  for (std::size_t b = 0; b < m; ++b) rhs[b] = -g(b, m);
  out.coefficients = ldl_solve(head, std::move(rhs));
  out.coefficients.push_back(Field<T>::one());
  out.norm_squared = full.pivots.back();
  return out;
}

}  // namespace fpsz
