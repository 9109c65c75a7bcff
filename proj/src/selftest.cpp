#include "fpsz/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "fpsz/freemoments.hpp"
#include "fpsz/grammat.hpp"
#include "fpsz/laws.hpp"
#include "fpsz/orthopoly1d.hpp"
#include "fpsz/szegolimit.hpp"
#include "fpsz/words.hpp"

namespace fpsz {

namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Rational random_rational(Rng& rng, int span = 9) {
  Rational r(uniform(rng, -span, span), uniform(rng, 1, span));
  r.canonicalize();
  return r;
}

ComplexRational random_complex(Rng& rng) { return {random_rational(rng), random_rational(rng)}; }

PropertyResult result(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, std::move(detail)};
}

bool rel_close(double a, double b, double tol) { return close_mixed(a, b, tol); }

MarginalLaw cosine_law() {
  return MarginalLaw::from_moments(VariableKind::Unitary, {ComplexParam{Param(1L)}, ComplexParam{Param(Rational(1, 2))}},
                                   TableTail::Zero, "cosine");
}

// c_k = w^k through order K: the Poisson kernel law, whose only nonzero
// Verblunsky coefficient is alpha_0 = conj(w).
MarginalLaw poisson_law(const ComplexRational& w, int order) {
  std::vector<ComplexParam> table;
  ComplexRational p(1);
  for (int k = 0; k <= order; ++k) {
    table.push_back({Param(p.re), Param(p.im)});
    p = p * w;
  }
  return MarginalLaw::from_moments(VariableKind::Unitary, std::move(table), TableTail::Unsupported, "poisson");
}

// Mixed self-adjoint / unitary family with non-centred marginals.
FreeFamily mixed_family() {
  return FreeFamily({MarginalLaw::semicircle(), MarginalLaw::free_poisson(Rational(3, 2)), cosine_law(),
                     MarginalLaw::two_point(Param(-1L), Param(2L), Param(Rational(1, 3))), MarginalLaw::haar()},
                    Backend::Rational);
}

int random_exponent(Rng& rng, VariableKind kind) {
  if (kind == VariableKind::SelfAdjoint) return uniform(rng, 1, 3);
  int e = uniform(rng, 1, 3);
  return uniform(rng, 0, 1) ? e : -e;
}

std::vector<Letter> random_letters(Rng& rng, std::span<const VariableKind> kinds, int min_len, int max_len) {
  std::vector<Letter> letters;
  int len = uniform(rng, min_len, max_len);
  for (int i = 0; i < len; ++i) {
    int v = uniform(rng, 1, static_cast<int>(kinds.size()));
    letters.push_back({v, random_exponent(rng, kinds[static_cast<std::size_t>(v - 1)])});
  }
  return letters;
}

Word random_word(Rng& rng, std::span<const VariableKind> kinds, int max_len) {
  auto letters = random_letters(rng, kinds, 0, max_len);
  return Word::canonical(static_cast<int>(kinds.size()), letters);
}

// Monic coefficients of P_0..P_q_max for a self-adjoint or unitary law.
template <class T>
Matrix<T> monic_1d(const MarginalLaw& law, int q_max) {
  auto f = ldl_factor(moment_matrix_1d<T>(law, q_max + 1));
  return monic_coefficients(f, static_cast<std::size_t>(q_max + 1));
}

}  // namespace

PropertyResult check_word_order(std::uint64_t seed) {
  const std::string name = "words: graded-lex order is total and enumeration is sorted";
  Rng rng(seed);
  std::vector<VariableKind> kinds{VariableKind::SelfAdjoint, VariableKind::Unitary, VariableKind::SelfAdjoint};
  std::vector<Word> sample;
  for (int i = 0; i < 80; ++i) sample.push_back(random_word(rng, kinds, 5));
  for (const Word& a : sample) {
    for (const Word& b : sample) {
      auto ab = compare(a, b);
      auto ba = compare(b, a);
      if ((ab < 0) != (ba > 0) || (ab == 0) != (a == b))
        return result(name, false, "antisymmetry fails for " + to_string(a) + " vs " + to_string(b));
      if (a.length() < b.length() && !(ab < 0))
        return result(name, false, "grading fails for " + to_string(a) + " vs " + to_string(b));
    }
  }
  for (int t = 0; t < 3000; ++t) {
    const Word& a = sample[static_cast<std::size_t>(uniform(rng, 0, 79))];
    const Word& b = sample[static_cast<std::size_t>(uniform(rng, 0, 79))];
    const Word& c = sample[static_cast<std::size_t>(uniform(rng, 0, 79))];
    if (compare(a, b) < 0 && compare(b, c) < 0 && !(compare(a, c) < 0))
      return result(name, false, "transitivity fails at " + to_string(a) + ", " + to_string(b) + ", " + to_string(c));
  }
  for (int n = 1; n <= 3; ++n) {
    auto words = enumerate(n, 5, EnumerationMode::StrictlyBelow);
    if (words.size() != enumeration_count(n, 5, EnumerationMode::StrictlyBelow))
      return result(name, false, "enumeration count mismatch");
    for (std::size_t i = 1; i < words.size(); ++i)
      if (!(compare(words[i - 1], words[i]) < 0))
        return result(name, false, "enumeration not strictly increasing at " + to_string(words[i]));
  }
  return result(name, true, "80 words, 3000 triples, n = 1..3 enumerations");
}

PropertyResult check_word_star_and_length(std::uint64_t seed) {
  const std::string name = "words: star is an involution and length is subadditive";
  Rng rng(seed);
  std::vector<VariableKind> self(3, VariableKind::SelfAdjoint);
  std::vector<VariableKind> unitary(3, VariableKind::Unitary);
  for (int t = 0; t < 300; ++t) {
    Word a = random_word(rng, self, 6);
    Word b = random_word(rng, self, 6);
    if (star(star(a, self), self) != a) return result(name, false, "star(star(w)) != w for " + to_string(a));
    if (concat(a, b).length() != a.length() + b.length())
      return result(name, false, "self-adjoint length not additive for " + to_string(a) + " " + to_string(b));
    Word u = random_word(rng, unitary, 6);
    Word v = random_word(rng, unitary, 6);
    if (star(star(u, unitary), unitary) != u) return result(name, false, "star(star(w)) != w for " + to_string(u));
    if (concat(u, v).length() > u.length() + v.length())
      return result(name, false, "unitary length grew for " + to_string(u) + " " + to_string(v));
    if (!concat(star(u, unitary), u).is_identity())
      return result(name, false, "u^* u does not cancel for " + to_string(u));
  }
  return result(name, true, "300 samples per context");
}

PropertyResult check_centered_alternating(std::uint64_t seed, int count) {
  const std::string name = "freemoments: centred alternating products vanish";
  Rng rng(seed);
  FreeFamily family = mixed_family();
  MomentEngine<ComplexRational> engine(family);
  const int n = family.size();
  for (int t = 0; t < count; ++t) {
    int m = uniform(rng, 2, 5);
    // block j: (variable, terms); term exponent 0 is the centring constant
    std::vector<int> vars;
    std::vector<std::vector<std::pair<int, ComplexRational>>> blocks;
    for (int j = 0; j < m; ++j) {
      int v = 0;
      do v = uniform(rng, 1, n);
      while (!vars.empty() && v == vars.back());
      vars.push_back(v);
      VariableKind kind = family.kinds()[static_cast<std::size_t>(v - 1)];
      std::vector<std::pair<int, ComplexRational>> terms;
      int term_count = uniform(rng, 1, 2);
      ComplexRational mean(0);
      for (int s = 0; s < term_count; ++s) {
        int e = random_exponent(rng, kind);
        ComplexRational c = random_complex(rng);
        if (c == ComplexRational(0)) c = ComplexRational(1);
        mean += c * engine.marginal_moment(v, e);
        terms.emplace_back(e, c);
      }
      terms.emplace_back(0, ComplexRational(0) - mean);
      blocks.push_back(std::move(terms));
    }
    // multilinear expansion of prod_j y_j
    std::vector<std::size_t> choice(static_cast<std::size_t>(m), 0);
    ComplexRational total(0);
    for (;;) {
      std::vector<Letter> letters;
      ComplexRational coeff(1);
      for (int j = 0; j < m; ++j) {
        const auto& term = blocks[static_cast<std::size_t>(j)][choice[static_cast<std::size_t>(j)]];
        coeff = coeff * term.second;
        if (term.first != 0) letters.push_back({vars[static_cast<std::size_t>(j)], term.first});
      }
      total += coeff * engine.mixed_moment(Word::canonical(n, letters));
      int pos = m - 1;
      while (pos >= 0 && choice[static_cast<std::size_t>(pos)] + 1 == blocks[static_cast<std::size_t>(pos)].size())
        choice[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++choice[static_cast<std::size_t>(pos)];
    }
    if (!(total == ComplexRational(0)))
      return result(name, false, "trial " + std::to_string(t) + " gives " + to_string(total));
  }
  return result(name, true, std::to_string(count) + " random products evaluate to exactly 0");
}

PropertyResult check_free_clt(int k_max) {
  const std::string name = "freemoments: tau((x1+x2)^2k) = 2^k Catalan(k)";
  FreeFamily family({MarginalLaw::semicircle(), MarginalLaw::semicircle()}, Backend::Rational);
  MomentEngine<Rational> engine(family);
  for (int k = 1; k <= k_max; ++k) {
    const int len = 2 * k;
    Rational total(0);
    std::vector<int> digits(static_cast<std::size_t>(len));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
      for (int i = 0; i < len; ++i) digits[static_cast<std::size_t>(i)] = static_cast<int>((mask >> i) & 1U);
      total += engine.mixed_moment(word_from_digits(2, digits));
    }
    Rational expected(Integer(catalan(static_cast<unsigned long>(k))) << static_cast<mp_bitcnt_t>(k));
    if (total != expected)
      return result(name, false, "k = " + std::to_string(k) + ": " + to_string(total) + " != " + to_string(expected));
  }
  return result(name, true, "exact for k <= " + std::to_string(k_max));
}

PropertyResult check_trace_cyclic(std::uint64_t seed, int count) {
  const std::string name = "freemoments: trace is cyclic";
  Rng rng(seed);
  FreeFamily family = mixed_family();
  MomentEngine<ComplexRational> engine(family);
  for (int t = 0; t < count; ++t) {
    auto letters = random_letters(rng, family.kinds(), 2, 7);
    Word w = Word::canonical(family.size(), letters);
    std::rotate(letters.begin(), letters.begin() + uniform(rng, 1, static_cast<int>(letters.size()) - 1), letters.end());
    Word r = Word::canonical(family.size(), letters);
    if (!(engine.mixed_moment(w) == engine.mixed_moment(r)))
      return result(name, false, to_string(w) + " vs rotation " + to_string(r));
  }
  return result(name, true, std::to_string(count) + " rotations");
}

PropertyResult check_cache_transparency(std::uint64_t seed, int count) {
  const std::string name = "freemoments: memoization is transparent";
  Rng rng(seed);
  FreeFamily family = mixed_family();
  MomentEngine<ComplexRational> cached(family);
  MomentEngine<ComplexRational> plain(family, false);
  for (int t = 0; t < count; ++t) {
    Word w = Word::canonical(family.size(), random_letters(rng, family.kinds(), 1, 6));
    if (!(cached.mixed_moment(w) == plain.mixed_moment(w))) return result(name, false, "differs at " + to_string(w));
  }
  return result(name, true, std::to_string(count) + " words");
}

PropertyResult check_restriction(std::uint64_t seed, int count) {
  const std::string name = "freemoments: one-variable words give marginal moments";
  Rng rng(seed);
  FreeFamily family = mixed_family();
  MomentEngine<ComplexRational> engine(family);
  for (int t = 0; t < count; ++t) {
    int v = uniform(rng, 1, family.size());
    VariableKind kind = family.kinds()[static_cast<std::size_t>(v - 1)];
    std::vector<Letter> letters;
    int total = 0;
    for (int i = uniform(rng, 1, 4); i > 0; --i) {
      int e = random_exponent(rng, kind);
      total += e;
      letters.push_back({v, e});
    }
    ComplexRational expected = total == 0 ? ComplexRational(1) : family.marginal(v).exact_moment(total);
    if (!(engine.mixed_moment(Word::canonical(family.size(), letters)) == expected))
      return result(name, false, "variable " + std::to_string(v) + " power " + std::to_string(total));
  }
  return result(name, true, std::to_string(count) + " words");
}

PropertyResult check_gram_determinant(std::uint64_t seed) {
  const std::string name = "grammat: determinant equals the product of pivots";
  Rng rng(seed);
  FreeFamily family({MarginalLaw::semicircle(Rational(1, 2)), MarginalLaw::free_poisson(2L)}, Backend::Rational);
  MomentEngine<Rational> engine(family);
  std::vector<Cut> cuts{LengthCut{1}, LengthCut{2}, LengthCut{3}, LengthCut{4}};
  // cut words of length <= 4 keep the exact matrices at most 31 x 31
  auto candidates = enumerate(2, 5, EnumerationMode::StrictlyBelow);
  for (int t = 0; t < 6; ++t)
    cuts.emplace_back(WordCut{candidates[static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(candidates.size()) - 1))]});
  for (const Cut& cut : cuts) {
    auto report = hankel_det(engine, cut);
    Rational oracle = determinant(gram_matrix(engine, cut));
    Rational product(1);
    for (const auto& p : report.pivots) product *= p;
    if (oracle != *report.determinant || product != oracle)
      return result(name, false, "dimension " + std::to_string(report.dimension));
  }
  FreeFamily floats({MarginalLaw::semicircle(Rational(1, 2)), MarginalLaw::free_poisson(2L)}, Backend::Float);
  MomentEngine<double> fengine(floats);
  for (int q = 1; q <= 4; ++q) {
    auto report = hankel_det(fengine, LengthCut{q});
    double oracle = std::log(std::fabs(determinant(gram_matrix(fengine, LengthCut{q}))));
    if (!rel_close(report.log_det, oracle, 1e-10))
      return result(name, false, "float log-det mismatch at q = " + std::to_string(q));
  }
  FreeFamily circle({cosine_law(), MarginalLaw::haar()}, Backend::Rational);
  MomentEngine<ComplexRational> cengine(circle);
  for (int q = 1; q <= 3; ++q) {
    auto report = hankel_det(cengine, LengthCut{q});
    ComplexRational oracle = determinant(gram_matrix(cengine, LengthCut{q}));
    if (!(oracle == ComplexRational(*report.determinant)))
      return result(name, false, "unitary family at q = " + std::to_string(q));
  }
  return result(name, true, std::to_string(cuts.size()) + " exact cuts, 4 float cuts, 3 unitary cuts");
}

PropertyResult check_gram_psd_minors(std::uint64_t seed, int count) {
  const std::string name = "grammat: principal minors are nonnegative";
  Rng rng(seed);
  FreeFamily family({MarginalLaw::semicircle(), MarginalLaw::free_poisson(Rational(1, 2))}, Backend::Rational);
  MomentEngine<Rational> engine(family);
  auto g = gram_matrix(engine, LengthCut{3});
  const std::size_t dim = g.rows();
  for (int t = 0; t < count; ++t) {
    std::vector<std::size_t> idx(dim);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(dim))));
    std::sort(idx.begin(), idx.end());
    Matrix<Rational> minor(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) minor(i, j) = g(idx[i], idx[j]);
    if (sgn(determinant(minor)) < 0) return result(name, false, "negative minor of size " + std::to_string(idx.size()));
  }
  return result(name, true, std::to_string(count) + " minors of a " + std::to_string(dim) + "-dimensional Gram matrix");
}

PropertyResult check_block_factorization() {
  const std::string name = "grammat: multivariate norms factor over blocks";
  FreeFamily family({MarginalLaw::semicircle(Rational(1, 2)), MarginalLaw::free_poisson(2L)}, Backend::Rational);
  MomentEngine<Rational> engine(family);
  const int q_top = 5;
  std::vector<NormSequence<Rational>> one;
  std::vector<Matrix<Rational>> monic;
  for (int k = 1; k <= 2; ++k) {
    one.push_back(orth_norms_1d<Rational>(family.marginal(k), q_top));
    monic.push_back(monic_1d<Rational>(family.marginal(k), q_top));
  }
  auto report = hankel_det(engine, LengthCut{q_top + 1});
  if (report.singular) return result(name, false, "unexpected singular Gram matrix");
  for (std::size_t i = 0; i < report.index_words.size(); ++i) {
    Rational expected(1);
    for (const Letter& l : report.index_words[i].blocks())
      expected *= one[static_cast<std::size_t>(l.variable - 1)].values[static_cast<std::size_t>(l.exponent)];
    if (expected != report.pivots[i]) return result(name, false, "norm mismatch at " + to_string(report.index_words[i]));
  }
  // Expansion level: the product of one-variable polynomials is the
  // Gram-Schmidt polynomial.
  for (const Word& alpha : enumerate(2, 4, EnumerationMode::StrictlyBelow)) {
    std::map<Word, Rational, GradedLexLess> product{{Word(2), Rational(1)}};
    for (const Letter& l : alpha.blocks()) {
      std::map<Word, Rational, GradedLexLess> next;
      const auto& p = monic[static_cast<std::size_t>(l.variable - 1)];
      for (const auto& [w, c] : product) {
        for (int t = 0; t <= l.exponent; ++t) {
          const Rational& pc = p(static_cast<std::size_t>(l.exponent), static_cast<std::size_t>(t));
          if (sgn(pc) == 0) continue;
          std::vector<Letter> tail;
          if (t > 0) tail.push_back({l.variable, t});
          next[concat(w, Word::canonical(2, tail))] += c * pc;
        }
      }
      product = std::move(next);
    }
    auto expansion = gram_schmidt_expand(engine, alpha);
    for (std::size_t i = 0; i < expansion.words.size(); ++i) {
      auto it = product.find(expansion.words[i]);
      Rational expected = it == product.end() ? Rational(0) : it->second;
      if (expected != expansion.coefficients[i])
        return result(name, false, "expansion of " + to_string(alpha) + " differs at " + to_string(expansion.words[i]));
      // orthogonality of the product polynomial to every earlier word
      if (i + 1 < expansion.words.size()) {
        Rational inner(0);
        for (const auto& [w, c] : product) inner += c * engine.gram_entry(expansion.words[i], w);
        if (sgn(inner) != 0) return result(name, false, "product polynomial not orthogonal for " + to_string(alpha));
      }
    }
  }
  return result(name, true, std::to_string(report.dimension) + " norms, 15 expansions, exact");
}

PropertyResult check_norm_routes_1d() {
  const std::string name = "orthopoly1d: pivot and minor-ratio norms agree";
  std::vector<MarginalLaw> laws{MarginalLaw::semicircle(),
                                MarginalLaw::semicircle(Rational(3, 2)),
                                MarginalLaw::arcsine(),
                                MarginalLaw::arcsine(Rational(1, 2), Rational(1, 3)),
                                MarginalLaw::free_poisson(2L),
                                MarginalLaw::free_poisson(Rational(1, 2)),
                                MarginalLaw::two_point(Param(-1L), Param(2L), Param(Rational(1, 3))),
                                cosine_law(),
                                poisson_law(ComplexRational(Rational(1, 3), Rational(1, 4)), 24),
                                MarginalLaw::haar()};
  for (const MarginalLaw& law : laws) {
    const bool unitary = law.kind() == VariableKind::Unitary;
    bool same = true;
    if (unitary) {
      auto a = orth_norms_1d<ComplexRational>(law, 10);
      auto b = orth_norms_1d_minor_ratio<ComplexRational>(law, 10);
      same = a.values == b.values && a.degenerate_at == b.degenerate_at;
      auto fa = orth_norms_1d<std::complex<double>>(law, 3);
      auto fb = orth_norms_1d_minor_ratio<std::complex<double>>(law, 3);
      for (std::size_t i = 0; same && i < fa.values.size(); ++i) same = rel_close(fa.values[i], fb.values[i], 1e-12);
    } else {
      auto a = orth_norms_1d<Rational>(law, 10);
      auto b = orth_norms_1d_minor_ratio<Rational>(law, 10);
      same = a.values == b.values && a.degenerate_at == b.degenerate_at;
      auto fa = orth_norms_1d<double>(law, 3);
      auto fb = orth_norms_1d_minor_ratio<double>(law, 3);
      same = same && fa.values.size() == fb.values.size();
      for (std::size_t i = 0; same && i < fa.values.size(); ++i)
        same = std::fabs(fa.values[i] - fb.values[i]) <= 1e-12 * std::fabs(fb.values[i]);
    }
    if (!same) return result(name, false, "routes differ for " + law.name());
  }
  return result(name, true, std::to_string(laws.size()) + " laws, exact q <= 10, float q <= 3");
}

PropertyResult check_jacobi_identities() {
  const std::string name = "orthopoly1d: Jacobi recurrence, norm product, moment reconstruction";
  std::vector<MarginalLaw> laws{MarginalLaw::semicircle(), MarginalLaw::arcsine(), MarginalLaw::semicircle(Rational(2, 3)),
                                MarginalLaw::free_poisson(Rational(5, 2)), MarginalLaw::free_poisson(2L).shifted(Rational(-1, 3))};
  const int count = 10;
  for (const MarginalLaw& law : laws) {
    auto jc = jacobi_coeffs<Rational>(law, count);
    auto norms = orth_norms_1d<Rational>(law, count);
    Rational product(1);
    for (int q = 1; q <= count; ++q) {
      product *= jc.a_squared[static_cast<std::size_t>(q - 1)];
      if (product != norms.values[static_cast<std::size_t>(q)])
        return result(name, false, law.name() + ": norm product fails at q = " + std::to_string(q));
    }
    // build the monic polynomials from the recurrence and test orthogonality
    std::vector<std::vector<Rational>> p{{Rational(1)}};
    std::vector<Rational> prev;
    for (int q = 0; q < count; ++q) {
      std::vector<Rational> next(p.back().size() + 1, Rational(0));
      for (std::size_t i = 0; i < p.back().size(); ++i) {
        next[i + 1] += p.back()[i];
        next[i] -= jc.b[static_cast<std::size_t>(q)] * p.back()[i];
      }
      if (q > 0)
        for (std::size_t i = 0; i < p[p.size() - 2].size(); ++i)
          next[i] -= jc.a_squared[static_cast<std::size_t>(q - 1)] * p[p.size() - 2][i];
      p.push_back(std::move(next));
    }
    for (std::size_t q = 0; q < p.size(); ++q) {
      for (std::size_t r = 0; r <= q; ++r) {
        Rational inner(0);
        for (std::size_t i = 0; i < p[q].size(); ++i)
          for (std::size_t k = 0; k < p[r].size(); ++k)
            inner += p[q][i] * p[r][k] * law.exact_moment(static_cast<int>(i + k)).re;
        Rational expected = q == r ? norms.values[q] : Rational(0);
        if (inner != expected)
          return result(name, false, law.name() + ": <P_" + std::to_string(q) + ", P_" + std::to_string(r) + "> wrong");
      }
    }
    auto moments = moments_from_jacobi(jc, 2 * count - 2);
    for (int k = 0; k <= 2 * count - 2; ++k)
      if (moments[static_cast<std::size_t>(k)] != law.exact_moment(k).re)
        return result(name, false, law.name() + ": moment " + std::to_string(k) + " not reconstructed");
  }
  // translation covariance
  for (const MarginalLaw& law : {MarginalLaw::free_poisson(3L), MarginalLaw::arcsine(Rational(1, 2))}) {
    Rational c(7, 5);
    auto base = jacobi_coeffs<Rational>(law, 8);
    auto moved = jacobi_coeffs<Rational>(law.shifted(c), 8);
    for (std::size_t q = 0; q < 8; ++q)
      if (moved.a_squared[q] != base.a_squared[q] || moved.b[q] != base.b[q] + c)
        return result(name, false, law.name() + ": shift covariance fails");
  }
  return result(name, true, std::to_string(laws.size()) + " laws exact through q = 10, 2 shifted laws");
}

PropertyResult check_verblunsky_identities() {
  const std::string name = "orthopoly1d: Szego recursion and norm product";
  std::vector<MarginalLaw> laws{MarginalLaw::haar(), cosine_law(), poisson_law(ComplexRational(Rational(1, 3)), 20),
                                poisson_law(ComplexRational(Rational(1, 3), Rational(-1, 4)), 20)};
  for (const MarginalLaw& law : laws) {
    auto vc = verblunsky_coeffs<ComplexRational>(law, 10);
    auto norms = orth_norms_1d<ComplexRational>(law, 10);
    Rational product(1);
    for (int q = 0; q <= 10; ++q) {
      if (q > 0) product *= Rational(1) - norm(vc.alpha[static_cast<std::size_t>(q - 1)]);
      if (product != norms.values[static_cast<std::size_t>(q)] || product != vc.norms[static_cast<std::size_t>(q)])
        return result(name, false, law.name() + ": norm product fails at q = " + std::to_string(q));
    }
    for (const auto& a : vc.alpha)
      if (norm(a) >= 1) return result(name, false, law.name() + ": |alpha| >= 1");
  }
  for (const auto& a : verblunsky_coeffs<ComplexRational>(laws[0], 12).alpha)
    if (!(a == ComplexRational(0))) return result(name, false, "Haar coefficient nonzero");
  ComplexRational w(Rational(1, 3), Rational(-1, 4));
  auto pk = verblunsky_coeffs<ComplexRational>(laws[3], 10);
  if (!(pk.alpha[0] == conj(w))) return result(name, false, "Poisson alpha_0 != conj(c_1)");
  for (std::size_t j = 1; j < pk.alpha.size(); ++j)
    if (!(pk.alpha[j] == ComplexRational(0))) return result(name, false, "Poisson alpha_j nonzero for j > 0");
  bool threw = false;
  try {
    verblunsky_coeffs<ComplexRational>(poisson_law(ComplexRational(1), 4), 3);
  } catch (const DegenerateAt& e) {
    threw = e.order() == 1;
  }
  if (!threw) return result(name, false, "point mass not flagged at the first step");
  return result(name, true, std::to_string(laws.size()) + " laws exact through q = 10");
}

PropertyResult check_recursion_closed_form(std::uint64_t seed, int trials) {
  const std::string name = "szegolimit: recursion closed form matches the recursion";
  Rng rng(seed);
  auto recursion = [](const Rational& r, const Rational& c1, const std::vector<Rational>& d) {
    std::vector<Rational> c{c1};
    Rational sum = c1;
    for (const Rational& dq : d) {
      c.push_back(r * sum + dq);
      sum += c.back();
    }
    return c;
  };
  {
    std::vector<Rational> d(3, Rational(0));
    auto c = recursion_closed_form<Rational>(Rational(1), Rational(1), d);
    if (c != std::vector<Rational>{1, 1, 2, 4}) return result(name, false, "r = 1, c1 = 1, d = 0 example fails");
  }
  for (int t = 0; t < trials; ++t) {
    Rational r(uniform(rng, 1, 12), uniform(rng, 1, 12));
    r.canonicalize();
    Rational c1 = random_rational(rng, 20);
    std::vector<Rational> d;
    for (int q = uniform(rng, 2, 14); q >= 2; --q) d.push_back(random_rational(rng, 20));
    if (recursion_closed_form<Rational>(r, c1, d) != recursion(r, c1, d))
      return result(name, false, "trial " + std::to_string(t) + " differs");
  }
  return result(name, true, std::to_string(trials) + " random rational instances, exact");
}

PropertyResult check_entropy_routes() {
  const std::string name = "szegolimit: entropy norm, Jacobi and Verblunsky routes agree";
  const int J = 60;
  std::vector<MarginalLaw> real_laws{MarginalLaw::semicircle(), MarginalLaw::arcsine(), MarginalLaw::semicircle(2L),
                                     MarginalLaw::arcsine(Rational(3, 2)), MarginalLaw::free_poisson(2L)};
  std::vector<MarginalLaw> circle_laws{MarginalLaw::haar(), cosine_law(),
                                       poisson_law(ComplexRational(Rational(1, 3), Rational(1, 5)), J)};
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (const MarginalLaw& law : real_laws) {
      double a = entropy_number(law, n, J).value;
      double b = entropy_from_jacobi(jacobi_coeffs<Rational>(law, J), n).value;
      worst = std::max(worst, std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)}));
      if (!close_mixed(a, b, 1e-10)) return result(name, false, law.name() + ": Jacobi route differs");
    }
    for (const MarginalLaw& law : circle_laws) {
      double a = entropy_number(law, n, J).value;
      double b = entropy_from_verblunsky(verblunsky_coeffs<ComplexRational>(law, J), n).value;
      worst = std::max(worst, std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)}));
      if (!close_mixed(a, b, 1e-10)) return result(name, false, law.name() + ": Verblunsky route differs");
    }
  }
  double scaled = entropy_number(MarginalLaw::semicircle(2L), 2, J).value;
  if (!close_mixed(scaled, 4 * std::log(2.0), 1e-10)) return result(name, false, "E_2 of scaled semicircle != 4 ln 2");
  std::ostringstream detail;
  detail << "worst relative difference " << worst;
  return result(name, true, detail.str());
}

PropertyResult check_tail_bounds() {
  const std::string name = "szegolimit: truncation error stays within the tail bound";
  std::vector<MarginalLaw> laws{MarginalLaw::semicircle(), MarginalLaw::arcsine(), MarginalLaw::semicircle(Rational(5, 2)),
                                MarginalLaw::free_poisson(2L), MarginalLaw::haar(), cosine_law()};
  for (const MarginalLaw& law : laws) {
    for (int n : {2, 3, 5}) {
      for (int J : {8, 16, 30}) {
        auto e1 = entropy_number(law, n, J);
        auto e2 = entropy_number(law, n, 2 * J);
        if (std::fabs(e1.value - e2.value) > e1.tail_bound)
          return result(name, false, law.name() + " n = " + std::to_string(n) + " J = " + std::to_string(J));
      }
    }
  }
  return result(name, true, std::to_string(laws.size()) + " laws, n in {2,3,5}, J in {8,16,30}");
}

PropertyResult check_sq_routes() {
  const std::string name = "szegolimit: s_q by Gram pivots, enumeration and closed form";
  FreeFamily two({MarginalLaw::semicircle(), MarginalLaw::arcsine()}, Backend::Rational);
  FreeFamily three({MarginalLaw::semicircle(Rational(1, 2)), MarginalLaw::arcsine(), MarginalLaw::free_poisson(2L)},
                   Backend::Rational);
  for (const FreeFamily* family : {&two, &three}) {
    const int n = family->size();
    const int q_float = n == 2 ? 10 : 7;
    auto table = log_norm_table(*family, q_float);
    for (int q = 1; q <= q_float; ++q) {
      double e = scaled_log_sq(table, q, SqRoute::Enumerate);
      double c = scaled_log_sq(table, q, SqRoute::ClosedForm);
      if (!close_mixed(e, c, 1e-10)) return result(name, false, "float routes differ at q = " + std::to_string(q));
    }
    const int q_exact = n == 2 ? 4 : 3;
    auto exact = exact_norm_table(*family, q_exact);
    MomentEngine<Rational> engine(*family);
    auto report = hankel_det(engine, LengthCut{q_exact + 1});
    std::size_t pos = 1;
    for (int q = 1; q <= q_exact; ++q) {
      Rational direct(1);
      for (auto layer = enumeration_count(n, q, EnumerationMode::Exactly); layer > 0; --layer) direct *= report.pivots[pos++];
      Rational enumerated = exact_sq_enumerate(exact, q);
      if (direct != enumerated || enumerated != exact_sq_closed_form(exact, q))
        return result(name, false, "exact routes differ at n = " + std::to_string(n) + ", q = " + std::to_string(q));
    }
  }
  return result(name, true, "n = 2 exact q <= 4 / float q <= 10, n = 3 exact q <= 3 / float q <= 7");
}

PropertyResult check_forcing_identity() {
  const std::string name = "szegolimit: ln s_q - (n-1) sum ln s_j equals d_q";
  FreeFamily two({MarginalLaw::semicircle(Rational(1, 2)), MarginalLaw::arcsine()}, Backend::Rational);
  FreeFamily three({MarginalLaw::semicircle(Rational(3, 2)), MarginalLaw::arcsine(), MarginalLaw::free_poisson(2L)},
                   Backend::Rational);
  for (const FreeFamily* family : {&two, &three}) {
    const int n = family->size();
    auto table = log_norm_table(*family, 8);
    std::vector<double> log_s;
    for (int q = 1; q <= 8; ++q) {
      log_s.push_back(scaled_log_sq(table, q, SqRoute::Enumerate) * std::pow(n, q));
      double lhs = log_s.back();
      for (int j = 0; j + 1 < q; ++j) lhs -= (n - 1) * log_s[static_cast<std::size_t>(j)];
      if (!close_mixed(lhs, recursion_forcing(table, q), 1e-10))
        return result(name, false, "n = " + std::to_string(n) + ", q = " + std::to_string(q));
    }
  }
  return result(name, true, "n = 2, 3 through q = 8");
}

PropertyResult check_scale_sensitivity() {
  const std::string name = "szegolimit: scaling every variable by a shifts the limit by 2n ln a/(n-1)";
  Rational a(3, 2);
  for (int n : {2, 3}) {
    std::vector<MarginalLaw> base{MarginalLaw::semicircle(), MarginalLaw::arcsine(), MarginalLaw::semicircle(Rational(1, 3))};
    std::vector<MarginalLaw> scaled{MarginalLaw::semicircle(a), MarginalLaw::arcsine(a),
                                    MarginalLaw::semicircle(Rational(Rational(1, 3) * a))};
    base.resize(static_cast<std::size_t>(n), base.front());
    scaled.resize(static_cast<std::size_t>(n), scaled.front());
    double l0 = predicted_limit(FreeFamily(base, Backend::Rational), 60).value;
    double l1 = predicted_limit(FreeFamily(scaled, Backend::Rational), 60).value;
    double shift = 2.0 * n * std::log(a.get_d()) / (n - 1);
    if (!close_mixed(l1 - l0, shift, 1e-10)) return result(name, false, "n = " + std::to_string(n));
  }
  return result(name, true, "n = 2, 3 with a = 3/2");
}

PropertyResult check_convergence(int threads) {
  const std::string name = "szegolimit: traces converge and routes agree";
  TraceOptions options;
  options.threads = threads;
  FreeFamily scaled({MarginalLaw::semicircle(2L), MarginalLaw::semicircle(2L)}, Backend::Rational);
  auto trace = convergence_trace(scaled, 4, 30, options);
  const double l2 = std::log(2.0);
  double previous_gap = std::numeric_limits<double>::infinity();
  for (const TraceRow& row : trace.rows) {
    if (row.route != TraceRoute::Factored) continue;
    const double q = row.q;
    double analytic = 2 * l2 * ((q - 1) * std::pow(2.0, q + 1) + 2) / (q * std::pow(2.0, q));
    if (!close_mixed(row.lnD_ratio, analytic, 1e-12)) return result(name, false, "analytic ratio mismatch at q = " + std::to_string(row.q));
    if (!(std::fabs(row.gap) < previous_gap) && row.q > 1) return result(name, false, "gap not decreasing at q = " + std::to_string(row.q));
    previous_gap = std::fabs(row.gap);
  }
  if (!trace.routes_agree) return result(name, false, "direct and factored routes differ (scaled semicircles)");
  if (!trace.richardson || !close_mixed(*trace.richardson, trace.limit.value, 1e-6))
    return result(name, false, "Richardson estimate misses the limit");
  FreeFamily mixed({MarginalLaw::semicircle(), MarginalLaw::arcsine()}, Backend::Float);
  auto t2 = convergence_trace(mixed, 6, 30, options);
  if (!t2.routes_agree) return result(name, false, "direct and factored routes differ (semicircle x arcsine)");
  std::ostringstream detail;
  detail << "max cross-check " << std::max(trace.max_crosscheck, t2.max_crosscheck);
  return result(name, true, detail.str());
}

std::vector<PropertyResult> run_selftest(std::uint64_t seed, int threads) {
  std::seed_seq seq{seed};
  std::vector<std::uint64_t> s(8);
  seq.generate(s.begin(), s.end());
  return {check_word_order(s[0]),
          check_word_star_and_length(s[1]),
          check_centered_alternating(s[2]),
          check_free_clt(),
          check_trace_cyclic(s[3]),
          check_cache_transparency(s[4]),
          check_restriction(s[5]),
          check_gram_determinant(s[6]),
          check_gram_psd_minors(s[7]),
          check_block_factorization(),
          check_norm_routes_1d(),
          check_jacobi_identities(),
          check_verblunsky_identities(),
          check_recursion_closed_form(seed),
          check_entropy_routes(),
          check_tail_bounds(),
          check_sq_routes(),
          check_forcing_identity(),
          check_scale_sensitivity(),
          check_convergence(threads)};
}

}  // namespace fpsz
