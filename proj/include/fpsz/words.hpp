#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fpsz {

enum class VariableKind { SelfAdjoint, Unitary };

// X_variable^exponent. Negative exponents are adjoint powers of a unitary.
struct Letter {
  int variable = 1;
  int exponent = 1;

  bool operator==(const Letter&) const = default;
};

// Element of the free monoid on n generators (plus adjoint powers for
// unitaries), held in canonical block form: adjacent blocks use distinct
// variables and no block has exponent zero. The empty block list is e.
class Word {
 public:
  Word() = default;
  explicit Word(int generators) : n_(generators) {}

  // Merges adjacent same-variable letters and drops zero exponents. Throws
  // ConfigError if a variable index lies outside [1, generators].
  static Word canonical(int generators, std::span<const Letter> letters);

  int generators() const { return n_; }
  std::span<const Letter> blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  bool is_identity() const { return blocks_.empty(); }

  // Sum of |exponent| over blocks.
  int length() const;

  bool operator==(const Word&) const = default;

 private:
  int n_ = 1;
  std::vector<Letter> blocks_;
};

inline Word canonicalize(int generators, std::span<const Letter> letters) {
  return Word::canonical(generators, letters);
}

// Canonical form of the concatenation a b.
Word concat(const Word& a, const Word& b);

// Graded lexicographic order: shorter words first, then letter by letter with
// X_1 < X_1^* < X_2 < X_2^* < ... Words must share the generator count.
std::strong_ordering compare(const Word& a, const Word& b);

struct GradedLexLess {
  bool operator()(const Word& a, const Word& b) const { return compare(a, b) < 0; }
};

enum class EnumerationMode { StrictlyBelow, Exactly };

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Number of positive words with length < q (StrictlyBelow) or == q (Exactly),
// saturating at UINT64_MAX.
std::uint64_t enumeration_count(int n, int q, EnumerationMode mode);

// Positive words (no adjoints) in graded lexicographic order. Throws
// EnumerationCapExceeded when the count is above `cap`.
std::vector<Word> enumerate(int n, int q, EnumerationMode mode,
                            std::uint64_t cap = kDefaultEnumerationCap);

// Positive word whose letters are given by `digits` (0-based variable indices).
Word word_from_digits(int n, std::span<const int> digits);

// Adjoint word: blocks reversed; unitary exponents negated.
Word star(const Word& w, std::span<const VariableKind> kinds);

// Text form: whitespace-separated tokens x<k>, x<k>^<p>, x<k>*, x<k>*^<p>, or
// the single token e. With `kinds` given, x<k>* on a self-adjoint variable is
// x<k>; without, it is read as an adjoint power.
Word parse_word(std::string_view text, int n, std::span<const VariableKind> kinds = {});

std::string to_string(const Word& w);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

}  // namespace fpsz
