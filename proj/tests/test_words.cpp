#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fpsz/errors.hpp"
#include "fpsz/selftest.hpp"
#include "fpsz/words.hpp"

using namespace fpsz;

namespace {

Word w(int n, std::initializer_list<Letter> letters) {
  std::vector<Letter> v(letters);
  return Word::canonical(n, v);
}

const std::vector<VariableKind> kSelf(3, VariableKind::SelfAdjoint);
const std::vector<VariableKind> kUnitary(3, VariableKind::Unitary);

}  // namespace

TEST_CASE("canonicalize merges powers and cancels") {
  CHECK(w(2, {{1, 2}, {1, 3}}) == w(2, {{1, 5}}));
  CHECK(w(2, {{1, 5}}).blocks().size() == 1);
  CHECK(w(2, {{1, 1}, {1, -1}}).is_identity());
  Word merged = w(2, {{1, 2}, {2, 1}, {2, 2}, {1, 1}});
  REQUIRE(merged.block_count() == 3);
  CHECK(merged.blocks()[0] == Letter{1, 2});
  CHECK(merged.blocks()[1] == Letter{2, 3});
  CHECK(merged.blocks()[2] == Letter{1, 1});
  // cancellation exposes a new merge
  CHECK(w(2, {{1, 1}, {2, 1}, {2, -1}, {1, 2}}) == w(2, {{1, 3}}));
  CHECK(w(2, {{1, 0}}).is_identity());
  CHECK_THROWS_AS(w(2, {{3, 1}}), ConfigError);
  CHECK_THROWS_AS(w(2, {{0, 1}}), ConfigError);
}

TEST_CASE("length") {
  CHECK(Word(2).length() == 0);
  CHECK(w(2, {{1, 2}, {2, -3}}).length() == 5);
}

TEST_CASE("graded lexicographic order") {
  Word e(2);
  Word x1 = w(2, {{1, 1}});
  Word x2 = w(2, {{2, 1}});
  CHECK(compare(w(2, {{1, 1}, {2, 1}}), w(2, {{2, 1}, {1, 1}})) < 0);
  CHECK(compare(e, x1) < 0);
  CHECK(compare(x2, w(2, {{1, 2}})) < 0);
  CHECK(compare(x1, x2) < 0);
  CHECK(compare(w(2, {{1, 2}}), w(2, {{1, 1}, {2, 1}})) < 0);
  CHECK(compare(x1, x1) == 0);
  // X_n^2 precedes X_1^3
  CHECK(compare(w(3, {{3, 2}}), w(3, {{1, 3}})) < 0);
}

TEST_CASE("enumeration") {
  auto below = enumerate(2, 2, EnumerationMode::StrictlyBelow);
  REQUIRE(below.size() == 3);
  CHECK(below[0].is_identity());
  CHECK(to_string(below[1]) == "x1");
  CHECK(to_string(below[2]) == "x2");
  auto exactly = enumerate(2, 2, EnumerationMode::Exactly);
  std::vector<std::string> names;
  for (const Word& x : exactly) names.push_back(to_string(x));
  CHECK(names == std::vector<std::string>{"x1^2", "x1 x2", "x2 x1", "x2^2"});
  CHECK(enumerate(3, 2, EnumerationMode::Exactly).size() == 9);
  CHECK(enumerate(3, 0, EnumerationMode::Exactly).size() == 1);
  CHECK(enumerate(3, 0, EnumerationMode::StrictlyBelow).empty());
  CHECK(enumeration_count(2, 6, EnumerationMode::StrictlyBelow) == 63);
  CHECK(enumeration_count(1, 5, EnumerationMode::StrictlyBelow) == 5);
  CHECK(enumeration_count(2, 200, EnumerationMode::Exactly) == UINT64_MAX);
  CHECK_THROWS_AS(enumerate(2, 10, EnumerationMode::StrictlyBelow, 100), EnumerationCapExceeded);
  auto many = enumerate(3, 5, EnumerationMode::StrictlyBelow);
  CHECK(std::is_sorted(many.begin(), many.end(), GradedLexLess{}));
  std::set<std::string> unique;
  for (const Word& x : many) unique.insert(to_string(x));
  CHECK(unique.size() == many.size());
  std::vector<int> digits{0, 1, 1, 0};
  CHECK(word_from_digits(2, digits) == w(2, {{1, 1}, {2, 2}, {1, 1}}));
}

TEST_CASE("star") {
  CHECK(star(w(3, {{1, 2}, {2, 1}}), kSelf) == w(3, {{2, 1}, {1, 2}}));
  CHECK(star(w(3, {{1, 2}, {2, 1}}), kUnitary) == w(3, {{2, -1}, {1, -2}}));
  CHECK(star(Word(3), kSelf).is_identity());
  CHECK(star(Word(3), kUnitary).is_identity());
}

TEST_CASE("text round trip") {
  Word x = parse_word("x1^2 x2 x1*", 2);
  CHECK(x == w(2, {{1, 2}, {2, 1}, {1, -1}}));
  CHECK(to_string(x) == "x1^2 x2 x1*");
  CHECK(parse_word("e", 2).is_identity());
  CHECK(to_string(Word(2)) == "e");
  CHECK(parse_word("x2*^3", 2) == w(2, {{2, -3}}));
  std::vector<VariableKind> kinds{VariableKind::SelfAdjoint, VariableKind::Unitary};
  CHECK(parse_word("x1* x1", 2, kinds) == w(2, {{1, 2}}));
  CHECK(parse_word("x2* x2", 2, kinds).is_identity());
  CHECK_THROWS_AS(parse_word("x3", 2), ConfigError);
  CHECK_THROWS_AS(parse_word("y1", 2), ConfigError);
  CHECK_THROWS_AS(parse_word("x1^0x", 2), ConfigError);
  CHECK_THROWS_AS(parse_word("", 2), ConfigError);
}

TEST_CASE("hash agrees with equality") {
  WordHash h;
  CHECK(h(w(2, {{1, 1}, {1, 1}})) == h(w(2, {{1, 2}})));
}

TEST_CASE("order and star properties") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto order = check_word_order(seed);
    CHECK_MESSAGE(order.passed, order.detail);
    auto st = check_word_star_and_length(seed);
    CHECK_MESSAGE(st.passed, st.detail);
  }
}
