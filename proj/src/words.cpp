#include "fpsz/words.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "fpsz/errors.hpp"

namespace fpsz {

Word Word::canonical(int generators, std::span<const Letter> letters) {
  Word w(generators);
  for (const Letter& l : letters) {
    if (l.variable < 1 || l.variable > generators)
      throw ConfigError("variable x" + std::to_string(l.variable) + " outside 1.." +
                        std::to_string(generators));
    if (l.exponent == 0) continue;
    if (!w.blocks_.empty() && w.blocks_.back().variable == l.variable) {
      w.blocks_.back().exponent += l.exponent;
      if (w.blocks_.back().exponent == 0) w.blocks_.pop_back();
    } else {
      w.blocks_.push_back(l);
    }
  }
  return w;
}

int Word::length() const {
  int total = 0;
  for (const Letter& l : blocks_) total += std::abs(l.exponent);
  return total;
}

Word concat(const Word& a, const Word& b) {
  std::vector<Letter> letters(a.blocks().begin(), a.blocks().end());
  letters.insert(letters.end(), b.blocks().begin(), b.blocks().end());
  return Word::canonical(a.generators(), letters);
}

namespace {

int letter_rank(const Letter& l) { return 2 * (l.variable - 1) + (l.exponent < 0 ? 1 : 0); }

}  // namespace

std::strong_ordering compare(const Word& a, const Word& b) {
  if (auto c = a.length() <=> b.length(); c != 0) return c;
  auto ab = a.blocks();
  auto bb = b.blocks();
  std::size_t i = 0;
  std::size_t j = 0;
  int used_a = 0;  // letters consumed from the current block
  int used_b = 0;
  while (i < ab.size() && j < bb.size()) {
    if (auto c = letter_rank(ab[i]) <=> letter_rank(bb[j]); c != 0) return c;
    int left_a = std::abs(ab[i].exponent) - used_a;
    int left_b = std::abs(bb[j].exponent) - used_b;
    int step = std::min(left_a, left_b);
    used_a += step;
    used_b += step;
    if (used_a == std::abs(ab[i].exponent)) {
      ++i;
      used_a = 0;
    }
    if (used_b == std::abs(bb[j].exponent)) {
      ++j;
      used_b = 0;
    }
  }
  return std::strong_ordering::equal;
}

std::uint64_t enumeration_count(int n, int q, EnumerationMode mode) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  auto mul = [](std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kMax / a) return kMax;
    return a * b;
  };
  auto nn = static_cast<std::uint64_t>(n);
  if (mode == EnumerationMode::Exactly) {
    std::uint64_t c = 1;
    for (int i = 0; i < q; ++i) c = mul(c, nn);
    return c;
  }
  std::uint64_t total = 0;
  std::uint64_t layer = 1;
  for (int j = 0; j < q; ++j) {
    total = (total > kMax - layer) ? kMax : total + layer;
    layer = mul(layer, nn);
  }
  return total;
}

Word word_from_digits(int n, std::span<const int> digits) {
  std::vector<Letter> letters;
  letters.reserve(digits.size());
  for (int d : digits) letters.push_back({d + 1, 1});
  return Word::canonical(n, letters);
}

std::vector<Word> enumerate(int n, int q, EnumerationMode mode, std::uint64_t cap) {
  if (n < 1) throw ConfigError("generator count must be >= 1");
  if (q < 0) throw ConfigError("length bound must be >= 0");
  std::uint64_t count = enumeration_count(n, q, mode);
  if (count > cap)
    throw EnumerationCapExceeded("enumeration of " + std::to_string(count) +
                                 " words exceeds the cap of " + std::to_string(cap));
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  int lo = mode == EnumerationMode::Exactly ? q : 0;
  int hi = mode == EnumerationMode::Exactly ? q : q - 1;
  for (int len = lo; len <= hi; ++len) {
    // base-n odometer; numeric order of digit strings is lexicographic order
    std::vector<int> digits(static_cast<std::size_t>(len), 0);
    for (;;) {
      out.push_back(word_from_digits(n, digits));
      int pos = len - 1;
      while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == n - 1)
        digits[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++digits[static_cast<std::size_t>(pos)];
    }
  }
  return out;
}

Word star(const Word& w, std::span<const VariableKind> kinds) {
  std::vector<Letter> letters;
  letters.reserve(w.block_count());
  auto blocks = w.blocks();
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    Letter l = *it;
    auto idx = static_cast<std::size_t>(l.variable - 1);
    bool unitary = idx < kinds.size() && kinds[idx] == VariableKind::Unitary;
    if (unitary) l.exponent = -l.exponent;
    letters.push_back(l);
  }
  return Word::canonical(w.generators(), letters);
}

Word parse_word(std::string_view text, int n, std::span<const VariableKind> kinds) {
  std::istringstream in{std::string(text)};
  std::string token;
  std::vector<Letter> letters;
  bool saw_identity = false;
  int token_count = 0;
  while (in >> token) {
    ++token_count;
    if (token == "e") {
      saw_identity = true;
      continue;
    }
    auto bad = [&] { return ConfigError("bad word token '" + token + "'"); };
    if (token.size() < 2 || token[0] != 'x') throw bad();
    std::size_t i = 1;
    std::size_t start = i;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i;
    if (i == start) throw bad();
    int var = std::stoi(token.substr(start, i - start));
    bool adjoint = false;
    if (i < token.size() && token[i] == '*') {
      adjoint = true;
      ++i;
    }
    int power = 1;
    if (i < token.size()) {
      if (token[i] != '^' || i + 1 == token.size()) throw bad();
      std::size_t used = 0;
      try {
        power = std::stoi(token.substr(i + 1), &used);
      } catch (const std::exception&) {
        throw bad();
      }
      if (i + 1 + used != token.size() || power == 0) throw bad();
    }
    if (var < 1 || var > n)
      throw ConfigError("variable x" + std::to_string(var) + " outside 1.." + std::to_string(n));
    auto idx = static_cast<std::size_t>(var - 1);
    bool self_adjoint = idx < kinds.size() && kinds[idx] == VariableKind::SelfAdjoint;
    if (self_adjoint) {
      if (power < 0) throw ConfigError("negative power of self-adjoint x" + std::to_string(var));
      adjoint = false;
    }
    letters.push_back({var, adjoint ? -power : power});
  }
  if (saw_identity && token_count > 1) throw ConfigError("'e' must stand alone");
  if (token_count == 0) throw ConfigError("empty word (use 'e' for the identity)");
  return Word::canonical(n, letters);
}

std::string to_string(const Word& w) {
  if (w.is_identity()) return "e";
  std::string out;
  for (const Letter& l : w.blocks()) {
    if (!out.empty()) out += ' ';
    out += 'x';
    out += std::to_string(l.variable);
    if (l.exponent < 0) out += '*';
    if (std::abs(l.exponent) != 1) {
      out += '^';
      out += std::to_string(std::abs(l.exponent));
    }
  }
  return out;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const Letter& l : w.blocks()) {
    std::size_t v = (static_cast<std::size_t>(static_cast<unsigned>(l.variable)) << 32U) ^
                    static_cast<std::size_t>(static_cast<unsigned>(l.exponent));
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
  }
  return h;
}

}  // namespace fpsz
