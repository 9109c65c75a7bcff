#include "fpsz/grammat.hpp"

namespace fpsz {

std::vector<Word> index_words(int n, const Cut& cut, std::uint64_t cap) {
  if (const auto* lc = std::get_if<LengthCut>(&cut)) {
    if (lc->q < 1) throw ConfigError("length cut needs q >= 1");
    return enumerate(n, lc->q, EnumerationMode::StrictlyBelow, cap);
  }
  const Word& gamma = std::get<WordCut>(cut).gamma;
  for (const Letter& l : gamma.blocks())
    if (l.exponent < 0) throw ConfigError("word cut must be a positive word");
  const int len = gamma.length();
  auto out = enumerate(n, len, EnumerationMode::StrictlyBelow, cap);
  for (Word& w : enumerate(n, len, EnumerationMode::Exactly, cap)) {
    if (compare(w, gamma) >= 0) break;
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Word> words_through(const Word& alpha, std::uint64_t cap) {
  auto out = index_words(alpha.generators(), WordCut{alpha}, cap);
  out.push_back(alpha);
  return out;
}

}  // namespace fpsz
