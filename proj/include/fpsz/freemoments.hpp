#pragma once

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "fpsz/errors.hpp"
#include "fpsz/laws.hpp"
#include "fpsz/scalar.hpp"
#include "fpsz/words.hpp"

namespace fpsz {

// n marginal laws declared mutually free.
class FreeFamily {
 public:
  FreeFamily(std::vector<MarginalLaw> marginals, Backend backend);

  int size() const { return static_cast<int>(marginals_.size()); }
  // 1-based, matching x1..xn.
  const MarginalLaw& marginal(int variable) const {
    return marginals_.at(static_cast<std::size_t>(variable - 1));
  }
  std::span<const MarginalLaw> marginals() const { return marginals_; }
  std::span<const VariableKind> kinds() const { return kinds_; }
  Backend backend() const { return backend_; }
  bool exact_capable() const;
  bool all_self_adjoint() const;

 private:
  std::vector<MarginalLaw> marginals_;
  std::vector<VariableKind> kinds_;
  Backend backend_;
};

// Traces of words in a free family, computed from the marginal moments alone.
// For a canonical word with alternating blocks y_1..y_m (m >= 2), expanding
// 0 = tau(prod_j (y_j - tau(y_j))) gives
//   tau(y_1...y_m) = -sum_{S strict subset} (-1)^{m-|S|} prod_{j not in S} tau(y_j) tau(y_S),
// where y_S is the re-canonicalized product of the kept blocks. Only blocks
// with tau(y_j) != 0 can be dropped, which keeps the sum small for centred
// marginals. Results are memoized per canonical word.
//
// T is Rational or double for all-self-adjoint families, ComplexRational or
// std::complex<double> otherwise. Safe for concurrent use.
template <class T>
class MomentEngine {
 public:
  explicit MomentEngine(const FreeFamily& family, bool use_cache = true)
      : family_(family), use_cache_(use_cache) {
    if constexpr (Field<T>::exact) {
      if (!family.exact_capable())
        throw BackendMismatch("rational backend requires rational-parameter laws");
    }
    if constexpr (!Field<T>::complex) {
      if (!family.all_self_adjoint())
        throw BackendMismatch("family with unitary variables needs a complex scalar type");
    }
    marginal_cache_.resize(static_cast<std::size_t>(family.size()));
  }

  MomentEngine(const MomentEngine&) = delete;
  MomentEngine& operator=(const MomentEngine&) = delete;

  const FreeFamily& family() const { return family_; }

  T marginal_moment(int variable, int exponent) const {
    auto& table = marginal_cache_[static_cast<std::size_t>(variable - 1)];
    {
      std::shared_lock lock(mutex_);
      if (auto it = table.find(exponent); it != table.end()) return it->second;
    }
    T value = family_.marginal(variable).template moment<T>(exponent);
    std::unique_lock lock(mutex_);
    table.try_emplace(exponent, value);
    return value;
  }

  T mixed_moment(const Word& w) const {
    if (w.block_count() == 0) return Field<T>::one();
    if (w.block_count() == 1) {
      const Letter& l = w.blocks().front();
      return marginal_moment(l.variable, l.exponent);
    }
    if (use_cache_) {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(w); it != cache_.end()) return it->second;
    }
    T value = expand(w);
    if (use_cache_) {
      std::unique_lock lock(mutex_);
      cache_.try_emplace(w, value);
    }
    return value;
  }

  // tau(x_a^* x_b)
  T gram_entry(const Word& a, const Word& b) const {
    return mixed_moment(concat(star(a, family_.kinds()), b));
  }

  std::size_t cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

 private:
  T expand(const Word& w) const {
    auto blocks = w.blocks();
    const std::size_t m = blocks.size();
    std::vector<T> means;
    std::vector<std::size_t> droppable;  // blocks with nonzero trace
    means.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
      means.push_back(marginal_moment(blocks[j].variable, blocks[j].exponent));
      if (!Field<T>::is_zero(means.back())) droppable.push_back(j);
    }
    const std::size_t d = droppable.size();
    if (d >= 63) throw Error("word has too many non-centred blocks: " + to_string(w));

    T sum = Field<T>::zero();
    std::vector<Letter> kept;
    std::vector<bool> dropped(m);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
      T coeff = Field<T>::one();
      std::fill(dropped.begin(), dropped.end(), false);
      int dropped_count = 0;
      for (std::size_t b = 0; b < d; ++b) {
        if ((mask >> b) & 1U) {
          dropped[droppable[b]] = true;
          coeff *= means[droppable[b]];
          ++dropped_count;
        }
      }
      kept.clear();
      for (std::size_t j = 0; j < m; ++j)
        if (!dropped[j]) kept.push_back(blocks[j]);
      T term = coeff * mixed_moment(Word::canonical(w.generators(), kept));
      if (dropped_count % 2 == 0) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    return -sum;
  }

  const FreeFamily& family_;
  bool use_cache_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Word, T, WordHash> cache_;
  mutable std::vector<std::unordered_map<int, T>> marginal_cache_;
};

}  // namespace fpsz
