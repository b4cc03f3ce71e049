#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/dfa.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

struct OracleOptions {
  // Largest n for explicit enumeration; default derived from #L_n <= 2^24.
  std::optional<std::size_t> depth_guard;
  // Depth to which infinite-state presentations are explored.
  std::size_t certificate_depth = 64;
  std::size_t max_states = 1u << 20;
};

// Language of a shift space, presented by a DFA whose start state reads exactly L.
class LanguageOracle {
 public:
  LanguageOracle(std::string family, Alphabet alphabet, Dfa dfa, const OracleOptions& options = {});

  const std::string& family() const noexcept { return family_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const Dfa& dfa() const noexcept { return dfa_; }
  std::size_t k() const noexcept { return alphabet_.size(); }

  // True when the presentation is finite and fully explored: every answer is exact.
  bool exact() const noexcept { return exact_; }
  std::size_t enumeration_limit() const noexcept { return limit_; }
  // Depth up to which membership is decided (unbounded when exact).
  std::size_t certified_depth() const noexcept { return certified_; }

  // Window length for window-local membership (SFTs), if known.
  std::optional<std::size_t> locality() const noexcept { return locality_; }
  void set_locality(std::size_t window) { locality_ = window; }

  const std::vector<std::string>& notes() const noexcept { return notes_; }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  bool contains(WordView w) const;
  // State after reading w, or kDead. Throws depth-exceeded past the certified depth.
  Dfa::State state_of(WordView w) const;

  std::vector<Word> enumerate(std::size_t n) const;  // throws depth-exceeded past the guard
  // Streams L_n in lexicographic order; fn receives the word and its end state.
  void for_each(std::size_t n, const std::function<void(WordView, Dfa::State)>& fn) const;
  // Exact count as double (integers exact below 2^53).
  double count(std::size_t n) const;

  void check_depth(std::size_t n) const;

 private:
  std::string family_;
  Alphabet alphabet_;
  Dfa dfa_;
  bool exact_ = false;
  std::size_t limit_ = 0;
  std::size_t certified_ = 0;
  std::optional<std::size_t> locality_;
  std::vector<std::string> notes_;
};

using OraclePtr = std::shared_ptr<const LanguageOracle>;

// Default depth guard: the largest n <= 64 with #L_n <= 2^24.
std::size_t default_depth_guard(const LanguageOracle& oracle);

}  // namespace symdyn
