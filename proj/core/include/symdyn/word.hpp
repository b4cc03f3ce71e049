#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symdyn {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

// 1-indexed inclusive range w_{[i,j]}; empty when j < i.
Word subword(WordView w, std::size_t i, std::size_t j);
Word prefix(WordView w, std::size_t n);
Word suffix(WordView w, std::size_t n);
Word concat(WordView a, WordView b);
Word concat(WordView a, WordView b, WordView c);
Word power(WordView w, std::size_t times);

bool starts_with(WordView w, WordView p);
bool ends_with(WordView w, WordView s);
bool contains_factor(WordView w, WordView f);
// x_{i+k} = x_i wherever both are defined.
bool has_period(WordView w, std::size_t k);

inline bool same(WordView a, WordView b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

// Shortlex: shorter first, then lexicographic.
struct ShortLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

class Alphabet {
 public:
  Alphabet() = default;
  // Separator defaults to "" when every symbol is a single character, "," otherwise.
  explicit Alphabet(std::vector<std::string> symbols);
  Alphabet(std::vector<std::string> symbols, std::string separator);

  static Alphabet digits(std::size_t k);                      // "0".."k-1"
  static Alphabet numbered(std::size_t first, std::size_t k);  // first..first+k-1

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& symbol(Symbol a) const { return symbols_.at(a); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::string& separator() const noexcept { return separator_; }
  int index_of(std::string_view s) const;

  std::string format(WordView w) const;
  Word parse(std::string_view text) const;  // throws invalid_argument

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> symbols_;
  std::string separator_;
};

}  // namespace symdyn
