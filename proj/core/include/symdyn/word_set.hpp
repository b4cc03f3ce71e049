#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/oracle.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

// A collection D inside the language of a backing oracle, enumerable per length.
class WordSet {
 public:
  using Predicate = std::function<bool(WordView)>;

  WordSet() = default;

  static WordSet language(OraclePtr oracle);
  // Members of L satisfying pred. If viable is given, viable(prefix) == false means no
  // extension of prefix is a member, and enumeration prunes there.
  static WordSet filter(OraclePtr oracle, Predicate pred, std::string label,
                        Predicate viable = nullptr);
  // Finite explicit set; throws not-in-language for words outside L.
  static WordSet finite(OraclePtr oracle, std::vector<Word> words, std::string label);
  static WordSet empty(OraclePtr oracle);
  // Words of L accepted by sub (run from its start state) ending in an accepting state.
  static WordSet regular(OraclePtr oracle, std::shared_ptr<const Dfa> sub,
                         std::vector<bool> accepting, std::string label);
  // (A)^* inside L, empty word included; membership by split DP.
  static WordSet star(const WordSet& base, std::string label);

  WordSet unite(const WordSet& other, std::string label) const;
  WordSet intersect(const WordSet& other, std::string label) const;
  WordSet minus(const WordSet& other, std::string label) const;
  // Members of length >= n.
  WordSet at_least(std::size_t n, std::string label) const;
  // Same set with a thread-safe membership cache.
  WordSet memoized() const;

  bool contains(WordView w) const;
  void for_each(std::size_t n, const std::function<void(WordView)>& fn) const;
  // Members of length n that start with prefix, in lexicographic order.
  void for_each_extending(WordView prefix, std::size_t n, const std::function<void(WordView)>& fn) const;
  std::vector<Word> words(std::size_t n) const;
  std::vector<Word> words_up_to(std::size_t n) const;  // shortlex
  std::size_t count(std::size_t n) const;

  const LanguageOracle& oracle() const { return *oracle_; }
  const OraclePtr& oracle_ptr() const noexcept { return oracle_; }
  const std::string& label() const noexcept { return label_; }
  bool is_language() const noexcept { return kind_ == Kind::language; }
  bool is_finite() const noexcept { return kind_ == Kind::finite; }
  bool is_regular() const noexcept { return kind_ == Kind::regular; }
  const Dfa* sub_dfa() const noexcept { return sub_.get(); }
  const std::vector<bool>& accepting() const noexcept { return accepting_; }
  // Longest member for finite sets.
  std::optional<std::size_t> max_length() const;

 private:
  enum class Kind { language, predicate, finite, regular };

  Kind kind_ = Kind::predicate;
  OraclePtr oracle_;
  Predicate pred_;
  Predicate viable_;
  std::shared_ptr<const std::vector<std::vector<Word>>> by_length_;
  std::shared_ptr<const Dfa> sub_;
  std::vector<bool> accepting_;
  std::string label_;
};

}  // namespace symdyn
