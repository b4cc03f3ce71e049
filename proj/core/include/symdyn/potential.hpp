#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/oracle.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

struct HolderData {
  double beta = 0.0;
  double constant = 0.0;
};

// Locally constant potential reading coordinates 0..r-1. Values are indexed by the
// base-k code of the window (first symbol most significant); unset entries are NaN.
class Potential {
 public:
  Potential() = default;
  Potential(std::size_t k, std::size_t range, std::vector<double> values);

  static Potential zero(std::size_t k);
  static Potential constant(std::size_t k, std::size_t range, double c);
  // t on windows equal to pattern, 0 elsewhere.
  static Potential indicator(std::size_t k, const Word& pattern, double t);

  std::size_t k() const noexcept { return k_; }
  std::size_t range() const noexcept { return range_; }
  bool is_zero() const noexcept { return zero_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double value(WordView window) const;
  double value_code(std::size_t code) const { return values_[code]; }
  double max_value() const noexcept { return max_; }
  double min_value() const noexcept { return min_; }
  double sup_abs() const noexcept;

  std::optional<HolderData> holder;

  // Throws invalid_argument if some admissible length-r word has no value.
  void check_total(const LanguageOracle& oracle) const;

 private:
  std::size_t k_ = 0;
  std::size_t range_ = 1;
  std::vector<double> values_;
  double max_ = 0.0;
  double min_ = 0.0;
  bool zero_ = true;
};

// |S_n phi(x) - S_n phi(y)| <= result for x,y in a common n-cylinder.
double distortion_bound(const Potential& phi);

// Sup of S_{|w|} phi over the cylinder [w]; 0 for the empty word.
double phi_hat(const Potential& phi, const LanguageOracle& oracle, WordView w);

// Birkhoff sum S_{|p|} phi at the periodic point p^infinity.
double periodic_sum(const Potential& phi, WordView p);

// Tail of phi_hat: max over admissible completions v (|v| = r-1) from DFA state q of
// the windows starting in the last min(|w|, r-1) positions of w, given those symbols.
class TailTable {
 public:
  TailTable(const Potential& phi, const LanguageOracle& oracle);
  // suffix: the last min(len, r-1) symbols of the word; q: its end state.
  double tail(Dfa::State q, WordView suffix) const;
  // Sum of the windows lying entirely inside w.
  static double interior(const Potential& phi, WordView w);

 private:
  const Potential* phi_;
  const LanguageOracle* oracle_;
  std::vector<Word> completions_;  // all words of length r-1
};

}  // namespace symdyn
