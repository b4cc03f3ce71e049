#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/oracle.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

struct SftSpec {
  Alphabet alphabet;
  std::vector<Word> forbidden;
  std::size_t memory() const;
};

OraclePtr sft_from_forbidden(const SftSpec& spec, const OracleOptions& options = {});

struct SftEntropy {
  double value = 0.0;
  bool row_sum_exact = false;  // constant row sums: value is log of that sum
  std::size_t iterations = 0;
};
SftEntropy sft_entropy(const SftSpec& spec);
inline double sft_entropy_exact(const SftSpec& spec) { return sft_entropy(spec).value; }

// Symbols 1..k with transitions a -> a+1, a+2 (mod k).
SftSpec cycle_sft_spec(std::size_t k);
OraclePtr cycle_sft(std::size_t k, const OracleOptions& options = {});

struct BetaExpansion {
  Word digits;                           // first n digits of the quasi-greedy z
  std::optional<Word> period;            // z = period^infinity when the greedy expansion terminates
  std::optional<std::size_t> snapped_at; // index where a remainder within tolerance was taken as 0
};

BetaExpansion quasi_greedy(double beta, std::size_t n, double tolerance = 1e-12);
inline Word quasi_greedy_expansion(double beta, std::size_t n) { return quasi_greedy(beta, n).digits; }

struct BetaSpec {
  std::optional<double> beta;
  // Explicit driving sequence z = preperiod . period^infinity (digits).
  std::optional<Word> preperiod;
  std::optional<Word> period;
  double tolerance = 1e-12;
};

OraclePtr beta_shift(const BetaSpec& spec, const OracleOptions& options = {});

struct SGapSpec {
  std::vector<std::size_t> S;              // explicit members
  std::optional<std::size_t> cofinite_from; // all n >= this value are also in S
  bool contains(std::size_t n) const;
  bool has_at_least(std::size_t n) const;   // some s in S with s >= n
};

OraclePtr s_gap_shift(const SGapSpec& spec, const OracleOptions& options = {});

struct CodedSpec {
  Alphabet alphabet;
  std::vector<Word> generators;
  bool truncated = false;  // generators are a truncation of an infinite set
};

OraclePtr coded_shift(const CodedSpec& spec, const OracleOptions& options = {});

struct Rational {
  long long num = 0;
  long long den = 1;
};
using RationalMatrix = std::vector<std::vector<Rational>>;

struct CocyclicSpec {
  Alphabet alphabet;
  std::vector<RationalMatrix> matrices;  // one d x d matrix per symbol
};

OraclePtr cocyclic_shift(const CocyclicSpec& spec, const OracleOptions& options = {});

struct BlockCode {
  std::size_t radius = 0;
  Alphabet target;
  // theta indexed by the base-k code of the source window of length 2m+1; kUndefined marks gaps.
  std::vector<Symbol> table;
  static constexpr Symbol kUndefined = 255;
};

OraclePtr sliding_block_factor(const OraclePtr& source, const BlockCode& code,
                               const OracleOptions& options = {});

}  // namespace symdyn
