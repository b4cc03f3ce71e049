#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/oracle.hpp"
#include "symdyn/potential.hpp"
#include "symdyn/thermo.hpp"
#include "symdyn/word.hpp"
#include "symdyn/word_set.hpp"

namespace symdyn {

// Outcome of a finite-depth check. Verdicts never claim more than the tested depth.
struct Verdict {
  std::string condition;
  std::size_t depth = 0;
  bool pass = false;
  bool depth_certified = true;
  std::size_t witness_total = 0;            // witnesses found (list may be truncated)
  std::vector<std::vector<Word>> witnesses; // lexicographic by first component
  std::map<std::string, double> parameters;
  std::vector<std::string> notes;
};

inline constexpr std::size_t kMaxWitnesses = 32;

struct TripleCollections {
  WordSet Cp;
  WordSet G;
  WordSet Cs;
  std::size_t tau = 0;
  std::optional<std::size_t> L_param;
};

struct ObstructionPair {
  WordSet Cminus;
  WordSet Cplus;
  std::size_t M = 1;
  std::map<std::size_t, std::size_t> tau_of_M;
};

// w = w_{[1,i]} . w_{(i,j]} . w_{(j,|w|]}
struct Decomposition {
  std::size_t prefix_end = 0;
  std::size_t good_end = 0;
};

Verdict check_spec_I(const TripleCollections& c, std::size_t n);
// [I'] : connector of length exactly tau.
Verdict check_strong_spec_Iprime(const TripleCollections& c, std::size_t n);

enum class StayGoodVariant { full, a, b };
Verdict check_stay_good_III(const TripleCollections& c, std::size_t n, StayGoodVariant variant = StayGoodVariant::full);

// Smallest prefix end i, then largest good end j. The G piece may be empty only if
// the empty word is in G.
std::optional<Decomposition> find_decomposition(const TripleCollections& c, WordView w);
// L \ Cp G Cs
WordSet obstruction_complement(const TripleCollections& c);

struct GapReport {
  PressureReport obstruction;  // C = Cp u Cs u (L \ Cp G Cs)
  PressureReport language;
  GapVerdict verdict;
  double delta = 0.05;
};
GapReport pressure_gap_II(const TripleCollections& c, const Potential& phi, std::size_t n_max, double delta = 0.05);

// G(C^+-, M): no prefix of length >= M in C^-, no suffix of length >= M in C^+.
WordSet good_words_from_obstructions(const ObstructionPair& pair);
WordSet good_words_from_obstructions(const WordSet& Cminus, const WordSet& Cplus, std::size_t M);

Verdict check_persistence(const ObstructionPair& pair, std::size_t n);

struct IstarReport {
  Verdict verdict;
  std::vector<std::pair<std::size_t, std::optional<std::size_t>>> tau_table;  // M -> tau(M)
};
// For each M, the least tau such that all pairs in G(C, M)_{<= n} glue into L with |u| <= tau.
IstarReport check_complete_list_Istar(const ObstructionPair& pair, const std::vector<std::size_t>& M_list,
                                      std::size_t n, std::size_t tau_max = 12);

struct CgcOptions {
  std::vector<std::size_t> M_grid{1, 2, 3, 4, 5, 6};
  std::vector<std::size_t> N_grid{1, 2, 3, 4, 5, 6, 8, 10};
  std::size_t depth = 12;        // working depth for all finite checks
  std::size_t istar_depth = 8;   // depth of the pair search giving tau(M)
  std::size_t tau_max = 12;
  double delta = 0.05;           // margin rule
};

struct CgcCandidate {
  std::size_t M = 0;
  std::size_t N = 0;
  std::optional<std::size_t> tau;
  bool hat_p_ok = false;   // finite-depth surrogates for the Step 1 inequalities
  bool gap_ok = false;
  double entropy_term = 0.0;  // h(1/M)
  double log2_over_N = 0.0;
  std::string reason;
};

struct CgcResult {
  TripleCollections collections;
  std::size_t M = 0;
  std::size_t N = 0;
  WordSet Cminus_long;  // C^-_{>=M}
  WordSet Cplus_long;   // C^+_{>=M}
  WordSet Dminus;
  WordSet Dplus;
  WordSet prefix_base;  // C^-_{>=M} u D^+_{>=N}
  WordSet suffix_base;  // C^+_{>=M} u D^-_{>=N}
  GapReport gap;
  std::vector<CgcCandidate> candidates;
};

CgcResult cgc_construct(const ObstructionPair& pair, const Potential& phi, double eps, const CgcOptions& options = {});
// Greedy left-then-right stripping; the middle piece lies in G or in D^+ u D^-.
Decomposition greedy_decompose(const CgcResult& cgc, WordView w);

// D^- = {w : wx in C^- for some x in L_{<= bound}}, D^+ = {w : xw in C^+ ...}.
WordSet extend_obstruction_minus(const WordSet& Cminus, std::size_t bound);
WordSet extend_obstruction_plus(const WordSet& Cplus, std::size_t bound);

// Left and right constraints of a shift.
class QftConstraints {
 public:
  // bound: length limit for the witness v when the presentation is not exact.
  explicit QftConstraints(OraclePtr oracle, std::size_t bound = 12);
  bool is_left(WordView w) const;
  bool is_right(WordView w) const;
  bool exact() const noexcept { return exact_; }
  WordSet left_set() const;
  WordSet right_set() const;
  const OraclePtr& oracle() const noexcept { return oracle_; }

 private:
  OraclePtr oracle_;
  std::size_t bound_;
  bool exact_;
  std::shared_ptr<const Dfa> reversed_;  // subset automaton for reversed words
};

struct QftTable {
  std::vector<std::vector<Word>> left;   // left[n-1] = C^l_n
  std::vector<std::vector<Word>> right;
  bool exact = true;
  std::vector<std::string> flags;
};
QftTable qft_constraints(const OraclePtr& oracle, std::size_t n, std::size_t bound = 12);

struct SyncResult {
  TripleCollections collections;
  Word connector;
  Verdict check;
};
// Throws not-synchronising with the witness (v, w) in the message.
SyncResult sync_decomposition(const OraclePtr& oracle, const Word& s, std::size_t depth = 10);

// F(q) is a subset of F(p): every word readable from q is readable from p. Bounded search
// when the automaton is not exact; the witness word is stored if given.
bool follower_included(const Dfa& dfa, Dfa::State q, Dfa::State p, std::size_t bound, Word* witness = nullptr);

}  // namespace symdyn
