#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/decomp.hpp"
#include "symdyn/oracle.hpp"
#include "symdyn/potential.hpp"
#include "symdyn/thermo.hpp"
#include "symdyn/word.hpp"
#include "symdyn/word_set.hpp"

namespace symdyn {

struct SyncTriple {
  Word r;
  Word c;
  Word s;
  std::size_t tau = 0;
  std::size_t cert_depth = 0;
  bool no_long_overlaps = false;
  std::vector<std::string> notes;

  Word rcs() const { return concat(r, c, s); }
};

struct SyncOptions {
  std::size_t tau = 0;
  std::size_t cert_depth = 10;
  std::optional<Word> seed_v;  // s starts with seed_v
  std::optional<Word> seed_w;  // r ends with seed_w
  std::size_t seed_length = 1; // default seeds: least G-words of this length
  std::size_t max_rounds = 64;
};

// Throws not-specified when [I] fails for (G, tau) at cert_depth, cert-exhausted when the
// refinement cannot be completed inside cert_depth.
SyncTriple find_sync_triple(const WordSet& G, const SyncOptions& options);

// Exhaustive r' in Lr n G, s' in sL n G, |r'|, |s'| <= depth: r' c s' in G. Returns the
// first failing pair if any.
std::optional<std::pair<Word, Word>> verify_sync_triple(const WordSet& G, const SyncTriple& t, std::size_t depth);

// The first 1 <= k <= max(|rc|, |cs|) with [rcs] n shift^{-k}[rcs] nonempty, if any.
std::optional<std::size_t> first_long_overlap(const LanguageOracle& oracle, const SyncTriple& t);

struct OverlapSearch {
  std::size_t ell = 0;    // #G_{ell m - |c|} >= 2^m on the enumerated range
  double alpha = 0.0;     // alpha * ell * log k < log 2
  std::size_t search_depth = 0;
  std::size_t candidates = 0;
};

// Returns t unchanged (flagged) if it already has no long overlaps; otherwise extends it to
// (v u p, c, q u' w). Throws periodic-G when G lies on a single periodic orbit.
SyncTriple ensure_no_long_overlaps(const SyncTriple& t, const WordSet& G, std::size_t search_depth = 12,
                                   OverlapSearch* info = nullptr);

// True when every enumerated G-word up to depth is a factor of one periodic sequence.
bool g_is_periodic(const WordSet& G, std::size_t depth);

struct FreeFamily {
  WordSet F;
  WordSet I;                   // F \ FF
  std::vector<Word> irreducibles;  // I_{<= depth}, shortlex
  std::size_t depth = 0;
  std::size_t gcd_lengths = 0;
};

// F = c (sL n Lr n G).
FreeFamily build_free_family(const SyncTriple& t, const WordSet& G, std::size_t depth);
// User-supplied F.
FreeFamily build_free_family(const WordSet& F, std::size_t depth);

struct UdVerdict {
  bool pass = false;
  std::size_t code_words = 0;
  std::size_t dangling_suffixes = 0;
  Word witness;                 // word with two factorisations when pass is false
  std::vector<Word> factorisation_a;
  std::vector<Word> factorisation_b;
};
// Sardinas-Patterson on the finite list (duplicates and the empty word are rejected).
UdVerdict is_uniquely_decipherable(const std::vector<Word>& code);
UdVerdict is_uniquely_decipherable(const WordSet& I, std::size_t depth);

// Number of factorisations of w into code words.
double factorisation_count(const std::vector<Word>& code, WordView w);

class TowerGraph {
 public:
  struct Vertex {
    std::size_t word = 0;  // index into words()
    std::size_t k = 1;     // 1-based position
  };

  TowerGraph(std::vector<Word> irreducibles, std::size_t depth, const Word& base_word);

  const std::vector<Word>& words() const noexcept { return words_; }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<std::vector<std::size_t>>& successors() const noexcept { return succ_; }
  std::size_t edge_count() const noexcept;
  std::size_t base() const noexcept { return base_; }
  std::size_t depth() const noexcept { return depth_; }
  Symbol symbol(std::size_t vertex) const;
  std::size_t vertex_index(std::size_t word, std::size_t k) const;
  std::size_t base_length() const { return words_[vertices_[base_].word].size(); }

  // Header "# base w:1 depth D", then one "w:k -> u:j" line per edge.
  std::string edge_list(const Alphabet& alphabet) const;

 private:
  std::vector<Word> words_;
  std::vector<std::size_t> first_vertex_;
  std::vector<Vertex> vertices_;
  std::vector<std::vector<std::size_t>> succ_;
  std::size_t base_ = 0;
  std::size_t depth_ = 0;
};

TowerGraph build_tower(const std::vector<Word>& irreducibles, std::size_t depth, const Word& base_word);

struct LoopRow {
  std::size_t n = 0;
  double log_z = 0.0;       // log Z_n, -inf when there is no loop
  double log_z_star = 0.0;
  double z = 0.0;           // exp(log_z); exact counts at phi = 0
  double z_star = 0.0;
  std::optional<double> log_z_word;       // word-side sums (unique decipherability only)
  std::optional<double> log_z_star_word;
  std::optional<double> z_word;
  std::optional<double> z_star_word;
};

struct LoopTable {
  std::vector<LoopRow> rows;
  bool word_side = false;  // cross-check ran
  double tolerance = 0.0;  // |phi|_d + |v| sup|phi| + slack
  double max_log_difference = 0.0;
  std::size_t loop_gcd = 0;  // gcd of n with Z_n > 0
};

LoopTable loop_sums(const TowerGraph& tower, const Potential& phi, std::size_t n_max, double slack = 1e-9);

// Secant slope of log values between the last positive entry b and the positive entry
// nearest below ceil(b/2); 0-based vector indexed by n-1.
double loop_rate(const std::vector<double>& log_values);

struct SprReport {
  LoopTable loops;
  double rate = 0.0;       // growth rate of Z_n
  double rate_star = 0.0;  // growth rate of Z_n*
  double gap = 0.0;
  GapVerdict verdict;
  bool degenerate = false;
  std::optional<PressureReport> pressure_I;
  std::optional<PressureReport> pressure_F;
  std::vector<std::string> flags;
};
SprReport spr_diagnostic(const TowerGraph& tower, const Potential& phi, std::size_t n_max, double delta = 0.05,
                         const FreeFamily* family = nullptr);

struct MarkingReport {
  std::size_t window_length = 0;
  std::vector<std::vector<std::size_t>> maximal_sets;  // 1-based boundaries, first kMaxWitnesses
  std::size_t maximal_count = 0;
  bool truncated = false;
  bool injective_at_window = false;
  std::optional<bool> union_closed;  // when requested
};
MarkingReport marking_analysis(WordView x, const WordSet& F, bool test_union = false,
                               std::size_t node_budget = 2'000'000);

// All factors (empty word included) of the generators of length <= depth.
WordSet generator_obstruction_set(const OraclePtr& oracle, const std::vector<Word>& I, std::size_t depth);

enum class SyncMode { uniform, non_uniform };
// 1-based times i; non-uniform mode adds w_{[1,i]} in G and w_{(i+|c|,|w|]} in G.
std::vector<std::size_t> sync_times(WordView w, const SyncTriple& t, const WordSet* G, SyncMode mode);
WordSet sync_obstruction_set(const SyncTriple& t, const WordSet& G, SyncMode mode);

struct EFractionRow {
  std::size_t n = 0;
  double log_e = 0.0;
  double log_l = 0.0;
  double fraction = 0.0;
};
std::vector<EFractionRow> e_fraction_table(const SyncTriple& t, const WordSet& G, SyncMode mode, std::size_t n_from,
                                           std::size_t n_to);

}  // namespace symdyn
