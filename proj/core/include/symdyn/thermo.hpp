#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/oracle.hpp"
#include "symdyn/potential.hpp"
#include "symdyn/word.hpp"
#include "symdyn/word_set.hpp"

namespace symdyn {

// log Lambda_n(D, phi); -inf when D_n is empty.
double log_partition_sum(const WordSet& set, const Potential& phi, std::size_t n);
double partition_sum(const WordSet& set, const Potential& phi, std::size_t n);

// Same sum over L_n restricted to words with w_{[i, i+|v|)} = v (i is 1-indexed).
double log_cylinder_sum(const LanguageOracle& oracle, const Potential& phi, WordView v, std::size_t i,
                        std::size_t n);

// max over w in L_n of phi_hat(w), i.e. sup_x S_n phi(x); -inf if L_n is empty.
double max_phi_hat(const LanguageOracle& oracle, const Potential& phi, std::size_t n);

struct PressureRow {
  std::size_t n = 0;
  double log_sum = 0.0;     // log Lambda_n
  double rate = 0.0;        // (1/n) log Lambda_n
  double upper_bound = 0.0; // min_{m <= n} rate_m for the full language, NaN otherwise
};

struct PressureReport {
  std::vector<PressureRow> table;
  bool full_language = false;
  std::optional<double> fekete_upper;  // inf_m (1/m) log Lambda_m, full language only
  double point_estimate = 0.0;         // secant slope over the top half of the table
  double last_rate = 0.0;              // (1/n_max) log Lambda_{n_max}
  double distortion = 0.0;             // |phi|_d
  std::vector<std::string> flags;
};

PressureReport pressure_estimate(const WordSet& set, const Potential& phi, std::size_t n_max);

// Slope (y_b - y_a) / (b - a) with a = ceil(b/2); falls back to y_b / b.
double secant_rate(const std::vector<double>& log_values, std::size_t b);

// Margin rule: (1/n) log Lambda_n(C) <= (1/n) log Lambda_n(L) - delta for all n in the top
// half of the common table.
struct GapVerdict {
  bool pass = false;
  double min_gap = 0.0;  // min over the checked rows of rate_L - rate_C
  std::size_t from_n = 0;
  std::size_t to_n = 0;
};
GapVerdict margin_rule(const PressureReport& sub, const PressureReport& full, double delta);

struct CylinderRow {
  std::size_t i = 0;
  double log_sum = 0.0;
  double count = 0.0;      // Lambda_n(H_n(v,i), phi)
  double log_ratio = 0.0;  // log of the normalised Gibbs ratio
};
struct CylinderTable {
  std::size_t n = 0;
  Word v;
  double pressure = 0.0;  // estimate used for normalisation
  std::vector<CylinderRow> rows;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};
// pressure: estimate P-hat; if absent, pressure_estimate(L, phi, n) supplies it.
CylinderTable cylinder_count_table(const OraclePtr& oracle, const Potential& phi, const Word& v, std::size_t n,
                                   std::optional<double> pressure = std::nullopt);

struct PeriodicPoints {
  std::vector<Word> words;  // p with p^infinity admissible, lexicographic
  bool exact = true;        // false: repetition checked only to a finite depth
};
PeriodicPoints periodic_points(const LanguageOracle& oracle, std::size_t n);
bool is_periodic_admissible(const LanguageOracle& oracle, WordView p, bool* exact = nullptr);

struct PeriodicAtom {
  Word p;
  std::size_t period = 0;
  double weight = 0.0;
};
struct PeriodicMeasure {
  std::size_t n = 0;
  std::size_t depth = 0;
  std::vector<PeriodicAtom> atoms;
  std::map<Word, double> cylinder_weights;  // words of length depth
  bool exact = true;
  // Largest deviation between the two depth-1 marginals.
  double invariance_defect() const;
};
PeriodicMeasure periodic_orbit_measure(const LanguageOracle& oracle, const Potential& phi, std::size_t n,
                                       std::size_t d);

struct HyperbolicityRow {
  std::size_t n = 0;
  double sup_rate = 0.0;   // max phi_hat / n
  double rate = 0.0;       // (1/n) log Lambda_n
  double gap = 0.0;        // secant pressure minus secant sup-rate
};
struct HyperbolicityReport {
  std::vector<HyperbolicityRow> table;
  double pressure_estimate = 0.0;
  double sup_rate_estimate = 0.0;
  bool hyperbolic = false;
};
HyperbolicityReport hyperbolicity_diagnostic(const OraclePtr& oracle, const Potential& phi, std::size_t n_max);

// Standard entropy function h(t) = -t log t - (1-t) log(1-t), h(0) = h(1) = 0.
double entropy_function(double t);
// log C(n, l) and the right side log((n+1) e^{h(l/n) n + 1}).
struct BinomialBound {
  double log_binomial = 0.0;
  double log_bound = 0.0;
  bool holds = false;
};
BinomialBound binomial_entropy_bound(std::size_t n, std::size_t l);

}  // namespace symdyn
