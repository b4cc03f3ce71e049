#include "symdyn/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "symdyn/error.hpp"
#include "symdyn/logsum.hpp"
#include "symdyn/parallel.hpp"

namespace symdyn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLn2 = 0.69314718055994530942;

using DpKey = std::pair<Dfa::State, Word>;

// Sum (or max) of e^{phi_hat(w)} over L_n by dynamic programming over (state, last r-1
// symbols). forced[t] >= 0 pins position t to that symbol.
// Sum mode keeps values as doubles times 2^e2 times e^{offset}, rescaled by exact powers
// of two, so zero potentials give exact integer counts.
double language_dp(const LanguageOracle& oracle, const Potential& phi, std::size_t n,
                   const std::vector<int>& forced, bool max_mode) {
  if (n > oracle.certified_depth())
    throw Error(ErrorKind::depth_exceeded, "length " + std::to_string(n) + " beyond certified depth");
  if (phi.k() != oracle.k()) throw Error(ErrorKind::invalid_argument, "potential alphabet size differs from shift");
  const std::size_t r = phi.range();
  const std::size_t m = r - 1;
  const std::size_t k = oracle.k();
  const Dfa& dfa = oracle.dfa();
  const bool zero = phi.is_zero();
  const double top = zero ? 0.0 : phi.max_value();

  std::map<DpKey, double> cur, nxt;
  cur[{0, Word{}}] = max_mode ? 0.0 : 1.0;
  double offset = 0.0;
  long e2 = 0;
  for (std::size_t t = 0; t < n; ++t) {
    nxt.clear();
    const bool full_window = t >= m;
    for (const auto& [key, val] : cur) {
      const auto& [q, suf] = key;
      for (std::size_t a = 0; a < k; ++a) {
        if (forced[t] >= 0 && static_cast<std::size_t>(forced[t]) != a) continue;
        Dfa::State q2 = dfa.next(q, static_cast<Symbol>(a));
        if (q2 == Dfa::kUnexplored) throw Error(ErrorKind::depth_exceeded, "sum beyond certified depth");
        if (q2 < 0) continue;
        Word window = suf;
        window.push_back(static_cast<Symbol>(a));
        double contrib = val;
        if (full_window) {
          double x = zero ? 0.0 : phi.value(window);
          if (std::isnan(x)) throw Error(ErrorKind::invalid_argument, "potential undefined on an admissible window");
          if (max_mode)
            contrib = val + x;
          else if (!zero)
            contrib = val * std::exp(x - top);
          window.erase(window.begin());
        }
        auto [it, fresh] = nxt.emplace(DpKey{q2, std::move(window)}, contrib);
        if (!fresh) it->second = max_mode ? std::max(it->second, contrib) : it->second + contrib;
      }
    }
    if (full_window && !max_mode) offset += top;
    cur.swap(nxt);
    if (!max_mode) {
      double big = 0.0;
      for (const auto& kv : cur) big = std::max(big, kv.second);
      if (big > 0x1p500 || (big > 0.0 && big < 0x1p-500)) {
        int e = 0;
        std::frexp(big, &e);
        for (auto& kv : cur) kv.second = std::ldexp(kv.second, -e);
        e2 += e;
      }
    }
  }
  if (cur.empty()) return kNegInf;
  TailTable tails(phi, oracle);
  if (max_mode) {
    double best = kNegInf;
    for (const auto& [key, val] : cur) best = std::max(best, val + (zero ? 0.0 : tails.tail(key.first, key.second)));
    return best;
  }
  std::vector<double> tail_values;
  double tail_top = kNegInf;
  for (const auto& [key, val] : cur) {
    double tv = zero ? 0.0 : tails.tail(key.first, key.second);
    tail_values.push_back(tv);
    tail_top = std::max(tail_top, tv);
  }
  double total = 0.0, comp = 0.0;
  std::size_t idx = 0;
  for (const auto& kv : cur) {
    double v = zero ? kv.second : kv.second * std::exp(tail_values[idx] - tail_top);
    ++idx;
    double s = total + v;
    comp += std::fabs(total) >= std::fabs(v) ? (total - s) + v : (v - s) + total;
    total = s;
  }
  total += comp;
  if (total <= 0.0) return kNegInf;
  return std::log(total) + static_cast<double>(e2) * kLn2 + offset + (zero ? 0.0 : tail_top);
}

// Prefix length for work splitting; depends on the oracle only, never on the thread count.
std::size_t chunk_prefix_length(const LanguageOracle& oracle, std::size_t n) {
  std::size_t p = 0;
  while (p < n && oracle.count(p) < 64.0) ++p;
  return p;
}

double enumerated_log_sum(const WordSet& set, const Potential& phi, std::size_t n) {
  const LanguageOracle& oracle = set.oracle();
  oracle.check_depth(n);
  const std::size_t p = chunk_prefix_length(oracle, n);
  const std::vector<Word> prefixes = oracle.enumerate(p);
  std::vector<LogSum> partial(prefixes.size());
  const bool zero = phi.is_zero();
  TailTable tails(phi, oracle);
  const std::size_t m = phi.range() - 1;
  parallel_for(prefixes.size(), [&](std::size_t c) {
    LogSum acc;
    set.for_each_extending(prefixes[c], n, [&](WordView w) {
      if (zero) {
        acc.add_log(0.0);
        return;
      }
      Dfa::State q = oracle.dfa().run(w);
      const std::size_t s = std::min(w.size(), m);
      acc.add_log(TailTable::interior(phi, w) + tails.tail(q, w.subspan(w.size() - s)));
    });
    partial[c] = acc;
  });
  LogSum total;
  for (const LogSum& part : partial) total.merge(part);
  return total.log();
}

}  // namespace

double log_partition_sum(const WordSet& set, const Potential& phi, std::size_t n) {
  if (n == 0) return set.contains(Word{}) ? 0.0 : kNegInf;
  if (set.is_language()) return language_dp(set.oracle(), phi, n, std::vector<int>(n, -1), false);
  return enumerated_log_sum(set, phi, n);
}

double partition_sum(const WordSet& set, const Potential& phi, std::size_t n) {
  return std::exp(log_partition_sum(set, phi, n));
}

double log_cylinder_sum(const LanguageOracle& oracle, const Potential& phi, WordView v, std::size_t i,
                        std::size_t n) {
  if (i < 1 || i + v.size() - 1 > n) throw Error(ErrorKind::invalid_argument, "cylinder position out of range");
  std::vector<int> forced(n, -1);
  for (std::size_t j = 0; j < v.size(); ++j) forced[i - 1 + j] = v[j];
  return language_dp(oracle, phi, n, forced, false);
}

double max_phi_hat(const LanguageOracle& oracle, const Potential& phi, std::size_t n) {
  if (n == 0) return 0.0;
  return language_dp(oracle, phi, n, std::vector<int>(n, -1), true);
}

double secant_rate(const std::vector<double>& log_values, std::size_t b) {
  if (b == 0 || b >= log_values.size()) return kNaN;
  const double yb = log_values[b];
  const std::size_t a = (b + 1) / 2;
  if (b < 2 || a == b || !std::isfinite(yb) || !std::isfinite(log_values[a])) return yb / static_cast<double>(b);
  return (yb - log_values[a]) / static_cast<double>(b - a);
}

PressureReport pressure_estimate(const WordSet& set, const Potential& phi, std::size_t n_max) {
  if (n_max < 1) throw Error(ErrorKind::invalid_argument, "n_max must be positive");
  PressureReport rep;
  rep.full_language = set.is_language();
  rep.distortion = distortion_bound(phi);
  std::vector<double> logs(n_max + 1, 0.0);
  double running = std::numeric_limits<double>::infinity();
  bool empty_row = false;
  for (std::size_t n = 1; n <= n_max; ++n) {
    PressureRow row;
    row.n = n;
    row.log_sum = log_partition_sum(set, phi, n);
    logs[n] = row.log_sum;
    row.rate = row.log_sum / static_cast<double>(n);
    if (!std::isfinite(row.log_sum)) empty_row = true;
    if (rep.full_language) {
      running = std::min(running, row.rate);
      row.upper_bound = running;
    } else {
      row.upper_bound = kNaN;
    }
    rep.table.push_back(row);
  }
  rep.last_rate = rep.table.back().rate;
  rep.point_estimate = secant_rate(logs, n_max);
  if (rep.full_language) {
    rep.fekete_upper = running;
    if (*rep.fekete_upper < rep.point_estimate - 1e-12 * std::max(1.0, std::fabs(rep.point_estimate)))
      rep.flags.push_back("fekete-below-estimate");
  }
  if (empty_row) rep.flags.push_back("empty-rows");
  return rep;
}

GapVerdict margin_rule(const PressureReport& sub, const PressureReport& full, double delta) {
  GapVerdict v;
  const std::size_t n_max = std::min(sub.table.size(), full.table.size());
  v.from_n = n_max / 2 + 1;
  v.to_n = n_max;
  v.pass = n_max > 0;
  v.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t n = v.from_n; n <= n_max; ++n) {
    double g = full.table[n - 1].rate - sub.table[n - 1].rate;
    v.min_gap = std::min(v.min_gap, g);
    if (!(g >= delta)) v.pass = false;
  }
  return v;
}

CylinderTable cylinder_count_table(const OraclePtr& oracle, const Potential& phi, const Word& v, std::size_t n,
                                   std::optional<double> pressure) {
  if (!oracle->contains(v)) throw Error(ErrorKind::not_in_language, "'" + oracle->alphabet().format(v) + "'");
  if (v.empty() || v.size() >= n) throw Error(ErrorKind::invalid_argument, "need 1 <= |v| < n");
  CylinderTable out;
  out.n = n;
  out.v = v;
  out.pressure = pressure ? *pressure : pressure_estimate(WordSet::language(oracle), phi, n).point_estimate;
  const double base = static_cast<double>(n - v.size()) * out.pressure + phi_hat(phi, *oracle, v);
  double lo = std::numeric_limits<double>::infinity(), hi = kNegInf;
  for (std::size_t i = 1; i + v.size() <= n; ++i) {
    CylinderRow row;
    row.i = i;
    row.log_sum = log_cylinder_sum(*oracle, phi, v, i, n);
    row.count = std::exp(row.log_sum);
    row.log_ratio = row.log_sum - base;
    if (std::isfinite(row.log_sum)) {
      lo = std::min(lo, row.log_ratio);
      hi = std::max(hi, row.log_ratio);
    }
    out.rows.push_back(row);
  }
  out.min_ratio = std::exp(lo);
  out.max_ratio = std::exp(hi);
  return out;
}

bool is_periodic_admissible(const LanguageOracle& oracle, WordView p, bool* exact) {
  if (exact) *exact = true;
  if (p.empty()) return false;
  const Dfa& dfa = oracle.dfa();
  std::set<Dfa::State> seen;
  Dfa::State q = 0;
  while (true) {
    Dfa::State t = dfa.run(p, q);
    if (t == Dfa::kDead) return false;
    if (t == Dfa::kUnexplored) {
      if (exact) *exact = false;
      return true;
    }
    if (!seen.insert(t).second) return true;
    q = t;
  }
}

PeriodicPoints periodic_points(const LanguageOracle& oracle, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "period must be >= 1");
  PeriodicPoints out;
  oracle.for_each(n, [&](WordView w, Dfa::State) {
    bool ex = true;
    if (is_periodic_admissible(oracle, w, &ex)) out.words.emplace_back(w.begin(), w.end());
    out.exact = out.exact && ex;
  });
  return out;
}

double PeriodicMeasure::invariance_defect() const {
  if (depth < 2) return 0.0;
  std::map<Word, double> left, right;
  for (const auto& [w, x] : cylinder_weights) {
    left[Word(w.begin(), w.end() - 1)] += x;
    right[Word(w.begin() + 1, w.end())] += x;
  }
  double worst = 0.0;
  for (const auto& [u, x] : left) {
    auto it = right.find(u);
    worst = std::max(worst, std::fabs(x - (it == right.end() ? 0.0 : it->second)));
  }
  for (const auto& [u, x] : right)
    if (!left.count(u)) worst = std::max(worst, std::fabs(x));
  return worst;
}

PeriodicMeasure periodic_orbit_measure(const LanguageOracle& oracle, const Potential& phi, std::size_t n,
                                       std::size_t d) {
  if (d < 1 || n < d) throw Error(ErrorKind::invalid_argument, "need n >= d >= 1");
  PeriodicMeasure mu;
  mu.n = n;
  mu.depth = d;
  std::vector<double> sums;
  LogSum norm;
  for (std::size_t k = 1; k <= n; ++k) {
    PeriodicPoints per = periodic_points(oracle, k);
    mu.exact = mu.exact && per.exact;
    for (Word& p : per.words) {
      double s = periodic_sum(phi, p);
      norm.add_log(s);
      sums.push_back(s);
      mu.atoms.push_back({std::move(p), k, 0.0});
    }
  }
  if (mu.atoms.empty()) throw Error(ErrorKind::no_periodic_points, "no periodic points of period <= " + std::to_string(n));
  const double z = norm.log();
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    PeriodicAtom& a = mu.atoms[i];
    a.weight = std::exp(sums[i] - z);
    Word cyl(d);
    for (std::size_t j = 0; j < d; ++j) cyl[j] = a.p[j % a.p.size()];
    mu.cylinder_weights[cyl] += a.weight;
  }
  return mu;
}

HyperbolicityReport hyperbolicity_diagnostic(const OraclePtr& oracle, const Potential& phi, std::size_t n_max) {
  if (n_max < 4) throw Error(ErrorKind::invalid_argument, "n_max must be >= 4");
  HyperbolicityReport rep;
  PressureReport pr = pressure_estimate(WordSet::language(oracle), phi, n_max);
  std::vector<double> logs(n_max + 1, 0.0), sups(n_max + 1, 0.0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    logs[n] = pr.table[n - 1].log_sum;
    sups[n] = max_phi_hat(*oracle, phi, n);
  }
  for (std::size_t n = 1; n <= n_max; ++n) {
    HyperbolicityRow row;
    row.n = n;
    row.sup_rate = sups[n] / static_cast<double>(n);
    row.rate = pr.table[n - 1].rate;
    row.gap = secant_rate(logs, n) - secant_rate(sups, n);
    rep.table.push_back(row);
  }
  rep.pressure_estimate = pr.point_estimate;
  rep.sup_rate_estimate = secant_rate(sups, n_max);
  const std::size_t start = n_max - n_max / 4;
  bool positive = true;
  for (std::size_t n = start; n <= n_max; ++n) positive = positive && rep.table[n - 1].gap > 1e-9;
  const double first = rep.table[start - 1].gap;
  const double last = rep.table[n_max - 1].gap;
  rep.hyperbolic = positive && last >= 0.95 * first;
  return rep;
}

double entropy_function(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return -t * std::log(t) - (1.0 - t) * std::log(1.0 - t);
}

BinomialBound binomial_entropy_bound(std::size_t n, std::size_t l) {
  if (l > n || n > 120) throw Error(ErrorKind::invalid_argument, "need l <= n <= 120");
  unsigned __int128 c = 1;
  for (std::size_t i = 0; i < l; ++i) c = c * (n - i) / (i + 1);
  BinomialBound b;
  b.log_binomial = std::log(static_cast<long double>(c));
  const double t = n == 0 ? 0.0 : static_cast<double>(l) / static_cast<double>(n);
  b.log_bound = std::log(static_cast<double>(n + 1)) + entropy_function(t) * static_cast<double>(n) + 1.0;
  b.holds = b.log_binomial <= b.log_bound;
  return b;
}

}  // namespace symdyn
