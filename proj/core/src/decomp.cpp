#include "symdyn/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "symdyn/error.hpp"
#include "symdyn/parallel.hpp"

namespace symdyn {

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void add_witness(Verdict& v, std::vector<Word> w) {
  ++v.witness_total;
  if (v.witnesses.size() < kMaxWitnesses) v.witnesses.push_back(std::move(w));
}

// Runs per-index jobs in parallel and replays their witness lists in index order.
struct WitnessBuckets {
  explicit WitnessBuckets(std::size_t n) : lists(n) {}
  std::vector<std::vector<std::vector<Word>>> lists;
  void flush(Verdict& v) {
    for (auto& list : lists)
      for (auto& w : list) add_witness(v, std::move(w));
  }
};

std::vector<Word> connectors(const LanguageOracle& oracle, std::size_t tau, bool exact_length) {
  std::vector<Word> out;
  for (std::size_t len = exact_length ? tau : 0; len <= tau; ++len) {
    auto ws = oracle.enumerate(len);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

Verdict glue_check(const TripleCollections& c, std::size_t n, bool exact_length, const std::string& name) {
  const LanguageOracle& oracle = c.G.oracle();
  Verdict v;
  v.condition = name;
  v.depth = n;
  v.depth_certified = true;
  const WordSet G = c.G.memoized();
  const std::vector<Word> gs = G.words_up_to(n);
  const std::vector<Word> us = connectors(oracle, c.tau, exact_length);
  std::vector<std::size_t> need(gs.size(), 0);
  WitnessBuckets buckets(gs.size());
  parallel_for(gs.size(), [&](std::size_t i) {
    const Word& a = gs[i];
    for (const Word& b : gs) {
      bool found = false;
      for (const Word& u : us) {
        Word x = concat(a, u, b);
        if (x.size() > oracle.certified_depth())
          throw Error(ErrorKind::depth_exceeded, "glued word beyond certified depth");
        if (G.contains(x)) {
          need[i] = std::max(need[i], u.size());
          found = true;
          break;
        }
      }
      if (!found) buckets.lists[i].push_back({a, b});
    }
  });
  buckets.flush(v);
  v.pass = v.witness_total == 0;
  std::size_t max_need = 0;
  for (std::size_t x : need) max_need = std::max(max_need, x);
  v.parameters["tau"] = static_cast<double>(c.tau);
  v.parameters["max_connector"] = static_cast<double>(max_need);
  v.parameters["good_words"] = static_cast<double>(gs.size());
  v.parameters["pairs"] = static_cast<double>(gs.size()) * static_cast<double>(gs.size());
  return v;
}

double hat_pressure(const PressureReport& rep, std::size_t from) {
  double best = kNegInf;
  for (const auto& row : rep.table)
    if (row.n >= from) best = std::max(best, row.rate);
  return best;
}

double pressure_surrogate(const PressureReport& rep) {
  if (rep.table.empty() || !std::isfinite(rep.table.back().log_sum)) return kNegInf;
  return rep.point_estimate;
}

bool surrogate_ok(double hat, double p, double eps) {
  if (hat == kNegInf) return true;
  return hat < p + eps;
}

}  // namespace

Verdict check_spec_I(const TripleCollections& c, std::size_t n) { return glue_check(c, n, false, "I"); }

Verdict check_strong_spec_Iprime(const TripleCollections& c, std::size_t n) {
  return glue_check(c, n, true, "I'");
}

Verdict check_stay_good_III(const TripleCollections& c, std::size_t n, StayGoodVariant variant) {
  if (!c.L_param) throw Error(ErrorKind::invalid_argument, "stay-good check needs L");
  const std::size_t L = *c.L_param;
  const LanguageOracle& oracle = c.G.oracle();
  Verdict v;
  v.condition = variant == StayGoodVariant::full ? "III" : variant == StayGoodVariant::a ? "III_a" : "III_b";
  v.depth = n;
  v.parameters["L"] = static_cast<double>(L);
  const WordSet G = c.G.memoized();
  std::size_t premises = 0;
  for (std::size_t m = L; m <= n; ++m) {
    const std::vector<Word> words = oracle.enumerate(m);
    WitnessBuckets buckets(words.size());
    std::vector<std::size_t> counts(words.size(), 0);
    parallel_for(words.size(), [&](std::size_t idx) {
      const Word& x = words[idx];
      WordView xv(x);
      for (std::size_t a = 0; a <= m; ++a)
        for (std::size_t b = a + L; b <= m; ++b) {
          if (!G.contains(xv.first(b)) || !G.contains(xv.subspan(a))) continue;
          ++counts[idx];
          Word u(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(a));
          Word mid(x.begin() + static_cast<std::ptrdiff_t>(a), x.begin() + static_cast<std::ptrdiff_t>(b));
          Word w(x.begin() + static_cast<std::ptrdiff_t>(b), x.end());
          bool ok = true;
          if (variant != StayGoodVariant::b) ok = G.contains(mid);
          if (variant == StayGoodVariant::full) ok = ok && G.contains(x);
          if (variant == StayGoodVariant::b) {
            bool premise = false;
            for (std::size_t len = 0; len + m <= n && !premise; ++len)
              oracle.for_each(len, [&](WordView y, Dfa::State) {
                if (!premise && G.contains(concat(y, x))) premise = true;
              });
            if (!premise) continue;
            ok = G.contains(x);
          }
          if (!ok) buckets.lists[idx].push_back({u, mid, w});
        }
    });
    buckets.flush(v);
    for (std::size_t cnt : counts) premises += cnt;
  }
  v.pass = v.witness_total == 0;
  v.parameters["premises"] = static_cast<double>(premises);
  return v;
}

std::optional<Decomposition> find_decomposition(const TripleCollections& c, WordView w) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i <= n; ++i) {
    if (!c.Cp.contains(w.first(i))) continue;
    for (std::size_t j = n + 1; j-- > i;) {
      if (c.G.contains(w.subspan(i, j - i)) && c.Cs.contains(w.subspan(j))) return Decomposition{i, j};
    }
  }
  return std::nullopt;
}

WordSet obstruction_complement(const TripleCollections& c) {
  TripleCollections memo{c.Cp.memoized(), c.G.memoized(), c.Cs.memoized(), c.tau, c.L_param};
  return WordSet::filter(
      c.G.oracle_ptr(), [memo](WordView w) { return !find_decomposition(memo, w).has_value(); }, "L\\CpGCs");
}

GapReport pressure_gap_II(const TripleCollections& c, const Potential& phi, std::size_t n_max, double delta) {
  GapReport rep;
  rep.delta = delta;
  WordSet comp = obstruction_complement(c);
  WordSet C = c.Cp.unite(c.Cs, "Cp|Cs").unite(comp, "C");
  rep.obstruction = pressure_estimate(C, phi, n_max);
  rep.language = pressure_estimate(WordSet::language(c.G.oracle_ptr()), phi, n_max);
  rep.verdict = margin_rule(rep.obstruction, rep.language, delta);
  return rep;
}

WordSet good_words_from_obstructions(const WordSet& Cminus, const WordSet& Cplus, std::size_t M) {
  if (M < 1) throw Error(ErrorKind::invalid_argument, "M must be >= 1");
  const WordSet cm = Cminus.memoized();
  const WordSet cp = Cplus.memoized();
  auto prefix_ok = [cm, M](WordView w) {
    for (std::size_t i = M; i <= w.size(); ++i)
      if (cm.contains(w.first(i))) return false;
    return true;
  };
  auto pred = [cp, M, prefix_ok](WordView w) {
    if (!prefix_ok(w)) return false;
    for (std::size_t i = M; i <= w.size(); ++i)
      if (cp.contains(w.subspan(w.size() - i))) return false;
    return true;
  };
  return WordSet::filter(Cminus.oracle_ptr(), pred, "G(C,M=" + std::to_string(M) + ")", prefix_ok);
}

WordSet good_words_from_obstructions(const ObstructionPair& pair) {
  return good_words_from_obstructions(pair.Cminus, pair.Cplus, pair.M);
}

Verdict check_persistence(const ObstructionPair& pair, std::size_t n) {
  Verdict v;
  v.condition = "persistent";
  v.depth = n;
  std::size_t tested = 0;
  for (std::size_t m = 2; m <= n; ++m) {
    pair.Cplus.for_each(m, [&](WordView w) {
      for (std::size_t i = 1; i < m; ++i) {
        ++tested;
        if (!pair.Cplus.contains(w.first(i)))
          add_witness(v, {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i)), Word(w.begin(), w.end())});
      }
    });
    pair.Cminus.for_each(m, [&](WordView w) {
      for (std::size_t i = 1; i < m; ++i) {
        ++tested;
        if (!pair.Cminus.contains(w.subspan(i)))
          add_witness(v, {Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.end()), Word(w.begin(), w.end())});
      }
    });
  }
  v.pass = v.witness_total == 0;
  v.parameters["splits"] = static_cast<double>(tested);
  return v;
}

IstarReport check_complete_list_Istar(const ObstructionPair& pair, const std::vector<std::size_t>& M_list,
                                      std::size_t n, std::size_t tau_max) {
  const LanguageOracle& oracle = pair.Cminus.oracle();
  const Dfa& dfa = oracle.dfa();
  const std::size_t k = oracle.k();
  IstarReport rep;
  rep.verdict.condition = "I*";
  rep.verdict.depth = n;
  rep.verdict.pass = true;
  // reach[q][l]: states reachable from q by admissible words of length exactly l
  std::map<Dfa::State, std::vector<std::vector<Dfa::State>>> reach_cache;
  auto reach = [&](Dfa::State q) -> const std::vector<std::vector<Dfa::State>>& {
    auto it = reach_cache.find(q);
    if (it != reach_cache.end()) return it->second;
    std::vector<std::vector<Dfa::State>> layers{{q}};
    for (std::size_t l = 1; l <= tau_max; ++l) {
      std::set<Dfa::State> next;
      for (Dfa::State p : layers.back())
        for (std::size_t a = 0; a < k; ++a) {
          Dfa::State t = dfa.next(p, static_cast<Symbol>(a));
          if (t == Dfa::kUnexplored) throw Error(ErrorKind::depth_exceeded, "connector search beyond certified depth");
          if (t >= 0) next.insert(t);
        }
      layers.emplace_back(next.begin(), next.end());
    }
    return reach_cache.emplace(q, std::move(layers)).first->second;
  };
  for (std::size_t M : M_list) {
    WordSet G = good_words_from_obstructions(pair.Cminus, pair.Cplus, M);
    const std::vector<Word> gs = G.words_up_to(n);
    std::vector<Dfa::State> ends;
    for (const Word& w : gs) ends.push_back(oracle.state_of(w));
    for (Dfa::State q : ends) reach(q);
    std::vector<std::optional<std::size_t>> best(gs.size(), 0);
    WitnessBuckets buckets(gs.size());
    parallel_for(gs.size(), [&](std::size_t i) {
      const auto& layers = reach_cache.at(ends[i]);
      std::size_t worst = 0;
      bool ok = true;
      for (const Word& b : gs) {
        std::optional<std::size_t> len;
        for (std::size_t l = 0; l <= tau_max && !len; ++l)
          for (Dfa::State p : layers[l]) {
            Dfa::State t = dfa.run(b, p);
            if (t == Dfa::kUnexplored) throw Error(ErrorKind::depth_exceeded, "glue beyond certified depth");
            if (t >= 0) {
              len = l;
              break;
            }
          }
        if (!len) {
          ok = false;
          buckets.lists[i].push_back({gs[i], b});
        } else {
          worst = std::max(worst, *len);
        }
      }
      best[i] = ok ? std::optional<std::size_t>(worst) : std::nullopt;
    });
    buckets.flush(rep.verdict);
    std::optional<std::size_t> tau = 0;
    for (const auto& b : best) {
      if (!b) {
        tau.reset();
        break;
      }
      tau = std::max(*tau, *b);
    }
    rep.tau_table.emplace_back(M, tau);
    if (tau)
      rep.verdict.parameters["tau(M=" + std::to_string(M) + ")"] = static_cast<double>(*tau);
    else
      rep.verdict.pass = false;
  }
  rep.verdict.parameters["tau_max"] = static_cast<double>(tau_max);
  return rep;
}

WordSet extend_obstruction_minus(const WordSet& Cminus, std::size_t bound) {
  const WordSet cm = Cminus.memoized();
  auto oracle = Cminus.oracle_ptr();
  auto pred = [cm, oracle, bound](WordView w) {
    // depth-first over right extensions x with |x| <= bound
    Word x(w.begin(), w.end());
    const std::size_t base = x.size();
    std::function<bool(Dfa::State)> dfs = [&](Dfa::State q) {
      if (cm.contains(x)) return true;
      if (x.size() - base >= bound || x.size() >= oracle->certified_depth()) return false;
      for (std::size_t a = 0; a < oracle->k(); ++a) {
        Dfa::State t = oracle->dfa().next(q, static_cast<Symbol>(a));
        if (t < 0) continue;
        x.push_back(static_cast<Symbol>(a));
        bool hit = dfs(t);
        x.pop_back();
        if (hit) return true;
      }
      return false;
    };
    return dfs(oracle->state_of(w));
  };
  return WordSet::filter(oracle, pred, "D-").memoized();
}

WordSet extend_obstruction_plus(const WordSet& Cplus, std::size_t bound) {
  const WordSet cp = Cplus.memoized();
  auto oracle = Cplus.oracle_ptr();
  auto pred = [cp, oracle, bound](WordView w) {
    for (std::size_t len = 0; len <= bound && len + w.size() <= oracle->certified_depth(); ++len) {
      bool hit = false;
      oracle->for_each(std::min(len, oracle->enumeration_limit()), [&](WordView x, Dfa::State q) {
        if (hit) return;
        Dfa::State t = oracle->dfa().run(w, q);
        if (t >= 0 && cp.contains(concat(x, w))) hit = true;
      });
      if (hit) return true;
    }
    return false;
  };
  return WordSet::filter(oracle, pred, "D+").memoized();
}

CgcResult cgc_construct(const ObstructionPair& pair, const Potential& phi, double eps, const CgcOptions& options) {
  const OraclePtr oracle = pair.Cminus.oracle_ptr();
  const std::size_t depth = options.depth;
  CgcResult out;
  const PressureReport pm = pressure_estimate(pair.Cminus, phi, depth);
  const PressureReport pp = pressure_estimate(pair.Cplus, phi, depth);
  const double p_minus = pressure_surrogate(pm);
  const double p_plus = pressure_surrogate(pp);
  for (std::size_t M : options.M_grid) {
    CgcCandidate base;
    base.M = M;
    base.entropy_term = entropy_function(1.0 / static_cast<double>(M));
    IstarReport istar = check_complete_list_Istar(pair, {M}, options.istar_depth, options.tau_max);
    base.tau = istar.tau_table.front().second;
    if (!base.tau) {
      base.reason = "no connector bound for this M";
      out.candidates.push_back(base);
      continue;
    }
    if (!surrogate_ok(hat_pressure(pm, M), p_minus, eps) || !surrogate_ok(hat_pressure(pp, M), p_plus, eps)) {
      base.reason = "long obstructions exceed the pressure surrogate";
      out.candidates.push_back(base);
      continue;
    }
    const std::size_t tau = *base.tau;
    WordSet cm_long = pair.Cminus.at_least(M, "C-_{>=M}").memoized();
    WordSet cp_long = pair.Cplus.at_least(M, "C+_{>=M}").memoized();
    WordSet dminus = extend_obstruction_minus(pair.Cminus, tau + M);
    WordSet dplus = extend_obstruction_plus(pair.Cplus, tau + M);
    const PressureReport dm_rep = pressure_estimate(dminus, phi, depth);
    const PressureReport dp_rep = pressure_estimate(dplus, phi, depth);
    for (std::size_t N : options.N_grid) {
      CgcCandidate cand = base;
      cand.N = N;
      cand.log2_over_N = std::log(2.0) / static_cast<double>(N);
      cand.hat_p_ok = surrogate_ok(hat_pressure(dm_rep, N), p_minus, eps) &&
                      surrogate_ok(hat_pressure(dp_rep, N), p_plus, eps);
      if (!cand.hat_p_ok) {
        cand.reason = "extended obstructions exceed the pressure surrogate";
        out.candidates.push_back(cand);
        continue;
      }
      WordSet prefix_base = cm_long.unite(dplus.at_least(N, "D+_{>=N}"), "C-|D+").memoized();
      WordSet suffix_base = cp_long.unite(dminus.at_least(N, "D-_{>=N}"), "C+|D-").memoized();
      WordSet Cp = WordSet::star(prefix_base, "Cp").memoized();
      WordSet Cs = WordSet::star(suffix_base, "Cs").memoized();
      const WordSet cm = pair.Cminus.memoized();
      const WordSet cpl = pair.Cplus.memoized();
      auto good = [cm, cpl, dminus, dplus, M, N](WordView w) {
        if (dplus.contains(w) || dminus.contains(w)) return false;
        const std::size_t n = w.size();
        for (std::size_t i = M; i <= n; ++i)
          if (cm.contains(w.first(i)) || cpl.contains(w.subspan(n - i))) return false;
        for (std::size_t i = N; i <= n; ++i)
          if (dplus.contains(w.first(i)) || dminus.contains(w.subspan(n - i))) return false;
        return true;
      };
      WordSet G = WordSet::filter(oracle, good, "G").memoized();
      TripleCollections coll{Cp, G, Cs, tau, N};
      GapReport gap = pressure_gap_II(coll, phi, depth, options.delta);
      cand.gap_ok = gap.verdict.pass;
      if (!cand.gap_ok) {
        cand.reason = "margin rule failed";
        out.candidates.push_back(cand);
        continue;
      }
      cand.reason = "accepted";
      out.candidates.push_back(cand);
      out.collections = coll;
      out.M = M;
      out.N = N;
      out.Cminus_long = cm_long;
      out.Cplus_long = cp_long;
      out.Dminus = dminus;
      out.Dplus = dplus;
      out.prefix_base = prefix_base;
      out.suffix_base = suffix_base;
      out.gap = gap;
      return out;
    }
  }
  throw Error(ErrorKind::no_valid_parameters, "no (M, N) on the grid meets the margin rule at depth " +
                                                  std::to_string(depth));
}

Decomposition greedy_decompose(const CgcResult& cgc, WordView w) {
  std::size_t i = 0, j = w.size();
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t t = 1; i + t <= j; ++t)
      if (cgc.prefix_base.contains(w.subspan(i, t))) {
        i += t;
        moved = true;
        break;
      }
  }
  moved = true;
  while (moved) {
    moved = false;
    for (std::size_t t = 1; i + t <= j; ++t)
      if (cgc.suffix_base.contains(w.subspan(j - t, t))) {
        j -= t;
        moved = true;
        break;
      }
  }
  return {i, j};
}

bool follower_included(const Dfa& dfa, Dfa::State q, Dfa::State p, std::size_t bound, Word* witness) {
  if (q < 0) return true;
  if (p < 0) {
    if (witness) witness->clear();
    return false;
  }
  struct Node {
    Dfa::State q, p;
    std::size_t parent;
    Symbol a;
    std::size_t depth;
  };
  std::vector<Node> nodes{{q, p, 0, 0, 0}};
  std::set<std::pair<Dfa::State, Dfa::State>> seen{{q, p}};
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const Node cur = nodes[head];
    if (cur.depth >= bound) continue;
    for (std::size_t a = 0; a < dfa.alphabet_size(); ++a) {
      Dfa::State q2 = dfa.next(cur.q, static_cast<Symbol>(a));
      if (q2 < 0) continue;  // dead or unexplored on the smaller side: nothing to compare
      Dfa::State p2 = dfa.next(cur.p, static_cast<Symbol>(a));
      if (p2 == Dfa::kUnexplored) continue;
      if (p2 == Dfa::kDead) {
        if (witness) {
          Word w{static_cast<Symbol>(a)};
          for (std::size_t at = head; at != 0; at = nodes[at].parent) w.push_back(nodes[at].a);
          std::reverse(w.begin(), w.end());
          *witness = std::move(w);
        }
        return false;
      }
      if (seen.insert({q2, p2}).second) nodes.push_back({q2, p2, head, static_cast<Symbol>(a), cur.depth + 1});
    }
  }
  return true;
}

QftConstraints::QftConstraints(OraclePtr oracle, std::size_t bound)
    : oracle_(std::move(oracle)), bound_(bound), exact_(oracle_->exact()) {
  if (!exact_) return;
  const Dfa& dfa = oracle_->dfa();
  const std::size_t k = oracle_->k();
  using Key = std::vector<Dfa::State>;
  Key all;
  for (std::size_t q = 0; q < dfa.size(); ++q) all.push_back(static_cast<Dfa::State>(q));
  // S(a y) = {p : next(p, a) in S(y)}; words outside L (0 not in S) are dead.
  std::function<std::optional<Key>(const Key&, Symbol)> step = [&dfa](const Key& s, Symbol a) -> std::optional<Key> {
    Key out;
    for (std::size_t p = 0; p < dfa.size(); ++p) {
      Dfa::State t = dfa.next(static_cast<Dfa::State>(p), a);
      if (t >= 0 && std::binary_search(s.begin(), s.end(), t)) out.push_back(static_cast<Dfa::State>(p));
    }
    if (out.empty() || out.front() != 0) return std::nullopt;
    return out;
  };
  bool capped = false;
  Dfa rev = explore<Key>(all, k, step, kUnbounded, 1u << 20, &capped);
  if (capped || !rev.complete()) {
    exact_ = false;
    return;
  }
  reversed_ = std::make_shared<const Dfa>(std::move(rev));
}

bool QftConstraints::is_left(WordView w) const {
  if (w.empty() || !oracle_->contains(w)) return false;
  const Dfa& dfa = oracle_->dfa();
  Dfa::State q = oracle_->state_of(w);
  Dfa::State q1 = oracle_->state_of(w.subspan(1));
  return !follower_included(dfa, q1, q, exact_ ? kUnbounded : bound_);
}

bool QftConstraints::is_right(WordView w) const {
  if (w.empty() || !oracle_->contains(w)) return false;
  if (reversed_) {
    Word rw(w.rbegin(), w.rend());
    Dfa::State q = reversed_->run(rw);
    Dfa::State q1 = reversed_->run(WordView(rw).subspan(1));
    return !follower_included(*reversed_, q1, q, kUnbounded);
  }
  WordView head = w.first(w.size() - 1);
  for (std::size_t len = 1; len <= bound_ && len + w.size() <= oracle_->certified_depth(); ++len) {
    bool hit = false;
    oracle_->for_each(std::min(len, oracle_->enumeration_limit()), [&](WordView v, Dfa::State q) {
      if (hit) return;
      Dfa::State t = oracle_->dfa().run(head, q);
      if (t < 0) return;
      Dfa::State u = oracle_->dfa().next(t, w.back());
      if (u == Dfa::kDead) hit = true;
      (void)v;
    });
    if (hit) return true;
  }
  return false;
}

WordSet QftConstraints::left_set() const {
  auto self = *this;
  return WordSet::filter(oracle_, [self](WordView w) { return self.is_left(w); }, "C^l").memoized();
}

WordSet QftConstraints::right_set() const {
  auto self = *this;
  return WordSet::filter(oracle_, [self](WordView w) { return self.is_right(w); }, "C^r").memoized();
}

QftTable qft_constraints(const OraclePtr& oracle, std::size_t n, std::size_t bound) {
  QftConstraints qc(oracle, bound);
  QftTable t;
  t.exact = qc.exact();
  if (!t.exact) t.flags.push_back(oracle->locality() ? "depth-certified" : "locality-unknown");
  for (std::size_t m = 1; m <= n; ++m) {
    const std::vector<Word> words = oracle->enumerate(m);
    std::vector<char> left(words.size()), right(words.size());
    parallel_for(words.size(), [&](std::size_t i) {
      left[i] = qc.is_left(words[i]);
      right[i] = qc.is_right(words[i]);
    });
    t.left.emplace_back();
    t.right.emplace_back();
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (left[i]) t.left.back().push_back(words[i]);
      if (right[i]) t.right.back().push_back(words[i]);
    }
  }
  return t;
}

SyncResult sync_decomposition(const OraclePtr& oracle, const Word& s, std::size_t depth) {
  if (s.empty() || !oracle->contains(s))
    throw Error(ErrorKind::not_in_language, "'" + oracle->alphabet().format(s) + "'");
  const Dfa& dfa = oracle->dfa();
  const std::size_t bound = oracle->exact() ? kUnbounded : depth;
  const Dfa::State qs = oracle->state_of(s);
  SyncResult out;
  out.check.condition = "synchronising";
  out.check.depth = depth;
  out.check.depth_certified = true;
  std::map<Dfa::State, bool> verdict_by_state;
  for (std::size_t len = 0; len <= depth; ++len) {
    for (const Word& v : oracle->enumerate(std::min(len, oracle->enumeration_limit()))) {
      if (v.size() != len) break;
      Word vs = concat(v, s);
      if (vs.size() > oracle->certified_depth()) break;
      Dfa::State q = dfa.run(vs);
      if (q < 0) continue;
      if (verdict_by_state.count(q)) continue;
      Word w;
      bool ok = follower_included(dfa, qs, q, bound, &w);
      verdict_by_state[q] = ok;
      if (!ok) {
        const Alphabet& al = oracle->alphabet();
        throw Error(ErrorKind::not_synchronising,
                    "v='" + al.format(v) + "', w='" + al.format(w) + "': vs and sw admissible, vsw not");
      }
    }
  }
  std::optional<Word> c;
  for (std::size_t len = 0; len <= depth && !c; ++len)
    for (const Word& x : oracle->enumerate(std::min(len, oracle->enumeration_limit())))
      if (x.size() == len && oracle->contains(concat(s, x, s))) {
        c = x;
        break;
      }
  if (!c) throw Error(ErrorKind::cert_exhausted, "no connector c with scs admissible");
  out.connector = *c;
  auto bracketed = [s](WordView w) { return w.size() >= s.size() && starts_with(w, s) && ends_with(w, s); };
  auto viable = [s](WordView p) {
    const std::size_t m = std::min(p.size(), s.size());
    return std::equal(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(m), s.begin());
  };
  auto avoids = [s](WordView w) { return !contains_factor(w, s); };
  WordSet G = WordSet::filter(oracle, bracketed, "L&sL&Ls", viable);
  WordSet C = WordSet::filter(oracle, avoids, "L\\LsL", avoids);
  out.collections = TripleCollections{C, G, C, c->size(), s.size()};
  out.check.pass = true;
  out.check.parameters["tau"] = static_cast<double>(c->size());
  out.check.parameters["L"] = static_cast<double>(s.size());
  if (!oracle->exact()) out.check.notes.push_back("follower comparison bounded by depth");
  return out;
}

}  // namespace symdyn
