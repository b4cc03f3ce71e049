#include "symdyn/tower.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "symdyn/error.hpp"
#include "symdyn/parallel.hpp"

namespace symdyn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Mask = std::vector<char>;

bool mask_empty(const Mask& m) { return std::none_of(m.begin(), m.end(), [](char c) { return c != 0; }); }

Mask mask_and(const Mask& a, const Mask& b) {
  Mask out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

std::vector<Word> all_connectors(const LanguageOracle& oracle, std::size_t tau) {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= tau; ++len) {
    auto ws = oracle.enumerate(len);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

Mask connector_mask(const WordSet& G, const std::vector<Word>& cs, WordView left, WordView right) {
  Mask m(cs.size(), 0);
  for (std::size_t i = 0; i < cs.size(); ++i) m[i] = G.contains(concat(left, cs[i], right));
  return m;
}

std::string fmt(const LanguageOracle& o, WordView w) { return "'" + o.alphabet().format(w) + "'"; }

}  // namespace

std::optional<std::pair<Word, Word>> verify_sync_triple(const WordSet& G, const SyncTriple& t, std::size_t depth) {
  const std::vector<Word> gs = G.words_up_to(depth);
  std::vector<Word> lefts, rights;
  for (const Word& w : gs) {
    if (ends_with(w, t.r)) lefts.push_back(w);
    if (starts_with(w, t.s)) rights.push_back(w);
  }
  std::vector<std::optional<std::pair<Word, Word>>> fail(lefts.size());
  parallel_for(lefts.size(), [&](std::size_t i) {
    for (const Word& b : rights)
      if (!G.contains(concat(lefts[i], t.c, b))) {
        fail[i] = std::make_pair(lefts[i], b);
        return;
      }
  });
  for (auto& f : fail)
    if (f) return f;
  return std::nullopt;
}

SyncTriple find_sync_triple(const WordSet& G_in, const SyncOptions& options) {
  const WordSet G = G_in.memoized();
  const LanguageOracle& oracle = G.oracle();
  const std::size_t D = options.cert_depth;
  auto pick_seed = [&](const std::optional<Word>& given) {
    if (given) {
      if (!G.contains(*given)) throw Error(ErrorKind::not_specified, "seed " + fmt(oracle, *given) + " is not in G");
      return *given;
    }
    auto ws = G.words(options.seed_length);
    if (ws.empty()) throw Error(ErrorKind::not_specified, "G has no words of the seed length");
    return ws.front();
  };
  Word q = pick_seed(options.seed_v);
  Word p = pick_seed(options.seed_w);

  TripleCollections tc{G, G, G, options.tau, std::nullopt};
  Verdict spec = check_spec_I(tc, D);
  if (!spec.pass) {
    const auto& w = spec.witnesses.front();
    throw Error(ErrorKind::not_specified, "no connector of length <= " + std::to_string(options.tau) + " for " +
                                              fmt(oracle, w[0]) + ", " + fmt(oracle, w[1]));
  }

  const std::vector<Word> cs = all_connectors(oracle, options.tau);
  const std::vector<Word> gs = G.words_up_to(D);
  Mask active = connector_mask(G, cs, p, q);
  if (mask_empty(active)) throw Error(ErrorKind::not_specified, "seeds cannot be connected");

  for (std::size_t round = 0; round < options.max_rounds; ++round) {
    std::vector<Word> lefts, rights;
    for (const Word& w : gs) {
      if (ends_with(w, p)) lefts.push_back(w);
      if (starts_with(w, q)) rights.push_back(w);
    }
    // masks[i][j] = C(lefts[i], rights[j]) n active
    std::vector<std::vector<Mask>> masks(lefts.size());
    parallel_for(lefts.size(), [&](std::size_t i) {
      masks[i].reserve(rights.size());
      for (const Word& b : rights) masks[i].push_back(mask_and(active, connector_mask(G, cs, lefts[i], b)));
    });
    Mask common = active;
    for (const auto& row : masks)
      for (const Mask& m : row) common = mask_and(common, m);
    if (!mask_empty(common)) {
      std::size_t ci = 0;
      while (!common[ci]) ++ci;
      SyncTriple t;
      t.r = p;
      t.c = cs[ci];
      t.s = q;
      t.tau = options.tau;
      t.cert_depth = D;
      t.notes.push_back("refinement rounds: " + std::to_string(round));
      return t;
    }
    bool moved = false;
    for (std::size_t i = 0; i < lefts.size() && !moved; ++i)
      for (std::size_t j = 0; j < rights.size(); ++j) {
        const Mask& m = masks[i][j];
        if (m != active && !mask_empty(m)) {
          p = lefts[i];
          q = rights[j];
          active = m;
          moved = true;
          break;
        }
      }
    if (!moved)
      throw Error(ErrorKind::cert_exhausted,
                  "connector sets cannot be refined within depth " + std::to_string(D));
  }
  throw Error(ErrorKind::cert_exhausted, "refinement did not settle");
}

std::optional<std::size_t> first_long_overlap(const LanguageOracle& oracle, const SyncTriple& t) {
  const Word x = t.rcs();
  const std::size_t K = std::max(t.r.size() + t.c.size(), t.c.size() + t.s.size());
  for (std::size_t k = 1; k <= K; ++k) {
    if (k < x.size() && !has_period(x, k)) continue;
    Word y = x;
    if (k < x.size())
      y.insert(y.end(), x.end() - static_cast<std::ptrdiff_t>(k), x.end());
    else
      throw Error(ErrorKind::invalid_argument, "overlap shift beyond the word");
    if (oracle.contains(y)) return k;
  }
  return std::nullopt;
}

bool g_is_periodic(const WordSet& G, std::size_t depth) {
  const std::vector<Word> gs = G.words_up_to(depth);
  if (gs.empty()) return true;
  const Word& w = gs.back();
  std::optional<std::size_t> period;
  for (std::size_t k = 1; 2 * k <= w.size(); ++k)
    if (has_period(w, k)) {
      period = k;
      break;
    }
  if (!period) return false;
  const Word block(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(*period));
  for (const Word& g : gs)
    if (!contains_factor(power(block, g.size() / *period + 2), g)) return false;
  return true;
}

SyncTriple ensure_no_long_overlaps(const SyncTriple& t, const WordSet& G_in, std::size_t search_depth,
                                   OverlapSearch* info) {
  const WordSet G = G_in.memoized();
  const LanguageOracle& oracle = G.oracle();
  if (!first_long_overlap(oracle, t)) {
    SyncTriple out = t;
    out.no_long_overlaps = true;
    return out;
  }
  if (g_is_periodic(G, search_depth))
    throw Error(ErrorKind::periodic_g, "every G-word up to length " + std::to_string(search_depth) +
                                           " lies on one periodic orbit");
  OverlapSearch s;
  s.search_depth = search_depth;
  std::vector<double> counts(search_depth + 1);
  for (std::size_t n = 0; n <= search_depth; ++n) counts[n] = static_cast<double>(G.count(n));
  const std::size_t cl = t.c.size();
  for (std::size_t ell = 1; ell <= search_depth + cl; ++ell) {
    bool ok = true, tested = false;
    for (std::size_t m = 1; ell * m <= search_depth + cl; ++m) {
      if (ell * m < cl) continue;
      tested = true;
      if (counts[ell * m - cl] < std::ldexp(1.0, static_cast<int>(m))) ok = false;
    }
    if (ok && tested) {
      s.ell = ell;
      break;
    }
  }
  if (s.ell == 0) s.ell = search_depth + cl;
  s.alpha = std::log(2.0) / (2.0 * static_cast<double>(s.ell) * std::log(static_cast<double>(oracle.k())));
  const std::vector<Word> us = all_connectors(oracle, t.tau);
  auto first_connector = [&](WordView a, WordView b) -> std::optional<Word> {
    for (const Word& u : us)
      if (G.contains(concat(a, u, b))) return u;
    return std::nullopt;
  };
  for (std::size_t N = 1; N <= search_depth; ++N) {
    for (const Word& w : G.words(N)) {
      bool periodic = false;
      for (std::size_t k = 1; k <= static_cast<std::size_t>(s.alpha * static_cast<double>(N)) && !periodic; ++k)
        periodic = has_period(w, k);
      if (periodic) continue;
      for (std::size_t vl = 1; vl <= N; ++vl)
        for (const Word& v : G.words(vl)) {
          if (contains_factor(w, v)) continue;
          auto u = first_connector(v, t.r);
          if (!u) continue;
          auto u2 = first_connector(t.s, w);
          if (!u2) continue;
          SyncTriple cand = t;
          cand.r = concat(v, *u, t.r);
          cand.s = concat(t.s, *u2, w);
          ++s.candidates;
          if (first_long_overlap(oracle, cand)) continue;
          if (verify_sync_triple(G, cand, t.cert_depth)) continue;
          cand.no_long_overlaps = true;
          cand.notes.push_back("extended with v=" + fmt(oracle, v) + ", w=" + fmt(oracle, w));
          if (info) *info = s;
          return cand;
        }
    }
  }
  if (info) *info = s;
  throw Error(ErrorKind::cert_exhausted, "no overlap-free extension up to length " + std::to_string(search_depth));
}

FreeFamily build_free_family(const WordSet& F_in, std::size_t depth) {
  FreeFamily fam;
  fam.depth = depth;
  fam.F = F_in.memoized();
  const WordSet F = fam.F;
  auto irreducible = [F](WordView w) {
    if (w.empty() || !F.contains(w)) return false;
    for (std::size_t i = 1; i < w.size(); ++i)
      if (F.contains(w.first(i)) && F.contains(w.subspan(i))) return false;
    return true;
  };
  fam.I = WordSet::filter(F.oracle_ptr(), irreducible, "I").memoized();
  for (std::size_t n = 1; n <= depth; ++n) {
    const std::vector<Word> ws = F.words(n);
    std::vector<char> irr(ws.size());
    parallel_for(ws.size(), [&](std::size_t i) { irr[i] = fam.I.contains(ws[i]); });
    for (std::size_t i = 0; i < ws.size(); ++i)
      if (irr[i]) {
        fam.irreducibles.push_back(ws[i]);
        fam.gcd_lengths = std::gcd(fam.gcd_lengths, ws[i].size());
      }
  }
  return fam;
}

FreeFamily build_free_family(const SyncTriple& t, const WordSet& G_in, std::size_t depth) {
  const WordSet G = G_in.memoized();
  const Word cs = concat(t.c, t.s);
  auto pred = [G, t](WordView w) {
    if (!starts_with(w, t.c)) return false;
    WordView b = w.subspan(t.c.size());
    return starts_with(b, t.s) && ends_with(b, t.r) && G.contains(b);
  };
  auto viable = [cs](WordView p) {
    const std::size_t m = std::min(p.size(), cs.size());
    return std::equal(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(m), cs.begin());
  };
  return build_free_family(WordSet::filter(G.oracle_ptr(), pred, "F", viable), depth);
}

UdVerdict is_uniquely_decipherable(const std::vector<Word>& code_in) {
  std::vector<Word> code = code_in;
  std::sort(code.begin(), code.end(), ShortLex{});
  UdVerdict v;
  v.code_words = code.size();
  for (const Word& w : code)
    if (w.empty()) throw Error(ErrorKind::invalid_argument, "empty code word");
  for (std::size_t i = 1; i < code.size(); ++i)
    if (code[i] == code[i - 1]) {
      v.witness = code[i];
      v.factorisation_a = {code[i]};
      v.factorisation_b = {code[i]};
      return v;
    }
  struct Node {
    Word d;                  // top is ahead of bottom by d
    std::vector<Word> top;
    std::vector<Word> bottom;
  };
  std::deque<Node> queue;
  std::set<Word> seen;
  auto push = [&](Node n) {
    if (seen.insert(n.d).second) queue.push_back(std::move(n));
  };
  for (const Word& a : code)
    for (const Word& b : code)
      if (b.size() > a.size() && starts_with(b, a)) push({Word(b.begin() + static_cast<std::ptrdiff_t>(a.size()), b.end()), {b}, {a}});
  while (!queue.empty()) {
    Node n = std::move(queue.front());
    queue.pop_front();
    for (const Word& x : code) {
      if (same(x, n.d)) {
        n.bottom.push_back(x);
        for (const Word& w : n.top) v.witness.insert(v.witness.end(), w.begin(), w.end());
        v.factorisation_a = n.top;
        v.factorisation_b = n.bottom;
        if (ShortLex{}(v.factorisation_b.front(), v.factorisation_a.front()))
          std::swap(v.factorisation_a, v.factorisation_b);
        v.dangling_suffixes = seen.size();
        return v;
      }
      if (x.size() > n.d.size() && starts_with(x, n.d)) {
        Node m{Word(x.begin() + static_cast<std::ptrdiff_t>(n.d.size()), x.end()), n.bottom, n.top};
        m.top.push_back(x);
        push(std::move(m));
      } else if (x.size() < n.d.size() && starts_with(n.d, x)) {
        Node m{Word(n.d.begin() + static_cast<std::ptrdiff_t>(x.size()), n.d.end()), n.top, n.bottom};
        m.bottom.push_back(x);
        push(std::move(m));
      }
    }
  }
  v.pass = true;
  v.dangling_suffixes = seen.size();
  return v;
}

UdVerdict is_uniquely_decipherable(const WordSet& I, std::size_t depth) {
  std::vector<Word> code = I.words_up_to(depth);
  code.erase(std::remove_if(code.begin(), code.end(), [](const Word& w) { return w.empty(); }), code.end());
  return is_uniquely_decipherable(code);
}

double factorisation_count(const std::vector<Word>& code, WordView w) {
  std::vector<double> ways(w.size() + 1, 0.0);
  ways[0] = 1.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (ways[i] == 0.0) continue;
    for (const Word& c : code)
      if (!c.empty() && i + c.size() <= w.size() && same(w.subspan(i, c.size()), c)) ways[i + c.size()] += ways[i];
  }
  return ways[w.size()];
}

// ---- tower ----

TowerGraph::TowerGraph(std::vector<Word> irreducibles, std::size_t depth, const Word& base_word) : depth_(depth) {
  for (Word& w : irreducibles)
    if (!w.empty() && w.size() <= depth) words_.push_back(std::move(w));
  std::sort(words_.begin(), words_.end(), ShortLex{});
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  if (words_.empty()) throw Error(ErrorKind::invalid_argument, "tower needs at least one generator");
  auto it = std::find(words_.begin(), words_.end(), base_word);
  if (it == words_.end()) throw Error(ErrorKind::invalid_argument, "base word is not a generator");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    first_vertex_.push_back(vertices_.size());
    for (std::size_t k = 1; k <= words_[i].size(); ++k) vertices_.push_back({i, k});
  }
  succ_.resize(vertices_.size());
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const Vertex& x = vertices_[v];
    if (x.k < words_[x.word].size())
      succ_[v].push_back(v + 1);
    else
      succ_[v] = first_vertex_;
  }
  base_ = first_vertex_[static_cast<std::size_t>(it - words_.begin())];
}

std::size_t TowerGraph::edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : succ_) n += s.size();
  return n;
}

Symbol TowerGraph::symbol(std::size_t vertex) const {
  const Vertex& x = vertices_[vertex];
  return words_[x.word][x.k - 1];
}

std::size_t TowerGraph::vertex_index(std::size_t word, std::size_t k) const { return first_vertex_.at(word) + k - 1; }

std::string TowerGraph::edge_list(const Alphabet& alphabet) const {
  auto name = [&](std::size_t v) {
    return alphabet.format(words_[vertices_[v].word]) + ":" + std::to_string(vertices_[v].k);
  };
  std::string out = "# base " + name(base_) + " depth " + std::to_string(depth_) + "\n";
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    for (std::size_t t : succ_[v]) out += name(v) + " -> " + name(t) + "\n";
  return out;
}

TowerGraph build_tower(const std::vector<Word>& irreducibles, std::size_t depth, const Word& base_word) {
  return TowerGraph(irreducibles, depth, base_word);
}

namespace {

// Weighted path sums with cyclic Birkhoff weights. Entries carry exp(sum - windows * max)
// scaled by 2^exp2, so zero potentials give exact integer counts.
class CyclicDp {
 public:
  using Key = std::tuple<int, Word, Word>;  // state, head (first r-1 symbols), tail (last r-1)

  CyclicDp(const Potential& phi) : phi_(phi), h_(phi.range() - 1), pmax_(phi.is_zero() ? 0.0 : phi.max_value()) {}

  void init(int state, WordView prefix) {
    Key k{state, Word{}, Word{}};
    double w = 1.0;
    len_ = 0;
    for (Symbol a : prefix) w *= emit(k, a, len_++);
    cur_.clear();
    cur_[k] = w;
  }

  template <typename Succ>
  void step(Succ&& succ) {
    std::map<Key, double> next;
    for (const auto& [key, w] : cur_) {
      succ(std::get<0>(key), [&](int t, Symbol a) {
        Key k{t, std::get<1>(key), std::get<2>(key)};
        double f = emit(k, a, len_);
        next[k] += w * f;
      });
    }
    ++len_;
    cur_ = std::move(next);
    double mx = 0.0;
    for (const auto& kv : cur_) mx = std::max(mx, kv.second);
    if (mx > 0x1p400 || (mx > 0.0 && mx < 0x1p-400)) {
      int e = 0;
      std::frexp(mx, &e);
      for (auto& kv : cur_) kv.second = std::ldexp(kv.second, -e);
      exp2_ += e;
    }
  }

  // Sum over states accepted by ok, closing the cyclic windows. Returns (log value, value).
  template <typename Ok>
  std::pair<double, double> close(Ok&& ok) const {
    double total = 0.0;
    for (const auto& [key, w] : cur_) {
      if (!ok(std::get<0>(key))) continue;
      total += w * wrap(std::get<1>(key), std::get<2>(key));
    }
    if (total <= 0.0) return {kNegInf, 0.0};
    const double shift = static_cast<double>(len_) * pmax_;
    double log_v = std::log(total) + static_cast<double>(exp2_) * std::log(2.0) + shift;
    double v = pmax_ == 0.0 ? std::ldexp(total, exp2_) : std::exp(log_v);
    return {log_v, v};
  }

  bool empty() const { return cur_.empty(); }
  std::size_t length() const { return len_; }

 private:
  double emit(Key& k, Symbol a, std::size_t len) const {
    Word& head = std::get<1>(k);
    Word& tail = std::get<2>(k);
    double f = 1.0;
    if (h_ == 0) {
      if (!phi_.is_zero()) f = std::exp(phi_.value(WordView(&a, 1)) - pmax_);
      return f;
    }
    if (len + 1 >= h_ + 1 && !phi_.is_zero()) {
      Word win = tail;
      win.push_back(a);
      f = std::exp(phi_.value(win) - pmax_);
    }
    if (head.size() < h_) head.push_back(a);
    tail.push_back(a);
    if (tail.size() > h_) tail.erase(tail.begin());
    return f;
  }

  double wrap(const Word& head, const Word& tail) const {
    if (phi_.is_zero() || h_ == 0) return 1.0;
    if (len_ < h_) return std::exp(periodic_sum(phi_, head) - static_cast<double>(len_) * pmax_);
    Word both = concat(tail, head);
    double s = 0.0;
    for (std::size_t j = 0; j < h_; ++j) s += phi_.value(WordView(both).subspan(j, h_ + 1)) - pmax_;
    return std::exp(s);
  }

  const Potential& phi_;
  std::size_t h_;
  double pmax_;
  std::map<Key, double> cur_;
  std::size_t len_ = 0;
  int exp2_ = 0;
};

// Subset automaton for code^* over the trie of the code words.
class StarAutomaton {
 public:
  StarAutomaton(const std::vector<Word>& code, std::size_t k) : k_(k) {
    trie_.push_back({std::vector<int>(k, -1), false});
    for (const Word& w : code) {
      int node = 0;
      for (Symbol a : w) {
        if (trie_[node].child[a] < 0) {
          trie_[node].child[a] = static_cast<int>(trie_.size());
          trie_.push_back({std::vector<int>(k, -1), false});
        }
        node = trie_[node].child[a];
      }
      trie_[node].terminal = true;
    }
    intern({0});
  }

  int next(int state, Symbol a) {
    auto key = std::make_pair(state, a);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::set<int> out;
    for (int node : subsets_[state]) {
      int c = trie_[node].child[a];
      if (c < 0) continue;
      if (trie_[c].terminal) out.insert(0);
      if (std::any_of(trie_[c].child.begin(), trie_[c].child.end(), [](int x) { return x >= 0; })) out.insert(c);
    }
    int id = out.empty() ? -1 : intern(std::vector<int>(out.begin(), out.end()));
    cache_[key] = id;
    return id;
  }

  bool accepting(int state) const { return subsets_[state].front() == 0; }
  std::size_t k() const { return k_; }

 private:
  struct TrieNode {
    std::vector<int> child;
    bool terminal;
  };
  int intern(std::vector<int> s) {
    auto [it, fresh] = ids_.emplace(s, static_cast<int>(subsets_.size()));
    if (fresh) subsets_.push_back(std::move(s));
    return it->second;
  }
  std::size_t k_;
  std::vector<TrieNode> trie_;
  std::map<std::vector<int>, int> ids_;
  std::vector<std::vector<int>> subsets_;
  std::map<std::pair<int, Symbol>, int> cache_;
};

std::vector<std::pair<double, double>> graph_loops(const TowerGraph& g, const Potential& phi, std::size_t n_max,
                                                   bool first_return) {
  const int base = static_cast<int>(g.base());
  std::vector<char> closes(g.vertices().size(), 0);
  for (std::size_t v = 0; v < g.vertices().size(); ++v)
    for (std::size_t t : g.successors()[v])
      if (static_cast<int>(t) == base) closes[v] = 1;
  CyclicDp dp(phi);
  const Symbol first = g.symbol(g.base());
  dp.init(base, WordView(&first, 1));
  std::vector<std::pair<double, double>> out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    out.push_back(dp.close([&](int v) { return closes[static_cast<std::size_t>(v)] != 0; }));
    if (n == n_max) break;
    dp.step([&](int v, auto&& emit) {
      for (std::size_t t : g.successors()[static_cast<std::size_t>(v)]) {
        if (first_return && static_cast<int>(t) == base) continue;
        emit(static_cast<int>(t), g.symbol(t));
      }
    });
  }
  return out;
}

std::vector<std::pair<double, double>> word_loops(const std::vector<Word>& code, const Word& v, std::size_t k,
                                                  const Potential& phi, std::size_t n_max) {
  std::vector<std::pair<double, double>> out(n_max, {kNegInf, 0.0});
  if (v.size() > n_max) return out;
  StarAutomaton aut(code, k);
  CyclicDp dp(phi);
  dp.init(0, v);
  for (std::size_t n = v.size(); n <= n_max; ++n) {
    out[n - 1] = dp.close([&](int s) { return aut.accepting(s); });
    if (n == n_max || dp.empty()) break;
    dp.step([&](int s, auto&& emit) {
      for (std::size_t a = 0; a < k; ++a) {
        int t = aut.next(s, static_cast<Symbol>(a));
        if (t >= 0) emit(t, static_cast<Symbol>(a));
      }
    });
  }
  return out;
}

}  // namespace

LoopTable loop_sums(const TowerGraph& tower, const Potential& phi, std::size_t n_max, double slack) {
  if (n_max < 1) throw Error(ErrorKind::invalid_argument, "n_max must be >= 1");
  for (const Word& w : tower.words())
    for (Symbol a : w)
      if (a >= phi.k()) throw Error(ErrorKind::invalid_argument, "generator symbol outside the potential's alphabet");
  LoopTable table;
  const auto z = graph_loops(tower, phi, n_max, false);
  const auto zs = graph_loops(tower, phi, n_max, true);
  const Word& v = tower.words()[tower.vertices()[tower.base()].word];
  table.tolerance = distortion_bound(phi) + static_cast<double>(v.size()) * phi.sup_abs() + slack;
  table.word_side = is_uniquely_decipherable(tower.words()).pass;
  std::vector<std::pair<double, double>> zw, zsw;
  if (table.word_side) {
    zw = word_loops(tower.words(), v, phi.k(), phi, n_max);
    std::vector<Word> rest;
    for (const Word& w : tower.words())
      if (w != v) rest.push_back(w);
    zsw = word_loops(rest, v, phi.k(), phi, n_max);
  }
  auto compare = [&](double a, double b, std::size_t n, const char* what) {
    if (std::isinf(a) && std::isinf(b)) return;
    double d = (std::isinf(a) || std::isinf(b)) ? std::numeric_limits<double>::infinity() : std::fabs(a - b);
    table.max_log_difference = std::max(table.max_log_difference, d);
    if (d > table.tolerance)
      throw Error(ErrorKind::inconsistent_decipherability,
                  std::string(what) + " at n=" + std::to_string(n) + ": loop and word-side sums disagree");
  };
  for (std::size_t n = 1; n <= n_max; ++n) {
    LoopRow row;
    row.n = n;
    std::tie(row.log_z, row.z) = z[n - 1];
    std::tie(row.log_z_star, row.z_star) = zs[n - 1];
    if (table.word_side) {
      row.log_z_word = zw[n - 1].first;
      row.z_word = zw[n - 1].second;
      row.log_z_star_word = zsw[n - 1].first;
      row.z_star_word = zsw[n - 1].second;
      compare(row.log_z, *row.log_z_word, n, "Z_n");
      compare(row.log_z_star, *row.log_z_star_word, n, "Z_n*");
    }
    if (row.z > 0.0) table.loop_gcd = std::gcd(table.loop_gcd, n);
    table.rows.push_back(row);
  }
  return table;
}

double loop_rate(const std::vector<double>& y) {
  std::optional<std::size_t> b;
  for (std::size_t i = y.size(); i-- > 0;)
    if (std::isfinite(y[i])) {
      b = i;
      break;
    }
  if (!b) return kNegInf;
  const std::size_t nb = *b + 1;
  const std::size_t half = (nb + 1) / 2;
  std::optional<std::size_t> a;
  for (std::size_t n = std::min(half, nb - 1); n >= 1; --n)
    if (std::isfinite(y[n - 1])) {
      a = n;
      break;
    }
  if (!a)
    for (std::size_t n = half + 1; n < nb; ++n)
      if (std::isfinite(y[n - 1])) {
        a = n;
        break;
      }
  if (!a) return y[nb - 1] / static_cast<double>(nb);
  return (y[nb - 1] - y[*a - 1]) / static_cast<double>(nb - *a);
}

SprReport spr_diagnostic(const TowerGraph& tower, const Potential& phi, std::size_t n_max, double delta,
                         const FreeFamily* family) {
  SprReport rep;
  rep.loops = loop_sums(tower, phi, n_max);
  std::vector<double> lz, lzs;
  PressureReport full, star;
  std::size_t positive_star = 0;
  for (const LoopRow& r : rep.loops.rows) {
    lz.push_back(r.log_z);
    lzs.push_back(r.log_z_star);
    if (r.z_star > 0.0) ++positive_star;
    const double nn = static_cast<double>(r.n);
    full.table.push_back({r.n, r.log_z, r.log_z / nn, std::numeric_limits<double>::quiet_NaN()});
    star.table.push_back({r.n, r.log_z_star, r.log_z_star / nn, std::numeric_limits<double>::quiet_NaN()});
  }
  rep.rate = loop_rate(lz);
  rep.rate_star = loop_rate(lzs);
  rep.gap = rep.rate - rep.rate_star;
  rep.verdict = margin_rule(star, full, delta);
  if (positive_star < 2) {
    rep.degenerate = true;
    rep.flags.push_back("degenerate");
  }
  if (!rep.loops.word_side) rep.flags.push_back("not-uniquely-decipherable");
  if (family) {
    const std::size_t d = std::min(n_max, family->depth);
    rep.pressure_I = pressure_estimate(family->I, phi, d);
    rep.pressure_F = pressure_estimate(family->F, phi, d);
  }
  return rep;
}

MarkingReport marking_analysis(WordView x, const WordSet& F_in, bool test_union, std::size_t node_budget) {
  const WordSet F = F_in.memoized();
  const std::size_t m = x.size();
  MarkingReport rep;
  rep.window_length = m;
  // in[i][j]: x_{[i,j)} in F for 0 <= i < j <= m
  std::vector<std::vector<char>> in(m + 1, std::vector<char>(m + 1, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j) in[i][j] = F.contains(x.subspan(i, j - i));
  auto marking_with = [&](const std::vector<std::size_t>& J, std::size_t extra) {
    for (std::size_t h : J) {
      if (h == extra) return false;
      if (h < extra ? !in[h][extra] : !in[extra][h]) return false;
    }
    return true;
  };
  std::vector<std::vector<std::size_t>> kept;
  std::vector<std::size_t> J{0};
  std::size_t nodes = 0;
  std::function<void()> dfs = [&]() {
    if (++nodes > node_budget) {
      rep.truncated = true;
      return;
    }
    const std::size_t last = J.back();
    if (last == m) {
      for (std::size_t e = 1; e < m; ++e)
        if (marking_with(J, e)) return;
      ++rep.maximal_count;
      if (kept.size() < kMaxWitnesses) kept.push_back(J);
      return;
    }
    for (std::size_t j = last + 1; j <= m && !rep.truncated; ++j) {
      if (!marking_with(J, j)) continue;
      J.push_back(j);
      dfs();
      J.pop_back();
    }
  };
  dfs();
  for (auto& set : kept) {
    for (auto& i : set) ++i;
    rep.maximal_sets.push_back(set);
  }
  rep.injective_at_window = rep.maximal_count == 1 && !rep.truncated;
  if (test_union) {
    bool closed = true;
    for (std::size_t a = 0; a < kept.size() && closed; ++a)
      for (std::size_t b = a + 1; b < kept.size() && closed; ++b) {
        std::set<std::size_t> u(kept[a].begin(), kept[a].end());
        u.insert(kept[b].begin(), kept[b].end());
        std::vector<std::size_t> uv(u.begin(), u.end());
        for (std::size_t i = 0; i < uv.size() && closed; ++i)
          for (std::size_t j = i + 1; j < uv.size() && closed; ++j)
            if (!in[uv[i] - 1][uv[j] - 1]) closed = false;
      }
    rep.union_closed = closed;
  }
  return rep;
}

WordSet generator_obstruction_set(const OraclePtr& oracle, const std::vector<Word>& I, std::size_t depth) {
  std::set<Word, ShortLex> factors{Word{}};
  for (const Word& w : I) {
    if (w.size() > depth) continue;
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 1; j <= w.size(); ++j) factors.insert(Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j)));
  }
  return WordSet::finite(oracle, std::vector<Word>(factors.begin(), factors.end()), "D(I)");
}

std::vector<std::size_t> sync_times(WordView w, const SyncTriple& t, const WordSet* G, SyncMode mode) {
  const Word x = t.rcs();
  const std::size_t R = t.r.size(), Cl = t.c.size(), tail = t.c.size() + t.s.size();
  std::vector<std::size_t> out;
  if (mode == SyncMode::non_uniform && !G) throw Error(ErrorKind::invalid_argument, "non-uniform mode needs G");
  for (std::size_t i = R; i + tail <= w.size(); ++i) {
    if (!same(w.subspan(i - R, x.size()), x)) continue;
    if (mode == SyncMode::non_uniform && (!G->contains(w.first(i)) || !G->contains(w.subspan(i + Cl)))) continue;
    out.push_back(i);
  }
  return out;
}

WordSet sync_obstruction_set(const SyncTriple& t, const WordSet& G_in, SyncMode mode) {
  const WordSet G = G_in.memoized();
  if (mode == SyncMode::uniform)
    return WordSet::filter(G.oracle_ptr(), [t](WordView w) { return sync_times(w, t, nullptr, SyncMode::uniform).empty(); },
                           "E");
  return WordSet::filter(
      G.oracle_ptr(),
      [t, G](WordView w) { return G.contains(w) && sync_times(w, t, &G, SyncMode::non_uniform).empty(); }, "E");
}

std::vector<EFractionRow> e_fraction_table(const SyncTriple& t, const WordSet& G, SyncMode mode, std::size_t n_from,
                                           std::size_t n_to) {
  const WordSet E = sync_obstruction_set(t, G, mode);
  const WordSet L = WordSet::language(G.oracle_ptr());
  const Potential zero = Potential::zero(G.oracle().k());
  std::vector<EFractionRow> rows;
  for (std::size_t n = n_from; n <= n_to; ++n) {
    EFractionRow r;
    r.n = n;
    r.log_e = log_partition_sum(E, zero, n);
    r.log_l = log_partition_sum(L, zero, n);
    r.fraction = std::isinf(r.log_e) ? 0.0 : std::exp(r.log_e - r.log_l);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace symdyn
