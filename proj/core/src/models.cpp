#include "symdyn/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr std::size_t kAll = std::numeric_limits<std::size_t>::max();

struct DeBruijn {
  std::size_t memory = 0;
  std::vector<Word> blocks;  // surviving vertices
  LabelledGraph graph;
};

bool clean(WordView w, const std::vector<Word>& forbidden) {
  for (const Word& f : forbidden)
    if (contains_factor(w, f)) return false;
  return true;
}

DeBruijn build_de_bruijn(const SftSpec& spec) {
  const std::size_t k = spec.alphabet.size();
  for (const Word& f : spec.forbidden) {
    if (f.empty()) throw Error(ErrorKind::invalid_argument, "forbidden word must be nonempty");
    for (Symbol a : f)
      if (a >= k) throw Error(ErrorKind::invalid_argument, "forbidden word uses unknown symbol");
  }
  DeBruijn db;
  db.memory = spec.memory();
  const std::size_t m = db.memory;
  if (m > 20) throw Error(ErrorKind::invalid_argument, "forbidden words longer than 21 symbols");
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= k;

  std::vector<Word> blocks;
  std::map<Word, std::size_t> id;
  for (std::size_t c = 0; c < total; ++c) {
    Word b(m);
    std::size_t x = c;
    for (std::size_t i = m; i-- > 0;) {
      b[i] = static_cast<Symbol>(x % k);
      x /= k;
    }
    if (clean(b, spec.forbidden)) {
      id[b] = blocks.size();
      blocks.push_back(std::move(b));
    }
  }
  const std::size_t n = blocks.size();
  std::vector<std::vector<std::pair<Symbol, std::size_t>>> out(n);
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t a = 0; a < k; ++a) {
      Word ext = blocks[v];
      ext.push_back(static_cast<Symbol>(a));
      if (!clean(ext, spec.forbidden)) continue;
      Word to(ext.begin() + 1, ext.end());
      auto it = id.find(to);
      if (it == id.end()) continue;
      out[v].emplace_back(static_cast<Symbol>(a), it->second);
      ++indeg[it->second];
    }
  }
  // Drop vertices with no bi-infinite continuation.
  std::vector<bool> alive(n, true);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> in(n, 0), outd(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      for (const auto& [a, t] : out[v])
        if (alive[t]) {
          ++outd[v];
          ++in[t];
        }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && (in[v] == 0 || outd[v] == 0)) {
        alive[v] = false;
        changed = true;
      }
  }
  std::vector<std::size_t> remap(n, kAll);
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v]) {
      remap[v] = db.blocks.size();
      db.blocks.push_back(blocks[v]);
    }
  if (db.blocks.empty()) throw Error(ErrorKind::empty_language, "every symbol is stranded");
  db.graph.vertices = db.blocks.size();
  db.graph.alphabet = k;
  db.graph.out.resize(db.blocks.size());
  for (std::size_t v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    for (const auto& [a, t] : out[v])
      if (alive[t]) db.graph.out[remap[v]].emplace_back(a, remap[t]);
  }
  return db;
}

}  // namespace

std::size_t SftSpec::memory() const {
  std::size_t m = 0;
  for (const Word& f : forbidden) m = std::max(m, f.size());
  return m == 0 ? 0 : m - 1;
}

OraclePtr sft_from_forbidden(const SftSpec& spec, const OracleOptions& options) {
  DeBruijn db = build_de_bruijn(spec);
  Dfa dfa = determinize(db.graph, kAll, options.max_states);
  auto oracle = std::make_shared<LanguageOracle>("sft", spec.alphabet, std::move(dfa), options);
  oracle->set_locality(db.memory + 1);
  return oracle;
}

SftEntropy sft_entropy(const SftSpec& spec) {
  DeBruijn db = build_de_bruijn(spec);
  const std::size_t n = db.graph.vertices;
  SftEntropy result;
  std::size_t first = db.graph.out[0].size();
  bool constant = true;
  for (std::size_t v = 0; v < n; ++v) constant = constant && db.graph.out[v].size() == first;
  if (constant) {
    result.value = std::log(static_cast<double>(first));
    result.row_sum_exact = true;
    return result;
  }
  // Power iteration on A + I, which is aperiodic on every irreducible block.
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  double lambda = 0.0;
  int stable = 0;
  for (std::size_t it = 1; it <= 2000000; ++it) {
    for (std::size_t v = 0; v < n; ++v) {
      double s = x[v];
      for (const auto& [a, t] : db.graph.out[v]) s += x[t];
      y[v] = s;
    }
    double sum = std::accumulate(y.begin(), y.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) x[v] = y[v] / sum;
    double prev = lambda;
    lambda = sum;
    result.iterations = it;
    if (std::fabs(lambda - prev) <= 1e-12 * lambda) {
      if (++stable >= 3) break;
    } else {
      stable = 0;
    }
  }
  result.value = std::log(lambda - 1.0);
  return result;
}

SftSpec cycle_sft_spec(std::size_t k) {
  if (k < 4) throw Error(ErrorKind::invalid_argument, "cycle SFT needs k >= 4");
  SftSpec spec{Alphabet::numbered(1, k), {}};
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (b != (a + 1) % k && b != (a + 2) % k)
        spec.forbidden.push_back({static_cast<Symbol>(a), static_cast<Symbol>(b)});
  return spec;
}

OraclePtr cycle_sft(std::size_t k, const OracleOptions& options) {
  auto spec = cycle_sft_spec(k);
  DeBruijn db = build_de_bruijn(spec);
  Dfa dfa = determinize(db.graph, kAll, options.max_states);
  auto oracle = std::make_shared<LanguageOracle>("cycle_sft", spec.alphabet, std::move(dfa), options);
  oracle->set_locality(2);
  return oracle;
}

BetaExpansion quasi_greedy(double beta, std::size_t n, double tolerance) {
  using boost::multiprecision::cpp_rational;
  if (!(beta > 1.0) || !std::isfinite(beta)) throw Error(ErrorKind::invalid_argument, "beta must exceed 1");
  // The double is taken as an exact dyadic rational; the remainders are exact.
  int e = 0;
  double mant = std::frexp(beta, &e);
  cpp_rational b = cpp_rational(static_cast<long long>(std::ldexp(mant, 53))) ;
  if (e - 53 >= 0)
    b *= cpp_rational(boost::multiprecision::cpp_int(1) << (e - 53));
  else
    b /= cpp_rational(boost::multiprecision::cpp_int(1) << (53 - e));
  const cpp_rational tol(static_cast<long long>(std::ldexp(tolerance, 60)), boost::multiprecision::cpp_int(1) << 60);
  const cpp_rational band = tol * 1000;
  cpp_rational r = 1;
  Word greedy;
  BetaExpansion out;
  for (std::size_t i = 1; i <= n; ++i) {
    cpp_rational t = b * r;
    boost::multiprecision::cpp_int d = boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t);
    cpp_rational frac = t - cpp_rational(d);
    cpp_rational up = 1 - frac;
    if (frac < tol || up < tol) {
      if (up < tol) d += 1;
      greedy.push_back(static_cast<Symbol>(d));
      out.snapped_at = i;
      break;
    }
    if (frac < band || up < band)
      throw Error(ErrorKind::expansion_uncertain,
                  "digit " + std::to_string(i) + " of the expansion of 1 is too close to termination to resolve");
    greedy.push_back(static_cast<Symbol>(d));
    r = frac;
  }
  if (out.snapped_at) {
    Word period = greedy;
    period.back() = static_cast<Symbol>(period.back() - 1);
    out.period = period;
    for (std::size_t i = 0; i < n; ++i) out.digits.push_back(period[i % period.size()]);
  } else {
    out.digits = greedy;
  }
  return out;
}

OraclePtr beta_shift(const BetaSpec& spec, const OracleOptions& options) {
  Word pre, per, digits;
  bool periodic = false;
  std::size_t k = 0;
  std::vector<std::string> notes;
  if (spec.period) {
    pre = spec.preperiod.value_or(Word{});
    per = *spec.period;
    if (per.empty()) throw Error(ErrorKind::invalid_argument, "driving sequence period must be nonempty");
    periodic = true;
    Symbol mx = 0;
    for (Symbol a : pre) mx = std::max(mx, a);
    for (Symbol a : per) mx = std::max(mx, a);
    k = static_cast<std::size_t>(mx) + 1;
    // z must dominate its shifts
    Word z = concat(pre, power(per, 3));
    for (std::size_t s = 1; s < pre.size() + per.size(); ++s)
      if (std::lexicographical_compare(z.begin(), z.end() - static_cast<std::ptrdiff_t>(s), z.begin() + static_cast<std::ptrdiff_t>(s), z.end()))
        throw Error(ErrorKind::invalid_argument, "driving sequence is not lexicographically maximal");
    if (spec.beta) k = std::max<std::size_t>(k, static_cast<std::size_t>(std::ceil(*spec.beta)));
  } else if (spec.beta) {
    k = static_cast<std::size_t>(std::ceil(*spec.beta));
    BetaExpansion e = quasi_greedy(*spec.beta, options.certificate_depth, spec.tolerance);
    if (e.period) {
      per = *e.period;
      periodic = true;
      notes.push_back("quasi-greedy expansion of 1 is periodic with period " + std::to_string(per.size()));
    } else {
      digits = e.digits;
      notes.push_back("driving sequence certified to depth " + std::to_string(digits.size()));
    }
  } else {
    throw Error(ErrorKind::invalid_argument, "beta shift needs beta or an explicit driving sequence");
  }
  if (k < 2) k = 2;
  Dfa dfa(k);
  if (periodic) {
    const std::size_t p = pre.size(), q = per.size();
    auto z_at = [&](std::size_t j) { return j < p ? pre[j] : per[(j - p) % q]; };
    auto norm = [&](std::size_t j) { return j < p + q ? j : p + (j - p) % q; };
    for (std::size_t j = 0; j < p + q; ++j) dfa.add_state();
    for (std::size_t j = 0; j < p + q; ++j)
      for (std::size_t a = 0; a < k; ++a) {
        Symbol zj = z_at(j);
        Dfa::State t = a < zj ? 0 : a == zj ? static_cast<Dfa::State>(norm(j + 1)) : Dfa::kDead;
        dfa.set(static_cast<Dfa::State>(j), static_cast<Symbol>(a), t);
      }
  } else {
    const std::size_t depth = digits.size();
    for (std::size_t j = 0; j <= depth; ++j) dfa.add_state();
    for (std::size_t j = 0; j < depth; ++j)
      for (std::size_t a = 0; a < k; ++a) {
        Dfa::State t = a < digits[j] ? 0 : a == digits[j] ? static_cast<Dfa::State>(j + 1) : Dfa::kDead;
        dfa.set(static_cast<Dfa::State>(j), static_cast<Symbol>(a), t);
      }
  }
  auto oracle = std::make_shared<LanguageOracle>("beta", Alphabet::digits(k), std::move(dfa), options);
  for (auto& n : notes) oracle->add_note(n);
  return oracle;
}

bool SGapSpec::contains(std::size_t n) const {
  if (cofinite_from && n >= *cofinite_from) return true;
  return std::find(S.begin(), S.end(), n) != S.end();
}

bool SGapSpec::has_at_least(std::size_t n) const {
  if (cofinite_from) return true;
  for (std::size_t s : S)
    if (s >= n) return true;
  return false;
}

OraclePtr s_gap_shift(const SGapSpec& spec, const OracleOptions& options) {
  if (spec.S.empty() && !spec.cofinite_from) throw Error(ErrorKind::invalid_argument, "S must be nonempty");
  // key: (phase, zero count); phase 0 = before the first 1
  using Key = std::pair<int, std::size_t>;
  std::size_t cap = kAll;
  if (spec.cofinite_from) cap = *spec.cofinite_from;
  std::function<std::optional<Key>(const Key&, Symbol)> step = [&spec, cap](const Key& key,
                                                                        Symbol a) -> std::optional<Key> {
    auto [phase, c] = key;
    if (a == 0) {
      if (!spec.has_at_least(c + 1)) return std::nullopt;
      return Key{phase, std::min(c + 1, cap)};
    }
    if (phase == 1 && !spec.contains(c)) return std::nullopt;
    return Key{1, 0};
  };
  Dfa dfa = explore<Key>(Key{0, 0}, 2, step, kAll, options.max_states);
  auto oracle = std::make_shared<LanguageOracle>("s_gap", Alphabet::digits(2), std::move(dfa), options);
  if (!spec.cofinite_from) {
    std::size_t mx = *std::max_element(spec.S.begin(), spec.S.end());
    oracle->set_locality(mx + 2);
  }
  return oracle;
}

OraclePtr coded_shift(const CodedSpec& spec, const OracleOptions& options) {
  if (spec.generators.empty()) throw Error(ErrorKind::invalid_argument, "coded shift needs generators");
  LabelledGraph g;
  g.alphabet = spec.alphabet.size();
  std::vector<std::size_t> start;
  std::size_t pad = 0;
  for (const Word& w : spec.generators) {
    if (w.empty()) throw Error(ErrorKind::invalid_argument, "empty generator");
    for (Symbol a : w)
      if (a >= g.alphabet) throw Error(ErrorKind::invalid_argument, "generator uses unknown symbol");
    start.push_back(g.vertices);
    g.vertices += w.size();
    pad = std::max(pad, w.size());
  }
  g.out.resize(g.vertices);
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    const Word& w = spec.generators[i];
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      std::size_t v = start[i] + pos;
      if (pos + 1 < w.size()) {
        g.out[v].emplace_back(w[pos], v + 1);
      } else {
        for (std::size_t s : start) g.out[v].emplace_back(w[pos], s);
      }
    }
  }
  Dfa dfa = determinize(g, kAll, options.max_states);
  auto oracle = std::make_shared<LanguageOracle>("coded", spec.alphabet, std::move(dfa), options);
  oracle->add_note("coded membership: factor of a generator concatenation (window padding " +
                   std::to_string(2 * pad) + ")");
  if (spec.truncated) oracle->add_note("generating set truncated to " + std::to_string(spec.generators.size()) +
                                       " generators");
  return oracle;
}

namespace {

using boost::multiprecision::cpp_rational;
using QMatrix = std::vector<std::vector<cpp_rational>>;

// Reduced row echelon form of the row space; zero rows dropped.
QMatrix rref(QMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    cpp_rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      cpp_rational f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  m.resize(r);
  return m;
}

}  // namespace

OraclePtr cocyclic_shift(const CocyclicSpec& spec, const OracleOptions& options) {
  const std::size_t k = spec.alphabet.size();
  if (spec.matrices.size() != k) throw Error(ErrorKind::invalid_argument, "one matrix per symbol required");
  const std::size_t d = spec.matrices.front().size();
  if (d == 0) throw Error(ErrorKind::invalid_argument, "matrices must be nonempty");
  std::vector<QMatrix> phi;
  for (const auto& m : spec.matrices) {
    if (m.size() != d) throw Error(ErrorKind::invalid_argument, "matrices must share one dimension");
    QMatrix q(d, std::vector<cpp_rational>(d));
    for (std::size_t i = 0; i < d; ++i) {
      if (m[i].size() != d) throw Error(ErrorKind::invalid_argument, "matrices must be square");
      for (std::size_t j = 0; j < d; ++j) {
        if (m[i][j].den == 0) throw Error(ErrorKind::invalid_argument, "zero denominator");
        q[i][j] = cpp_rational(m[i][j].num) / cpp_rational(m[i][j].den);
      }
    }
    phi.push_back(std::move(q));
  }
  // A state is the row space of the product so far; only it decides future nonvanishing.
  using Key = std::vector<std::vector<cpp_rational>>;
  QMatrix identity(d, std::vector<cpp_rational>(d, 0));
  for (std::size_t i = 0; i < d; ++i) identity[i][i] = 1;
  std::function<std::optional<Key>(const Key&, Symbol)> step = [&phi, d](const Key& basis,
                                                                      Symbol a) -> std::optional<Key> {
    QMatrix prod(basis.size(), std::vector<cpp_rational>(d, 0));
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t l = 0; l < d; ++l) {
        if (basis[i][l] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) prod[i][j] += basis[i][l] * phi[a][l][j];
      }
    QMatrix red = rref(std::move(prod));
    if (red.empty()) return std::nullopt;
    return red;
  };
  bool capped = false;
  Dfa dfa = explore<Key>(rref(identity), k, step, options.certificate_depth, options.max_states, &capped);
  auto oracle = std::make_shared<LanguageOracle>("cocyclic", spec.alphabet, std::move(dfa), options);
  oracle->add_note("membership: nonzero exact matrix product");
  if (capped) oracle->add_note("state exploration capped");
  return oracle;
}

OraclePtr sliding_block_factor(const OraclePtr& source, const BlockCode& code, const OracleOptions& options) {
  const std::size_t k = source->k();
  const std::size_t m = code.radius;
  const std::size_t width = 2 * m + 1;
  std::size_t windows = 1;
  for (std::size_t i = 0; i < width; ++i) windows *= k;
  if (code.table.size() != windows)
    throw Error(ErrorKind::invalid_argument, "block code table must have k^(2m+1) entries");
  for (const Word& w : source->enumerate(width)) {
    std::size_t c = 0;
    for (Symbol a : w) c = c * k + a;
    if (code.table[c] == BlockCode::kUndefined || code.table[c] >= code.target.size())
      throw Error(ErrorKind::invalid_argument,
                  "block code undefined on source window '" + source->alphabet().format(w) + "'");
  }
  std::size_t low = windows / k;  // k^(2m)
  using Key = std::vector<std::pair<Dfa::State, std::size_t>>;
  Key init;
  for (const Word& u : source->enumerate(2 * m)) {
    std::size_t c = 0;
    for (Symbol a : u) c = c * k + a;
    init.emplace_back(source->dfa().run(u), c);
  }
  std::sort(init.begin(), init.end());
  const Dfa& src = source->dfa();
  bool truncated = false;
  std::function<std::optional<Key>(const Key&, Symbol)> step = [&](const Key& from,
                                                                Symbol b) -> std::optional<Key> {
    Key to;
    for (const auto& [q, c] : from)
      for (std::size_t a = 0; a < k; ++a) {
        std::size_t win = c * k + a;
        if (code.table[win] != b) continue;
        Dfa::State t = src.next(q, static_cast<Symbol>(a));
        if (t == Dfa::kUnexplored) truncated = true;
        if (t < 0) continue;
        to.emplace_back(t, m == 0 ? 0 : win % low);
      }
    if (to.empty()) return std::nullopt;
    std::sort(to.begin(), to.end());
    to.erase(std::unique(to.begin(), to.end()), to.end());
    return to;
  };
  std::size_t depth = source->exact() ? kAll : source->certified_depth() - 2 * m;
  Dfa dfa = explore<Key>(init, code.target.size(), step, depth, options.max_states);
  auto oracle = std::make_shared<LanguageOracle>("factor", code.target, std::move(dfa), options);
  oracle->add_note("image of a radius-" + std::to_string(m) + " block code on " + source->family());
  if (truncated) oracle->add_note("source presentation truncated");
  return oracle;
}

}  // namespace symdyn
