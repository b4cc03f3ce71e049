#include "symdyn/dfa.hpp"

#include <algorithm>

namespace symdyn {

Dfa::State Dfa::add_state() {
  next_.resize(next_.size() + k_, kUnexplored);
  return static_cast<State>(size() - 1);
}

bool Dfa::complete() const noexcept {
  return std::find(next_.begin(), next_.end(), kUnexplored) == next_.end();
}

Dfa::State Dfa::run(WordView w, State from) const {
  State q = from;
  for (Symbol a : w) {
    if (q < 0) return q;
    q = next(q, a);
  }
  return q;
}

Dfa Dfa::trimmed() const {
  const std::size_t n = size();
  std::vector<bool> alive(n, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t q = 0; q < n; ++q) {
      if (!alive[q]) continue;
      bool any = false;
      for (std::size_t a = 0; a < k_ && !any; ++a) {
        State t = next(static_cast<State>(q), static_cast<Symbol>(a));
        any = t == kUnexplored || (t >= 0 && alive[static_cast<std::size_t>(t)]);
      }
      if (!any) {
        alive[q] = false;
        changed = true;
      }
    }
  }
  Dfa out(k_);
  std::vector<State> id(n, kDead);
  if (n == 0 || !alive[0]) {
    out.add_state();
    for (std::size_t a = 0; a < k_; ++a) out.set(0, static_cast<Symbol>(a), kDead);
    return out;
  }
  for (std::size_t q = 0; q < n; ++q)
    if (alive[q]) id[q] = out.add_state();
  for (std::size_t q = 0; q < n; ++q) {
    if (!alive[q]) continue;
    for (std::size_t a = 0; a < k_; ++a) {
      State t = next(static_cast<State>(q), static_cast<Symbol>(a));
      out.set(id[q], static_cast<Symbol>(a), t >= 0 ? id[static_cast<std::size_t>(t)] : t);
    }
  }
  return out;
}

Dfa determinize(const LabelledGraph& g, std::size_t max_depth, std::size_t max_states) {
  using Key = std::vector<std::size_t>;
  Key all(g.vertices);
  for (std::size_t v = 0; v < g.vertices; ++v) all[v] = v;
  std::function<std::optional<Key>(const Key&, Symbol)> step =
      [&g](const Key& from, Symbol a) -> std::optional<Key> {
    Key to;
    for (std::size_t v : from)
      for (const auto& [b, t] : g.out[v])
        if (b == a) to.push_back(t);
    if (to.empty()) return std::nullopt;
    std::sort(to.begin(), to.end());
    to.erase(std::unique(to.begin(), to.end()), to.end());
    return to;
  };
  if (g.vertices == 0) {
    Dfa d(g.alphabet);
    d.add_state();
    for (std::size_t a = 0; a < g.alphabet; ++a) d.set(0, static_cast<Symbol>(a), Dfa::kDead);
    return d;
  }
  return explore<Key>(all, g.alphabet, step, max_depth, max_states);
}

std::vector<std::size_t> follower_classes(const Dfa& dfa, std::size_t rounds) {
  const std::size_t n = dfa.size();
  const std::size_t k = dfa.alphabet_size();
  std::vector<std::size_t> cls(n, 0);
  std::size_t classes = n ? 1 : 0;
  for (std::size_t round = 0; rounds == 0 || round < rounds; ++round) {
    std::map<std::vector<long long>, std::size_t> sig_ids;
    std::vector<std::size_t> next_cls(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<long long> sig;
      sig.reserve(k + 1);
      sig.push_back(static_cast<long long>(cls[q]));
      for (std::size_t a = 0; a < k; ++a) {
        Dfa::State t = dfa.next(static_cast<Dfa::State>(q), static_cast<Symbol>(a));
        sig.push_back(t >= 0 ? static_cast<long long>(cls[static_cast<std::size_t>(t)]) : t);
      }
      auto [it, fresh] = sig_ids.emplace(std::move(sig), sig_ids.size());
      next_cls[q] = it->second;
    }
    cls.swap(next_cls);
    if (sig_ids.size() == classes) break;
    classes = sig_ids.size();
  }
  return cls;
}

}  // namespace symdyn
