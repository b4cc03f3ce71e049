#include "symdyn/word_set.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

// Depth-first walk over L_n extending prefix. prune(prefix) == true cuts a branch.
void walk(const LanguageOracle& oracle, WordView prefix, std::size_t n,
          const std::function<bool(WordView, Dfa::State)>& prune,
          const std::function<void(WordView, Dfa::State)>& leaf) {
  if (prefix.size() > n) return;
  Dfa::State q0 = oracle.state_of(prefix);
  if (q0 < 0) return;
  Word w(n);
  std::copy(prefix.begin(), prefix.end(), w.begin());
  const std::size_t start = prefix.size();
  if (prune && prune(WordView(w).first(start), q0)) return;
  if (start == n) {
    leaf(WordView(w), q0);
    return;
  }
  const std::size_t k = oracle.k();
  const Dfa& dfa = oracle.dfa();
  std::vector<Dfa::State> states(n + 1, 0);
  std::vector<std::size_t> next_sym(n + 1, 0);
  std::size_t depth = start;
  states[depth] = q0;
  while (true) {
    if (next_sym[depth] >= k) {
      if (depth == start) break;
      --depth;
      continue;
    }
    Symbol a = static_cast<Symbol>(next_sym[depth]++);
    Dfa::State t = dfa.next(states[depth], a);
    if (t == Dfa::kUnexplored) throw Error(ErrorKind::depth_exceeded, "enumeration beyond certified depth");
    if (t < 0) continue;
    w[depth] = a;
    if (prune && prune(WordView(w).first(depth + 1), t)) continue;
    if (depth + 1 == n) {
      leaf(WordView(w), t);
      continue;
    }
    ++depth;
    states[depth] = t;
    next_sym[depth] = 0;
  }
}

struct MemoCache {
  std::mutex mutex;
  std::unordered_map<Word, bool, WordHash> table;
};

}  // namespace

WordSet WordSet::language(OraclePtr oracle) {
  WordSet s;
  s.kind_ = Kind::language;
  s.oracle_ = std::move(oracle);
  s.label_ = "L";
  return s;
}

WordSet WordSet::filter(OraclePtr oracle, Predicate pred, std::string label, Predicate viable) {
  WordSet s;
  s.kind_ = Kind::predicate;
  s.oracle_ = std::move(oracle);
  s.pred_ = std::move(pred);
  s.viable_ = std::move(viable);
  s.label_ = std::move(label);
  return s;
}

WordSet WordSet::finite(OraclePtr oracle, std::vector<Word> words, std::string label) {
  auto table = std::make_shared<std::vector<std::vector<Word>>>();
  for (Word& w : words) {
    if (!oracle->contains(w))
      throw Error(ErrorKind::not_in_language, "'" + oracle->alphabet().format(w) + "' in set " + label);
    if (table->size() <= w.size()) table->resize(w.size() + 1);
    (*table)[w.size()].push_back(std::move(w));
  }
  for (auto& bucket : *table) {
    std::sort(bucket.begin(), bucket.end());
    bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
  }
  WordSet s;
  s.kind_ = Kind::finite;
  s.oracle_ = std::move(oracle);
  s.by_length_ = std::move(table);
  s.label_ = std::move(label);
  return s;
}

WordSet WordSet::empty(OraclePtr oracle) { return finite(std::move(oracle), {}, "empty"); }

WordSet WordSet::regular(OraclePtr oracle, std::shared_ptr<const Dfa> sub, std::vector<bool> accepting,
                         std::string label) {
  if (!sub || sub->alphabet_size() != oracle->k() || accepting.size() != sub->size())
    throw Error(ErrorKind::invalid_argument, "regular set automaton does not match the shift");
  WordSet s;
  s.kind_ = Kind::regular;
  s.oracle_ = std::move(oracle);
  s.sub_ = std::move(sub);
  s.accepting_ = std::move(accepting);
  s.label_ = std::move(label);
  return s;
}

WordSet WordSet::star(const WordSet& base, std::string label) {
  auto pred = [base](WordView w) {
    std::vector<bool> ok(w.size() + 1, false);
    ok[0] = true;
    for (std::size_t j = 1; j <= w.size(); ++j)
      for (std::size_t i = 0; i < j && !ok[j]; ++i)
        if (ok[i] && base.contains(w.subspan(i, j - i))) ok[j] = true;
    return static_cast<bool>(ok[w.size()]);
  };
  return filter(base.oracle_, pred, std::move(label));
}

WordSet WordSet::unite(const WordSet& other, std::string label) const {
  Predicate viable;
  if (viable_ && other.viable_) {
    viable = [a = viable_, b = other.viable_](WordView w) { return a(w) || b(w); };
  }
  return filter(oracle_, [a = *this, b = other](WordView w) { return a.contains(w) || b.contains(w); },
                std::move(label), viable);
}

WordSet WordSet::intersect(const WordSet& other, std::string label) const {
  Predicate viable;
  if (viable_ && other.viable_)
    viable = [a = viable_, b = other.viable_](WordView w) { return a(w) && b(w); };
  else if (viable_)
    viable = viable_;
  else if (other.viable_)
    viable = other.viable_;
  return filter(oracle_, [a = *this, b = other](WordView w) { return a.contains(w) && b.contains(w); },
                std::move(label), viable);
}

WordSet WordSet::minus(const WordSet& other, std::string label) const {
  return filter(oracle_, [a = *this, b = other](WordView w) { return a.contains(w) && !b.contains(w); },
                std::move(label), viable_);
}

WordSet WordSet::at_least(std::size_t n, std::string label) const {
  return filter(oracle_, [a = *this, n](WordView w) { return w.size() >= n && a.contains(w); }, std::move(label),
                viable_);
}

WordSet WordSet::memoized() const {
  if (kind_ == Kind::language || kind_ == Kind::finite) return *this;
  auto cache = std::make_shared<MemoCache>();
  WordSet inner = *this;
  WordSet s = filter(
      oracle_,
      [inner, cache](WordView w) {
        Word key(w.begin(), w.end());
        {
          std::lock_guard lock(cache->mutex);
          auto it = cache->table.find(key);
          if (it != cache->table.end()) return it->second;
        }
        bool v = inner.contains(w);
        std::lock_guard lock(cache->mutex);
        cache->table.emplace(std::move(key), v);
        return v;
      },
      label_, viable_);
  return s;
}

bool WordSet::contains(WordView w) const {
  switch (kind_) {
    case Kind::language:
      return oracle_->contains(w);
    case Kind::finite: {
      if (w.size() >= by_length_->size()) return false;
      const auto& bucket = (*by_length_)[w.size()];
      Word key(w.begin(), w.end());
      return std::binary_search(bucket.begin(), bucket.end(), key);
    }
    case Kind::regular: {
      if (!oracle_->contains(w)) return false;
      Dfa::State q = sub_->run(w);
      return q >= 0 && accepting_[static_cast<std::size_t>(q)];
    }
    case Kind::predicate:
      return oracle_->contains(w) && pred_(w);
  }
  return false;
}

void WordSet::for_each_extending(WordView prefix, std::size_t n, const std::function<void(WordView)>& fn) const {
  switch (kind_) {
    case Kind::finite: {
      if (n >= by_length_->size()) return;
      for (const Word& w : (*by_length_)[n])
        if (starts_with(w, prefix)) fn(w);
      return;
    }
    case Kind::language:
      oracle_->check_depth(n);
      walk(*oracle_, prefix, n, nullptr, [&](WordView w, Dfa::State) { fn(w); });
      return;
    case Kind::regular: {
      oracle_->check_depth(n);
      const Dfa& sub = *sub_;
      auto prune = [&sub](WordView p, Dfa::State) { return sub.run(p) < 0; };
      walk(*oracle_, prefix, n, prune, [&](WordView w, Dfa::State) {
        Dfa::State q = sub.run(w);
        if (q >= 0 && accepting_[static_cast<std::size_t>(q)]) fn(w);
      });
      return;
    }
    case Kind::predicate: {
      oracle_->check_depth(n);
      std::function<bool(WordView, Dfa::State)> prune;
      if (viable_) prune = [this](WordView p, Dfa::State) { return !viable_(p); };
      walk(*oracle_, prefix, n, prune, [&](WordView w, Dfa::State) {
        if (pred_(w)) fn(w);
      });
      return;
    }
  }
}

void WordSet::for_each(std::size_t n, const std::function<void(WordView)>& fn) const {
  for_each_extending(WordView(), n, fn);
}

std::vector<Word> WordSet::words(std::size_t n) const {
  std::vector<Word> out;
  for_each(n, [&](WordView w) { out.emplace_back(w.begin(), w.end()); });
  return out;
}

std::vector<Word> WordSet::words_up_to(std::size_t n) const {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= n; ++len) {
    auto ws = words(len);
    out.insert(out.end(), std::make_move_iterator(ws.begin()), std::make_move_iterator(ws.end()));
  }
  return out;
}

std::size_t WordSet::count(std::size_t n) const {
  std::size_t c = 0;
  for_each(n, [&](WordView) { ++c; });
  return c;
}

std::optional<std::size_t> WordSet::max_length() const {
  if (kind_ != Kind::finite) return std::nullopt;
  for (std::size_t n = by_length_->size(); n-- > 0;)
    if (!(*by_length_)[n].empty()) return n;
  return 0;
}

}  // namespace symdyn
