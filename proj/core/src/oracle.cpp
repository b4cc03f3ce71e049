#include "symdyn/oracle.hpp"

#include <limits>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

std::size_t first_unexplored_depth(const Dfa& dfa) {
  const std::size_t n = dfa.size();
  std::vector<std::size_t> depth(n, kUnbounded);
  std::vector<Dfa::State> queue{0};
  depth[0] = 0;
  std::size_t best = kUnbounded;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Dfa::State q = queue[head];
    for (std::size_t a = 0; a < dfa.alphabet_size(); ++a) {
      Dfa::State t = dfa.next(q, static_cast<Symbol>(a));
      if (t == Dfa::kUnexplored) {
        best = std::min(best, depth[static_cast<std::size_t>(q)]);
      } else if (t >= 0 && depth[static_cast<std::size_t>(t)] == kUnbounded) {
        depth[static_cast<std::size_t>(t)] = depth[static_cast<std::size_t>(q)] + 1;
        queue.push_back(t);
      }
    }
  }
  return best;
}

}  // namespace

LanguageOracle::LanguageOracle(std::string family, Alphabet alphabet, Dfa dfa, const OracleOptions& options)
    : family_(std::move(family)), alphabet_(std::move(alphabet)), dfa_(std::move(dfa)) {
  if (dfa_.alphabet_size() != alphabet_.size())
    throw Error(ErrorKind::invalid_argument, "automaton and alphabet sizes differ");
  if (dfa_.size() == 0) dfa_.add_state();
  exact_ = dfa_.complete();
  certified_ = exact_ ? kUnbounded : first_unexplored_depth(dfa_);
  limit_ = options.depth_guard ? *options.depth_guard : default_depth_guard(*this);
  limit_ = std::min(limit_, certified_);
}

Dfa::State LanguageOracle::state_of(WordView w) const {
  if (w.size() > certified_)
    throw Error(ErrorKind::depth_exceeded, "word of length " + std::to_string(w.size()) +
                                               " beyond certified depth " + std::to_string(certified_));
  Dfa::State q = dfa_.run(w);
  if (q == Dfa::kUnexplored)
    throw Error(ErrorKind::depth_exceeded, "membership left the explored presentation");
  return q;
}

bool LanguageOracle::contains(WordView w) const {
  for (Symbol a : w)
    if (a >= alphabet_.size()) return false;
  return state_of(w) >= 0;
}

void LanguageOracle::check_depth(std::size_t n) const {
  if (n > limit_)
    throw Error(ErrorKind::depth_exceeded, "length " + std::to_string(n) + " exceeds enumeration limit " +
                                               std::to_string(limit_) + " of " + family_);
}

void LanguageOracle::for_each(std::size_t n, const std::function<void(WordView, Dfa::State)>& fn) const {
  check_depth(n);
  const std::size_t k = alphabet_.size();
  Word w(n);
  std::vector<Dfa::State> states(n + 1, 0);
  std::vector<std::size_t> next_sym(n + 1, 0);
  std::size_t depth = 0;
  if (n == 0) {
    fn(WordView(w), 0);
    return;
  }
  while (true) {
    if (next_sym[depth] >= k) {
      if (depth == 0) break;
      --depth;
      continue;
    }
    Symbol a = static_cast<Symbol>(next_sym[depth]++);
    Dfa::State t = dfa_.next(states[depth], a);
    if (t < 0) continue;
    w[depth] = a;
    if (depth + 1 == n) {
      fn(WordView(w), t);
      continue;
    }
    ++depth;
    states[depth] = t;
    next_sym[depth] = 0;
  }
}

std::vector<Word> LanguageOracle::enumerate(std::size_t n) const {
  std::vector<Word> out;
  for_each(n, [&](WordView w, Dfa::State) { out.emplace_back(w.begin(), w.end()); });
  return out;
}

double LanguageOracle::count(std::size_t n) const {
  if (n > certified_)
    throw Error(ErrorKind::depth_exceeded, "count beyond certified depth of " + family_);
  std::vector<double> cur(dfa_.size(), 0.0), nxt(dfa_.size());
  cur[0] = 1.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (std::size_t q = 0; q < cur.size(); ++q) {
      if (cur[q] == 0.0) continue;
      for (std::size_t a = 0; a < dfa_.alphabet_size(); ++a) {
        Dfa::State t = dfa_.next(static_cast<Dfa::State>(q), static_cast<Symbol>(a));
        if (t >= 0) nxt[static_cast<std::size_t>(t)] += cur[q];
      }
    }
    cur.swap(nxt);
  }
  double total = 0.0;
  for (double c : cur) total += c;
  return total;
}

std::size_t default_depth_guard(const LanguageOracle& oracle) {
  constexpr double kBudget = 16777216.0;  // 2^24
  std::size_t n = 0;
  const std::size_t cap = std::min<std::size_t>(64, oracle.certified_depth());
  while (n < cap && oracle.count(n + 1) <= kBudget) ++n;
  return n;
}

}  // namespace symdyn
