#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "symdyn/word.hpp"

namespace symdyn {

// Deterministic automaton over alphabet indices. State 0 is the start state.
// Transitions may be left unexplored when a construction is truncated at a depth.
class Dfa {
 public:
  using State = std::int32_t;
  static constexpr State kDead = -1;
  static constexpr State kUnexplored = -2;

  Dfa() = default;
  explicit Dfa(std::size_t alphabet_size) : k_(alphabet_size) {}

  State add_state();
  void set(State q, Symbol a, State target) { next_[static_cast<std::size_t>(q) * k_ + a] = target; }
  State next(State q, Symbol a) const { return next_[static_cast<std::size_t>(q) * k_ + a]; }

  std::size_t alphabet_size() const noexcept { return k_; }
  std::size_t size() const noexcept { return k_ == 0 ? 0 : next_.size() / k_; }
  bool complete() const noexcept;

  // kDead if a transition is missing; kUnexplored if the run leaves the explored part.
  State run(WordView w, State from = 0) const;

  // Removes states with no infinite forward path (only meaningful when complete).
  Dfa trimmed() const;

 private:
  std::size_t k_ = 0;
  std::vector<State> next_;
};

// Breadth-first exploration of a state space given by keys. States first reached at
// depth >= max_depth keep unexplored transitions.
template <class Key>
Dfa explore(const Key& initial, std::size_t k,
            const std::function<std::optional<Key>(const Key&, Symbol)>& step,
            std::size_t max_depth, std::size_t max_states, bool* exhausted = nullptr) {
  Dfa dfa(k);
  std::map<Key, Dfa::State> ids;
  std::vector<const Key*> keys;
  std::vector<std::size_t> depth;
  auto intern = [&](const Key& key, std::size_t d) {
    auto [it, fresh] = ids.emplace(key, static_cast<Dfa::State>(keys.size()));
    if (fresh) {
      dfa.add_state();
      keys.push_back(&it->first);
      depth.push_back(d);
    }
    return it->second;
  };
  intern(initial, 0);
  bool hit_cap = false;
  for (std::size_t q = 0; q < keys.size(); ++q) {
    if (depth[q] >= max_depth) continue;
    if (keys.size() >= max_states) {
      hit_cap = true;
      break;
    }
    for (std::size_t a = 0; a < k; ++a) {
      auto nxt = step(*keys[q], static_cast<Symbol>(a));
      dfa.set(static_cast<Dfa::State>(q), static_cast<Symbol>(a),
              nxt ? intern(*nxt, depth[q] + 1) : Dfa::kDead);
    }
  }
  if (exhausted) *exhausted = hit_cap;
  return dfa;
}

// Subset construction for a labelled graph in which every vertex is initial.
struct LabelledGraph {
  std::size_t vertices = 0;
  std::size_t alphabet = 0;
  // out[v] = list of (symbol, target)
  std::vector<std::vector<std::pair<Symbol, std::size_t>>> out;
};

Dfa determinize(const LabelledGraph& g, std::size_t max_depth, std::size_t max_states);

// Moore partition refinement: class id per state, equal ids = equal follower languages.
// rounds = 0 runs to the fixpoint.
std::vector<std::size_t> follower_classes(const Dfa& dfa, std::size_t rounds = 0);

}  // namespace symdyn
