#include "properties.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "brute.hpp"
#include "symdyn/decomp.hpp"
#include "symdyn/models.hpp"
#include "symdyn/potential.hpp"
#include "symdyn/thermo.hpp"
#include "symdyn/tower.hpp"

using namespace symdyn;
using brute::W;

namespace props {

namespace {

struct Model {
  std::string name;
  OraclePtr oracle;
  brute::Member member;  // independent membership
  std::size_t depth;
};

std::vector<Word> cycle_forbidden(std::size_t k) {
  std::vector<Word> f;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      std::size_t d = (b + k - a) % k;
      if (d != 1 && d != 2) f.push_back({static_cast<Symbol>(a), static_cast<Symbol>(b)});
    }
  return f;
}

std::vector<Model> models() {
  auto a2 = Alphabet::digits(2);
  std::vector<Model> m;
  m.push_back({"golden mean", sft_from_forbidden({a2, {W("11")}}), brute::sft_member(2, {W("11")}), 12});
  m.push_back({"forbid 111", sft_from_forbidden({a2, {W("111")}}), brute::sft_member(2, {W("111")}), 12});
  m.push_back({"cycle_sft(5)", cycle_sft(5), brute::sft_member(5, cycle_forbidden(5)), 8});
  m.push_back({"S-gap {1,2}", s_gap_shift({{1, 2}, std::nullopt}), brute::s_gap_member({1, 2}), 12});
  // Edge-shift matrices of the golden mean graph.
  CocyclicSpec c{a2, {}};
  c.matrices = {{{{1, 1}, {1, 1}}, {{0, 1}, {0, 1}}}, {{{0, 1}, {0, 1}}, {{1, 1}, {0, 1}}}};
  m.push_back({"cocyclic", cocyclic_shift(c), brute::sft_member(2, {W("11")}), 12});
  return m;
}

Potential test_potential(std::size_t k, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(k * k);
  for (auto& x : v) x = u(rng);
  return Potential(k, 2, v);
}

std::string show(const Model& m, WordView w) { return m.name + " '" + m.oracle->alphabet().format(w) + "'"; }

}  // namespace

Result factoriality_extendability() {
  Result r{"factoriality/extendability"};
  for (const auto& m : models()) {
    const auto& o = *m.oracle;
    std::size_t prev = 1;
    for (std::size_t n = 1; n <= m.depth; ++n) {
      auto words = o.enumerate(n);
      auto expected = brute::language(o.k(), n, m.member);
      r.check(words == expected, m.name + ": enumeration differs from brute force at n=" + std::to_string(n));
      r.check(words.size() <= o.k() * prev, m.name + ": growth bound at n=" + std::to_string(n));
      prev = words.size();
      for (const auto& w : words) {
        for (std::size_t i = 1; i <= n; ++i)
          for (std::size_t j = i; j <= n; ++j) r.check(o.contains(subword(w, i, j)), show(m, w) + " has an inadmissible factor");
        bool left = false, right = false;
        for (std::size_t a = 0; a < o.k(); ++a) {
          left = left || o.contains(concat(Word{static_cast<Symbol>(a)}, w));
          right = right || o.contains(concat(w, Word{static_cast<Symbol>(a)}));
        }
        r.check(left && right, show(m, w) + " does not extend");
      }
    }
  }
  return r;
}

Result phi_hat_additivity() {
  Result r{"phi-hat sub/super-additivity"};
  std::uint32_t seed = 7;
  for (const auto& m : models()) {
    const auto& o = *m.oracle;
    Potential phi = test_potential(o.k(), seed++);
    const double d = distortion_bound(phi);
    const std::size_t top = std::min<std::size_t>(m.depth, 9);
    for (std::size_t a = 1; a < top; ++a)
      for (const auto& v : o.enumerate(a))
        for (std::size_t b = 1; a + b <= top; ++b)
          for (const auto& w : o.enumerate(b)) {
            Word vw = concat(v, w);
            if (!o.contains(vw)) continue;
            double lhs = phi_hat(phi, o, vw), pv = phi_hat(phi, o, v), pw = phi_hat(phi, o, w);
            r.check(lhs <= pv + pw + 1e-12, show(m, vw) + " violates the upper bound");
            r.check(lhs >= pv + pw - d - 1e-12, show(m, vw) + " violates the lower bound");
          }
  }
  return r;
}

Result submultiplicativity() {
  Result r{"partition-sum submultiplicativity"};
  std::uint32_t seed = 11;
  for (const auto& m : models()) {
    Potential phi = test_potential(m.oracle->k(), seed++);
    WordSet L = WordSet::language(m.oracle);
    std::vector<double> lg(m.depth + 1);
    for (std::size_t n = 1; n <= m.depth; ++n) lg[n] = log_partition_sum(L, phi, n);
    for (std::size_t a = 1; a < m.depth; ++a)
      for (std::size_t b = 1; a + b <= m.depth; ++b)
        r.check(lg[a + b] <= lg[a] + lg[b] + 1e-12 * std::max(1.0, std::fabs(lg[a + b])),
                m.name + ": Lambda_" + std::to_string(a + b) + " > Lambda_" + std::to_string(a) + " Lambda_" +
                    std::to_string(b));
  }
  return r;
}

Result binomial_entropy() {
  Result r{"binomial entropy bound"};
  for (std::size_t n = 1; n <= 60; ++n)
    for (std::size_t l = 1; l <= n; ++l) {
      // independent: log C(n,l) by lgamma
      double lb = std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0);
      double t = static_cast<double>(l) / static_cast<double>(n);
      double h = (t <= 0.0 || t >= 1.0) ? 0.0 : -t * std::log(t) - (1 - t) * std::log(1 - t);
      double rhs = std::log(n + 1.0) + h * n + 1.0;
      auto b = binomial_entropy_bound(n, l);
      r.check(lb <= rhs, "bound fails at n=" + std::to_string(n) + " l=" + std::to_string(l));
      r.check(b.holds && std::fabs(b.log_binomial - lb) < 1e-9 && std::fabs(b.log_bound - rhs) < 1e-9,
              "library disagrees at n=" + std::to_string(n) + " l=" + std::to_string(l));
    }
  return r;
}

Result qft_persistence() {
  Result r{"QFT constraint persistence"};
  for (const auto& m : models()) {
    const auto& o = *m.oracle;
    QftConstraints q(m.oracle, 8);
    const std::size_t depth = std::min<std::size_t>(m.depth, 8);
    ObstructionPair pair{q.right_set(), q.left_set(), 1, {}};
    Verdict v = check_persistence(pair, depth);
    r.check(v.pass, m.name + ": persistence fails");
    // brute definition with continuations u of length <= 4
    for (std::size_t n = 1; n <= std::min<std::size_t>(depth, 6); ++n)
      for (const auto& w : o.enumerate(n)) {
        bool left = false, right = false;
        for (std::size_t l = 1; l <= 4 && !(left && right); ++l)
          for (const auto& u : brute::all_words(o.k(), l)) {
            Word tail(w.begin() + 1, w.end()), head(w.begin(), w.end() - 1);
            if (m.member(concat(tail, u)) && !m.member(concat(w, u))) left = true;
            if (m.member(concat(u, head)) && !m.member(concat(u, w))) right = true;
          }
        if (left) r.check(q.is_left(w), show(m, w) + " should be a left constraint");
        if (right) r.check(q.is_right(w), show(m, w) + " should be a right constraint");
        if (o.exact() && o.locality() && *o.locality() <= 3) {
          r.check(q.is_left(w) == left, show(m, w) + " left constraint mismatch");
          r.check(q.is_right(w) == right, show(m, w) + " right constraint mismatch");
        }
      }
  }
  return r;
}

Result cgc_outputs() {
  Result r{"cgc outputs satisfy [I] and [III]"};
  auto a2 = Alphabet::digits(2);
  struct Case {
    std::string name;
    ObstructionPair pair;
  };
  std::vector<Case> cases;
  auto gm = sft_from_forbidden({a2, {W("11")}});
  cases.push_back({"golden mean, empty obstructions", {WordSet::empty(gm), WordSet::empty(gm), 1, {}}});
  auto sg = s_gap_shift({{1, 2}, std::nullopt});
  auto zeros = [](OraclePtr o) {
    return WordSet::filter(o, [](WordView w) { return !w.empty() && std::all_of(w.begin(), w.end(), [](Symbol a) { return a == 0; }); },
                           "0^k", [](WordView w) { return std::all_of(w.begin(), w.end(), [](Symbol a) { return a == 0; }); });
  };
  cases.push_back({"S-gap {1,2}, zero runs", {zeros(sg), zeros(sg), 1, {}}});
  auto f3 = sft_from_forbidden({a2, {W("111")}});
  QftConstraints q(f3, 8);
  cases.push_back({"forbid 111, QFT constraints", {q.right_set(), q.left_set(), 1, {}}});
  for (const auto& c : cases) {
    CgcOptions opt;
    opt.depth = 10;
    try {
      auto res = cgc_construct(c.pair, Potential::zero(2), 0.1, opt);
      r.check(check_spec_I(res.collections, opt.depth).pass, c.name + ": [I] fails");
      r.check(check_stay_good_III(res.collections, opt.depth).pass, c.name + ": [III] fails");
    } catch (const std::exception& e) {
      r.check(false, c.name + ": " + e.what());
    }
  }
  return r;
}

Result ud_unique_factorisation() {
  Result r{"UD iff unique factorisation"};
  std::vector<Word> pool;
  for (std::size_t n = 1; n <= 3; ++n)
    for (auto& w : brute::all_words(2, n)) pool.push_back(w);
  std::vector<std::vector<Word>> codes;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      codes.push_back({pool[i], pool[j]});
      for (std::size_t l = j + 1; l < pool.size(); ++l) codes.push_back({pool[i], pool[j], pool[l]});
    }
  for (const auto& code : codes) {
    auto ud = is_uniquely_decipherable(code);
    auto amb = brute::ambiguous_word(code, 12);
    std::string name;
    for (const auto& c : code) name += (name.empty() ? "" : ",") + Alphabet::digits(2).format(c);
    r.check(ud.pass == !amb.has_value(), "{" + name + "}: Sardinas-Patterson disagrees with brute force");
    if (!ud.pass) {
      r.check(brute::factorisations(code, ud.witness) >= 2.0, "{" + name + "}: witness is not ambiguous");
      r.check(factorisation_count(code, ud.witness) == brute::factorisations(code, ud.witness),
              "{" + name + "}: factorisation count differs");
    }
  }
  return r;
}

std::vector<Result> all() {
  return {factoriality_extendability(), phi_hat_additivity(), submultiplicativity(), binomial_entropy(),
          qft_persistence(),            cgc_outputs(),        ud_unique_factorisation()};
}

}  // namespace props
