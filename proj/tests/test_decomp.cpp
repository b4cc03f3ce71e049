#include <gtest/gtest.h>

#include "support/brute.hpp"
#include "symdyn/decomp.hpp"
#include "symdyn/error.hpp"
#include "symdyn/models.hpp"

using namespace symdyn;
using brute::W;

namespace {
const Alphabet a2 = Alphabet::digits(2);
OraclePtr golden() { return sft_from_forbidden({a2, {W("11")}}); }
OraclePtr full2() { return sft_from_forbidden({a2, {}}); }
OraclePtr sgap12() { return s_gap_shift({{1, 2}, std::nullopt}); }

WordSet eps_only(const OraclePtr& o) { return WordSet::finite(o, {Word{}}, "{e}"); }

TripleCollections plain(const OraclePtr& o, std::size_t tau, std::optional<std::size_t> L = 1) {
  return {eps_only(o), WordSet::language(o), eps_only(o), tau, L};
}

WordSet zero_runs(const OraclePtr& o) {
  auto zeros = [](WordView w) { return std::all_of(w.begin(), w.end(), [](Symbol a) { return a == 0; }); };
  return WordSet::filter(o, [zeros](WordView w) { return !w.empty() && zeros(w); }, "0^k", zeros);
}

WordSet bracketed(const OraclePtr& o, const Word& s) {
  return WordSet::filter(o, [s](WordView w) { return w.size() >= s.size() && starts_with(w, s) && ends_with(w, s); },
                         "sLs");
}
}  // namespace

TEST(SpecI, GoldenMean) {
  EXPECT_TRUE(check_spec_I(plain(golden(), 1), 8).pass);
  auto v = check_spec_I(plain(golden(), 0), 8);
  EXPECT_FALSE(v.pass);
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_EQ(v.witnesses.front(), (std::vector<Word>{W("1"), W("1")}));
  EXPECT_TRUE(check_spec_I(plain(full2(), 0), 8).pass);
}

TEST(SpecI, ExhaustiveAgainstBruteForce) {
  auto o = golden();
  auto in = brute::sft_member(2, {W("11")});
  // brute: every pair v, w with |v|, |w| <= 6 glues with one connector of length <= 1
  bool all = true;
  for (std::size_t a = 1; a <= 6; ++a)
    for (const auto& v : brute::language(2, a, in))
      for (std::size_t b = 1; b <= 6; ++b)
        for (const auto& w : brute::language(2, b, in)) {
          bool ok = in(concat(v, w)) || in(concat(v, W("0"), w)) || in(concat(v, W("1"), w));
          all = all && ok;
        }
  EXPECT_EQ(check_spec_I(plain(o, 1), 6).pass, all);
}

TEST(SpecIprime, Examples) {
  EXPECT_TRUE(check_strong_spec_Iprime(plain(golden(), 1), 8).pass);
  EXPECT_TRUE(check_strong_spec_Iprime(plain(full2(), 1), 8).pass);
  auto o = golden();
  TripleCollections c{eps_only(o), bracketed(o, W("0")), eps_only(o), 0, 1};
  EXPECT_TRUE(check_strong_spec_Iprime(c, 8).pass);
  EXPECT_FALSE(check_strong_spec_Iprime(plain(o, 0), 8).pass);
}

TEST(StayGood, Examples) {
  EXPECT_TRUE(check_stay_good_III(plain(golden(), 1), 8).pass);
  EXPECT_TRUE(check_stay_good_III(plain(sgap12(), 1), 8).pass);
  auto o = golden();
  TripleCollections c{eps_only(o), bracketed(o, W("0")), eps_only(o), 0, 1};
  EXPECT_TRUE(check_stay_good_III(c, 8).pass);
  EXPECT_TRUE(check_stay_good_III(c, 8, StayGoodVariant::a).pass);
  EXPECT_TRUE(check_stay_good_III(c, 8, StayGoodVariant::b).pass);
  TripleCollections missing{eps_only(o), bracketed(o, W("0")), eps_only(o), 0, std::nullopt};
  EXPECT_THROW(check_stay_good_III(missing, 8), Error);
}

TEST(Decomposition, TrivialCollections) {
  auto c = plain(golden(), 1);
  auto d = find_decomposition(c, W("01001"));
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->prefix_end, 0u);
  EXPECT_EQ(d->good_end, 5u);
  auto comp = obstruction_complement(c);
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(comp.count(n), 0u);
}

TEST(Decomposition, SynchronisedGoldenMean) {
  auto r = sync_decomposition(golden(), W("0"), 10);
  auto comp = obstruction_complement(r.collections);
  EXPECT_EQ(comp.words(1), (std::vector<Word>{W("1")}));
  for (std::size_t n = 2; n <= 8; ++n) EXPECT_EQ(comp.count(n), 0u) << n;
  // soundness of every reported split
  for (std::size_t n = 1; n <= 8; ++n)
    for (const auto& w : golden()->enumerate(n)) {
      auto d = find_decomposition(r.collections, w);
      if (!d) continue;
      EXPECT_TRUE(r.collections.Cp.contains(prefix(w, d->prefix_end)));
      EXPECT_TRUE(r.collections.G.contains(subword(w, d->prefix_end + 1, d->good_end)));
      EXPECT_TRUE(r.collections.Cs.contains(subword(w, d->good_end + 1, w.size())));
    }
}

TEST(Decomposition, SGapZeroRuns) {
  auto o = sgap12();
  auto Z = WordSet::star(zero_runs(o), "C");
  auto G = good_words_from_obstructions(zero_runs(o), zero_runs(o), 2);
  TripleCollections c{Z, G, Z, 4, 2};
  auto d = find_decomposition(c, W("000"));
  if (G.contains(Word{})) {
    ASSERT_TRUE(d.has_value());
  } else {
    EXPECT_FALSE(d.has_value());
  }
  auto d2 = find_decomposition(c, W("0010100"));
  ASSERT_TRUE(d2.has_value());
  // a good word cannot start with 00, and the prefix 0 already works
  EXPECT_EQ(d2->prefix_end, 1u);
}

TEST(PressureGap, SynchronisedGoldenMean) {
  auto r = sync_decomposition(golden(), W("0"), 10);
  auto comp = obstruction_complement(r.collections);
  for (std::size_t n = 2; n <= 10; ++n) EXPECT_EQ(comp.count(n), 0u);
  auto gap = pressure_gap_II(r.collections, Potential::zero(2), 16);
  EXPECT_TRUE(gap.verdict.pass);
  auto triv = pressure_gap_II(plain(golden(), 1), Potential::zero(2), 16);
  EXPECT_TRUE(triv.verdict.pass);
}

TEST(PressureGap, CycleSftAvoidSymbol) {
  auto o = cycle_sft(8);
  auto E = WordSet::filter(o, [](WordView w) { return !contains_factor(w, Word{0}); }, "E", [](WordView w) {
    return !contains_factor(w, Word{0});
  });
  auto rep = pressure_estimate(E, Potential::zero(8), 16);
  EXPECT_GT(rep.point_estimate, 0.34);
}

TEST(GoodWords, EmptyObstructions) {
  auto o = golden();
  auto G = good_words_from_obstructions(WordSet::empty(o), WordSet::empty(o), 3);
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(G.count(n), o->count(n) > 0 ? static_cast<std::size_t>(o->count(n)) : 0);
}

TEST(GoodWords, SGapShape) {
  auto o = sgap12();
  const std::size_t M = 2;
  auto G = good_words_from_obstructions(zero_runs(o), zero_runs(o), M);
  for (std::size_t n = 1; n <= 10; ++n)
    for (const auto& w : o->enumerate(n)) {
      std::size_t a = 0, b = 0;
      while (a < w.size() && w[a] == 0) ++a;
      while (b < w.size() && w[w.size() - 1 - b] == 0) ++b;
      bool expected = a < M && b < M;
      EXPECT_EQ(G.contains(w), expected) << a2.format(w);
    }
}

TEST(GoodWords, BetaPrefixes) {
  BetaSpec b;
  b.beta = 1.7;
  auto o = beta_shift(b);
  Word z = quasi_greedy_expansion(1.7, 12);
  auto Cplus = WordSet::filter(o, [z](WordView w) { return !w.empty() && starts_with(z, w); }, "z prefixes");
  auto G = good_words_from_obstructions(WordSet::empty(o), Cplus, 2);
  for (std::size_t n = 1; n <= 8; ++n)
    for (const auto& w : o->enumerate(n)) {
      bool bad = false;
      for (std::size_t l = 2; l <= n; ++l) bad = bad || starts_with(z, suffix(w, l));
      EXPECT_EQ(G.contains(w), !bad) << a2.format(w);
    }
  EXPECT_TRUE(check_persistence({WordSet::empty(o), Cplus, 1, {}}, 10).pass);
}

TEST(Persistence, Examples) {
  auto o = sgap12();
  EXPECT_TRUE(check_persistence({zero_runs(o), zero_runs(o), 1, {}}, 10).pass);
  auto g = golden();
  auto v = check_persistence({WordSet::empty(g), WordSet::finite(g, {W("01")}, "{01}"), 1, {}}, 6);
  EXPECT_FALSE(v.pass);
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_EQ(v.witnesses.front(), (std::vector<Word>{W("0"), W("01")}));
}

TEST(Istar, SGapTau) {
  auto o = sgap12();
  auto rep = check_complete_list_Istar({zero_runs(o), zero_runs(o), 1, {}}, {1, 2, 3}, 10);
  EXPECT_TRUE(rep.verdict.pass);
  for (const auto& [M, tau] : rep.tau_table) {
    ASSERT_TRUE(tau.has_value());
    if (M == 2) EXPECT_LE(*tau, 4u);
  }
}

TEST(Istar, FullShiftAndGoldenMean) {
  auto f = full2();
  auto rep = check_complete_list_Istar({WordSet::empty(f), WordSet::empty(f), 1, {}}, {1, 2}, 8);
  for (const auto& [M, tau] : rep.tau_table) EXPECT_EQ(tau, std::optional<std::size_t>(0));
  auto g = golden();
  auto rg = check_complete_list_Istar({WordSet::empty(g), WordSet::empty(g), 1, {}}, {1}, 8);
  EXPECT_EQ(rg.tau_table.front().second, std::optional<std::size_t>(1));
}

TEST(Istar, MonotoneUnderEnlargement) {
  auto o = sgap12();
  auto small = WordSet::filter(o, [](WordView w) { return w.size() >= 2 && std::all_of(w.begin(), w.end(), [](Symbol a) { return a == 0; }); }, "00+");
  auto big = zero_runs(o);
  for (std::size_t M : {1, 2, 3}) {
    auto a = check_complete_list_Istar({small, small, 1, {}}, {M}, 8);
    auto b = check_complete_list_Istar({big, big, 1, {}}, {M}, 8);
    if (a.verdict.pass) EXPECT_TRUE(b.verdict.pass) << M;
  }
}

TEST(Cgc, EmptyObstructionsOnGoldenMean) {
  auto o = golden();
  CgcOptions opt;
  opt.depth = 10;
  auto r = cgc_construct({WordSet::empty(o), WordSet::empty(o), 1, {}}, Potential::zero(2), 0.1, opt);
  for (std::size_t n = 1; n <= 8; ++n) {
    EXPECT_EQ(r.collections.G.count(n), static_cast<std::size_t>(o->count(n)));
    EXPECT_EQ(r.collections.Cp.count(n), 0u);
    EXPECT_EQ(r.collections.Cs.count(n), 0u);
  }
  EXPECT_TRUE(r.collections.Cp.contains(Word{}));
}

TEST(Cgc, SGapGreedyStripping) {
  auto o = sgap12();
  CgcOptions opt;
  opt.depth = 10;
  auto r = cgc_construct({zero_runs(o), zero_runs(o), 1, {}}, Potential::zero(2), 0.1, opt);
  EXPECT_TRUE(check_spec_I(r.collections, 10).pass);
  EXPECT_TRUE(check_stay_good_III(r.collections, 10).pass);
  Word w = concat(W("00"), W("10101"), W("00"));
  ASSERT_TRUE(o->contains(w));
  auto d = greedy_decompose(r, w);
  EXPECT_LE(d.prefix_end, d.good_end);
  EXPECT_LE(d.good_end, w.size());
  Word mid = subword(w, d.prefix_end + 1, d.good_end);
  EXPECT_TRUE(r.collections.G.contains(mid) || r.Dminus.contains(mid) || r.Dplus.contains(mid));
  EXPECT_TRUE(r.collections.Cp.contains(prefix(w, d.prefix_end)));
  EXPECT_TRUE(r.collections.Cs.contains(subword(w, d.good_end + 1, w.size())));
}

TEST(Cgc, BetaGoldenExcludesLongPrefixEndings) {
  BetaSpec b;
  b.beta = (1 + std::sqrt(5.0)) / 2;
  auto o = beta_shift(b);
  Word z = quasi_greedy_expansion(*b.beta, 16);
  auto Cplus = WordSet::filter(o, [z](WordView w) { return !w.empty() && starts_with(z, w); }, "z prefixes");
  CgcOptions opt;
  opt.depth = 10;
  auto r = cgc_construct({WordSet::empty(o), Cplus, 1, {}}, Potential::zero(2), 0.1, opt);
  for (std::size_t n = r.M; n <= 9; ++n) EXPECT_FALSE(r.collections.G.contains(concat(W("0"), prefix(z, n))));
}

TEST(Qft, OneStepSftHasNoConstraints) {
  for (auto o : {golden(), full2()}) {
    auto t = qft_constraints(o, 6);
    for (std::size_t n = 0; n < t.left.size(); ++n) {
      EXPECT_TRUE(t.left[n].empty() || n == 0);
      EXPECT_TRUE(t.right[n].empty() || n == 0);
    }
    for (std::size_t n = 1; n < t.left.size(); ++n) EXPECT_TRUE(t.left[n].empty() && t.right[n].empty());
  }
}

TEST(Qft, Forbid111) {
  auto o = sft_from_forbidden({a2, {W("111")}});
  QftConstraints q(o);
  EXPECT_TRUE(q.is_left(W("11")));
  EXPECT_TRUE(q.is_right(W("11")));
  EXPECT_FALSE(q.is_left(W("10")));
  EXPECT_TRUE(q.exact());
}

TEST(Qft, FullShiftEmpty) {
  auto t = qft_constraints(full2(), 5);
  for (const auto& l : t.left) EXPECT_TRUE(l.empty());
  for (const auto& r : t.right) EXPECT_TRUE(r.empty());
}

TEST(Sync, GoldenMeanZero) {
  auto r = sync_decomposition(golden(), W("0"), 10);
  EXPECT_TRUE(r.check.pass);
  EXPECT_TRUE(r.connector.empty());
  EXPECT_TRUE(r.collections.G.contains(W("0100")));
  EXPECT_FALSE(r.collections.G.contains(W("01")));
}

TEST(Sync, FullShiftAnySymbol) {
  EXPECT_TRUE(sync_decomposition(full2(), W("1"), 8).check.pass);
}

TEST(Sync, GoldenMeanOne) {
  // "1" is synchronising for the golden mean: both sides of a 1 are forced to 0
  auto r = sync_decomposition(golden(), W("1"), 10);
  EXPECT_TRUE(r.check.pass);
}

TEST(Sync, NotSynchronising) {
  auto o = sft_from_forbidden({a2, {W("111")}});
  try {
    sync_decomposition(o, W("1"), 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_synchronising);
  }
}

TEST(Follower, Inclusion) {
  auto o = sft_from_forbidden({a2, {W("111")}});
  auto q1 = o->state_of(W("1"));
  auto q11 = o->state_of(W("11"));
  auto q0 = o->state_of(W("0"));
  EXPECT_TRUE(follower_included(o->dfa(), q11, q1, 8));
  Word wit;
  EXPECT_FALSE(follower_included(o->dfa(), q0, q11, 8, &wit));
  EXPECT_TRUE(o->contains(concat(W("0"), wit)));
  EXPECT_FALSE(o->contains(concat(W("11"), wit)));
}
