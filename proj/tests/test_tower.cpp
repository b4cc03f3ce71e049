#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "support/brute.hpp"
#include "symdyn/error.hpp"
#include "symdyn/models.hpp"
#include "symdyn/thermo.hpp"
#include "symdyn/tower.hpp"

using namespace symdyn;
using brute::W;

namespace {
const Alphabet a2 = Alphabet::digits(2);
OraclePtr golden() { return sft_from_forbidden({a2, {W("11")}}); }
OraclePtr forbid111() { return sft_from_forbidden({a2, {W("111")}}); }
OraclePtr full2() { return sft_from_forbidden({a2, {}}); }

SyncOptions opts(std::size_t tau, std::optional<Word> v = std::nullopt, std::optional<Word> w = std::nullopt) {
  SyncOptions o;
  o.tau = tau;
  o.cert_depth = 10;
  o.seed_v = v;
  o.seed_w = w;
  return o;
}

// brute: every r' in L r, s' in s L with |r'|, |s'| <= d glue as r' c s' in L
bool brute_sync(const brute::Member& in, const SyncTriple& t, std::size_t d) {
  for (std::size_t a = t.r.size(); a <= d; ++a)
    for (const auto& r : brute::language(2, a, in)) {
      if (!ends_with(r, t.r)) continue;
      for (std::size_t b = t.s.size(); b <= d; ++b)
        for (const auto& s : brute::language(2, b, in))
          if (starts_with(s, t.s) && !in(concat(r, t.c, s))) return false;
    }
  return true;
}
}  // namespace

TEST(SyncTriple, GoldenMean) {
  auto L = WordSet::language(golden());
  auto t = find_sync_triple(L, opts(1, W("0"), W("0")));
  EXPECT_EQ(t.r, W("0"));
  EXPECT_TRUE(t.c.empty());
  EXPECT_EQ(t.s, W("0"));
  EXPECT_EQ(t.cert_depth, 10u);
  EXPECT_FALSE(verify_sync_triple(L, t, 10).has_value());
  EXPECT_TRUE(brute_sync(brute::sft_member(2, {W("11")}), t, 9));
}

TEST(SyncTriple, GoldenMeanTauZeroIsNotSpecified) {
  try {
    find_sync_triple(WordSet::language(golden()), opts(0, W("0"), W("0")));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_specified);
  }
}

TEST(SyncTriple, FullShift) {
  auto t = find_sync_triple(WordSet::language(full2()), opts(0));
  EXPECT_EQ(t.r.size(), 1u);
  EXPECT_TRUE(t.c.empty());
  EXPECT_EQ(t.s.size(), 1u);
}

TEST(SyncTriple, Forbid111) {
  auto L = WordSet::language(forbid111());
  auto t = find_sync_triple(L, opts(1, W("0"), W("0")));
  EXPECT_EQ(t.r, W("0"));
  EXPECT_TRUE(t.c.empty());
  EXPECT_EQ(t.s, W("0"));
  EXPECT_TRUE(brute_sync(brute::sft_member(2, {W("111")}), t, 9));
}

TEST(SyncTriple, RefinementFromBadSeeds) {
  // seeds "1","1" on the forbid-111 shift cannot be glued freely: refinement must extend them
  auto L = WordSet::language(forbid111());
  auto t = find_sync_triple(L, opts(1, W("1"), W("1")));
  EXPECT_TRUE(ends_with(t.r, W("1")));
  EXPECT_TRUE(starts_with(t.s, W("1")));
  EXPECT_FALSE(verify_sync_triple(L, t, 10).has_value());
  EXPECT_TRUE(brute_sync(brute::sft_member(2, {W("111")}), t, 9));
}

TEST(Overlaps, RejectAndExtend) {
  auto o = golden();
  auto L = WordSet::language(o);
  SyncTriple t{W("0"), {}, W("0"), 1, 10, false, {}};
  EXPECT_EQ(first_long_overlap(*o, t), std::optional<std::size_t>(1));
  OverlapSearch info;
  auto t2 = ensure_no_long_overlaps(t, L, 12, &info);
  EXPECT_TRUE(t2.no_long_overlaps);
  EXPECT_FALSE(first_long_overlap(*o, t2).has_value());
  EXPECT_FALSE(verify_sync_triple(L, t2, 10).has_value());
  // brute overlap scan: for 1 <= k <= max(|rc|, |cs|) no word of length |rcs|+k has rcs at 0 and at k
  Word x = t2.rcs();
  auto in = brute::sft_member(2, {W("11")});
  const std::size_t kmax = std::max(t2.r.size(), t2.s.size()) + t2.c.size();
  for (std::size_t k = 1; k <= kmax; ++k)
    for (const auto& y : brute::language(2, x.size() + k, in))
      EXPECT_FALSE(starts_with(y, x) && ends_with(y, x)) << k;
  EXPECT_GT(info.alpha, 0.0);
  EXPECT_LT(info.alpha * info.ell * std::log(2.0), std::log(2.0));
}

TEST(Overlaps, AlreadyFreeIsUnchanged) {
  auto o = golden();
  SyncTriple t{W("10"), {}, W("00"), 1, 10, false, {}};
  auto t2 = ensure_no_long_overlaps(t, WordSet::language(o), 12);
  EXPECT_EQ(t2.r, t.r);
  EXPECT_EQ(t2.s, t.s);
  EXPECT_TRUE(t2.no_long_overlaps);
}

TEST(Overlaps, PeriodicG) {
  auto o = sft_from_forbidden({a2, {W("1")}});
  SyncTriple t{W("0"), {}, W("0"), 0, 10, false, {}};
  EXPECT_TRUE(g_is_periodic(WordSet::language(o), 10));
  try {
    ensure_no_long_overlaps(t, WordSet::language(o), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::periodic_g);
  }
}

TEST(FreeFamily, GoldenMeanIrreducibles) {
  auto L = WordSet::language(golden());
  SyncTriple t{W("0"), {}, W("0"), 1, 10, false, {}};
  auto f = build_free_family(t, L, 13);
  std::vector<Word> expected{W("0")};
  for (Word w = W("010"); w.size() <= 13; w = concat(w, W("10"))) expected.push_back(w);
  EXPECT_EQ(f.irreducibles, expected);
  EXPECT_EQ(f.gcd_lengths, 1u);
  // brute: F = words starting and ending with 0; irreducible means no split into two F words
  auto in = brute::sft_member(2, {W("11")});
  for (std::size_t n = 1; n <= 11; ++n)
    for (const auto& w : brute::language(2, n, in)) {
      bool inF = w.front() == 0 && w.back() == 0;
      EXPECT_EQ(f.F.contains(w), inF);
      if (!inF) continue;
      bool splits = false;
      for (std::size_t i = 1; i < n; ++i) splits = splits || (w[i - 1] == 0 && w[i] == 0);
      EXPECT_EQ(f.I.contains(w), !splits);
    }
}

TEST(FreeFamily, FullShiftAlphabet) {
  auto f = build_free_family(WordSet::language(full2()).at_least(1, "L+"), 8);
  EXPECT_EQ(f.irreducibles, (std::vector<Word>{W("0"), W("1")}));
}

TEST(FreeFamily, FreeConcatenationAndGibbsHook) {
  auto o = golden();
  auto L = WordSet::language(o);
  SyncTriple t = ensure_no_long_overlaps({W("0"), {}, W("0"), 1, 10, false, {}}, L, 12);
  auto f = build_free_family(t, L, 12);
  for (std::size_t a = 1; a < 12; ++a)
    for (const auto& u : f.F.words(a))
      for (std::size_t b = 1; a + b <= 12; ++b)
        for (const auto& v : f.F.words(b)) EXPECT_TRUE(f.F.contains(concat(u, v)));
  // every F word w has r w in G, and every G word extends into F
  for (std::size_t n = 1; n <= 9; ++n) {
    for (const auto& w : f.F.words(n)) EXPECT_TRUE(L.contains(concat(t.r, w)));
    for (const auto& w : o->enumerate(n)) {
      bool found = false;
      for (std::size_t a = 0; a <= t.tau && !found; ++a)
        for (const auto& u : a == 0 ? std::vector<Word>{Word{}} : o->enumerate(a))
          for (std::size_t b = 0; b <= t.tau && !found; ++b)
            for (const auto& v : b == 0 ? std::vector<Word>{Word{}} : o->enumerate(b))
              if (f.F.contains(concat(concat(t.c, t.s, u), concat(w, v, t.r)))) found = true;
      EXPECT_TRUE(found) << a2.format(w);
    }
  }
}

TEST(Ud, Examples) {
  auto bad = is_uniquely_decipherable(std::vector<Word>{W("0"), W("01"), W("10")});
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.witness, W("010"));
  EXPECT_NE(bad.factorisation_a, bad.factorisation_b);
  EXPECT_EQ(brute::factorisations({W("0"), W("01"), W("10")}, W("010")), 2.0);
  EXPECT_TRUE(is_uniquely_decipherable(std::vector<Word>{W("0"), W("01")}).pass);
  EXPECT_TRUE(is_uniquely_decipherable(std::vector<Word>{W("10"), W("100")}).pass);
  EXPECT_FALSE(is_uniquely_decipherable(std::vector<Word>{W("0"), W("0")}).pass);
  EXPECT_THROW(is_uniquely_decipherable(std::vector<Word>{Word{}, W("0")}), Error);
}

TEST(Ud, FamilyFactorisationCounts) {
  auto o = golden();
  SyncTriple t{W("0"), {}, W("0"), 1, 10, false, {}};
  auto f = build_free_family(t, WordSet::language(o), 12);
  bool unique = true;
  for (std::size_t n = 1; n <= 12; ++n)
    for (const auto& w : f.F.words(n)) {
      double c = factorisation_count(f.irreducibles, w);
      EXPECT_EQ(c, brute::factorisations(f.irreducibles, w));
      unique = unique && c == 1.0;
    }
  EXPECT_EQ(is_uniquely_decipherable(f.irreducibles).pass, unique);
}

TEST(Tower, SmallGraphs) {
  auto t = build_tower({W("0"), W("01")}, 10, W("0"));
  EXPECT_EQ(t.vertices().size(), 3u);
  EXPECT_EQ(t.edge_count(), 5u);
  EXPECT_EQ(t.edge_list(a2),
            "# base 0:1 depth 10\n0:1 -> 0:1\n0:1 -> 01:1\n01:1 -> 01:2\n01:2 -> 0:1\n01:2 -> 01:1\n");
  auto one = build_tower({W("0")}, 5, W("0"));
  EXPECT_EQ(one.vertices().size(), 1u);
  EXPECT_EQ(one.edge_count(), 1u);
  auto nine = build_tower({W("0"), W("010"), W("01010")}, 8, W("0"));
  EXPECT_EQ(nine.vertices().size(), 9u);
}

TEST(Loops, FullShift) {
  auto t = build_tower({W("0"), W("1")}, 10, W("0"));
  auto lt = loop_sums(t, Potential::zero(2), 16);
  for (const auto& r : lt.rows) EXPECT_EQ(r.z, std::ldexp(1.0, static_cast<int>(r.n) - 1));
}

TEST(Loops, FibonacciAndFirstReturn) {
  auto t = build_tower({W("0"), W("01")}, 10, W("0"));
  auto lt = loop_sums(t, Potential::zero(2), 30);
  // compositions of n-1 into parts 1 and 2
  std::vector<double> comp(31, 0.0);
  comp[0] = 1;
  for (std::size_t m = 1; m <= 30; ++m) comp[m] = comp[m - 1] + (m >= 2 ? comp[m - 2] : 0.0);
  for (const auto& r : lt.rows) {
    EXPECT_EQ(r.z, comp[r.n - 1]) << r.n;
    EXPECT_EQ(r.z_star, (r.n - 1) % 2 == 0 ? 1.0 : 0.0) << r.n;
  }
  EXPECT_EQ(lt.rows[2].z, 2.0);
  ASSERT_TRUE(lt.word_side);
  for (const auto& r : lt.rows) {
    EXPECT_EQ(*r.z_word, r.z);
    EXPECT_EQ(*r.z_star_word, r.z_star);
  }
}

TEST(Loops, CountsMatchFamilyUnderUd) {
  auto o = golden();
  SyncTriple t{W("0"), {}, W("0"), 1, 10, false, {}};
  auto f = build_free_family(t, WordSet::language(o), 14);
  auto tower = build_tower(f.irreducibles, 14, W("0"));
  auto lt = loop_sums(tower, Potential::zero(2), 14);
  ASSERT_TRUE(lt.word_side);
  for (const auto& r : lt.rows) {
    // loops of length n read v w with w in F_{n - |v|} or the empty word
    double expected = r.n == 1 ? 1.0 : static_cast<double>(f.F.count(r.n - 1));
    EXPECT_EQ(r.z, expected) << r.n;
  }
}

TEST(Loops, PotentialWithinEnvelope) {
  auto t = build_tower({W("0"), W("01")}, 10, W("0"));
  Potential phi(2, 2, {0.3, -0.2, 0.5, 0.1});
  auto lt = loop_sums(t, phi, 20);
  ASSERT_TRUE(lt.word_side);
  EXPECT_LE(lt.max_log_difference, lt.tolerance);
}

TEST(Loops, GcdConsistency) {
  for (const auto& I : {std::vector<Word>{W("00"), W("0010")}, std::vector<Word>{W("0"), W("01")},
                        std::vector<Word>{W("000"), W("001000")}}) {
    auto t = build_tower(I, 10, I.front());
    auto lt = loop_sums(t, Potential::zero(2), 24);
    std::size_t g = 0;
    for (const auto& w : I) g = std::gcd(g, w.size());
    EXPECT_EQ(lt.loop_gcd, g);
  }
}

TEST(Spr, GoldenPair) {
  auto t = build_tower({W("0"), W("01")}, 10, W("0"));
  auto spr = spr_diagnostic(t, Potential::zero(2), 40);
  EXPECT_NEAR(spr.rate, std::log((1 + std::sqrt(5.0)) / 2), 1e-2);
  EXPECT_EQ(spr.rate_star, 0.0);
  EXPECT_GE(spr.gap, 0.45);
  EXPECT_TRUE(spr.verdict.pass);
}

TEST(Spr, SingleLoopDegenerate) {
  auto spr = spr_diagnostic(build_tower({W("0")}, 5, W("0")), Potential::zero(2), 20);
  EXPECT_TRUE(spr.degenerate);
}

TEST(Spr, GoldenFamilyStarSmaller) {
  auto o = golden();
  SyncTriple t{W("0"), {}, W("0"), 1, 10, false, {}};
  auto f = build_free_family(t, WordSet::language(o), 16);
  auto spr = spr_diagnostic(build_tower(f.irreducibles, 16, W("0")), Potential::zero(2), 40);
  EXPECT_LT(spr.rate_star, spr.rate);
  EXPECT_GT(spr.gap, 0.0);
}

TEST(Marking, Windows) {
  auto o = golden();
  SyncTriple t{W("0"), {}, W("0"), 1, 10, false, {}};
  auto f = build_free_family(t, WordSet::language(o), 12);
  auto m = marking_analysis(Word(8, 0), f.F);
  ASSERT_EQ(m.maximal_count, 1u);
  std::vector<std::size_t> all(9);
  std::iota(all.begin(), all.end(), 1);
  EXPECT_EQ(m.maximal_sets.front(), all);
  EXPECT_TRUE(m.injective_at_window);
  EXPECT_EQ(marking_analysis(Word{}, f.F).maximal_count, 1u);
  auto f3 = forbid111();
  auto F = WordSet::star(WordSet::finite(f3, {W("0"), W("01"), W("10")}, "I"), "I*").at_least(1, "I+");
  auto m2 = marking_analysis(power(W("010"), 4), F);
  EXPECT_GE(m2.maximal_count, 2u);
  EXPECT_FALSE(m2.injective_at_window);
}

TEST(Marking, OverlapFreeTripleGivesUniqueSets) {
  auto o = golden();
  auto L = WordSet::language(o);
  SyncTriple t = ensure_no_long_overlaps({W("0"), {}, W("0"), 1, 10, false, {}}, L, 12);
  auto f = build_free_family(t, L, 12);
  for (std::size_t n = 1; n <= 9; ++n)
    for (const auto& x : f.F.words(n)) EXPECT_EQ(marking_analysis(x, f.F, true).maximal_count, 1u) << a2.format(x);
}

TEST(GeneratorObstruction, Sets) {
  auto D = generator_obstruction_set(full2(), {W("0"), W("1")}, 6);
  EXPECT_EQ(D.words_up_to(6), (std::vector<Word>{Word{}, W("0"), W("1")}));
  auto D2 = generator_obstruction_set(golden(), {W("10"), W("100")}, 6);
  EXPECT_EQ(D2.words_up_to(6), (std::vector<Word>{Word{}, W("0"), W("1"), W("00"), W("10"), W("100")}));
}

TEST(GeneratorObstruction, GoldenFamilyGap) {
  auto o = golden();
  SyncTriple t{W("0"), {}, W("0"), 1, 10, false, {}};
  auto f = build_free_family(t, WordSet::language(o), 14);
  auto D = generator_obstruction_set(o, f.irreducibles, 14);
  auto pd = pressure_estimate(D, Potential::zero(2), 14);
  auto pl = pressure_estimate(WordSet::language(o), Potential::zero(2), 14);
  EXPECT_TRUE(margin_rule(pd, pl, 0.05).pass);
}

TEST(SyncTimes, Basics) {
  auto L = WordSet::language(golden());
  SyncTriple t{W("10"), {}, W("00"), 1, 10, true, {}};
  EXPECT_EQ(sync_times(t.rcs(), t, nullptr, SyncMode::uniform), (std::vector<std::size_t>{2}));
  EXPECT_TRUE(sync_times(W("0101010"), t, nullptr, SyncMode::uniform).empty());
  auto E = sync_obstruction_set(t, L, SyncMode::uniform);
  EXPECT_TRUE(E.contains(W("0101010")));
  EXPECT_FALSE(E.contains(W("01000")));
}

TEST(SyncTimes, EFractionDecreases) {
  auto o = golden();
  auto L = WordSet::language(o);
  SyncTriple t = ensure_no_long_overlaps({W("0"), {}, W("0"), 1, 10, false, {}}, L, 12);
  auto rows = e_fraction_table(t, L, SyncMode::uniform, 10, 20);
  ASSERT_EQ(rows.size(), 11u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].fraction, rows[i - 1].fraction);
  // brute count at n = 12
  std::size_t e = 0, l = 0;
  Word x = t.rcs();
  for (const auto& w : brute::language(2, 12, brute::sft_member(2, {W("11")}))) {
    ++l;
    e += !contains_factor(w, x);
  }
  for (const auto& r : rows)
    if (r.n == 12) EXPECT_NEAR(r.fraction, static_cast<double>(e) / static_cast<double>(l), 1e-12);
}
