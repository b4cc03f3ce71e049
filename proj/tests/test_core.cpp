#include <gtest/gtest.h>

#include <cmath>

#include "support/brute.hpp"
#include "symdyn/error.hpp"
#include "symdyn/models.hpp"
#include "symdyn/parallel.hpp"
#include "symdyn/potential.hpp"
#include "symdyn/word_set.hpp"

using namespace symdyn;
using brute::W;

namespace {
const Alphabet a2 = Alphabet::digits(2);
OraclePtr golden() { return sft_from_forbidden({a2, {W("11")}}); }
OraclePtr forbid111() { return sft_from_forbidden({a2, {W("111")}}); }
}  // namespace

TEST(Word, Subwords) {
  Word w = W("01101");
  EXPECT_EQ(subword(w, 2, 4), W("110"));
  EXPECT_TRUE(subword(w, 3, 2).empty());
  EXPECT_EQ(prefix(w, 2), W("01"));
  EXPECT_EQ(suffix(w, 2), W("01"));
  EXPECT_EQ(power(W("01"), 3), W("010101"));
  EXPECT_TRUE(contains_factor(w, W("110")));
  EXPECT_FALSE(contains_factor(w, W("111")));
  EXPECT_TRUE(has_period(W("010010"), 3));
  EXPECT_FALSE(has_period(W("0101"), 3));
}

TEST(Word, ShortLexOrder) {
  ShortLex lt;
  EXPECT_TRUE(lt(W("1"), W("00")));
  EXPECT_TRUE(lt(W("01"), W("10")));
  EXPECT_FALSE(lt(W("10"), W("10")));
}

TEST(Alphabet, RoundTrip) {
  Alphabet multi({"a", "bb", "c"});
  EXPECT_EQ(multi.separator(), ",");
  Word w = multi.parse("bb,a,c");
  EXPECT_EQ(w, (Word{1, 0, 2}));
  EXPECT_EQ(multi.format(w), "bb,a,c");
  EXPECT_EQ(a2.format(a2.parse("0110")), "0110");
  EXPECT_THROW(a2.parse("012"), Error);
}

TEST(Enumerate, FullShift) {
  auto full = sft_from_forbidden({a2, {}});
  EXPECT_EQ(full->enumerate(3).size(), 8u);
}

TEST(Enumerate, GoldenMean) {
  auto words = golden()->enumerate(3);
  std::vector<Word> expected = brute::language(2, 3, brute::sft_member(2, {W("11")}));
  EXPECT_EQ(words, expected);
  EXPECT_EQ(words, (std::vector<Word>{W("000"), W("001"), W("010"), W("100"), W("101")}));
}

TEST(Enumerate, Forbid111) {
  auto words = forbid111()->enumerate(3);
  EXPECT_EQ(words.size(), 7u);
  EXPECT_EQ(std::count(words.begin(), words.end(), W("111")), 0);
}

TEST(Enumerate, MembershipAgreesWithEnumeration) {
  auto o = forbid111();
  for (std::size_t n = 1; n <= 10; ++n) {
    auto words = o->enumerate(n);
    std::size_t members = 0;
    for (const auto& w : brute::all_words(2, n)) members += o->contains(w);
    EXPECT_EQ(members, words.size());
    EXPECT_EQ(o->count(n), static_cast<double>(words.size()));
  }
}

TEST(Enumerate, DepthGuard) {
  OracleOptions opt;
  opt.depth_guard = 5;
  auto o = sft_from_forbidden({a2, {W("11")}}, opt);
  EXPECT_EQ(o->enumeration_limit(), 5u);
  EXPECT_NO_THROW(o->enumerate(5));
  try {
    o->enumerate(6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::depth_exceeded);
  }
}

TEST(Enumerate, DefaultGuardIsLargestBelowTwoPow24) {
  auto full = sft_from_forbidden({a2, {}});
  EXPECT_EQ(default_depth_guard(*full), 24u);
}

TEST(PhiHat, ZeroPotential) {
  auto o = golden();
  EXPECT_EQ(phi_hat(Potential::zero(2), *o, W("0101")), 0.0);
}

TEST(PhiHat, RangeOneSum) {
  auto full = sft_from_forbidden({a2, {}});
  Potential phi(2, 1, {0.25, -1.5});
  EXPECT_DOUBLE_EQ(phi_hat(phi, *full, W("01")), 0.25 - 1.5);
}

TEST(PhiHat, IndicatorNeedsExtension) {
  Potential phi = Potential::indicator(2, W("00"), 1.0);
  EXPECT_EQ(phi_hat(phi, *golden(), W("0")), 1.0);
  EXPECT_EQ(phi_hat(phi, *golden(), W("1")), 0.0);
  EXPECT_EQ(phi_hat(phi, *golden(), Word{}), 0.0);
}

TEST(PhiHat, MatchesBruteForce) {
  auto o = forbid111();
  Potential phi(2, 3, {0.1, -0.4, 0.7, 0.2, -0.3, 0.5, 0.9, 0.0});
  brute::Phi bp{3, [&](const Word& x) { return phi.value(x); }};
  auto in = brute::sft_member(2, {W("111")});
  for (std::size_t n = 1; n <= 7; ++n)
    for (const auto& w : o->enumerate(n)) EXPECT_NEAR(phi_hat(phi, *o, w), brute::phi_hat(bp, 2, in, w), 1e-12);
}

TEST(Distortion, RangeOneAndConstant) {
  EXPECT_EQ(distortion_bound(Potential(2, 1, {3.0, -1.0})), 0.0);
  EXPECT_EQ(distortion_bound(Potential::constant(2, 3, 2.5)), 0.0);
}

TEST(Distortion, ZeroOneTableRangeTwo) {
  Potential phi(2, 2, {0.0, 1.0, 1.0, 0.0});
  EXPECT_EQ(distortion_bound(phi), 1.0);
  // exhaustive: |S_n phi(x) - S_n phi(y)| over x, y agreeing on the first n symbols
  double worst = 0.0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& w : brute::all_words(2, n))
      for (Symbol a : {0, 1})
        for (Symbol b : {0, 1}) {
          Word x = concat(w, Word{a}), y = concat(w, Word{b});
          double sx = 0, sy = 0;
          for (std::size_t i = 0; i < n; ++i) sx += phi.value(subword(x, i + 1, i + 2)), sy += phi.value(subword(y, i + 1, i + 2));
          worst = std::max(worst, std::fabs(sx - sy));
        }
  EXPECT_EQ(worst, 1.0);
}

TEST(Potential, CheckTotalFlagsMissingWindows) {
  std::vector<double> v{0.0, 1.0, 2.0, std::nan("")};
  Potential phi(2, 2, v);
  EXPECT_NO_THROW(phi.check_total(*golden()));
  EXPECT_THROW(phi.check_total(*forbid111()), Error);
}

TEST(WordSet, FiniteRejectsOutsideLanguage) {
  EXPECT_THROW(WordSet::finite(golden(), {W("11")}, "bad"), Error);
  auto s = WordSet::finite(golden(), {W("0"), W("01"), W("10")}, "I");
  EXPECT_EQ(s.count(2), 2u);
  EXPECT_EQ(s.max_length(), 2u);
}

TEST(WordSet, StarUsesSplits) {
  auto o = forbid111();
  auto s = WordSet::star(WordSet::finite(o, {W("0"), W("01"), W("10")}, "I"), "I*");
  EXPECT_TRUE(s.contains(Word{}));
  EXPECT_TRUE(s.contains(W("0110")));
  EXPECT_FALSE(s.contains(W("11")));
  for (std::size_t n = 1; n <= 9; ++n) {
    std::size_t expected = 0;
    for (const auto& w : o->enumerate(n)) expected += brute::factorisations({W("0"), W("01"), W("10")}, w) > 0;
    EXPECT_EQ(s.count(n), expected) << n;
  }
}

TEST(WordSet, SetAlgebra) {
  auto o = golden();
  auto L = WordSet::language(o);
  auto starts0 = WordSet::filter(o, [](WordView w) { return !w.empty() && w[0] == 0; }, "0L");
  auto ends0 = WordSet::filter(o, [](WordView w) { return !w.empty() && w.back() == 0; }, "L0");
  for (std::size_t n = 1; n <= 8; ++n) {
    EXPECT_EQ(starts0.unite(ends0, "u").count(n) + starts0.intersect(ends0, "i").count(n),
              starts0.count(n) + ends0.count(n));
    EXPECT_EQ(L.minus(starts0, "m").count(n) + starts0.count(n), L.count(n));
  }
}

TEST(Parallel, OrderedReductionAndErrors) {
  set_thread_count(4);
  std::vector<int> out(100);
  parallel_for(100, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 3) throw Error(ErrorKind::invalid_argument, "x");
               }),
               Error);
  set_thread_count(1);
}
