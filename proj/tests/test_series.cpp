#include "sturmod/series.hpp"
#include "sturmod/sturmian.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sturmod;

namespace {

const QuadraticReal kTheta = parse_quadratic("(3-sqrt(5))/2");

Rational rat(long p, long q) { return Rational(p, q); }

Rational pow2(unsigned k) { return Rational(Integer(1), pow_int(2, k)); }

FiniteWord random_word(std::mt19937_64& rng, std::size_t len) {
  std::vector<Letter> out(len);
  for (auto& x : out) x = static_cast<Letter>(rng() & 1u);
  return FiniteWord(std::move(out));
}

}  // namespace

TEST(Series, ConstantWordsAreExact) {
  const RealEnclosure a = eval_t(rat(1, 2), constant_word(1), 10);
  EXPECT_TRUE(a.is_exact());
  EXPECT_EQ(a.lo, 1);
  const RealEnclosure b = eval_t(rat(-1, 2), constant_word(1), 10);
  EXPECT_TRUE(b.is_exact());
  EXPECT_EQ(b.lo, rat(-1, 3));
}

TEST(Series, ConstTail) {
  EXPECT_EQ(const_tail(1, rat(1, 2)), 1);
  EXPECT_EQ(const_tail(1, rat(-1, 2)), rat(-1, 3));
  EXPECT_EQ(const_tail(2, rat(-1, 2)), rat(-2, 3));
  // ratio -r gives -a r / (1 + r)
  const Rational r = rat(2, 7);
  EXPECT_EQ(const_tail(3, -r), -3 * r / (1 + r));
}

TEST(Series, RejectsRatioOutsideUnitDisk) {
  EXPECT_THROW(eval_t(Rational(1), constant_word(1), 5), RatioError);
  EXPECT_THROW(eval_t(Rational(-1), constant_word(1), 5), RatioError);
  EXPECT_THROW(eval_t(rat(3, 2), characteristic(kTheta), 5), RatioError);
}

TEST(Series, EndpointWordValue) {
  const WordStream w = c_representative(CVariant::e011, kTheta);
  const RealEnclosure e = eval_t(rat(-1, 2), w, 40);
  EXPECT_LT(e.width(), pow2(38));
  // 200-term exact sum from the independent oracle: 0.13294232089731575
  EXPECT_TRUE(e.overlaps({rat(132942320, 1000000000), rat(132942321, 1000000000)}));
  EXPECT_GT(e.lo, rat(1329423, 10000000));
  EXPECT_LT(e.hi, rat(1329424, 10000000));
}

TEST(Series, WidthMatchesTailBound) {
  for (const Rational& r : {rat(1, 2), rat(-1, 2), rat(2, 5), rat(-3, 7)}) {
    for (std::size_t n : {1u, 7u, 40u}) {
      const RealEnclosure e = eval_t(r, characteristic(kTheta), n);
      EXPECT_EQ(e.width(), tail_width(r, n, {0, 1}));
      const Rational rho = abs_rat(r);
      EXPECT_LE(e.width(), pow_rat(rho, n + 1) / (1 - rho) * 2);
    }
  }
}

TEST(Series, TermsForBitsMeetsTarget) {
  for (const Rational& r : {rat(1, 2), rat(-9, 10), rat(1, 3)}) {
    for (unsigned bits : {16u, 64u, 128u}) {
      const std::size_t n = terms_for_bits(r, bits);
      EXPECT_LE(tail_width(r, n, {0, 1}), pow2(bits));
      EXPECT_GT(tail_width(r, n - 1, {0, 1}), pow2(bits));
    }
  }
}

TEST(Series, TailEnclosureIsTight) {
  // the extreme continuations realize both ends of the tail enclosure
  const Rational r = rat(-2, 5);
  const std::size_t n = 6;
  const RealEnclosure tail = tail_enclosure(r, n, {0, 1});
  std::vector<Letter> hi_word, lo_word;
  for (std::size_t i = n + 1; i <= n + 300; ++i) {
    hi_word.push_back(i % 2 == 0 ? 1 : 0);
    lo_word.push_back(i % 2 == 1 ? 1 : 0);
  }
  const Rational rn = pow_rat(r, n);
  const Rational hi = rn * eval_finite(r, FiniteWord(hi_word));
  const Rational lo = rn * eval_finite(r, FiniteWord(lo_word));
  EXPECT_LE(hi, tail.hi);
  EXPECT_GE(lo, tail.lo);
  EXPECT_LT(tail.hi - hi, pow2(200));
  EXPECT_LT(lo - tail.lo, pow2(200));
}

TEST(Series, DigitAlphabetTails) {
  // letters in {-1, 0}: the tail enclosure uses the declared bounds
  const WordStream w = word_from_function([](std::size_t n) { return static_cast<Letter>(-(n % 3 == 0)); }, {-1, 0}, "neg");
  const RealEnclosure e = eval_t(rat(1, 3), w, 30);
  EXPECT_LE(e.hi, 0);
  EXPECT_EQ(e.width(), tail_width(rat(1, 3), 30, {-1, 0}));
  EXPECT_TRUE(e.contains(eval_finite(rat(1, 3), w.prefix(200))));
}

TEST(Series, KernelMatchesHorner) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Rational r = rat(static_cast<long>(rng() % 11) - 5, 13);
    const FiniteWord u = random_word(rng, 1 + rng() % 60);
    EXPECT_EQ(SeriesKernel(r, u.size()).partial(u.letters()), eval_finite(r, u));
  }
}

TEST(Series, ConcatIdentityExamples) {
  const IdentityResidual res = concat_identity(FiniteWord{0, 1}, constant_word(1), rat(1, 2), 30);
  EXPECT_TRUE(res.contains_zero());
  EXPECT_TRUE(res.within_bound());
  EXPECT_LE(res.residual.width(), 2 * tail_width(rat(1, 2), 30, {0, 1}));
  EXPECT_EQ(eval_finite(rat(1, 2), FiniteWord{0, 1}), rat(1, 4));
}

TEST(Series, DoublingIdentityExamples) {
  const IdentityResidual ones = doubling_identity(constant_word(1), rat(1, 2), 40);
  EXPECT_TRUE(ones.contains_zero());
  EXPECT_EQ(eval_t(rat(-1, 2), doubled(constant_word(1)), 10).lo, rat(-1, 3));
  const IdentityResidual c = doubling_identity(characteristic(kTheta), rat(1, 2), 60);
  EXPECT_TRUE(c.contains_zero());
  EXPECT_TRUE(c.within_bound());
  EXPECT_LT(c.residual.width(), pow2(55));
  for (Letter a : {0, 1}) {
    const IdentityResidual lead = lead_doubling_identity(a, characteristic(kTheta), rat(2, 5), 60);
    EXPECT_TRUE(lead.contains_zero());
    EXPECT_LT(lead.residual.width(), pow2(55));
  }
}

TEST(Series, ShiftPairIdentityRandom) {
  std::mt19937_64 rng(11);
  const WordStream w = doubled(characteristic(kTheta));
  for (int i = 0; i < 40; ++i) {
    const Rational r = rat(static_cast<long>(rng() % 9) - 4, 10);
    if (r == 0) continue;
    const IdentityResidual res = shift_pair_identity(w, rng() % 100, rng() % 100, 1 + rng() % 20, r, terms_for_bits(r, 64));
    EXPECT_TRUE(res.contains_zero());
    EXPECT_TRUE(res.within_bound());
  }
  // finite words: exact zero
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 1 + rng() % 8;
    EXPECT_EQ(shift_pair_residual_exact(random_word(rng, k), random_word(rng, k), random_word(rng, rng() % 10),
                                        random_word(rng, rng() % 10), rat(-1, 3)),
              0);
  }
}

TEST(Series, EndpointGapExact) {
  EXPECT_EQ(endpoint_gap(rat(1, 2)), rat(5, 8));
  EXPECT_EQ(endpoint_gap(rat(1, 3)), rat(11, 27));
  EXPECT_EQ(endpoint_gap(rat(2, 5)), rat(62, 125));
  std::mt19937_64 rng(5);
  for (const Rational& r : {rat(1, 2), rat(1, 3), rat(2, 5)}) {
    for (int i = 0; i < 100; ++i) {
      const FiniteWord u = random_word(rng, rng() % 40);
      EXPECT_EQ(endpoint_gap_exact(r, u), r + r * r - r * r * r);
    }
  }
  const RealEnclosure e = endpoint_gap_enclosure(rat(2, 5), characteristic(kTheta), terms_for_bits(rat(2, 5), 44));
  EXPECT_TRUE(e.contains(rat(62, 125)));
  EXPECT_LT(e.width(), pow2(40));
  EXPECT_EQ(lex_endpoint_gap(rat(3, 5)), rat(3, 5));
}

TEST(Series, LexMonotoneRandomPairs) {
  std::mt19937_64 rng(1);
  const Rational r = rat(2, 5);
  int disagreements = 0;
  for (int i = 0; i < 2000; ++i) {
    const FiniteWord tail = random_word(rng, 64);
    const FiniteWord a = random_word(rng, 64) + tail;
    const FiniteWord b = random_word(rng, 64) + tail;
    const auto v = compare_letters(a.letters(), b.letters(), WordOrder::lex);
    if (!v) continue;
    const RealEnclosure ea = eval_prefix(r, a, {0, 1});
    const RealEnclosure eb = eval_prefix(r, b, {0, 1});
    if (ea.certainly_less(eb) || eb.certainly_less(ea)) {
      disagreements += (v->relation == Relation::less) != ea.certainly_less(eb);
    }
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(Series, SturmianProximity) {
  // same-slope Sturmian words have t_r values within r of each other
  std::mt19937_64 rng(9);
  const Rational r = rat(1, 2);
  for (int i = 0; i < 100; ++i) {
    const QuadraticReal rho1(rat(static_cast<long>(rng() % 97), 97));
    const QuadraticReal rho2(rat(static_cast<long>(rng() % 89), 89));
    const RealEnclosure a = eval_t_bits(r, mechanical({kTheta, rho1, Rounding::floor}), 64);
    const RealEnclosure b = eval_t_bits(r, mechanical({kTheta, rho2, Rounding::ceil}), 64);
    const RealEnclosure d = a - b;
    EXPECT_LE(d.lo, r);
    EXPECT_GE(d.hi, -r);
    EXPECT_LE(abs_rat(d.midpoint()), r + d.width());
  }
}
