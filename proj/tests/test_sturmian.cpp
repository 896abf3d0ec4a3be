#include "sturmod/sturmian.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sturmod;

namespace {

const QuadraticReal kTheta = parse_quadratic("(3-sqrt(5))/2");

QuadraticReal q(const char* text) { return parse_quadratic(text); }

FiniteWord bits_word(unsigned bits, std::size_t len) {
  std::vector<Letter> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = static_cast<Letter>((bits >> i) & 1u);
  return FiniteWord(std::move(out));
}

bool balanced_brute(const FiniteWord& y) {
  for (std::size_t m = 1; m < y.size(); ++m) {
    int lo = 1 << 30, hi = -1;
    for (std::size_t i = 0; i + m <= y.size(); ++i) {
      int s = 0;
      for (std::size_t j = i; j < i + m; ++j) s += y[j];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (hi - lo > 1) return false;
  }
  return true;
}

// Is p a prefix of some a^l D(y) with y a balanced word?
bool d_extendable_brute(const FiniteWord& p) {
  for (std::size_t l = 0; l <= p.size(); ++l) {
    bool run_ok = true;
    for (std::size_t i = 1; i < l; ++i) run_ok = run_ok && p[i] == p[0];
    if (!run_ok) continue;
    if (l == p.size()) return true;
    std::vector<Letter> y;
    bool pairs_ok = true;
    for (std::size_t i = l; i < p.size(); i += 2) {
      if (i + 1 < p.size() && p[i] != p[i + 1]) pairs_ok = false;
      y.push_back(p[i]);
    }
    if (pairs_ok && balanced_brute(FiniteWord(y))) return true;
  }
  return false;
}

std::vector<QuadraticReal> sample_slopes() {
  return {kTheta, q("(sqrt(5)-1)/2"), q("sqrt(2)-1"), q("2-sqrt(2)"), q("sqrt(3)-1"), q("(sqrt(13)-3)/2"),
          q("sqrt(7)-2"), q("(5-sqrt(17))/2")};
}

}  // namespace

TEST(Mechanical, FibonacciFloor) {
  EXPECT_EQ(mechanical({kTheta, QuadraticReal(0), Rounding::floor}).prefix(10).to_string(), "0100101001");
}

TEST(Mechanical, InterceptMinusThetaPrependsLetter) {
  const FiniteWord c = characteristic(kTheta).prefix(200);
  EXPECT_EQ(mechanical({kTheta, -kTheta, Rounding::floor}).prefix(201), FiniteWord{0} + c);
  EXPECT_EQ(mechanical({kTheta, -kTheta, Rounding::ceil}).prefix(201), FiniteWord{1} + c);
}

TEST(Mechanical, RejectsBadSlopes) {
  EXPECT_THROW(mechanical({QuadraticReal(make_rational(2, 5)), QuadraticReal(0), Rounding::floor}), SlopeError);
  EXPECT_THROW(characteristic(q("sqrt(2)")), SlopeError);
  EXPECT_THROW(characteristic(q("1-sqrt(2)")), SlopeError);
  EXPECT_THROW(mechanical({kTheta, q("sqrt(2)"), Rounding::floor}), FieldMismatchError);
}

TEST(Mechanical, FloorCeilAgreeOffTheIntegerOrbit) {
  const QuadraticReal rho = QuadraticReal(make_rational(1, 3));
  EXPECT_EQ(mechanical({kTheta, rho, Rounding::floor}).prefix(3000),
            mechanical({kTheta, rho, Rounding::ceil}).prefix(3000));
  // rho = -5 theta puts x_5 on an integer; the words differ at letters 4 and 5
  const FiniteWord f = mechanical({kTheta, QuadraticReal(-5) * kTheta, Rounding::floor}).prefix(50);
  const FiniteWord c = mechanical({kTheta, QuadraticReal(-5) * kTheta, Rounding::ceil}).prefix(50);
  for (std::size_t n = 1; n <= 50; ++n) EXPECT_EQ(f.letter(n) != c.letter(n), n == 4 || n == 5) << n;
}

TEST(Characteristic, Fibonacci) { EXPECT_EQ(characteristic(kTheta).prefix(13).to_string(), "0100101001001"); }

TEST(Characteristic, ComplementSlope) { EXPECT_EQ(characteristic(q("(sqrt(5)-1)/2")).prefix(5).to_string(), "10110"); }

TEST(Characteristic, SlopeEstimate) {
  const QuadraticReal err = QuadraticReal(slope_estimate(characteristic(kTheta), 10000)) - kTheta;
  EXPECT_LT(err.sign() < 0 ? -err : err, QuadraticReal(make_rational(1, 10000)));
}

TEST(Directive, MatchesFloorFormula) {
  EXPECT_EQ(characteristic_directive(kTheta).prefix(13).to_string(), "0100101001001");
  const WordStream a = characteristic_directive(q("sqrt(2)-1"));
  const WordStream b = characteristic(q("sqrt(2)-1"));
  EXPECT_EQ(a.prefix(10000), b.prefix(10000));
  for (const QuadraticReal& t : sample_slopes()) {
    EXPECT_EQ(characteristic_directive(t).prefix(3000), characteristic(t).prefix(3000)) << t;
  }
}

TEST(Directive, FromPartialQuotients) {
  ContinuedFraction cf;
  cf.head = {0, 3};
  cf.period = {1, 2};
  const QuadraticReal theta = continued_fraction_value(cf);
  EXPECT_EQ(continued_fraction(theta).to_string(), cf.to_string());
  EXPECT_EQ(characteristic_directive(cf).prefix(2000), characteristic(theta).prefix(2000));
}

TEST(Directive, StandardWordGrowth) {
  const auto cf = continued_fraction(kTheta);
  std::size_t fib_prev = 1, fib = 2;
  const FiniteWord c = characteristic(kTheta).prefix(5000);
  for (std::size_t k = 1; k <= 15; ++k) {
    const FiniteWord s = standard_word(cf, k);
    EXPECT_GE(s.size(), fib_prev) << k;
    EXPECT_EQ(s, c.slice(0, s.size()));
    const std::size_t next = fib + fib_prev;
    fib_prev = fib;
    fib = next;
  }
}

TEST(Directive, RejectsBadDirectives) {
  ContinuedFraction cf;
  cf.head = {1};
  cf.period = {2};
  EXPECT_THROW(characteristic_directive(cf), SlopeError);
  ContinuedFraction finite;
  finite.head = {0, 2, 3};
  EXPECT_THROW(characteristic_directive(finite), SlopeError);
}

TEST(Balance, ConstructedSturmianStreams) {
  std::mt19937_64 rng(5);
  for (const QuadraticReal& t : sample_slopes()) {
    const QuadraticReal rho(make_rational(static_cast<long>(rng() % 97), 97));
    EXPECT_FALSE(balance_defect(mechanical({t, rho, Rounding::floor}), 2000)) << t;
    EXPECT_FALSE(balance_defect(mechanical({t, -t, Rounding::ceil}), 2000)) << t;
  }
}

TEST(Balance, CrossWordSameSlope) {
  // no u with 0u0 in one word and 1u1 in the other
  const FiniteWord a = mechanical({kTheta, QuadraticReal(make_rational(1, 3)), Rounding::floor}).prefix(2000);
  const FiniteWord b = mechanical({kTheta, QuadraticReal(make_rational(5, 7)), Rounding::ceil}).prefix(2000);
  for (std::size_t len = 0; len <= 30; ++len) {
    std::set<FiniteWord> zero_ctx, one_ctx;
    for (std::size_t i = 0; i + len + 2 <= a.size(); ++i) {
      if (a[i] == 0 && a[i + len + 1] == 0) zero_ctx.insert(a.slice(i + 1, len));
      if (b[i] == 1 && b[i + len + 1] == 1) one_ctx.insert(b.slice(i + 1, len));
    }
    for (const auto& u : zero_ctx) ASSERT_FALSE(one_ctx.count(u)) << u.to_string();
  }
}

TEST(Balance, PartialSumsWithinOne) {
  const QuadraticReal t = q("sqrt(2)-1");
  const FiniteWord s = mechanical({t, QuadraticReal(make_rational(2, 9)), Rounding::floor}).prefix(700);
  std::vector<long> sums(s.size() + 1, 0);
  for (std::size_t i = 0; i < s.size(); ++i) sums[i + 1] = sums[i] + s[i];
  for (std::size_t k = 1; k <= 300; ++k) {
    const QuadraticReal kt = QuadraticReal(static_cast<long>(k)) * t;
    const Integer f = kt.floor();
    for (std::size_t n = 1; n + k - 1 <= 400; ++n) {
      const long m = sums[n + k - 1] - sums[n - 1];
      ASSERT_TRUE(m == f || m == f + 1) << n << " " << k;
    }
  }
}

TEST(BuildClass, DoubledFibonacci) {
  const WordStream w = build_class({0, 0, characteristic(kTheta), ClassTarget::d_class});
  EXPECT_EQ(w.prefix(10).to_string(), "0011000011");
}

TEST(BuildClass, PrefixedS) {
  EXPECT_EQ(build_class({1, 3, characteristic(kTheta), ClassTarget::s_class}).prefix(5).to_string(), "11101");
}

TEST(BuildClass, EvenRunAbsorbsIntoDoubling) {
  const WordStream s = characteristic(kTheta);
  const WordStream w = build_class({0, 2, s, ClassTarget::d_class});
  EXPECT_EQ(w.prefix(400), doubled(concat(FiniteWord{0}, s)).prefix(400));
  const auto info = class_info(w);
  EXPECT_EQ(info.cls, WordClass::d_class);
  EXPECT_EQ(info.form->run, 0u);
}

TEST(BuildClass, RejectsUncertifiedInner) {
  EXPECT_THROW(build_class({0, 1, constant_word(0), ClassTarget::d_class}), std::invalid_argument);
  EXPECT_THROW(build_class({2, 1, characteristic(kTheta), ClassTarget::s_class}), std::invalid_argument);
}

TEST(CRepresentative, Prefixes) {
  EXPECT_EQ(c_representative(CVariant::e011, kTheta).prefix(13).to_string(), "0110011000011");
  EXPECT_EQ(c_representative(CVariant::e100, kTheta).prefix(7).to_string(), "1000011");
}

TEST(CRepresentative, AltOrdered) {
  const auto v = compare(c_representative(CVariant::e100, kTheta), c_representative(CVariant::e011, kTheta),
                         WordOrder::alt, 3);
  EXPECT_EQ(v.relation, Relation::less);
  EXPECT_EQ(v.index, 1u);
}

TEST(CRepresentative, CertifiedInD) {
  for (auto variant : {CVariant::e011, CVariant::e100}) {
    const auto info = class_info(c_representative(variant, kTheta));
    ASSERT_EQ(info.cls, WordClass::d_class);
    EXPECT_EQ(info.form->run, 1u);
    EXPECT_EQ(info.form->lead, variant == CVariant::e011 ? 0 : 1);
  }
}

TEST(ClassifyPrefix, SturmianWitness) {
  const auto v = classify_prefix(FiniteWord::from_digits("0011"), ClassTarget::sturmian);
  EXPECT_EQ(v.kind, VerdictKind::inconsistent);
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(v.witness->empty());
}

TEST(ClassifyPrefix, DoubledPrefixConsistent) {
  const auto v = classify_prefix(doubled(characteristic(kTheta)).prefix(64), ClassTarget::d_class);
  EXPECT_EQ(v.kind, VerdictKind::consistent_up_to_length);
  EXPECT_EQ(v.length, 64u);
  EXPECT_EQ(v.parse_offsets, std::vector<int>{0});
}

TEST(ClassifyPrefix, ZeroOneZeroIsNotD) {
  const auto v = classify_prefix(FiniteWord::from_digits("010"), ClassTarget::d_class);
  EXPECT_EQ(v.kind, VerdictKind::inconsistent);
  ASSERT_TRUE(v.witness);
}

TEST(ClassifyPrefix, ConstantPrefixes) {
  for (auto t : {ClassTarget::sturmian, ClassTarget::s_class, ClassTarget::d_class}) {
    EXPECT_EQ(classify_prefix(FiniteWord::run(1, 9), t).kind, VerdictKind::consistent_up_to_length);
    EXPECT_EQ(classify_prefix(FiniteWord(), t).kind, VerdictKind::consistent_up_to_length);
  }
}

TEST(ClassifyPrefix, InnerSDefectReported) {
  // D(0 1 1 1 0 0 ...) undoubles to a word containing 011 and 100
  const auto v = classify_prefix(FiniteWord::from_digits("001111110000"), ClassTarget::d_class);
  EXPECT_EQ(v.kind, VerdictKind::inconsistent);
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(v.witness->empty());
}

TEST(ClassifyPrefix, DParserMatchesBruteForceExtendability) {
  for (std::size_t len = 1; len <= 14; ++len) {
    for (unsigned bits = 0; bits < (1u << len); ++bits) {
      const FiniteWord p = bits_word(bits, len);
      const bool parser = classify_prefix(p, ClassTarget::d_class).kind != VerdictKind::inconsistent;
      ASSERT_EQ(parser, d_extendable_brute(p)) << p.to_string();
    }
  }
}

TEST(ClassifyPrefix, SturmianMatchesBalance) {
  for (unsigned bits = 0; bits < (1u << 12); ++bits) {
    const FiniteWord p = bits_word(bits, 12);
    ASSERT_EQ(classify_prefix(p, ClassTarget::sturmian).kind == VerdictKind::inconsistent, !balanced_brute(p));
  }
}

TEST(Classify, ByConstruction) {
  const WordStream d = doubled(characteristic(kTheta));
  EXPECT_EQ(classify(d, ClassTarget::d_class, 100).kind, VerdictKind::by_construction);
  EXPECT_EQ(classify(characteristic(kTheta), ClassTarget::s_class, 100).kind, VerdictKind::by_construction);
  const auto raw = classify(with_letter(d, 5, 1 - d.letter(5)), ClassTarget::d_class, 100);
  EXPECT_NE(raw.kind, VerdictKind::by_construction);
}

TEST(Classify, ShiftsOfDWordsStayInD) {
  const WordStream w = build_class({1, 4, mechanical({kTheta, QuadraticReal(make_rational(1, 3)), Rounding::floor}),
                                    ClassTarget::d_class});
  for (std::size_t n = 0; n <= 100; ++n) {
    const WordStream t = shift(w, n);
    ASSERT_NE(classify_prefix(t.prefix(600), ClassTarget::d_class).kind, VerdictKind::inconsistent) << n;
    ASSERT_EQ(class_info(t).cls, WordClass::d_class) << n;
  }
}

TEST(Structure, RealizationMatchesLetters) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const QuadraticReal t = sample_slopes()[rng() % 8];
    const int choice = static_cast<int>(rng() % 4);
    QuadraticReal rho(make_rational(static_cast<long>(rng() % 11), 11));
    if (choice == 0) rho = -t;
    if (choice == 1) rho = QuadraticReal(-static_cast<long>(rng() % 6 + 1)) * t;
    WordStream w = mechanical({t, rho, rng() % 2 ? Rounding::floor : Rounding::ceil});
    const int ops = static_cast<int>(rng() % 5);
    for (int i = 0; i < ops; ++i) {
      switch (rng() % 3) {
        case 0:
          w = shift(w, rng() % 9);
          break;
        case 1:
          w = concat(FiniteWord::run(static_cast<Letter>(rng() % 2), rng() % 4), w);
          break;
        default:
          if (class_info(w).cls != WordClass::d_class) w = doubled(w);
          break;
      }
    }
    const auto form = structure_of(w);
    if (!form) {
      // refused shapes must really be outside the classes they failed
      continue;
    }
    ASSERT_EQ(realize(*form).prefix(500), w.prefix(500)) << w.describe() << " vs " << describe(*form);
    const ClassTarget target = form->cls == WordClass::d_class ? ClassTarget::d_class : ClassTarget::s_class;
    ASSERT_NE(classify_prefix(w.prefix(500), target).kind, VerdictKind::inconsistent) << w.describe();
  }
}

TEST(Structure, RefusedPrependIsOutsideClass) {
  // 1 . 0^3 c is not in S: the prefix test finds a witness
  const WordStream w = concat(FiniteWord{1, 0, 0, 0}, characteristic(kTheta));
  EXPECT_FALSE(structure_of(w));
  EXPECT_EQ(classify_prefix(w.prefix(500), ClassTarget::s_class).kind, VerdictKind::inconsistent);
}

TEST(EndpointHits, Representatives) {
  const auto up = alt_endpoint_hits(*structure_of(c_representative(CVariant::e011, kTheta)));
  ASSERT_EQ(up.size(), 1u);
  EXPECT_EQ(up[0], (ShiftHit{0, Extremal::upper}));
  const auto lo = alt_endpoint_hits(*structure_of(c_representative(CVariant::e100, kTheta)));
  ASSERT_EQ(lo.size(), 1u);
  EXPECT_EQ(lo[0], (ShiftHit{0, Extremal::lower}));
  EXPECT_TRUE(alt_endpoint_hits(*structure_of(doubled(characteristic(kTheta)))).empty());
}

TEST(EndpointHits, AgreeWithLetterComparison) {
  const FiniteWord up = c_representative(CVariant::e011, kTheta).prefix(1200);
  const FiniteWord lo = c_representative(CVariant::e100, kTheta).prefix(1200);
  for (long j = 0; j <= 20; ++j) {
    for (auto rd : {Rounding::floor, Rounding::ceil}) {
      for (std::size_t l : {0u, 1u, 2u, 3u}) {
        for (Letter a : {0, 1}) {
          const MechanicalSpec spec{kTheta, QuadraticReal(-(j + 1)) * kTheta, rd};
          const WordStream w = build_class({a, l, mechanical(spec), ClassTarget::d_class});
          const auto hits = alt_endpoint_hits(*structure_of(w));
          for (std::size_t n = 0; n <= 60; ++n) {
            const FiniteWord t = shift(w, n).prefix(1200);
            const bool is_up = t == up;
            const bool is_lo = t == lo;
            const bool hit_up = std::count(hits.begin(), hits.end(), ShiftHit{n, Extremal::upper}) > 0;
            const bool hit_lo = std::count(hits.begin(), hits.end(), ShiftHit{n, Extremal::lower}) > 0;
            ASSERT_EQ(is_up, hit_up) << w.describe() << " n=" << n;
            ASSERT_EQ(is_lo, hit_lo) << w.describe() << " n=" << n;
          }
        }
      }
    }
  }
}

TEST(EndpointHits, LexHits) {
  const WordStream zc = mechanical({kTheta, -kTheta, Rounding::floor});
  const WordStream oc = mechanical({kTheta, -kTheta, Rounding::ceil});
  EXPECT_EQ(lex_endpoint_hits(*structure_of(zc)), (std::vector<ShiftHit>{{0, Extremal::lower}}));
  EXPECT_EQ(lex_endpoint_hits(*structure_of(oc)), (std::vector<ShiftHit>{{0, Extremal::upper}}));
  EXPECT_TRUE(lex_endpoint_hits(*structure_of(characteristic(kTheta))).empty());
  const WordStream later = mechanical({kTheta, QuadraticReal(-7) * kTheta, Rounding::ceil});
  const auto hits = lex_endpoint_hits(*structure_of(later));
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].n, 6u);
  EXPECT_EQ(shift(later, 6).prefix(500), oc.prefix(500));
}
