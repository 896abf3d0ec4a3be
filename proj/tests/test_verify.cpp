#include "sturmod/verify.hpp"

#include <gtest/gtest.h>

using namespace sturmod;

namespace {

const QuadraticReal kTheta = parse_quadratic("(3-sqrt(5))/2");

Rational rat(long p, long q) { return Rational(p, q); }

WordStream dc() { return doubled(characteristic(kTheta)); }

OrbitSpec neg(const Rational& r, WordStream w) { return {r, BaseSign::negative, 0, std::move(w)}; }
OrbitSpec pos(const Rational& r, WordStream w) { return {r, BaseSign::positive, 0, std::move(w)}; }

const Check& find(const VerdictReport& rep, const std::string& id) {
  for (const auto& c : rep.checks) {
    if (c.id == id) return c;
  }
  throw std::runtime_error("no check " + id);
}

std::string value(const Check& c, const std::string& key) {
  for (const auto& [k, v] : c.data) {
    if (k == key) return v;
  }
  return "<missing>";
}

bool same(const VerdictReport& a, const VerdictReport& b) {
  if (a.checks.size() != b.checks.size() || a.params != b.params) return false;
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    const Check& x = a.checks[i];
    const Check& y = b.checks[i];
    if (x.id != y.id || x.status != y.status || x.witness != y.witness || x.data != y.data) return false;
  }
  return true;
}

}  // namespace

TEST(Report, FailNeedsWitness) {
  VerdictReport rep;
  EXPECT_THROW(rep.add({"x", "claim", Status::fail, "", {}}), std::logic_error);
  rep.add({"b", "claim", Status::pass, "", {}});
  rep.add({"a", "claim", Status::inconclusive, "why", {}});
  rep.finalize();
  EXPECT_EQ(rep.checks.front().id, "a");
  EXPECT_FALSE(rep.passed());
  EXPECT_TRUE(rep.passed(true));
  rep.add({"c", "claim", Status::fail, "w", {}});
  EXPECT_FALSE(rep.passed(true));
}

TEST(SuiteNegative, FibonacciDoubled) {
  const VerdictReport rep = suite_negative(neg(rat(1, 2), dc()), 2000, 64);
  EXPECT_TRUE(rep.passed()) << find(rep, "containment").witness;
  EXPECT_EQ(value(find(rep, "gap"), "gap"), "5/8");
  EXPECT_EQ(value(find(rep, "open_iff_not_c"), "constructed_hits"), "none");
}

TEST(SuiteNegative, ClassCAttainsUpperAtZero) {
  const VerdictReport rep = suite_negative(neg(rat(1, 2), c_representative(CVariant::e011, kTheta)), 2000, 64);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(value(find(rep, "semiopen"), "upper_attained"), "0");
  EXPECT_EQ(value(find(rep, "semiopen"), "lower_attained"), "");
}

TEST(SuiteNegative, OtherRatio) {
  const WordStream w = build_class({1, 4, mechanical({kTheta, QuadraticReal(rat(1, 3)), Rounding::floor}), ClassTarget::d_class});
  const VerdictReport rep = suite_negative(neg(rat(2, 5), w), 2000, 64);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(value(find(rep, "width"), "interval_length"), "62/125");
}

TEST(SuiteNegative, MutationFailsWithWitness) {
  const WordStream bad = with_letter(dc(), 30, 1 - dc().letter(30));
  ScanOptions opt;
  opt.theta = kTheta;
  const VerdictReport rep = suite_negative(neg(rat(1, 2), bad), 100, 64, opt);
  const Check& c = find(rep, "containment");
  EXPECT_EQ(c.status, Status::fail);
  EXPECT_NE(c.witness.find("n="), std::string::npos);
  // membership of a raw mutation is not decided by construction
  EXPECT_EQ(find(rep, "open_iff_not_c").status, Status::inconclusive);
}

TEST(SuitePositive, Examples) {
  for (const Rational& r : {rat(1, 2), rat(3, 5)}) {
    const VerdictReport rep = suite_positive(pos(r, characteristic(kTheta)), 2000, 64);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(value(find(rep, "gap"), "gap"), rational_to_string(r));
  }
  const VerdictReport zero = suite_positive(pos(rat(1, 2), mechanical({kTheta, -kTheta, Rounding::floor})), 2000, 64);
  EXPECT_TRUE(zero.passed());
  EXPECT_EQ(value(find(zero, "semiopen"), "lower_attained"), "0");
}

TEST(SuiteExtremal, OrderBoundsAndApproach) {
  const VerdictReport alt = suite_extremal(dc(), BaseSign::negative, 500);
  EXPECT_TRUE(alt.passed());
  const VerdictReport lex = suite_extremal(characteristic(kTheta), BaseSign::positive, 500);
  EXPECT_TRUE(lex.passed());
  // class C words touch the extremal word at the constructed shift only
  const VerdictReport c = suite_extremal(c_representative(CVariant::e011, kTheta), BaseSign::negative, 300);
  EXPECT_EQ(find(c, "bounds").status, Status::pass);
  // the attained upper word saturates the depth at the horizon
  EXPECT_EQ(find(c, "approach_upper").status, Status::pass);
  EXPECT_TRUE(c.passed());
}

TEST(SuiteExtremal, SupremumApproach) {
  // some shift of Dc agrees with 011Dc to depth >= 20 within n <= 5000
  auto [lo, hi] = endpoint_words(BaseSign::negative, kTheta);
  const Endpoints ends{kTheta, {}, {}, 0, lo, hi};
  const ExtremalProfile p = extremal_profile(dc(), ends, WordOrder::alt, 5000, 2048, {});
  EXPECT_GE(p.max_depth_upper, 20u);
  EXPECT_GE(p.max_depth_lower, 20u);
  EXPECT_EQ(p.order_failures, 0u);
}

TEST(SuiteExtremal, NeedsSlope) {
  EXPECT_THROW(suite_extremal(concat(FiniteWord{0, 1}, constant_word(0)), BaseSign::negative, 10), ClassError);
}

TEST(Oracle, ForbiddenPairFamilies) {
  const auto pairs = forbidden_pairs(6);
  auto has = [&](const char* u, const char* up) {
    return std::any_of(pairs.begin(), pairs.end(), [&](const ForbiddenPair& p) {
      return p.u == FiniteWord::from_digits(u) && p.up == FiniteWord::from_digits(up);
    });
  };
  EXPECT_TRUE(has("010", "100"));
  EXPECT_TRUE(has("010", "101"));
  EXPECT_TRUE(has("0111", "1000"));
  EXPECT_TRUE(has("011", "101"));         // odd block, z = 1
  EXPECT_TRUE(has("011001", "100000"));   // doubled S-defect, u = 0
  EXPECT_TRUE(has("011111", "100110"));   // doubled S-defect, u = 1
  // mirror instances: complement both words and swap them
  for (const auto& p : pairs) {
    EXPECT_TRUE(std::any_of(pairs.begin(), pairs.end(), [&](const ForbiddenPair& q) {
      return q.u == complement(p.up) && q.up == complement(p.u);
    }));
    EXPECT_EQ(p.u.size(), p.up.size());
    EXPECT_LE(p.u.size(), 6u);
  }
}

TEST(Oracle, ProofInequalityForTheFirstFamily) {
  // t_{-r}(010) - t_{-r}(10a) = r + r^2 + a r^3
  for (const Rational& r : {rat(1, 2), rat(1, 3), rat(2, 5)}) {
    for (Letter a : {0, 1}) {
      const Rational d = eval_finite(-r, FiniteWord{0, 1, 0}) - eval_finite(-r, FiniteWord{1, 0, a});
      EXPECT_EQ(d, r + r * r + Rational(a) * r * r * r);
    }
  }
}

TEST(Oracle, SmallEnumerations) {
  const VerdictReport l6 = oracle_enumerate(6, rat(1, 2));
  EXPECT_TRUE(l6.passed());
  EXPECT_EQ(value(find(l6, "forbidden_pairs"), "words"), "64");
  const VerdictReport l8 = oracle_enumerate(8, rat(1, 3));
  EXPECT_TRUE(l8.passed());
  EXPECT_EQ(find(l8, "d_parser").status, Status::pass);
}

TEST(Oracle, SixteenLetters) {
  const VerdictReport rep = oracle_enumerate(16, rat(1, 2));
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(value(find(rep, "balance_equivalence"), "words"), "65536");
}

TEST(Oracle, RejectsBadArguments) {
  EXPECT_THROW(oracle_enumerate(23, rat(1, 2)), std::invalid_argument);
  EXPECT_THROW(oracle_enumerate(6, rat(3, 2)), RatioError);
}

TEST(Monotone, RandomPairs) {
  const VerdictReport rep = monotone_suite(rat(2, 5), 10000, 1);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(value(find(rep, "alt_vs_value"), "disagreements"), "0");
  EXPECT_EQ(value(find(rep, "lex_vs_value"), "disagreements"), "0");
  EXPECT_THROW(monotone_suite(rat(1, 2), 10, 1), RatioError);
}

TEST(Monotone, TrivialPairs) {
  const Rational r = rat(2, 5);
  // 1^inf precedes 0^inf in the alternate order, and its value is negative
  EXPECT_EQ(compare(constant_word(1), constant_word(0), WordOrder::alt, 10).relation, Relation::less);
  EXPECT_EQ(eval_t(-r, constant_word(1), 5).lo, -r / (1 + r));
  // D reverses: D1^inf = 1^inf precedes D0^inf = 0^inf
  EXPECT_EQ(compare(doubled(constant_word(1)), doubled(constant_word(0)), WordOrder::alt, 10).relation, Relation::less);
}

TEST(Identities, RandomInstances) {
  const VerdictReport rep = suite_identities(100, 7);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.checks.size(), 3u);
}

TEST(Generators, AgreeOnReferenceSlopes) {
  const auto slopes = reference_slopes();
  EXPECT_EQ(slopes.size(), 20u);
  for (const auto& t : slopes) {
    EXPECT_GT(t.sign(), 0);
    EXPECT_LT(t, QuadraticReal(1L));
    EXPECT_FALSE(t.is_rational());
  }
  EXPECT_TRUE(suite_generators(2000).passed());
}

TEST(Combinatorics, PartialSums) {
  EXPECT_FALSE(partial_sum_violation(characteristic(kTheta), kTheta, 300).has_value());
  // a word of the wrong slope violates the bound
  const auto bad = partial_sum_violation(characteristic(parse_quadratic("sqrt(2)-1")), kTheta, 300);
  ASSERT_TRUE(bad.has_value());
  EXPECT_TRUE(suite_combinatorics(300, 10).passed());
}

TEST(Digits, RoundTrip) {
  const VerdictReport rep = suite_digits(64);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.checks.size(), 6u * 2u * 4u);
}

TEST(Dubickas, ConstantsMatchOracle) {
  const DubickasConstants k = dubickas_constants(2, 64);
  const Rational tol = rat(1, 100000);
  EXPECT_LT(abs_rat(k.P.midpoint() - Rational(0.350183865440)), tol);
  EXPECT_LT(abs_rat(k.A.midpoint() - Rational(0.412454033640)), tol);
  EXPECT_LT(abs_rat(k.A_prime.midpoint() - Rational(0.324908067280)), tol);
  EXPECT_LT(abs_rat(k.B.midpoint() - Rational(0.788189512163)), tol);
  for (const auto& e : {k.P, k.A, k.A_prime, k.B}) EXPECT_LE(e.width(), Rational(Integer(1), pow_int(2, 60)));
  const DubickasConstants k3 = dubickas_constants(3, 64);
  EXPECT_LT(abs_rat(k3.P.midpoint() - Rational(0.585187415664)), tol);
  EXPECT_LT(abs_rat(k3.B.midpoint() - Rational(0.573780116115)), tol);
  EXPECT_EQ(k3.A.lo, k3.A_prime.lo);
}

TEST(Dubickas, ArcContainment) {
  auto ex = [](long p, long q) { return RealEnclosure::exact(Rational(p, q)); };
  EXPECT_EQ(arc_contained(ex(1, 10), ex(2, 10), ex(0, 1), ex(1, 2)), true);
  EXPECT_EQ(arc_contained(ex(11, 10), ex(12, 10), ex(0, 1), ex(1, 2)), true);  // modulo one
  EXPECT_EQ(arc_contained(ex(-1, 10), ex(2, 10), ex(0, 1), ex(1, 2)), false);
  EXPECT_EQ(arc_contained(ex(9, 10), ex(11, 10), ex(-2, 10), ex(2, 10)), true);
  EXPECT_FALSE(arc_contained(RealEnclosure(rat(-1, 100), rat(1, 100)), ex(2, 10), ex(0, 1), ex(1, 2)).has_value());
}

TEST(Dubickas, IntervalsNotContained) {
  EXPECT_TRUE(dubickas_intervals(2, 64).passed());
  EXPECT_TRUE(dubickas_intervals(3, 64).passed());
}

TEST(Determinism, RepeatedRunsAgree) {
  EXPECT_TRUE(same(monotone_suite(rat(1, 3), 500, 42), monotone_suite(rat(1, 3), 500, 42)));
  EXPECT_TRUE(same(suite_identities(20, 3), suite_identities(20, 3)));
  EXPECT_TRUE(same(suite_negative(neg(rat(1, 2), dc()), 300, 64), suite_negative(neg(rat(1, 2), dc()), 300, 64)));
}
