#include "sturmod/wordspec.hpp"

#include <gtest/gtest.h>

using namespace sturmod;

namespace {

const QuadraticReal kTheta = parse_quadratic("(3-sqrt(5))/2");

std::string prefix(const char* spec, std::size_t n) { return parse_word_spec(spec).prefix(n).to_string(); }

std::size_t error_column(const char* spec) {
  try {
    parse_word_spec(spec);
  } catch (const ParseError& e) {
    return e.position();
  }
  ADD_FAILURE() << "no error for " << spec;
  return 0;
}

}  // namespace

TEST(WordSpec, Atoms) {
  EXPECT_EQ(prefix("c((3-1*sqrt(5))/2)", 13), "0100101001001");
  EXPECT_EQ(prefix("c((3-sqrt(5))/2)", 13), characteristic(kTheta).prefix(13).to_string());
  EXPECT_EQ(parse_word_spec("mech(sqrt(2)-1, 1/3, ceil)").prefix(50),
            mechanical({parse_quadratic("sqrt(2)-1"), QuadraticReal(Rational(1, 3)), Rounding::ceil}).prefix(50));
  EXPECT_EQ(prefix("C011((3-sqrt(5))/2)", 40), c_representative(CVariant::e011, kTheta).prefix(40).to_string());
  EXPECT_EQ(prefix("C100((3-sqrt(5))/2)", 40), c_representative(CVariant::e100, kTheta).prefix(40).to_string());
  EXPECT_EQ(prefix("1^inf", 5), "11111");
}

TEST(WordSpec, OperatorsApplyToTheRight) {
  EXPECT_EQ(prefix("D c((3-1*sqrt(5))/2)", 10), "0011000011");
  EXPECT_EQ(prefix("Dc((3-1*sqrt(5))/2)", 10), "0011000011");
  EXPECT_EQ(prefix("011 D c((3-sqrt(5))/2)", 13), "0110011000011");
  EXPECT_EQ(prefix("1^3 D c((3-sqrt(5))/2)", 7), "1110011");
  EXPECT_EQ(prefix("01^3 0^2 1^inf", 9), "011100111");
  EXPECT_EQ(prefix("T^2 D c((3-sqrt(5))/2)", 8), "11000011");
  EXPECT_EQ(prefix("D (01 0^inf)", 6), "001100");
  EXPECT_EQ(prefix("D(c((3-sqrt(5))/2))", 10), "0011000011");
  EXPECT_EQ(prefix("N N 011 D c((3-sqrt(5))/2)", 30), prefix("011 D c((3-sqrt(5))/2)", 30));
}

TEST(WordSpec, ClassConstructors) {
  const WordStream d = parse_word_spec("D(1,4,mech(sqrt(3)-1,1/3,floor))");
  EXPECT_EQ(d.prefix(6).to_string(), "111100");
  const ClassInfo info = class_info(d);
  ASSERT_TRUE(info.form.has_value());
  EXPECT_EQ(info.cls, WordClass::d_class);
  const WordStream s = parse_word_spec("S(0, 2, c(sqrt(2)-1))");
  EXPECT_EQ(class_info(s).cls, WordClass::s_class);
  // structure survives the text round trip
  EXPECT_EQ(class_info(parse_word_spec("011 D c((3-sqrt(5))/2)")).cls, WordClass::d_class);
}

TEST(WordSpec, ErrorsCarryColumns) {
  EXPECT_EQ(error_column("x"), 0u);
  EXPECT_EQ(error_column("01"), 2u);                            // missing infinite word
  EXPECT_EQ(error_column("c((3-sqrt(5))/2) 0"), 17u);           // infinite word must be last
  EXPECT_EQ(error_column("011 D c(3-sqrt(5)))/2)"), 18u);      // trailing text
  EXPECT_EQ(error_column("011 D c(1/2)"), 6u);                  // rational slope
  EXPECT_EQ(error_column("c((3-sqrt(5)) $ 2)"), 14u);          // inside the number
  EXPECT_EQ(error_column("mech(sqrt(2)-1, 1/3, round)"), 21u);
  EXPECT_EQ(error_column("D(2,1,c(sqrt(2)-1))"), 2u);
  EXPECT_EQ(error_column("S(0,1,D c(sqrt(2)-1))"), 0u);       // inner word must be Sturmian
  EXPECT_EQ(error_column("D c(sqrt(2)-1"), 4u);
  EXPECT_THROW(parse_word_spec(""), ParseError);
  EXPECT_THROW(parse_word_spec("T^x 0^inf"), ParseError);
  EXPECT_THROW(parse_word_spec("Q 0^inf"), ParseError);
  EXPECT_THROW(parse_word_spec("d c(sqrt(2)-1)"), ParseError);  // no case folding
}
