// Text syntax for infinite words.
//
//   spec     = item , { item } ;                  (* the last item is infinite *)
//   item     = letters | op | atom | "(" , spec , ")" ;
//   letters  = letter , [ "^" , ( integer | "inf" ) ] ;
//   letter   = "0" | "1" | ... | "9" ;
//   op       = "D" | "N" | "T^" , integer ;
//   atom     = "c(" , quad , ")"
//            | "mech(" , quad , "," , quad , "," , ( "floor" | "ceil" ) , ")"
//            | "S(" , letter , "," , integer , "," , spec , ")"
//            | "D(" , letter , "," , integer , "," , spec , ")"
//            | "C011(" , quad , ")" | "C100(" , quad , ")" ;
//   quad     = quadratic expression, e.g. (3-1*sqrt(5))/2 ;
//
// Whitespace between items is optional. Items apply to everything on their
// right: "011 D c(t)" is 011 followed by D(c_t), "T^3 D c(t)" shifts D(c_t).
// "a^inf" is the constant word and must end the spec. "D(x)" with a single
// argument is the doubling operator applied to x. Unknown tokens are errors.
#pragma once

#include "sturmod/exact.hpp"
#include "sturmod/sturmian.hpp"
#include "sturmod/words.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sturmod {

namespace detail {

class WordSpecParser {
 public:
  explicit WordSpecParser(std::string_view text) : text_(text) {}

  WordStream parse_all() {
    WordStream w = spec();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

 private:
  struct Op {
    enum Kind { prefix, doubling, negate, shift } kind;
    FiniteWord letters;
    std::size_t n = 0;
  };
  using Item = std::variant<Op, WordStream>;

  [[noreturn]] void fail(const std::string& what, std::optional<std::size_t> at = std::nullopt) const {
    throw ParseError(what, at.value_or(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  bool looking_at(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void expect(char c) {
    skip_ws();
    if (at_end() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::size_t integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    if (pos_ - start > 9) fail("integer too large", start);
    return std::stoul(std::string(text_.substr(start, pos_ - start)));
  }

  Letter letter() {
    skip_ws();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected a letter");
    return text_[pos_++] - '0';
  }

  /// Text up to the next top-level ',' or ')'.
  std::pair<std::string_view, std::size_t> argument() {
    skip_ws();
    const std::size_t start = pos_;
    int depth = 0;
    while (!at_end()) {
      const char c = text_[pos_];
      if (depth == 0 && (c == ',' || c == ')')) break;
      if (c == '(') ++depth;
      if (c == ')') --depth;
      ++pos_;
    }
    if (at_end()) fail("unterminated argument list", start);
    return {text_.substr(start, pos_ - start), start};
  }

  QuadraticReal quad() {
    auto [text, at] = argument();
    if (text.empty()) fail("expected a number", at);
    return parse_quadratic(text, at);
  }

  /// Number of top-level arguments of the parenthesized list at pos_.
  std::size_t arity() const {
    int depth = 0;
    std::size_t commas = 0;
    for (std::size_t i = pos_; i < text_.size(); ++i) {
      const char c = text_[i];
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) break;
      if (c == ',' && depth == 1) ++commas;
    }
    return commas + 1;
  }

  WordStream class_atom(ClassTarget target, std::size_t at) {
    expect('(');
    const Letter a = letter();
    if (a > 1) fail("class words are binary", pos_ - 1);
    expect(',');
    const std::size_t run = integer();
    expect(',');
    WordStream inner = spec();
    expect(')');
    return guarded([&] { return build_class({a, run, inner, target}); }, at);
  }

  Item item() {
    skip_ws();
    const std::size_t at = pos_;
    if (at_end()) fail("expected a word");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const Letter a = letter();
      if (!at_end() && text_[pos_] == '^') {
        ++pos_;
        if (looking_at("inf")) {
          pos_ += 3;
          return constant_word(a);
        }
        return Op{Op::prefix, FiniteWord::run(a, integer())};
      }
      return Op{Op::prefix, FiniteWord{a}};
    }
    if (c == '(') {
      ++pos_;
      WordStream w = spec();
      expect(')');
      return w;
    }
    if (looking_at("T^")) {
      pos_ += 2;
      return Op{Op::shift, {}, integer()};
    }
    if (looking_at("C011(") || looking_at("C100(")) {
      const CVariant v = looking_at("C011(") ? CVariant::e011 : CVariant::e100;
      pos_ += 4;
      expect('(');
      const QuadraticReal t = quad();
      expect(')');
      return guarded([&] { return c_representative(v, t); }, at);
    }
    if (looking_at("mech(")) {
      pos_ += 4;
      expect('(');
      const QuadraticReal t = quad();
      expect(',');
      const QuadraticReal rho = quad();
      expect(',');
      skip_ws();
      Rounding r;
      if (looking_at("floor")) {
        r = Rounding::floor;
        pos_ += 5;
      } else if (looking_at("ceil")) {
        r = Rounding::ceil;
        pos_ += 4;
      } else {
        fail("expected 'floor' or 'ceil'");
      }
      expect(')');
      return guarded([&] { return mechanical({t, rho, r}); }, at);
    }
    if (looking_at("c(")) {
      pos_ += 1;
      expect('(');
      const QuadraticReal t = quad();
      expect(')');
      return guarded([&] { return characteristic(t); }, at);
    }
    if (looking_at("S(")) {
      ++pos_;
      return class_atom(ClassTarget::s_class, at);
    }
    if (c == 'D') {
      ++pos_;
      if (!at_end() && text_[pos_] == '(' && arity() == 3) return class_atom(ClassTarget::d_class, at);
      return Op{Op::doubling, {}};
    }
    if (c == 'N') {
      ++pos_;
      return Op{Op::negate, {}};
    }
    fail("unknown token '" + std::string(1, c) + "'");
  }

  template <class F>
  WordStream guarded(F f, std::size_t at) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what(), at);
    }
  }

  WordStream spec() {
    std::vector<std::pair<Item, std::size_t>> items;
    for (;;) {
      skip_ws();
      if (at_end() || text_[pos_] == ')' || text_[pos_] == ',') break;
      if (!items.empty() && std::holds_alternative<WordStream>(items.back().first)) {
        fail("an infinite word must end the spec");
      }
      const std::size_t at = pos_;
      items.emplace_back(item(), at);
    }
    if (items.empty() || !std::holds_alternative<WordStream>(items.back().first)) {
      fail("spec must end with an infinite word");
    }
    WordStream w = std::get<WordStream>(items.back().first);
    for (std::size_t i = items.size() - 1; i-- > 0;) {
      const Op& op = std::get<Op>(items[i].first);
      switch (op.kind) {
        case Op::prefix: {
          // merge adjacent letter items into one prefix
          std::vector<Letter> letters(op.letters.begin(), op.letters.end());
          while (i > 0 && std::holds_alternative<Op>(items[i - 1].first) &&
                 std::get<Op>(items[i - 1].first).kind == Op::prefix) {
            --i;
            const FiniteWord& more = std::get<Op>(items[i].first).letters;
            letters.insert(letters.begin(), more.begin(), more.end());
          }
          w = concat(FiniteWord(std::move(letters)), w);
          break;
        }
        case Op::doubling:
          w = doubled(w);
          break;
        case Op::negate:
          w = alt_negate(w);
          break;
        case Op::shift:
          w = shift(w, op.n);
          break;
      }
    }
    return w;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a word spec; errors carry the 0-based column.
inline WordStream parse_word_spec(std::string_view text) { return detail::WordSpecParser(text).parse_all(); }

}  // namespace sturmod
