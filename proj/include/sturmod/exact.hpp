// Exact arithmetic: big rationals, real quadratic irrationals (p + q*sqrt(d))/s,
// continued fractions, and rational enclosures of real values.
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sturmod {

using Integer = mpz_class;
using Rational = mpq_class;

class FieldMismatchError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DivisionByZeroError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Syntax error in one of the textual mini-languages. `position` is the
/// 0-based column where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error("parse error at column " + std::to_string(position + 1) + ": " + what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline Integer floor_of(const Rational& x) { return floor_div(x.get_num(), x.get_den()); }
inline Integer ceil_of(const Rational& x) { return -floor_div(-x.get_num(), x.get_den()); }

inline Integer pow_int(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow_rat(const Rational& base, unsigned long e) {
  Rational r(pow_int(base.get_num(), e), pow_int(base.get_den(), e));
  r.canonicalize();
  return r;
}

inline Rational abs_rat(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline std::string rational_to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

namespace detail {

// Splits d > 0 as f^2 * core with core square-free. Trial division is bounded
// by cbrt-sized factors; any leftover is checked for being a perfect square.
inline std::pair<Integer, Integer> square_free_split(Integer d) {
  Integer f = 1;
  for (unsigned long p = 2; p < 1000000; ++p) {
    const Integer pp = Integer(p) * p;
    if (pp > d) break;
    while (mpz_divisible_p(d.get_mpz_t(), pp.get_mpz_t()) != 0) {
      d /= pp;
      f *= p;
    }
  }
  if (d > 1 && mpz_perfect_square_p(d.get_mpz_t()) != 0) {
    const Integer root = isqrt(d);
    f *= root;
    d = 1;
  }
  return {f, d};
}

// floor((p + q*sqrt(d)) / s) for s > 0 and d not a perfect square.
inline Integer floor_quadratic(const Integer& p, const Integer& q, const Integer& d, const Integer& s) {
  if (q == 0) return floor_div(p, s);
  const Integer root = isqrt(q * q * d);
  const Integer m = q > 0 ? root : Integer(-root - 1);
  return floor_div(p + m, s);
}

}  // namespace detail

/// Exact element (p + q*sqrt(d))/s of a real quadratic field.
///
/// Canonical form: s > 0, gcd(p, q, s) = 1, d square-free and > 1 whenever
/// q != 0; rationals are stored with q = 0 and d = 1. Rationals combine with
/// any field; two irrationals must share d.
class QuadraticReal {
 public:
  QuadraticReal() = default;
  QuadraticReal(long n) : p_(n) {}  // NOLINT(google-explicit-constructor)
  QuadraticReal(const Integer& n) : p_(n) {}  // NOLINT(google-explicit-constructor)
  QuadraticReal(const Rational& r) : p_(r.get_num()), s_(r.get_den()) {}  // NOLINT(google-explicit-constructor)

  static QuadraticReal from_parts(Integer p, Integer q, Integer d, Integer s) {
    if (s == 0) throw DivisionByZeroError("quadratic real with zero denominator");
    if (d <= 0) throw std::domain_error("quadratic real needs a positive radicand");
    auto [f, core] = detail::square_free_split(d);
    q *= f;
    QuadraticReal x;
    if (core == 1) {
      x.p_ = p + q;
      x.q_ = 0;
      x.d_ = 1;
    } else {
      x.p_ = std::move(p);
      x.q_ = std::move(q);
      x.d_ = std::move(core);
    }
    x.s_ = std::move(s);
    x.normalize();
    return x;
  }

  static QuadraticReal sqrt_of(const Integer& d) { return from_parts(0, 1, d, 1); }

  const Integer& p() const noexcept { return p_; }
  const Integer& q() const noexcept { return q_; }
  const Integer& d() const noexcept { return d_; }
  const Integer& s() const noexcept { return s_; }

  bool is_rational() const noexcept { return q_ == 0; }
  Rational to_rational() const {
    if (!is_rational()) throw std::domain_error("quadratic real is irrational");
    Rational r(p_, s_);
    r.canonicalize();
    return r;
  }

  int sign() const {
    const int sp = sgn(p_);
    const int sq = sgn(q_);
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    // p and q*sqrt(d) have opposite signs: compare squares.
    const int c = cmp(p_ * p_, q_ * q_ * d_);
    return c > 0 ? sp : sq;
  }

  Integer floor() const { return detail::floor_quadratic(p_, q_, d_, s_); }
  Integer ceil() const { return -(-*this).floor(); }

  /// Conjugate (p - q*sqrt(d))/s.
  QuadraticReal conjugate() const {
    QuadraticReal x = *this;
    x.q_ = -x.q_;
    return x;
  }

  QuadraticReal operator-() const {
    QuadraticReal x = *this;
    x.p_ = -x.p_;
    x.q_ = -x.q_;
    return x;
  }

  friend QuadraticReal operator+(const QuadraticReal& a, const QuadraticReal& b) {
    const Integer d = common_radicand(a, b);
    return raw(a.p_ * b.s_ + b.p_ * a.s_, a.q_ * b.s_ + b.q_ * a.s_, d, a.s_ * b.s_);
  }
  friend QuadraticReal operator-(const QuadraticReal& a, const QuadraticReal& b) { return a + (-b); }
  friend QuadraticReal operator*(const QuadraticReal& a, const QuadraticReal& b) {
    const Integer d = common_radicand(a, b);
    return raw(a.p_ * b.p_ + a.q_ * b.q_ * d, a.p_ * b.q_ + a.q_ * b.p_, d, a.s_ * b.s_);
  }
  friend QuadraticReal operator/(const QuadraticReal& a, const QuadraticReal& b) {
    if (b.p_ == 0 && b.q_ == 0) throw DivisionByZeroError("division of quadratic real by zero");
    const Integer d = common_radicand(a, b);
    // 1/b = s (p - q sqrt d) / (p^2 - q^2 d)
    const Integer norm = b.p_ * b.p_ - b.q_ * b.q_ * d;
    const QuadraticReal inv = raw(b.s_ * b.p_, -b.s_ * b.q_, d, norm);
    return a * inv;
  }
  QuadraticReal& operator+=(const QuadraticReal& b) { return *this = *this + b; }
  QuadraticReal& operator-=(const QuadraticReal& b) { return *this = *this - b; }
  QuadraticReal& operator*=(const QuadraticReal& b) { return *this = *this * b; }
  QuadraticReal& operator/=(const QuadraticReal& b) { return *this = *this / b; }

  friend bool operator==(const QuadraticReal& a, const QuadraticReal& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.s_ == b.s_ && (a.q_ == 0 || a.d_ == b.d_);
  }
  friend std::strong_ordering operator<=>(const QuadraticReal& a, const QuadraticReal& b) {
    const int sg = (a - b).sign();
    return sg < 0 ? std::strong_ordering::less : sg > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  /// Rational lower bound floor(x * 2^bits) / 2^bits.
  Rational lower_bound(unsigned bits) const {
    const Integer scale = pow_int(2, bits);
    Rational r(detail::floor_quadratic(p_ * scale, q_ * scale, d_, s_), scale);
    r.canonicalize();
    return r;
  }

  double to_double() const {
    if (is_rational()) return to_rational().get_d();
    return lower_bound(80).get_d();
  }

  std::string to_string() const {
    if (is_rational()) return rational_to_string(to_rational());
    std::string out = "(" + p_.get_str();
    out += q_ < 0 ? "-" : "+";
    out += Integer(abs(q_)).get_str() + "*sqrt(" + d_.get_str() + "))";
    if (s_ != 1) out += "/" + s_.get_str();
    return out;
  }

 private:
  static Integer common_radicand(const QuadraticReal& a, const QuadraticReal& b) {
    if (a.q_ == 0) return b.d_;
    if (b.q_ == 0) return a.d_;
    if (a.d_ != b.d_) {
      throw FieldMismatchError("quadratic reals from different fields: sqrt(" + a.d_.get_str() + ") vs sqrt(" +
                               b.d_.get_str() + ")");
    }
    return a.d_;
  }

  // d is already square-free here.
  static QuadraticReal raw(Integer p, Integer q, Integer d, Integer s) {
    QuadraticReal x;
    x.p_ = std::move(p);
    x.q_ = std::move(q);
    x.d_ = std::move(d);
    x.s_ = std::move(s);
    x.normalize();
    return x;
  }

  void normalize() {
    if (s_ == 0) throw DivisionByZeroError("quadratic real with zero denominator");
    if (s_ < 0) {
      p_ = -p_;
      q_ = -q_;
      s_ = -s_;
    }
    if (q_ == 0) d_ = 1;
    Integer g;
    mpz_gcd(g.get_mpz_t(), p_.get_mpz_t(), q_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), s_.get_mpz_t());
    if (g > 1) {
      p_ /= g;
      q_ /= g;
      s_ /= g;
    }
  }

  Integer p_{0};
  Integer q_{0};
  Integer d_{1};
  Integer s_{1};
};

inline std::ostream& operator<<(std::ostream& os, const QuadraticReal& x) { return os << x.to_string(); }

// --------------------------------------------------------------------------
// Continued fractions

/// Eventually periodic partial-quotient sequence [a0; a1, ..., (p1, ..., pk)].
/// `period` is empty for rationals.
struct ContinuedFraction {
  std::vector<Integer> head;
  std::vector<Integer> period;

  bool is_periodic() const noexcept { return !period.empty(); }

  /// Partial quotient a_k (k = 0 is the integer part).
  Integer term(std::size_t k) const {
    if (k < head.size()) return head[k];
    if (period.empty()) throw std::out_of_range("continued fraction of a rational has no term " + std::to_string(k));
    return period[(k - head.size()) % period.size()];
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < head.size(); ++i) {
      out += head[i].get_str();
      if (i == 0) {
        out += ";";
      } else if (i + 1 < head.size() || !period.empty()) {
        out += ",";
      }
    }
    if (!period.empty()) {
      out += "(";
      for (std::size_t i = 0; i < period.size(); ++i) {
        if (i) out += ",";
        out += period[i].get_str();
      }
      out += ")";
    }
    out += "]";
    return out;
  }
};

/// Continued fraction of an irrational quadratic real, with exact period
/// detection on the reduced (P + sqrt(D))/Q states.
inline ContinuedFraction continued_fraction(const QuadraticReal& x) {
  if (x.is_rational()) throw std::invalid_argument("continued_fraction: input is rational");
  Integer P = x.q() > 0 ? x.p() : Integer(-x.p());
  Integer Q = x.q() > 0 ? x.s() : Integer(-x.s());
  Integer D = x.q() * x.q() * x.d();
  {
    const Integer rem = D - P * P;
    if (mpz_divisible_p(rem.get_mpz_t(), Q.get_mpz_t()) == 0) {
      const Integer aq = abs(Q);
      P *= aq;
      D *= Q * Q;
      Q *= aq;
    }
  }
  const Integer root = isqrt(D);
  std::map<std::pair<Integer, Integer>, std::size_t> seen;
  std::vector<Integer> terms;
  for (;;) {
    auto key = std::make_pair(P, Q);
    if (auto it = seen.find(key); it != seen.end()) {
      ContinuedFraction cf;
      cf.head.assign(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(it->second));
      cf.period.assign(terms.begin() + static_cast<std::ptrdiff_t>(it->second), terms.end());
      if (cf.head.empty()) {
        // purely periodic: [(a b c)] = [a; (b c a)]
        cf.head.push_back(cf.period.front());
        std::rotate(cf.period.begin(), cf.period.begin() + 1, cf.period.end());
      }
      return cf;
    }
    seen.emplace(std::move(key), terms.size());
    const Integer a = Q > 0 ? floor_div(P + root, Q) : floor_div(-P - root - 1, -Q);
    terms.push_back(a);
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
}

/// First `count` convergents p_k/q_k.
inline std::vector<Rational> convergents(const ContinuedFraction& cf, std::size_t count) {
  std::vector<Rational> out;
  Integer p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (std::size_t k = 0; k < count; ++k) {
    if (cf.period.empty() && k >= cf.head.size()) break;
    const Integer a = cf.term(k);
    const Integer p = a * p_prev + p_prev2;
    const Integer q = a * q_prev + q_prev2;
    out.emplace_back(p, q);
    out.back().canonicalize();
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
  }
  return out;
}

// --------------------------------------------------------------------------
// Enclosures

/// Certified real value: the exact value lies in [lo, hi].
struct RealEnclosure {
  Rational lo;
  Rational hi;

  RealEnclosure() = default;
  RealEnclosure(Rational low, Rational high) : lo(std::move(low)), hi(std::move(high)) {
    if (hi < lo) throw std::invalid_argument("enclosure with lo > hi");
  }
  static RealEnclosure exact(const Rational& x) { return {x, x}; }

  /// Outward rounding of a quadratic real to dyadic endpoints.
  static RealEnclosure of(const QuadraticReal& x, unsigned bits) {
    if (x.is_rational()) return exact(x.to_rational());
    Rational lo = x.lower_bound(bits);
    Rational hi = lo + Rational(1, pow_int(2, bits));
    hi.canonicalize();
    return {std::move(lo), std::move(hi)};
  }

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool is_exact() const { return lo == hi; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const RealEnclosure& o) const { return lo <= o.lo && o.hi <= hi; }
  bool contains(const QuadraticReal& x) const { return QuadraticReal(lo) <= x && x <= QuadraticReal(hi); }
  bool overlaps(const RealEnclosure& o) const { return !(hi < o.lo || o.hi < lo); }
  bool certainly_less(const RealEnclosure& o) const { return hi < o.lo; }

  RealEnclosure operator-() const { return {-hi, -lo}; }
  friend RealEnclosure operator+(const RealEnclosure& a, const RealEnclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend RealEnclosure operator-(const RealEnclosure& a, const RealEnclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }
  friend RealEnclosure operator+(const RealEnclosure& a, const Rational& b) { return {a.lo + b, a.hi + b}; }
  friend RealEnclosure operator-(const RealEnclosure& a, const Rational& b) { return {a.lo - b, a.hi - b}; }
  friend RealEnclosure operator*(const RealEnclosure& a, const RealEnclosure& b) {
    Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
  }
  friend RealEnclosure operator*(const Rational& k, const RealEnclosure& a) {
    if (k >= 0) return {k * a.lo, k * a.hi};
    return {k * a.hi, k * a.lo};
  }

  /// Hull of two enclosures.
  friend RealEnclosure hull(const RealEnclosure& a, const RealEnclosure& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
  }
};

/// Decimal rendering truncated to the digits that are identical for every
/// point of the enclosure. `certified_digits` counts digits after the point;
/// -1 means not even the integer part (or the sign) is determined.
struct DecimalRendering {
  std::string text;
  int certified_digits = -1;
};

inline DecimalRendering to_decimal(const RealEnclosure& e, int max_digits = 60) {
  DecimalRendering out;
  const bool negative = e.hi < 0;
  if (!negative && e.lo < 0) {
    out.text = "?";
    return out;
  }
  const Rational a = negative ? Rational(-e.hi) : e.lo;
  const Rational b = negative ? Rational(-e.lo) : e.hi;
  Integer scale = 1;
  int digits = -1;
  Integer kept;
  for (int k = 0; k <= max_digits; ++k) {
    const Integer fa = floor_of(a * scale);
    const Integer fb = floor_of(b * scale);
    if (fa != fb) break;
    digits = k;
    kept = fa;
    scale *= 10;
  }
  out.certified_digits = digits;
  if (digits < 0) {
    out.text = "?";
    return out;
  }
  std::string s = kept.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  out.text = (negative ? "-" : "") + s;
  return out;
}

// --------------------------------------------------------------------------
// Textual syntax: integers, a/b, sqrt(d), + - * / and parentheses, e.g.
// "(3-1*sqrt(5))/2" or "sqrt(2)-1".

namespace detail {

class QuadraticParser {
 public:
  QuadraticParser(std::string_view text, std::size_t offset) : text_(text), offset_(offset) {}

  QuadraticReal parse_all() {
    QuadraticReal v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, offset_ + pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  QuadraticReal expr() {
    QuadraticReal v = term();
    for (;;) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  QuadraticReal term() {
    QuadraticReal v = factor();
    for (;;) {
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        QuadraticReal den = factor();
        if (den.sign() == 0) throw ParseError("division by zero", offset_ + at);
        v /= den;
      } else {
        return v;
      }
    }
  }

  QuadraticReal factor() {
    skip_ws();
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    if (accept('(')) {
      QuadraticReal v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!accept('(')) fail("expected '(' after sqrt");
      skip_ws();
      const std::size_t at = pos_;
      const Integer n = integer();
      if (n < 0) throw ParseError("sqrt of a negative number", offset_ + at);
      if (!accept(')')) fail("expected ')'");
      if (n == 0) return QuadraticReal(0);
      return QuadraticReal::sqrt_of(n);
    }
    return QuadraticReal(integer());
  }

  Integer integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end of input");
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a quadratic-real expression. `offset` shifts reported error columns
/// when the text is embedded in a larger input.
inline QuadraticReal parse_quadratic(std::string_view text, std::size_t offset = 0) {
  return detail::QuadraticParser(text, offset).parse_all();
}

inline Rational parse_rational(std::string_view text, std::size_t offset = 0) {
  const QuadraticReal x = parse_quadratic(text, offset);
  if (!x.is_rational()) throw ParseError("expected a rational number", offset);
  return x.to_rational();
}

}  // namespace sturmod
