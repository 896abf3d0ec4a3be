// Mechanical and characteristic Sturmian words, the directive (standard-word)
// recurrence, the classes S and D, and prefix-level class classifiers.
//
//   S: words a^l s with s Sturmian.
//   D: words a^l D(s) with s Sturmian.
//   C: words of D some shift of which is 011 D c_theta or 100 D c_theta.
#pragma once

#include "sturmod/exact.hpp"
#include "sturmod/words.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sturmod {

class SlopeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_sturmian_slope(const QuadraticReal& theta) {
  if (theta.is_rational()) throw SlopeError("slope must be irrational, got " + theta.to_string());
  if (theta.sign() <= 0 || theta >= QuadraticReal(1)) throw SlopeError("slope must lie in (0,1), got " + theta.to_string());
}

struct MechanicalSpec {
  QuadraticReal theta;
  QuadraticReal rho;
  Rounding rounding = Rounding::floor;
};

namespace detail {

// x_k = k*theta + rho over a common denominator: (A k + C + (B k + E) sqrt d) / S.
struct AffineQuadratic {
  Integer a, b, c, e, d, s;

  AffineQuadratic(const QuadraticReal& theta, const QuadraticReal& rho) {
    d = theta.is_rational() ? rho.d() : theta.d();
    if (!theta.is_rational() && !rho.is_rational() && theta.d() != rho.d()) {
      throw FieldMismatchError("intercept and slope lie in different quadratic fields");
    }
    s = theta.s() * rho.s();
    a = theta.p() * rho.s();
    b = theta.q() * rho.s();
    c = rho.p() * theta.s();
    e = rho.q() * theta.s();
  }

  Integer rounded(std::size_t k, Rounding r) const {
    const Integer kk(static_cast<unsigned long>(k));
    const Integer p = a * kk + c;
    const Integer q = b * kk + e;
    if (r == Rounding::floor) return floor_quadratic(p, q, d, s);
    return -floor_quadratic(-p, -q, d, s);
  }
};

inline void mechanical_fill(const AffineQuadratic& x, Rounding r, std::size_t from, std::size_t to, std::vector<Letter>& out) {
  // letter n (1-based) = R((n+1) theta + rho) - R(n theta + rho)
  Integer prev = x.rounded(from + 1, r);
  for (std::size_t i = from; i < to; ++i) {
    Integer next = x.rounded(i + 2, r);
    out.push_back(static_cast<Letter>(Integer(next - prev).get_si()));
    prev = std::move(next);
  }
}

}  // namespace detail

/// s_n = R((n+1) theta + rho) - R(n theta + rho), R = floor or ceil.
inline WordStream mechanical(const MechanicalSpec& spec) {
  require_sturmian_slope(spec.theta);
  auto x = std::make_shared<detail::AffineQuadratic>(spec.theta, spec.rho);
  Provenance prov;
  prov.kind = ProvenanceKind::mechanical;
  prov.theta = spec.theta;
  prov.rho = spec.rho;
  prov.rounding = spec.rounding;
  const Rounding r = spec.rounding;
  return WordStream(std::move(prov), {0, 1}, [x, r](std::size_t from, std::size_t to, std::vector<Letter>& out) {
    detail::mechanical_fill(*x, r, from, to, out);
  });
}

/// Characteristic word c_theta. Letters are generated with both the floor
/// and the ceiling formula and must agree.
inline WordStream characteristic(const QuadraticReal& theta) {
  require_sturmian_slope(theta);
  auto x = std::make_shared<detail::AffineQuadratic>(theta, QuadraticReal(0));
  Provenance prov;
  prov.kind = ProvenanceKind::characteristic;
  prov.theta = theta;
  prov.rho = QuadraticReal(0);
  return WordStream(std::move(prov), {0, 1}, [x](std::size_t from, std::size_t to, std::vector<Letter>& out) {
    const std::size_t base = out.size();
    detail::mechanical_fill(*x, Rounding::floor, from, to, out);
    std::vector<Letter> ceil_letters;
    detail::mechanical_fill(*x, Rounding::ceil, from, to, ceil_letters);
    if (!std::equal(ceil_letters.begin(), ceil_letters.end(), out.begin() + static_cast<std::ptrdiff_t>(base))) {
      throw std::logic_error("floor and ceiling characteristic words disagree");
    }
  });
}

/// Exact value of an eventually periodic continued fraction.
inline QuadraticReal continued_fraction_value(const ContinuedFraction& cf) {
  if (cf.period.empty()) {
    if (cf.head.empty()) throw std::invalid_argument("empty continued fraction");
    QuadraticReal x(cf.head.back());
    for (std::size_t i = cf.head.size() - 1; i-- > 0;) x = QuadraticReal(cf.head[i]) + QuadraticReal(1) / x;
    return x;
  }
  // y = [p1; ..., pk, y]  =>  Qk y^2 + (Qk-1 - Pk) y - Pk-1 = 0
  Integer p = 1, p_prev = 0, q = 0, q_prev = 1;
  for (const Integer& a : cf.period) {
    const Integer pn = a * p + p_prev;
    const Integer qn = a * q + q_prev;
    p_prev = p;
    p = pn;
    q_prev = q;
    q = qn;
  }
  const Integer bq = q_prev - p;
  const Integer disc = bq * bq + 4 * q * p_prev;
  QuadraticReal y = QuadraticReal::from_parts(-bq, 1, disc, 2 * q);
  for (std::size_t i = cf.head.size(); i-- > 0;) y = QuadraticReal(cf.head[i]) + QuadraticReal(1) / y;
  return y;
}

/// Standard word s_k of the recurrence s_{-1} = 1, s_0 = 0,
/// s_1 = s_0^{a_1 - 1} s_{-1}, s_k = s_{k-1}^{a_k} s_{k-2}, for
/// theta = [0; a_1, a_2, ...]. Valid for k >= 1.
inline FiniteWord standard_word(const ContinuedFraction& cf, std::size_t k) {
  if (k == 0) throw std::invalid_argument("standard_word: k >= 1");
  std::vector<Letter> older{1};
  std::vector<Letter> old{0};
  std::vector<Letter> cur;
  for (std::size_t n = 1; n <= k; ++n) {
    const Integer a = cf.term(n);
    const unsigned long reps = n == 1 ? a.get_ui() - 1 : a.get_ui();
    cur.clear();
    for (unsigned long i = 0; i < reps; ++i) cur.insert(cur.end(), old.begin(), old.end());
    cur.insert(cur.end(), older.begin(), older.end());
    older = std::move(old);
    old = cur;
  }
  return FiniteWord(std::move(cur));
}

namespace detail {

inline void require_directive(const ContinuedFraction& cf) {
  if (!cf.is_periodic()) throw SlopeError("directive sequence must come from an irrational slope");
  if (cf.term(0) != 0 || cf.term(1) < 1) throw SlopeError("directive sequence must describe a slope in (0,1)");
}

struct DirectiveState {
  ContinuedFraction cf;
  std::size_t n = 0;
  std::vector<Letter> older{1};
  std::vector<Letter> old{0};

  const std::vector<Letter>& grow_to(std::size_t len) {
    while (n == 0 || old.size() < len) {
      ++n;
      const Integer a = cf.term(n);
      const unsigned long reps = n == 1 ? a.get_ui() - 1 : a.get_ui();
      std::vector<Letter> cur;
      cur.reserve(reps * old.size() + older.size());
      for (unsigned long i = 0; i < reps; ++i) cur.insert(cur.end(), old.begin(), old.end());
      cur.insert(cur.end(), older.begin(), older.end());
      older = std::move(old);
      old = std::move(cur);
    }
    return old;
  }
};

}  // namespace detail

/// Characteristic word generated from partial quotients by the standard-word
/// recurrence. Each s_k (k >= 1) is a prefix of the limit word.
inline WordStream characteristic_directive(const ContinuedFraction& cf) {
  detail::require_directive(cf);
  auto state = std::make_shared<detail::DirectiveState>();
  state->cf = cf;
  Provenance prov;
  prov.kind = ProvenanceKind::directive;
  prov.cf = cf;
  prov.theta = continued_fraction_value(cf);
  return WordStream(std::move(prov), {0, 1}, [state](std::size_t from, std::size_t to, std::vector<Letter>& out) {
    const auto& word = state->grow_to(to);
    out.insert(out.end(), word.begin() + static_cast<std::ptrdiff_t>(from), word.begin() + static_cast<std::ptrdiff_t>(to));
  });
}

inline WordStream characteristic_directive(const QuadraticReal& theta) {
  require_sturmian_slope(theta);
  return characteristic_directive(continued_fraction(theta));
}

// --------------------------------------------------------------------------
// Structural description of constructed words

/// The mechanical word M(theta, rho, rounding) as an exact algebraic object.
struct MechanicalForm {
  QuadraticReal theta;
  QuadraticReal rho;
  Rounding rounding = Rounding::floor;

  Integer rounded(const QuadraticReal& x, Rounding r) const { return r == Rounding::floor ? x.floor() : x.ceil(); }

  /// 1-based letter.
  Letter letter(std::size_t n) const {
    const QuadraticReal k(Integer(static_cast<unsigned long>(n)));
    const Integer diff = rounded((k + 1) * theta + rho, rounding) - rounded(k * theta + rho, rounding);
    return static_cast<Letter>(diff.get_si());
  }

  MechanicalForm shifted(std::size_t k) const {
    return {theta, rho + QuadraticReal(Integer(static_cast<unsigned long>(k))) * theta, rounding};
  }

  /// The unique integer h with rho + h*theta in Z, if there is one.
  std::optional<Integer> integer_hit() const {
    // irrational parts cancel: rho.q/rho.s + h theta.q/theta.s = 0
    Rational h(-rho.q() * theta.s(), rho.s() * theta.q());
    h.canonicalize();
    if (h.get_den() != 1) return std::nullopt;
    const QuadraticReal x = rho + QuadraticReal(h) * theta;
    if (!x.is_rational() || x.to_rational().get_den() != 1) return std::nullopt;
    return h.get_num();
  }

  /// Whether some letter index n >= 1 depends on the rounding convention.
  bool rounding_sensitive() const {
    auto h = integer_hit();
    return h && *h >= 1;
  }

  /// Letterwise equality of two mechanical words of the same slope.
  bool same_word(const MechanicalForm& o) const {
    if (theta != o.theta) throw std::invalid_argument("same_word: slopes differ");
    const QuadraticReal delta = rho - o.rho;
    if (!delta.is_rational() || delta.to_rational().get_den() != 1) return false;
    return rounding == o.rounding || !rounding_sensitive();
  }

  /// The mechanical word x.M of the same slope, if x.M is Sturmian.
  std::optional<MechanicalForm> back_extended(Letter x) const {
    const QuadraticReal first = rho + theta;
    auto lead = [&](Rounding r) { return static_cast<Letter>(Integer(rounded(first, r) - rounded(rho, r)).get_si()); };
    if (lead(rounding) == x) return MechanicalForm{theta, rho - theta, rounding};
    const Rounding other = rounding == Rounding::floor ? Rounding::ceil : Rounding::floor;
    if (lead(other) == x && !rounding_sensitive()) return MechanicalForm{theta, rho - theta, other};
    return std::nullopt;
  }
};

enum class WordClass { none, sturmian, s_class, d_class };

inline const char* to_string(WordClass c) {
  switch (c) {
    case WordClass::none:
      return "none";
    case WordClass::sturmian:
      return "sturmian";
    case WordClass::s_class:
      return "S";
    case WordClass::d_class:
      return "D";
  }
  return "?";
}

/// Normalized construction shape:
///   sturmian: inner
///   s_class:  lead^run . inner          (run >= 1, lead.inner not Sturmian)
///   d_class:  lead^run . D(inner)       (run <= 1 or lead.inner not Sturmian)
struct StructuredForm {
  WordClass cls = WordClass::sturmian;
  Letter lead = 0;
  std::size_t run = 0;
  MechanicalForm inner;
};

namespace detail {

inline StructuredForm normalized(StructuredForm f) {
  if (f.cls == WordClass::s_class) {
    while (f.run > 0) {
      auto b = f.inner.back_extended(f.lead);
      if (!b) break;
      f.inner = *b;
      --f.run;
    }
    if (f.run == 0) f.cls = WordClass::sturmian;
  } else if (f.cls == WordClass::d_class) {
    while (f.run >= 2) {
      auto b = f.inner.back_extended(f.lead);
      if (!b) break;
      f.inner = *b;
      f.run -= 2;
    }
    if (f.run == 0) f.lead = 0;
  }
  return f;
}

inline std::optional<StructuredForm> prepend(const StructuredForm& f, Letter x) {
  if (x != 0 && x != 1) return std::nullopt;
  switch (f.cls) {
    case WordClass::sturmian:
      if (auto b = f.inner.back_extended(x)) return StructuredForm{WordClass::sturmian, 0, 0, *b};
      return StructuredForm{WordClass::s_class, x, 1, f.inner};
    case WordClass::s_class:
      if (x == f.lead) return normalized({WordClass::s_class, x, f.run + 1, f.inner});
      return std::nullopt;
    case WordClass::d_class:
      if (f.run == 0 || x == f.lead) return normalized({WordClass::d_class, x, f.run + 1, f.inner});
      return std::nullopt;
    case WordClass::none:
      break;
  }
  return std::nullopt;
}

inline StructuredForm shifted(const StructuredForm& f, std::size_t n) {
  switch (f.cls) {
    case WordClass::sturmian:
      return {WordClass::sturmian, 0, 0, f.inner.shifted(n)};
    case WordClass::s_class:
      if (n < f.run) return {WordClass::s_class, f.lead, f.run - n, f.inner};
      return {WordClass::sturmian, 0, 0, f.inner.shifted(n - f.run)};
    case WordClass::d_class: {
      if (n <= f.run) return normalized({WordClass::d_class, f.lead, f.run - n, f.inner});
      const std::size_t m = n - f.run;
      if (m % 2 == 0) return {WordClass::d_class, 0, 0, f.inner.shifted(m / 2)};
      // T D(M') = m'_1 D(T M')
      const MechanicalForm half = f.inner.shifted((m - 1) / 2);
      return normalized({WordClass::d_class, half.letter(1), 1, half.shifted(1)});
    }
    case WordClass::none:
      break;
  }
  return f;
}

}  // namespace detail

/// Exact shape of a constructed word, derived from its provenance; none when
/// the construction does not certify membership in S or D.
inline std::optional<StructuredForm> structure_of(const WordStream& w) {
  const Provenance& p = w.provenance();
  switch (p.kind) {
    case ProvenanceKind::mechanical:
      return StructuredForm{WordClass::sturmian, 0, 0, {*p.theta, *p.rho, p.rounding}};
    case ProvenanceKind::characteristic:
      return StructuredForm{WordClass::sturmian, 0, 0, {*p.theta, QuadraticReal(0), Rounding::floor}};
    case ProvenanceKind::directive:
      if (!p.theta) return std::nullopt;
      return StructuredForm{WordClass::sturmian, 0, 0, {*p.theta, QuadraticReal(0), Rounding::floor}};
    case ProvenanceKind::shift: {
      auto f = structure_of(*w.parent());
      if (!f) return std::nullopt;
      return detail::shifted(*f, p.count);
    }
    case ProvenanceKind::doubled: {
      auto f = structure_of(*w.parent());
      if (!f) return std::nullopt;
      if (f->cls == WordClass::sturmian) return StructuredForm{WordClass::d_class, 0, 0, f->inner};
      if (f->cls == WordClass::s_class) return detail::normalized({WordClass::d_class, f->lead, 2 * f->run, f->inner});
      return std::nullopt;
    }
    case ProvenanceKind::prefixed: {
      auto f = structure_of(*w.parent());
      for (std::size_t i = p.word.size(); f && i-- > 0;) f = detail::prepend(*f, p.word[i]);
      return f;
    }
    case ProvenanceKind::raw:
    case ProvenanceKind::constant:
    case ProvenanceKind::alt_negated:
    case ProvenanceKind::modified:
      break;
  }
  return std::nullopt;
}

/// A stream spelling out the form directly from its mechanical inner word.
inline WordStream realize(const StructuredForm& f) {
  const WordStream inner = mechanical({f.inner.theta, f.inner.rho, f.inner.rounding});
  const FiniteWord run = FiniteWord::run(f.lead, f.run);
  switch (f.cls) {
    case WordClass::sturmian:
      return inner;
    case WordClass::s_class:
      return concat(run, inner);
    case WordClass::d_class:
      return concat(run, doubled(inner));
    case WordClass::none:
      break;
  }
  throw std::invalid_argument("realize: no form");
}

inline std::string describe(const StructuredForm& f) {
  const std::string m = "mech(" + f.inner.theta.to_string() + "," + f.inner.rho.to_string() + "," +
                        to_string(f.inner.rounding) + ")";
  const std::string run = f.run == 0 ? "" : std::to_string(f.lead) + "^" + std::to_string(f.run) + " ";
  switch (f.cls) {
    case WordClass::sturmian:
      return m;
    case WordClass::s_class:
      return run + m;
    case WordClass::d_class:
      return run + "D " + m;
    case WordClass::none:
      break;
  }
  return "none";
}

struct ClassInfo {
  WordClass cls = WordClass::none;
  std::optional<QuadraticReal> slope;
  std::optional<StructuredForm> form;
};

inline ClassInfo class_info(const WordStream& w) {
  ClassInfo info;
  info.form = structure_of(w);
  if (info.form) {
    info.cls = info.form->cls;
    info.slope = info.form->inner.theta;
  }
  return info;
}

enum class ClassTarget { sturmian, s_class, d_class };

inline const char* to_string(ClassTarget t) {
  switch (t) {
    case ClassTarget::sturmian:
      return "sturmian";
    case ClassTarget::s_class:
      return "S";
    case ClassTarget::d_class:
      return "D";
  }
  return "?";
}

/// Membership certified by construction (Sturmian words are in S with l = 0).
inline bool certified_member(const ClassInfo& info, ClassTarget target) {
  switch (target) {
    case ClassTarget::sturmian:
      return info.cls == WordClass::sturmian;
    case ClassTarget::s_class:
      return info.cls == WordClass::sturmian || info.cls == WordClass::s_class;
    case ClassTarget::d_class:
      return info.cls == WordClass::d_class;
  }
  return false;
}

// --------------------------------------------------------------------------
// Class constructors

struct ClassSpec {
  Letter letter = 0;
  std::size_t run = 0;
  WordStream inner;
  ClassTarget cls = ClassTarget::s_class;
};

/// a^l s (class S) or a^l D(s) (class D) for a Sturmian inner word s.
inline WordStream build_class(const ClassSpec& spec) {
  if (spec.letter != 0 && spec.letter != 1) throw std::invalid_argument("build_class: letter must be 0 or 1");
  if (!certified_member(class_info(spec.inner), ClassTarget::sturmian)) {
    throw std::invalid_argument("build_class: inner word is not a constructed Sturmian word");
  }
  if (spec.cls == ClassTarget::sturmian) throw std::invalid_argument("build_class: target class must be S or D");
  const FiniteWord run = FiniteWord::run(spec.letter, spec.run);
  if (spec.cls == ClassTarget::s_class) return concat(run, spec.inner);
  return concat(run, doubled(spec.inner));
}

enum class CVariant { e011, e100 };

/// 011 D(c_theta) or 100 D(c_theta).
inline WordStream c_representative(CVariant variant, const QuadraticReal& theta) {
  const FiniteWord head = variant == CVariant::e011 ? FiniteWord{0, 1, 1} : FiniteWord{1, 0, 0};
  return concat(head, doubled(characteristic(theta)));
}

// --------------------------------------------------------------------------
// Endpoint words and their occurrences among shifts

enum class Extremal { lower, upper };

struct ShiftHit {
  std::size_t n = 0;
  Extremal which = Extremal::lower;
  friend bool operator==(const ShiftHit&, const ShiftHit&) = default;
};

/// Shifts n >= 0 with T^n w = 100 D c_theta (lower) or 011 D c_theta (upper),
/// for a constructed D-word. At most one exists since w is aperiodic.
inline std::vector<ShiftHit> alt_endpoint_hits(const StructuredForm& f) {
  if (f.cls != WordClass::d_class) throw std::invalid_argument("alt_endpoint_hits: not a D-word");
  std::vector<ShiftHit> out;
  // T^n (a^l D s) = x D(T^k s) with n = l - 1 + 2k, x = a (k = 0) or s_k.
  // 011Dc = 0 D(1c), 100Dc = 1 D(0c); T^k s = M(theta, -theta, .) forces
  // rho + (k+1) theta in Z and the rounding of s.
  const auto h = f.inner.integer_hit();
  if (!h || *h < 1) return out;
  const std::size_t k = static_cast<std::size_t>(h->get_ui()) - 1;
  if (k == 0 && f.run == 0) return out;
  const Letter x = k == 0 ? f.lead : f.inner.letter(k);
  const std::size_t n = f.run + 2 * k - 1;
  if (f.inner.rounding == Rounding::ceil && x == 0) out.push_back({n, Extremal::upper});
  if (f.inner.rounding == Rounding::floor && x == 1) out.push_back({n, Extremal::lower});
  return out;
}

/// Shifts n >= 0 with T^n w = 0 c_theta (lower) or 1 c_theta (upper) for a
/// constructed Sturmian or S-word.
inline std::vector<ShiftHit> lex_endpoint_hits(const StructuredForm& f) {
  if (f.cls != WordClass::sturmian && f.cls != WordClass::s_class) {
    throw std::invalid_argument("lex_endpoint_hits: not an S-word");
  }
  std::vector<ShiftHit> out;
  const std::size_t offset = f.cls == WordClass::s_class ? f.run : 0;
  const auto h = f.inner.integer_hit();
  if (!h || *h < 1) return out;
  const std::size_t n = offset + static_cast<std::size_t>(h->get_ui()) - 1;
  out.push_back({n, f.inner.rounding == Rounding::floor ? Extremal::lower : Extremal::upper});
  return out;
}

// --------------------------------------------------------------------------
// Prefix classification

enum class VerdictKind { inconsistent, consistent_up_to_length, by_construction };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::inconsistent:
      return "inconsistent";
    case VerdictKind::consistent_up_to_length:
      return "consistent_up_to_length";
    case VerdictKind::by_construction:
      return "by_construction";
  }
  return "?";
}

struct ClassVerdict {
  VerdictKind kind = VerdictKind::consistent_up_to_length;
  std::optional<FiniteWord> witness;
  std::size_t length = 0;
  std::vector<int> parse_offsets;  // D only: pairing offsets (0 even, 1 odd) that parse
  std::vector<std::string> notes;
};

namespace detail {

struct PairingParse {
  bool ok = false;
  std::size_t failed_at = 0;  // letters needed to see the mismatch
  FiniteWord inner;
};

// offset 0: w = D(x); offset 1: w = x_1 D(x_2 x_3 ...).
inline PairingParse pairing_parse(const FiniteWord& p, int offset) {
  PairingParse out;
  std::vector<Letter> x;
  std::size_t i = 0;
  if (offset == 1 && !p.empty()) {
    x.push_back(p[0]);
    i = 1;
  }
  for (; i < p.size(); i += 2) {
    if (i + 1 < p.size() && p[i] != p[i + 1]) {
      out.failed_at = i + 2;
      return out;
    }
    x.push_back(p[i]);
  }
  out.ok = true;
  out.inner = FiniteWord(std::move(x));
  return out;
}

}  // namespace detail

/// Whether a finite binary prefix can extend to a member of the class.
/// Sturmian: no 0u0/1u1 pair. S: no 01u1/10u0 pair. D: some pairing offset
/// undoubles the prefix to an S-consistent word (constant prefixes always
/// extend).
inline ClassVerdict classify_prefix(const FiniteWord& p, ClassTarget target) {
  ClassVerdict v;
  v.length = p.size();
  detail::require_binary(p.letters(), "classify_prefix");
  switch (target) {
    case ClassTarget::sturmian:
      if (auto u = balance_defect(p)) {
        v.kind = VerdictKind::inconsistent;
        v.witness = *u;
        v.notes.push_back("0u0 and 1u1 both occur");
      }
      return v;
    case ClassTarget::s_class:
      if (auto u = s_defect(p)) {
        v.kind = VerdictKind::inconsistent;
        v.witness = *u;
        v.notes.push_back("01u1 and 10u0 both occur");
      }
      return v;
    case ClassTarget::d_class:
      break;
  }
  const bool constant = std::adjacent_find(p.begin(), p.end(), std::not_equal_to<>()) == p.end();
  if (constant) {
    v.parse_offsets = {0, 1};
    v.notes.push_back("constant prefix");
    return v;
  }
  std::size_t unparsed = 0;
  std::optional<FiniteWord> inner_defect;
  for (int offset : {0, 1}) {
    const auto parse = detail::pairing_parse(p, offset);
    if (!parse.ok) {
      unparsed = std::max(unparsed, parse.failed_at);
      v.notes.push_back("offset " + std::to_string(offset) + ": unequal pair ending at letter " +
                        std::to_string(parse.failed_at));
      continue;
    }
    if (auto u = s_defect(parse.inner)) {
      v.notes.push_back("offset " + std::to_string(offset) + ": undoubled word has 01u1 and 10u0 with u=" +
                        u->to_string());
      if (!inner_defect) inner_defect = *u;
      continue;
    }
    v.parse_offsets.push_back(offset);
  }
  if (v.parse_offsets.empty()) {
    v.kind = VerdictKind::inconsistent;
    v.witness = inner_defect ? *inner_defect : p.slice(0, unparsed);
  }
  return v;
}

/// By construction when the provenance certifies the class; otherwise the
/// prefix test on the first n letters.
inline ClassVerdict classify(const WordStream& w, ClassTarget target, std::size_t n) {
  if (certified_member(class_info(w), target)) {
    ClassVerdict v;
    v.kind = VerdictKind::by_construction;
    v.length = n;
    return v;
  }
  ClassVerdict v = classify_prefix(w.prefix(n), target);
  if (v.kind != VerdictKind::inconsistent) {
    v.notes.push_back("membership of an infinite word is only refutable from a prefix");
  }
  return v;
}

}  // namespace sturmod
