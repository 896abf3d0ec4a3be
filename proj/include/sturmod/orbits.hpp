// Orbits of xi (-b)^n and xi b^n modulo one.
//
// With xi = g/(b+1) + t_{-1/b}(w), the fractional part of xi (-b)^n equals the
// fractional part of g/(b+1) + t_{-1/b}(T^n w), because (-b)^n = 1 mod (b+1)
// and the leading digits contribute an integer. The positive case uses
// xi = g/(b-1) + t_{1/b}(w) and b^n = 1 mod (b-1). For a general ratio
// 0 < r < 1 the same values read g r/(1+r) + t_{-r}(T^n w) and
// g r/(1-r) + t_r(T^n w).
#pragma once

#include "sturmod/exact.hpp"
#include "sturmod/series.hpp"
#include "sturmod/sturmian.hpp"
#include "sturmod/words.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sturmod {

class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ClassError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BaseSign { negative, positive };

inline const char* to_string(BaseSign s) { return s == BaseSign::negative ? "negative" : "positive"; }

/// Maximum number of precision doublings before a hard inconclusive.
inline constexpr int kMaxEscalations = 4;

/// Orbit values g r/(1 +- r) + t_{-+r}(T^n w).
struct OrbitSpec {
  Rational r;
  BaseSign sign = BaseSign::negative;
  Integer g = 0;
  WordStream w = constant_word(0);

  Rational signed_ratio() const { return sign == BaseSign::negative ? Rational(-r) : r; }
  Rational offset() const {
    return sign == BaseSign::negative ? Rational(Rational(g) * r / (1 + r)) : Rational(Rational(g) * r / (1 - r));
  }
  WordOrder order() const { return sign == BaseSign::negative ? WordOrder::alt : WordOrder::lex; }
};

/// xi = g/(b+1) + t_{-1/b}(w) (negative) or g/(b-1) + t_{1/b}(w) (positive).
struct XiSpec {
  Integer g = 0;
  long b = 2;
  WordStream w = constant_word(0);
  BaseSign sign = BaseSign::negative;

  OrbitSpec orbit_spec() const {
    if (b < 2) throw std::invalid_argument("base b must be at least 2");
    return {Rational(1, b), sign, g, w};
  }
};

/// Rejects words that are certifiably outside the class the sign requires:
/// constant words, and prefixes with a class witness.
inline void check_orbit_word(const OrbitSpec& spec, std::size_t horizon = 2000) {
  if (spec.r <= 0 || spec.r >= 1) throw RatioError("orbit ratio must satisfy 0 < r < 1");
  if (spec.w.provenance().kind == ProvenanceKind::constant) {
    throw ClassError("constant words are periodic and belong to neither class");
  }
  const ClassTarget target = spec.sign == BaseSign::negative ? ClassTarget::d_class : ClassTarget::sturmian;
  const ClassVerdict v = classify(spec.w, target, horizon);
  if (v.kind == VerdictKind::inconsistent) {
    throw ClassError(std::string("word is not in class ") + to_string(target) + ": witness u=" + v.witness->to_string());
  }
}

inline RealEnclosure xi_value(const XiSpec& spec, unsigned bits) {
  const OrbitSpec o = spec.orbit_spec();
  check_orbit_word(o);
  return eval_t_bits(o.signed_ratio(), o.w, bits) + o.offset();
}

// --------------------------------------------------------------------------
// Endpoints

struct Endpoints {
  QuadraticReal theta;
  RealEnclosure lower;
  RealEnclosure upper;
  Rational gap;  // exact upper - lower
  WordStream lower_word;
  WordStream upper_word;
};

inline std::pair<WordStream, WordStream> endpoint_words(BaseSign sign, const QuadraticReal& theta) {
  if (sign == BaseSign::negative) {
    return {c_representative(CVariant::e100, theta), c_representative(CVariant::e011, theta)};
  }
  return {mechanical({theta, -theta, Rounding::floor}), mechanical({theta, -theta, Rounding::ceil})};
}

inline Endpoints endpoints(const OrbitSpec& spec, const QuadraticReal& theta, unsigned bits) {
  auto [lo_word, hi_word] = endpoint_words(spec.sign, theta);
  const Rational ratio = spec.signed_ratio();
  const Rational off = spec.offset();
  Endpoints e{theta,
              eval_t_bits(ratio, lo_word, bits) + off,
              eval_t_bits(ratio, hi_word, bits) + off,
              spec.sign == BaseSign::negative ? endpoint_gap(spec.r) : lex_endpoint_gap(spec.r),
              lo_word,
              hi_word};
  if (!(e.upper - e.lower).contains(e.gap)) throw std::logic_error("endpoint enclosures disagree with the exact gap");
  return e;
}

/// Endpoints for the slope recorded in the word's construction.
inline Endpoints endpoints(const OrbitSpec& spec, unsigned bits) {
  const ClassInfo info = class_info(spec.w);
  if (!info.slope) throw ClassError("slope is not recoverable from the word's construction; pass theta explicitly");
  return endpoints(spec, *info.slope, bits);
}

/// Midpoint of the complement of [lower, upper] modulo one, lifted below the
/// interval, so that (eta, eta + 1) contains it.
inline Rational default_eta(const Endpoints& e) {
  Rational eta = (e.lower.lo + e.upper.hi - 1) / 2;
  eta.canonicalize();
  return eta;
}

// --------------------------------------------------------------------------
// Orbit records

struct OrbitRecord {
  std::size_t n = 0;
  RealEnclosure lifted;  // offset + t(T^n w)
  RealEnclosure frac;    // lifted - floor(lifted); meaningless when wrap_ambiguous
  bool wrap_ambiguous = false;
  unsigned bits = 0;
};

namespace detail {

inline bool split_floor(const RealEnclosure& x, Integer& k) {
  k = floor_of(x.lo);
  return floor_of(x.hi) == k;
}

class OrbitEvaluator {
 public:
  OrbitEvaluator(const OrbitSpec& spec, unsigned bits)
      : spec_(spec),
        bits_(bits),
        offset_(spec.offset()),
        kernel_(spec.signed_ratio(), terms_for_bits(spec.signed_ratio(), bits, spec.w.alphabet())) {}

  unsigned bits() const noexcept { return bits_; }
  std::size_t terms() const noexcept { return kernel_.terms(); }

  /// Record for shift n given letters w_{n+1} ... w_{n+terms}.
  OrbitRecord record(std::size_t n, std::span<const Letter> window) const {
    OrbitRecord rec;
    rec.n = n;
    rec.bits = bits_;
    rec.lifted = kernel_.evaluate(window, spec_.w.alphabet()) + offset_;
    Integer k;
    rec.wrap_ambiguous = !split_floor(rec.lifted, k);
    rec.frac = rec.lifted - Rational(k);
    return rec;
  }

  OrbitRecord record(std::size_t n) const {
    const FiniteWord win = spec_.w.window(n, kernel_.terms());
    return record(n, win.letters());
  }

 private:
  const OrbitSpec& spec_;
  unsigned bits_;
  Rational offset_;
  SeriesKernel kernel_;
};

}  // namespace detail

/// Single record, escalating precision while the fractional part straddles an
/// integer.
inline OrbitRecord orbit_record(const OrbitSpec& spec, std::size_t n, unsigned bits) {
  OrbitRecord rec = detail::OrbitEvaluator(spec, bits).record(n);
  for (int e = 0; rec.wrap_ambiguous && e < kMaxEscalations; ++e) {
    bits *= 2;
    rec = detail::OrbitEvaluator(spec, bits).record(n);
  }
  return rec;
}

/// Records for n = 0..N. Wrap-ambiguous records are escalated and, if still
/// ambiguous, returned with the flag set.
inline std::vector<OrbitRecord> orbit(const OrbitSpec& spec, std::size_t n_max, unsigned bits) {
  detail::OrbitEvaluator eval(spec, bits);
  const FiniteWord letters = spec.w.prefix(n_max + eval.terms() + 1);
  std::vector<OrbitRecord> out;
  out.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    OrbitRecord rec = eval.record(n, letters.letters().subspan(n, eval.terms()));
    if (rec.wrap_ambiguous) rec = orbit_record(spec, n, bits);
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::vector<OrbitRecord> orbit(const XiSpec& spec, std::size_t n_max, unsigned bits) {
  const OrbitSpec o = spec.orbit_spec();
  check_orbit_word(o);
  return orbit(o, n_max, bits);
}

// --------------------------------------------------------------------------
// Containment

enum class Placement { inside, lower_attained, upper_attained, below, above, undecided };

inline const char* to_string(Placement p) {
  switch (p) {
    case Placement::inside:
      return "inside";
    case Placement::lower_attained:
      return "lower_attained";
    case Placement::upper_attained:
      return "upper_attained";
    case Placement::below:
      return "below";
    case Placement::above:
      return "above";
    case Placement::undecided:
      return "undecided";
  }
  return "?";
}

/// Lift of a fractional-part enclosure into (eta, eta + 1); nullopt when it
/// straddles eta.
inline std::optional<RealEnclosure> lift_into(const RealEnclosure& frac, const Rational& eta) {
  const RealEnclosure shifted = frac - eta;
  Integer k;
  if (!detail::split_floor(shifted, k) || shifted.lo == Rational(k)) return std::nullopt;
  return frac - Rational(k);
}

/// Enclosure-only placement of a lifted value against the endpoint enclosures.
inline Placement place(const RealEnclosure& y, const Endpoints& e) {
  if (y.hi < e.lower.lo) return Placement::below;
  if (y.lo > e.upper.hi) return Placement::above;
  if (e.lower.hi < y.lo && y.hi < e.upper.lo) return Placement::inside;
  return Placement::undecided;
}

struct PlacedRecord {
  std::size_t n = 0;
  Placement placement = Placement::undecided;
  std::optional<RealEnclosure> y;  // value lifted into (eta, eta + 1)
  std::string resolved_by;         // enclosure | escalation | structure | order
  unsigned bits = 0;
};

struct ContainmentReport {
  Rational eta;
  std::size_t count = 0;
  std::vector<std::size_t> violations;
  std::vector<std::size_t> inconclusive;
  std::vector<std::size_t> lower_attained;
  std::vector<std::size_t> upper_attained;
  std::optional<RealEnclosure> min_value;
  std::optional<RealEnclosure> max_value;
  Rational width_lower_bound;  // max lo - min hi over the decided values
  std::size_t resolved_by_escalation = 0;
  std::size_t resolved_by_structure = 0;
  std::size_t resolved_by_order = 0;
  std::vector<PlacedRecord> placed;

  bool all_in() const { return violations.empty() && inconclusive.empty(); }
};

namespace detail {

inline void tally(ContainmentReport& rep, const PlacedRecord& p) {
  switch (p.placement) {
    case Placement::below:
    case Placement::above:
      rep.violations.push_back(p.n);
      break;
    case Placement::undecided:
      rep.inconclusive.push_back(p.n);
      break;
    case Placement::lower_attained:
      rep.lower_attained.push_back(p.n);
      break;
    case Placement::upper_attained:
      rep.upper_attained.push_back(p.n);
      break;
    case Placement::inside:
      break;
  }
  if (p.resolved_by == "escalation") ++rep.resolved_by_escalation;
  if (p.resolved_by == "structure") ++rep.resolved_by_structure;
  if (p.resolved_by == "order") ++rep.resolved_by_order;
  if (p.y) {
    if (!rep.min_value || p.y->lo < rep.min_value->lo) rep.min_value = RealEnclosure(p.y->lo, p.y->hi);
    if (!rep.max_value || p.y->hi > rep.max_value->hi) rep.max_value = RealEnclosure(p.y->lo, p.y->hi);
  }
}

inline void finish(ContainmentReport& rep) {
  rep.count = rep.placed.size();
  for (const auto& p : rep.placed) tally(rep, p);
  if (rep.min_value && rep.max_value) rep.width_lower_bound = std::max(Rational(0), Rational(rep.max_value->lo - rep.min_value->hi));
}

inline PlacedRecord place_record(const OrbitRecord& rec, const Endpoints& e, const Rational& eta) {
  PlacedRecord p;
  p.n = rec.n;
  p.bits = rec.bits;
  p.resolved_by = "enclosure";
  if (rec.wrap_ambiguous) return p;
  p.y = lift_into(rec.frac, eta);
  if (!p.y) return p;
  p.placement = place(*p.y, e);
  return p;
}

}  // namespace detail

/// Enclosure-only containment statistics on the circle, lifted at eta.
inline ContainmentReport orbit_stats(const std::vector<OrbitRecord>& records, const Endpoints& e,
                                     std::optional<Rational> eta = std::nullopt) {
  ContainmentReport rep;
  rep.eta = eta ? *eta : default_eta(e);
  for (const auto& rec : records) rep.placed.push_back(detail::place_record(rec, e, rep.eta));
  detail::finish(rep);
  return rep;
}

struct OrbitScan {
  OrbitSpec spec;
  Endpoints ends;
  std::vector<OrbitRecord> records;
  ContainmentReport report;
  std::size_t order_horizon = 0;
};

struct ScanOptions {
  std::optional<Rational> eta;
  std::optional<QuadraticReal> theta;  // defaults to the construction's slope
  std::size_t order_horizon = 0;       // 0: 16 N + 1024
};

/// Orbit plus containment, with undecided endpoint touches resolved by
/// precision escalation and then, for words whose class and slope are
/// certified by construction, by exact shift analysis and the order.
inline OrbitScan scan_orbit(const OrbitSpec& spec, std::size_t n_max, unsigned bits, const ScanOptions& opt = {}) {
  const ClassInfo info = class_info(spec.w);
  std::optional<QuadraticReal> theta = opt.theta ? opt.theta : info.slope;
  if (!theta) throw ClassError("slope is not recoverable from the word's construction; pass theta explicitly");
  OrbitScan scan{spec, endpoints(spec, *theta, bits), orbit(spec, n_max, bits), {}, 0};
  scan.order_horizon = opt.order_horizon ? opt.order_horizon : 16 * n_max + 1024;
  ContainmentReport& rep = scan.report;
  rep.eta = opt.eta ? *opt.eta : default_eta(scan.ends);

  const bool negative = spec.sign == BaseSign::negative;
  const bool structural = info.form && info.form->inner.theta == *theta &&
                          (negative ? info.form->cls == WordClass::d_class
                                    : (info.form->cls == WordClass::sturmian || info.form->cls == WordClass::s_class));
  std::vector<ShiftHit> hits;
  if (structural) hits = negative ? alt_endpoint_hits(*info.form) : lex_endpoint_hits(*info.form);
  std::map<unsigned, Endpoints> ends_at;
  ends_at.emplace(bits, scan.ends);

  for (const auto& rec : scan.records) {
    PlacedRecord p = detail::place_record(rec, scan.ends, rep.eta);
    unsigned b = bits;
    for (int e = 0; p.placement == Placement::undecided && e < kMaxEscalations; ++e) {
      b *= 2;
      auto it = ends_at.find(b);
      if (it == ends_at.end()) it = ends_at.emplace(b, endpoints(spec, *theta, b)).first;
      PlacedRecord q = detail::place_record(orbit_record(spec, rec.n, b), it->second, rep.eta);
      if (q.placement != Placement::undecided) {
        q.resolved_by = "escalation";
        p = q;
      } else if (q.y) {
        p.y = q.y;
        p.bits = q.bits;
      }
    }
    const bool shift_in_class = structural && (negative || info.form->cls == WordClass::sturmian || rec.n >= info.form->run);
    if (p.placement == Placement::undecided && shift_in_class && p.y) {
      const bool near_lower = p.y->overlaps(scan.ends.lower) || p.y->hi < scan.ends.lower.lo;
      const Extremal which = near_lower ? Extremal::lower : Extremal::upper;
      if (std::count(hits.begin(), hits.end(), ShiftHit{rec.n, which})) {
        p.placement = which == Extremal::lower ? Placement::lower_attained : Placement::upper_attained;
        p.resolved_by = "structure";
      } else {
        const WordStream& target = which == Extremal::lower ? scan.ends.lower_word : scan.ends.upper_word;
        const OrderVerdict v = compare(shift(spec.w, rec.n), target, spec.order(), scan.order_horizon);
        if (v.relation != Relation::equal_up_to_horizon) {
          const bool greater = v.relation == Relation::greater;
          if (which == Extremal::lower) {
            p.placement = greater ? Placement::inside : Placement::below;
          } else {
            p.placement = greater ? Placement::above : Placement::inside;
          }
          p.resolved_by = "order";
        }
      }
    }
    rep.placed.push_back(std::move(p));
  }
  detail::finish(rep);
  return scan;
}

inline OrbitScan scan_orbit(const XiSpec& spec, std::size_t n_max, unsigned bits, const ScanOptions& opt = {}) {
  const OrbitSpec o = spec.orbit_spec();
  check_orbit_word(o);
  return scan_orbit(o, n_max, bits, opt);
}

// --------------------------------------------------------------------------
// Digit extraction

struct DigitExtraction {
  FiniteWord digits;
  unsigned bits = 0;
  int escalations = 0;
};

namespace detail {

inline std::optional<Integer> unique_integer(const RealEnclosure& x) {
  const Integer lo = ceil_of(x.lo);
  const Integer hi = floor_of(x.hi);
  if (lo != hi) return std::nullopt;
  return lo;
}

}  // namespace detail

class AmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Digits v_1..v_N from a fixed enclosure of xi: y_n = {xi (-+b)^n - eta} + eta,
/// v_{n+1} = -+b y_n - y_{n+1}. Throws AmbiguityError when the enclosure is
/// too wide to decide a lift or a digit.
inline FiniteWord digit_extract(const RealEnclosure& xi, long b, BaseSign sign, const Rational& eta, std::size_t n) {
  if (b < 2) throw std::invalid_argument("base b must be at least 2");
  const long base = sign == BaseSign::negative ? -b : b;
  std::vector<RealEnclosure> y;
  y.reserve(n + 1);
  RealEnclosure x = xi;
  for (std::size_t k = 0; k <= n; ++k) {
    Integer m;
    if (!detail::split_floor(x - eta, m)) {
      throw AmbiguityError("lift of xi*(" + std::to_string(base) + ")^" + std::to_string(k) + " straddles eta");
    }
    y.push_back(x - Rational(m));
    x = Rational(base) * x;
  }
  std::vector<Letter> digits;
  digits.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const RealEnclosure v = Rational(base) * y[k] - y[k + 1];
    const auto d = detail::unique_integer(v);
    if (!d) throw AmbiguityError("digit " + std::to_string(k + 1) + " is not determined");
    digits.push_back(static_cast<Letter>(d->get_si()));
  }
  return FiniteWord(std::move(digits));
}

/// Extraction with automatic precision escalation.
inline DigitExtraction digit_extract(const std::function<RealEnclosure(unsigned)>& xi_at, long b, BaseSign sign,
                                     const Rational& eta, std::size_t n, unsigned bits) {
  DigitExtraction out;
  out.bits = bits;
  for (;;) {
    try {
      out.digits = digit_extract(xi_at(out.bits), b, sign, eta, n);
      return out;
    } catch (const AmbiguityError& e) {
      if (out.escalations == kMaxEscalations) {
        throw InconclusiveError(std::string(e.what()) + " after " + std::to_string(kMaxEscalations) + " escalations");
      }
      ++out.escalations;
      out.bits *= 2;
    }
  }
}

/// Bits that leave about 64 bits after multiplying by b^N.
inline unsigned default_digit_bits(long b, std::size_t n) {
  return static_cast<unsigned>(std::ceil(static_cast<double>(n) * std::log2(static_cast<double>(b)))) + 64;
}

inline DigitExtraction digit_extract(const XiSpec& spec, std::optional<Rational> eta, std::size_t n,
                                     unsigned bits = 0) {
  const OrbitSpec o = spec.orbit_spec();
  check_orbit_word(o);
  Rational h;
  if (eta) {
    h = *eta;
  } else {
    h = default_eta(endpoints(o, 64));
  }
  if (bits == 0) bits = default_digit_bits(spec.b, n);
  return digit_extract([&](unsigned k) { return xi_value(spec, k); }, spec.b, spec.sign, h, n, bits);
}

}  // namespace sturmod
