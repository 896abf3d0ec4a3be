// Verification suites. Each suite turns a statement about infinite words into
// finite, certified checks and collects them in a VerdictReport.
#pragma once

#include "sturmod/exact.hpp"
#include "sturmod/orbits.hpp"
#include "sturmod/series.hpp"
#include "sturmod/sturmian.hpp"
#include "sturmod/words.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <set>
#include <utility>
#include <vector>

namespace sturmod {

enum class Status { pass, fail, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "?";
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct Check {
  std::string id;
  std::string claim;
  Status status = Status::pass;
  std::string witness;  // required for fail
  KeyValues data;
};

struct VerdictReport {
  std::string suite;
  KeyValues params;
  std::vector<Check> checks;

  void add(Check c) {
    if (c.status == Status::fail && c.witness.empty()) {
      throw std::logic_error("failed check '" + c.id + "' has no witness");
    }
    checks.push_back(std::move(c));
  }

  /// Orders checks by id so the report does not depend on evaluation order.
  void finalize() {
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
  }

  std::size_t count(Status s) const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](const Check& c) { return c.status == s; }));
  }
  bool passed(bool allow_inconclusive = false) const {
    return count(Status::fail) == 0 && (allow_inconclusive || count(Status::inconclusive) == 0);
  }
};

namespace detail {

inline std::string str(const Rational& x) { return rational_to_string(x); }

inline std::string dec(const RealEnclosure& e, int digits = 20) { return to_decimal(e, digits).text; }

inline std::string dec(const Rational& x, int digits = 20) { return to_decimal(RealEnclosure::exact(x), digits).text; }

inline std::string join(const std::vector<std::size_t>& xs, std::size_t limit = 10) {
  std::string out;
  for (std::size_t i = 0; i < xs.size() && i < limit; ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  if (xs.size() > limit) out += ",...";
  return out;
}

inline Check make_check(std::string id, std::string claim, bool ok, std::string witness = {}, KeyValues data = {}) {
  return {std::move(id), std::move(claim), ok ? Status::pass : Status::fail, ok ? std::string() : std::move(witness),
          std::move(data)};
}

inline FiniteWord random_word(std::mt19937_64& rng, std::size_t len) {
  std::vector<Letter> out(len);
  for (auto& x : out) x = static_cast<Letter>(rng() & 1u);
  return FiniteWord(std::move(out));
}

inline WordStream random_stream(std::uint64_t seed) {
  return word_from_function(
      [seed](std::size_t n) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * n;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<Letter>((z ^ (z >> 31)) & 1u);
      },
      {0, 1}, "random(" + std::to_string(seed) + ")");
}

inline void containment_checks(VerdictReport& rep, const OrbitScan& scan, const std::string& prefix) {
  const ContainmentReport& c = scan.report;
  Check contain{prefix + "containment",
                "every orbit value lies between the two extremal values",
                Status::pass,
                {},
                {{"records", std::to_string(c.count)},
                 {"resolved_by_escalation", std::to_string(c.resolved_by_escalation)},
                 {"resolved_by_structure", std::to_string(c.resolved_by_structure)},
                 {"resolved_by_order", std::to_string(c.resolved_by_order)},
                 {"lower", dec(scan.ends.lower)},
                 {"upper", dec(scan.ends.upper)}}};
  if (!c.violations.empty()) {
    const std::size_t n = c.violations.front();
    const auto& y = c.placed[n].y;
    contain.status = Status::fail;
    contain.witness = "n=" + std::to_string(n) + " value " + (y ? "[" + dec(*y) + ", " + dec(y->hi) + "]" : "?") +
                      " " + to_string(c.placed[n].placement);
    contain.data.push_back({"violations", join(c.violations)});
  } else if (!c.inconclusive.empty()) {
    contain.status = Status::inconclusive;
    const std::size_t n = c.inconclusive.front();
    const auto& y = c.placed[n].y;
    contain.witness = "n=" + std::to_string(n) + (y ? " width " + dec(y->width(), 40) : " lift undecided");
    contain.data.push_back({"inconclusive", join(c.inconclusive)});
  }
  rep.add(std::move(contain));

  const bool both = !c.lower_attained.empty() && !c.upper_attained.empty();
  rep.add(make_check(prefix + "semiopen", "at most one endpoint value is attained", !both,
                     "lower at n=" + join(c.lower_attained) + ", upper at n=" + join(c.upper_attained),
                     {{"lower_attained", join(c.lower_attained)}, {"upper_attained", join(c.upper_attained)}}));

  const bool width_ok = c.width_lower_bound <= scan.ends.gap;
  rep.add(make_check(prefix + "width", "the empirical width never exceeds the interval length", width_ok,
                     "width bound " + dec(c.width_lower_bound) + " > " + str(scan.ends.gap),
                     {{"empirical_width_lower_bound", dec(c.width_lower_bound, 30)},
                      {"interval_length", str(scan.ends.gap)},
                      {"deficit", dec(Rational(scan.ends.gap - c.width_lower_bound), 30)}}));
}

inline void attainment_check(VerdictReport& rep, const OrbitScan& scan, const std::vector<ShiftHit>& hits,
                             std::size_t n_max, bool certified, const std::string& id, const std::string& claim) {
  const ContainmentReport& c = scan.report;
  if (!certified) {
    rep.add({id, claim, Status::inconclusive, "membership is only decided for words certified by construction", {}});
    return;
  }
  std::vector<std::size_t> lo_expected, hi_expected;
  for (const auto& h : hits) {
    if (h.n > n_max) continue;
    (h.which == Extremal::lower ? lo_expected : hi_expected).push_back(h.n);
  }
  const bool ok = lo_expected == c.lower_attained && hi_expected == c.upper_attained;
  std::string expected_text;
  for (const auto& h : hits) expected_text += std::string(h.which == Extremal::lower ? "lower" : "upper") + "@" + std::to_string(h.n) + " ";
  rep.add(make_check(id, claim, ok,
                     "expected lower {" + join(lo_expected) + "} upper {" + join(hi_expected) + "}, observed lower {" +
                         join(c.lower_attained) + "} upper {" + join(c.upper_attained) + "}",
                     {{"constructed_hits", expected_text.empty() ? "none" : expected_text},
                      {"lower_attained", join(c.lower_attained)},
                      {"upper_attained", join(c.upper_attained)}}));
}

}  // namespace detail

// --------------------------------------------------------------------------
// Orbit suites

/// Alternating case: t_{-r}(T^n w) for a D-word w.
inline VerdictReport suite_negative(const OrbitSpec& spec, std::size_t n_max, unsigned bits, const ScanOptions& opt = {}) {
  if (spec.sign != BaseSign::negative) throw std::invalid_argument("suite_negative needs the alternating sign");
  VerdictReport rep;
  rep.suite = "negative";
  rep.params = {{"r", detail::str(spec.r)}, {"g", spec.g.get_str()}, {"word", spec.w.describe()},
                {"N", std::to_string(n_max)}, {"bits", std::to_string(bits)}};
  const OrbitScan scan = scan_orbit(spec, n_max, bits, opt);
  const Rational gap = spec.r + spec.r * spec.r - spec.r * spec.r * spec.r;
  rep.add(detail::make_check("gap", "upper minus lower endpoint equals r + r^2 - r^3 exactly",
                             scan.ends.gap == gap && (scan.ends.upper - scan.ends.lower).contains(gap),
                             "gap " + detail::str(scan.ends.gap), {{"gap", detail::str(scan.ends.gap)}}));
  detail::containment_checks(rep, scan, "");
  const ClassInfo info = class_info(spec.w);
  const bool certified = info.form && info.form->cls == WordClass::d_class && info.form->inner.theta == scan.ends.theta;
  const auto hits = certified ? alt_endpoint_hits(*info.form) : std::vector<ShiftHit>{};
  detail::attainment_check(rep, scan, hits, n_max, certified, "open_iff_not_c",
                           "an endpoint value is attained exactly when some shift equals 100Dc or 011Dc");
  rep.params.push_back({"in_C", certified ? (hits.empty() ? "no" : "yes") : "unknown"});
  rep.finalize();
  return rep;
}

/// Positive case: t_r(T^n s) for a Sturmian word s.
inline VerdictReport suite_positive(const OrbitSpec& spec, std::size_t n_max, unsigned bits, const ScanOptions& opt = {}) {
  if (spec.sign != BaseSign::positive) throw std::invalid_argument("suite_positive needs the positive sign");
  VerdictReport rep;
  rep.suite = "positive";
  rep.params = {{"r", detail::str(spec.r)}, {"g", spec.g.get_str()}, {"word", spec.w.describe()},
                {"N", std::to_string(n_max)}, {"bits", std::to_string(bits)}};
  const OrbitScan scan = scan_orbit(spec, n_max, bits, opt);
  rep.add(detail::make_check("gap", "upper minus lower endpoint equals r exactly",
                             scan.ends.gap == spec.r && (scan.ends.upper - scan.ends.lower).contains(spec.r),
                             "gap " + detail::str(scan.ends.gap), {{"gap", detail::str(scan.ends.gap)}}));
  detail::containment_checks(rep, scan, "");
  const ClassInfo info = class_info(spec.w);
  const bool certified = info.form && info.form->inner.theta == scan.ends.theta &&
                         (info.form->cls == WordClass::sturmian || info.form->cls == WordClass::s_class);
  const auto hits = certified ? lex_endpoint_hits(*info.form) : std::vector<ShiftHit>{};
  detail::attainment_check(rep, scan, hits, n_max, certified, "attained_iff_characteristic_shift",
                           "an endpoint value is attained exactly when some shift equals 0c or 1c");
  rep.finalize();
  return rep;
}

struct ExtremalProfile {
  std::size_t n_max = 0;
  std::size_t max_depth_lower = 0;  // longest common prefix of T^n w with the lower word
  std::size_t max_depth_upper = 0;
  std::size_t argmax_upper = 0;
  std::size_t order_failures = 0;
  std::size_t undecided = 0;
  std::optional<std::size_t> first_failure;
};

/// Order of every shift against both extremal words, and the deepest
/// agreement with each.
inline ExtremalProfile extremal_profile(const WordStream& w, const Endpoints& ends, WordOrder order, std::size_t n_max,
                                        std::size_t horizon, const std::vector<ShiftHit>& hits) {
  ExtremalProfile prof;
  prof.n_max = n_max;
  const std::size_t need = n_max + horizon;
  const FiniteWord letters = w.prefix(need);
  const FiniteWord lo = ends.lower_word.prefix(horizon);
  const FiniteWord hi = ends.upper_word.prefix(horizon);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto win = letters.letters().subspan(n, horizon);
    const auto vs_lo = compare_letters(win, lo.letters(), order);
    const auto vs_hi = compare_letters(win, hi.letters(), order);
    const std::size_t d_lo = vs_lo ? vs_lo->index - 1 : horizon;
    const std::size_t d_hi = vs_hi ? vs_hi->index - 1 : horizon;
    prof.max_depth_lower = std::max(prof.max_depth_lower, d_lo);
    if (d_hi > prof.max_depth_upper) {
      prof.max_depth_upper = d_hi;
      prof.argmax_upper = n;
    }
    const bool hit_lo = std::count(hits.begin(), hits.end(), ShiftHit{n, Extremal::lower}) > 0;
    const bool hit_hi = std::count(hits.begin(), hits.end(), ShiftHit{n, Extremal::upper}) > 0;
    bool ok = true, undecided = false;
    if (vs_lo) {
      ok = ok && vs_lo->relation == Relation::greater;
    } else if (!hit_lo) {
      undecided = true;
    }
    if (vs_hi) {
      ok = ok && vs_hi->relation == Relation::less;
    } else if (!hit_hi) {
      undecided = true;
    }
    if (!ok) {
      ++prof.order_failures;
      if (!prof.first_failure) prof.first_failure = n;
    }
    if (undecided) ++prof.undecided;
  }
  return prof;
}

/// lower <= T^n w <= upper in the relevant order for all n <= N, and growth of
/// the deepest agreement with the extremal words at N, 2N, 4N.
inline VerdictReport suite_extremal(const WordStream& w, BaseSign sign, std::size_t n_max,
                                    std::optional<QuadraticReal> theta = std::nullopt, std::size_t horizon = 0) {
  VerdictReport rep;
  rep.suite = "extremal";
  const ClassInfo info = class_info(w);
  if (!theta) theta = info.slope;
  if (!theta) throw ClassError("slope is not recoverable from the word's construction; pass theta explicitly");
  if (horizon == 0) horizon = 16 * n_max + 1024;
  const WordOrder order = sign == BaseSign::negative ? WordOrder::alt : WordOrder::lex;
  rep.params = {{"word", w.describe()}, {"order", order == WordOrder::alt ? "alt" : "lex"}, {"N", std::to_string(n_max)},
                {"horizon", std::to_string(horizon)}};
  auto [lo_word, hi_word] = endpoint_words(sign, *theta);
  Endpoints ends{*theta, {}, {}, 0, lo_word, hi_word};
  std::vector<ShiftHit> hits;
  if (info.form && info.form->inner.theta == *theta) {
    if (sign == BaseSign::negative && info.form->cls == WordClass::d_class) hits = alt_endpoint_hits(*info.form);
    if (sign == BaseSign::positive && info.form->cls != WordClass::d_class) hits = lex_endpoint_hits(*info.form);
  }
  std::vector<ExtremalProfile> profiles;
  for (std::size_t scale : {1u, 2u, 4u}) profiles.push_back(extremal_profile(w, ends, order, scale * n_max, horizon, hits));
  const ExtremalProfile& p = profiles.front();
  Check bounds{"bounds", "every shift lies between the extremal words in the order", Status::pass, {},
               {{"shifts", std::to_string(n_max + 1)}, {"undecided", std::to_string(p.undecided)}}};
  if (p.order_failures) {
    bounds.status = Status::fail;
    bounds.witness = "n=" + std::to_string(*p.first_failure);
  } else if (p.undecided) {
    bounds.status = Status::inconclusive;
    bounds.witness = std::to_string(p.undecided) + " shifts agree with an extremal word up to the horizon";
  }
  rep.add(std::move(bounds));
  KeyValues depth_data;
  for (const auto& q : profiles) {
    depth_data.push_back({"depth_upper@" + std::to_string(q.n_max), std::to_string(q.max_depth_upper)});
    depth_data.push_back({"depth_lower@" + std::to_string(q.n_max), std::to_string(q.max_depth_lower)});
  }
  // depth equal to the horizon means the extremal word itself occurs: nothing left to grow
  auto grows = [&](auto member) {
    if (profiles[0].*member == horizon) return true;
    return profiles[0].*member <= profiles[1].*member && profiles[1].*member <= profiles[2].*member &&
           profiles[0].*member < profiles[2].*member;
  };
  rep.add(detail::make_check("approach_upper", "deepest agreement with the upper extremal word grows with N",
                             grows(&ExtremalProfile::max_depth_upper), "no growth over N, 2N, 4N", depth_data));
  rep.add(detail::make_check("approach_lower", "deepest agreement with the lower extremal word grows with N",
                             grows(&ExtremalProfile::max_depth_lower), "no growth over N, 2N, 4N", depth_data));
  rep.finalize();
  return rep;
}

// --------------------------------------------------------------------------
// Exhaustive oracles

/// A factor pair (u, u') whose joint presence forces the orbit out of every
/// interval of length r + r^2 - r^3.
struct ForbiddenPair {
  std::string family;
  FiniteWord u;
  FiniteWord up;
};

inline FiniteWord complement(const FiniteWord& u) {
  std::vector<Letter> out(u.begin(), u.end());
  for (auto& x : out) x = 1 - x;
  return FiniteWord(std::move(out));
}

/// Families from the contradiction steps of the classification argument, up
/// to length L. Complementing both words and swapping them yields the mirror
/// instance.
inline std::vector<ForbiddenPair> forbidden_pairs(std::size_t max_len) {
  std::vector<ForbiddenPair> base;
  auto add = [&](std::string fam, FiniteWord u, FiniteWord up) {
    if (u.size() <= max_len) base.push_back({std::move(fam), std::move(u), std::move(up)});
  };
  add("010/10a", FiniteWord{0, 1, 0}, FiniteWord{1, 0, 0});
  add("010/10a", FiniteWord{0, 1, 0}, FiniteWord{1, 0, 1});
  add("0111/1000", FiniteWord{0, 1, 1, 1}, FiniteWord{1, 0, 0, 0});
  for (std::size_t z = 1; z + 2 <= max_len; z += 2) {
    add("odd_block", FiniteWord{0, 1, 1} + FiniteWord::run(0, z - 1), FiniteWord{1} + FiniteWord::run(0, z) + FiniteWord{1});
  }
  for (std::size_t z = 0; z + 4 <= max_len; z += 2) {
    add("leading_block", FiniteWord{0, 1, 1} + FiniteWord::run(0, z) + FiniteWord{1}, FiniteWord{1} + FiniteWord::run(0, z + 3));
  }
  for (std::size_t k = 0; 2 * k + 4 <= max_len; ++k) {
    for (unsigned bits = 0; bits < (1u << k); ++bits) {
      std::vector<Letter> u(k);
      for (std::size_t i = 0; i < k; ++i) u[i] = static_cast<Letter>((bits >> i) & 1u);
      const FiniteWord du = doubled(concat(FiniteWord(u), constant_word(0))).prefix(2 * k);
      add("doubled_s_defect", FiniteWord{0, 1, 1} + du + FiniteWord{1}, FiniteWord{1, 0, 0} + du + FiniteWord{0});
    }
  }
  std::vector<ForbiddenPair> out;
  std::set<std::pair<FiniteWord, FiniteWord>> seen;
  for (const auto& p : base) {
    for (const ForbiddenPair& q : {p, ForbiddenPair{p.family, complement(p.up), complement(p.u)}}) {
      if (seen.insert({q.u, q.up}).second) out.push_back(q);
    }
  }
  return out;
}

namespace detail {

inline std::uint32_t factor_code(std::span<const Letter> p, std::size_t at, std::size_t len) {
  std::uint32_t code = 1u << len;
  for (std::size_t i = 0; i < len; ++i) code |= static_cast<std::uint32_t>(p[at + i]) << i;
  return code;
}

inline std::uint32_t factor_code(const FiniteWord& u) { return factor_code(u.letters(), 0, u.size()); }

inline std::optional<std::size_t> find_factor(const FiniteWord& p, const FiniteWord& f) {
  const auto it = std::search(p.begin(), p.end(), f.begin(), f.end());
  if (it == p.end() && !f.empty()) return std::nullopt;
  return static_cast<std::size_t>(it - p.begin());
}

inline bool balanced_brute(const FiniteWord& y) {
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

/// Whether p is a prefix of a^l D(y) for some balanced y.
inline bool d_extendable_brute(const FiniteWord& p) {
  for (std::size_t l = 0; l <= p.size(); ++l) {
    bool run_ok = true;
    for (std::size_t i = 1; i < l; ++i) run_ok = run_ok && p[i] == p[0];
    if (!run_ok) continue;
    if (l == p.size()) return true;
    std::vector<Letter> y;
    bool pairs_ok = true;
    for (std::size_t i = l; i < p.size() && pairs_ok; i += 2) {
      if (i + 1 < p.size() && p[i] != p[i + 1]) pairs_ok = false;
      y.push_back(p[i]);
    }
    if (pairs_ok && balanced_brute(FiniteWord(y))) return true;
  }
  return false;
}

inline FiniteWord word_of_bits(std::uint32_t bits, std::size_t len) {
  std::vector<Letter> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = static_cast<Letter>((bits >> i) & 1u);
  return FiniteWord(std::move(out));
}

}  // namespace detail

/// Exhaustive run over all binary words of length L.
///  forbidden_pairs: each family instance satisfies
///      t_{-r}(u) - t_{-r}(u') > (1 + r^k)(r + r^2 - r^3),
///    so any word containing both factors has two shifts, with arbitrary
///    completions, whose values spread wider than the interval; the
///    shift-pair identity holds with zero residual on every instance found.
///  balance_equivalence: defect search and factor-sum spread agree.
///  d_parser: the D classifier accepts exactly the brute-force extendable words.
inline VerdictReport oracle_enumerate(std::size_t L, const Rational& r) {
  if (L == 0 || L > 22) throw std::invalid_argument("oracle_enumerate: need 1 <= L <= 22");
  if (r <= 0 || r >= 1) throw RatioError("oracle_enumerate: need 0 < r < 1");
  VerdictReport rep;
  rep.suite = "oracle";
  rep.params = {{"L", std::to_string(L)}, {"r", detail::str(r)}};
  const Rational gap = endpoint_gap(r);
  const auto pairs = forbidden_pairs(L);

  Check pair_check{"forbidden_pairs", "each forbidden factor pair certifies a spread wider than the interval", Status::pass, {}, {}};
  Rational min_margin;
  bool have_margin = false;
  for (const auto& p : pairs) {
    const std::size_t k = p.u.size();
    const Rational diff = eval_finite(-r, p.u) - eval_finite(-r, p.up);
    const Rational bound = (1 + pow_rat(r, k)) * gap;
    const Rational margin = diff - bound;
    if (!have_margin || margin < min_margin) {
      min_margin = margin;
      have_margin = true;
    }
    if (margin <= 0 && pair_check.status == Status::pass) {
      pair_check.status = Status::fail;
      pair_check.witness = p.family + " u=" + p.u.to_string() + " u'=" + p.up.to_string() + " diff " + detail::str(diff);
    }
  }

  std::size_t flagged = 0, telescoped = 0, residual_failures = 0;
  std::string residual_witness;
  std::size_t balance_disagreements = 0, parser_disagreements = 0;
  std::string balance_witness, parser_witness;
  std::vector<std::uint32_t> pair_codes_u, pair_codes_up;
  for (const auto& p : pairs) {
    pair_codes_u.push_back(detail::factor_code(p.u));
    pair_codes_up.push_back(detail::factor_code(p.up));
  }
  // factor codes of the current word, marked with the word index as stamp
  std::vector<std::uint32_t> stamp(std::size_t{2} << L, ~0u);
  const std::uint32_t total = 1u << L;
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    const FiniteWord w = detail::word_of_bits(bits, L);
    for (std::size_t len = 1; len <= L; ++len) {
      for (std::size_t i = 0; i + len <= L; ++i) stamp[detail::factor_code(w.letters(), i, len)] = bits;
    }
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (stamp[pair_codes_u[j]] != bits || stamp[pair_codes_up[j]] != bits) continue;
      ++flagged;
      // telescoping on the actual positions, completions taken from w itself
      const std::size_t n = *detail::find_factor(w, pairs[j].u);
      const std::size_t m = *detail::find_factor(w, pairs[j].up);
      const std::size_t k = pairs[j].u.size();
      if (L <= 16) {
        const FiniteWord x = w.slice(n + k, L - n - k);
        const FiniteWord y = w.slice(m + k, L - m - k);
        ++telescoped;
        if (shift_pair_residual_exact(pairs[j].u, pairs[j].up, x, y, -r) != 0) {
          ++residual_failures;
          if (residual_witness.empty()) residual_witness = w.to_string();
        }
      }
      break;
    }
    const bool defect = balance_defect(w).has_value();
    if (defect == is_balanced_by_spread(w) || (L <= 16 && defect == detail::balanced_brute(w))) {
      if (balance_witness.empty()) balance_witness = w.to_string();
      ++balance_disagreements;
    }
    if (L <= 16) {
      const bool parser = classify_prefix(w, ClassTarget::d_class).kind != VerdictKind::inconsistent;
      if (parser != detail::d_extendable_brute(w)) {
        if (parser_witness.empty()) parser_witness = w.to_string();
        ++parser_disagreements;
      }
    }
  }
  pair_check.data = {{"pairs", std::to_string(pairs.size())},
                     {"min_margin", detail::dec(min_margin, 30)},
                     {"words_flagged", std::to_string(flagged)},
                     {"words", std::to_string(total)}};
  rep.add(std::move(pair_check));
  rep.add(detail::make_check("telescoping", "the shift-pair identity has zero residual on every flagged instance",
                             residual_failures == 0, "word " + residual_witness,
                             {{"instances", std::to_string(telescoped)}}));
  rep.add(detail::make_check("balance_equivalence", "defect search, factor-sum spread and brute scan agree",
                             balance_disagreements == 0, "word " + balance_witness,
                             {{"words", std::to_string(total)}}));
  if (L <= 16) {
    rep.add(detail::make_check("d_parser", "the D classifier accepts exactly the extendable prefixes",
                               parser_disagreements == 0, "word " + parser_witness, {{"words", std::to_string(total)}}));
  }
  rep.finalize();
  return rep;
}

// --------------------------------------------------------------------------
// Monotonicity

/// Random pairs with a shared tail: the order and the sign of the value
/// difference must agree whenever the enclosures are disjoint.
inline VerdictReport monotone_suite(const Rational& r, std::size_t pairs, std::uint64_t seed) {
  if (r <= 0 || r * 2 >= 1) throw RatioError("monotone_suite needs 0 < r < 1/2");
  VerdictReport rep;
  rep.suite = "monotone";
  rep.params = {{"r", detail::str(r)}, {"pairs", std::to_string(pairs)}, {"seed", std::to_string(seed)}};
  std::mt19937_64 rng(seed);
  struct Tally {
    std::size_t decisive = 0, undecided = 0, equal = 0, disagreements = 0;
    std::string witness;
  } lex, alt;
  auto run = [&](Tally& t, const FiniteWord& a, const FiniteWord& b, WordOrder order, const Rational& ratio) {
    const auto verdict = compare_letters(a.letters(), b.letters(), order);
    if (!verdict) {
      ++t.equal;
      return;
    }
    const RealEnclosure va = eval_prefix(ratio, a, {0, 1});
    const RealEnclosure vb = eval_prefix(ratio, b, {0, 1});
    if (!va.certainly_less(vb) && !vb.certainly_less(va)) {
      ++t.undecided;
      return;
    }
    ++t.decisive;
    if ((verdict->relation == Relation::less) != va.certainly_less(vb)) {
      ++t.disagreements;
      if (t.witness.empty()) t.witness = a.to_string() + " vs " + b.to_string();
    }
  };
  for (std::size_t i = 0; i < pairs; ++i) {
    const FiniteWord tail = detail::random_word(rng, 64);
    const FiniteWord a = detail::random_word(rng, 64) + tail;
    const FiniteWord b = detail::random_word(rng, 64) + tail;
    run(lex, a, b, WordOrder::lex, r);
    run(alt, a, b, WordOrder::alt, -r);
  }
  auto tally_check = [&](const char* id, const char* claim, const Tally& t) {
    rep.add(detail::make_check(id, claim, t.disagreements == 0, t.witness,
                               {{"decisive", std::to_string(t.decisive)},
                                {"undecided", std::to_string(t.undecided)},
                                {"identical", std::to_string(t.equal)},
                                {"disagreements", std::to_string(t.disagreements)}}));
  };
  tally_check("lex_vs_value", "lexicographic order matches the order of t_r values", lex);
  tally_check("alt_vs_value", "alternate order matches the order of t_{-r} values", alt);

  // aDu preserves and Du reverses the order (lex on u, alt on the image)
  std::size_t preserve_fail = 0, reverse_fail = 0, value_fail = 0, checked = 0;
  std::string witness;
  for (std::size_t i = 0; i < 200; ++i) {
    const WordStream u = detail::random_stream(seed * 7919 + 2 * i);
    const WordStream v = detail::random_stream(seed * 7919 + 2 * i + 1);
    const OrderVerdict uv = compare(u, v, WordOrder::lex, 256);
    if (uv.relation == Relation::equal_up_to_horizon) continue;
    ++checked;
    const auto [lo, hi] = uv.relation == Relation::less ? std::pair{u, v} : std::pair{v, u};
    for (Letter a : {0, 1}) {
      const WordStream x = concat(FiniteWord{a}, doubled(lo));
      const WordStream y = concat(FiniteWord{a}, doubled(hi));
      if (compare(x, y, WordOrder::alt, 1024).relation != Relation::less) {
        ++preserve_fail;
        if (witness.empty()) witness = x.describe();
      }
      if (!eval_t_bits(-r, x, 80).certainly_less(eval_t_bits(-r, y, 80))) ++value_fail;
    }
    const WordStream x = doubled(lo);
    const WordStream y = doubled(hi);
    if (compare(x, y, WordOrder::alt, 1024).relation != Relation::greater) {
      ++reverse_fail;
      if (witness.empty()) witness = x.describe();
    }
    if (!eval_t_bits(-r, y, 80).certainly_less(eval_t_bits(-r, x, 80))) ++value_fail;
  }
  KeyValues data{{"pairs", std::to_string(checked)}};
  rep.add(detail::make_check("prefixed_doubling_preserves", "u < v in lex implies aDu < aDv in alt", preserve_fail == 0,
                             witness, data));
  rep.add(detail::make_check("doubling_reverses", "u < v in lex implies Dv < Du in alt", reverse_fail == 0, witness, data));
  rep.add(detail::make_check("doubling_values", "the values of the doubled words follow the alternate order",
                             value_fail == 0, std::to_string(value_fail) + " value comparisons failed", data));
  rep.finalize();
  return rep;
}

// --------------------------------------------------------------------------
// Identities

inline VerdictReport suite_identities(std::size_t instances, std::uint64_t seed, unsigned bits = 64) {
  VerdictReport rep;
  rep.suite = "identities";
  rep.params = {{"instances", std::to_string(instances)}, {"seed", std::to_string(seed)}, {"bits", std::to_string(bits)}};
  std::mt19937_64 rng(seed);
  const Rational limit(Integer(1), pow_int(2, 55));
  const std::vector<QuadraticReal> slopes{parse_quadratic("(3-sqrt(5))/2"), parse_quadratic("sqrt(2)-1"),
                                          parse_quadratic("sqrt(3)-1"), parse_quadratic("(5-sqrt(17))/2")};
  auto random_ratio = [&](bool positive) {
    const long q = static_cast<long>(rng() % 15) + 2;
    const long p = static_cast<long>(rng() % static_cast<unsigned long>(q - 1)) + 1;
    Rational x(p, q);
    x.canonicalize();
    if (!positive && (rng() & 1u)) x = -x;
    return x;
  };
  auto random_word_stream = [&]() -> WordStream {
    const QuadraticReal& t = slopes[rng() % slopes.size()];
    switch (rng() % 4) {
      case 0:
        return characteristic(t);
      case 1:
        return mechanical({t, QuadraticReal(Rational(static_cast<long>(rng() % 9), 9)), Rounding::floor});
      case 2:
        return doubled(characteristic(t));
      default:
        return detail::random_stream(rng());
    }
  };
  struct Tally {
    std::size_t ok = 0;
    Rational worst;
    std::string witness;
  };
  auto record = [&](Tally& t, const IdentityResidual& res, const std::string& what) {
    const Rational w = res.residual.width();
    if (w > t.worst) t.worst = w;
    if (res.contains_zero() && res.within_bound() && w < limit) {
      ++t.ok;
    } else if (t.witness.empty()) {
      t.witness = what + " residual [" + detail::dec(res.residual.lo, 30) + ", " + detail::dec(res.residual.hi, 30) + "]";
    }
  };
  Tally concat_t, shift_t, dbl_t;
  for (std::size_t i = 0; i < instances; ++i) {
    const Rational r = random_ratio(false);
    const FiniteWord u = detail::random_word(rng, 1 + rng() % 20);
    const WordStream v = random_word_stream();
    record(concat_t, concat_identity(u, v, r, terms_for_bits(r, bits)), "u=" + u.to_string() + " r=" + detail::str(r));
  }
  for (std::size_t i = 0; i < instances; ++i) {
    const Rational r = random_ratio(false);
    const WordStream w = random_word_stream();
    const std::size_t n = rng() % 200, m = rng() % 200, k = 1 + rng() % 30;
    record(shift_t, shift_pair_identity(w, n, m, k, r, terms_for_bits(r, bits)),
           w.describe() + " n=" + std::to_string(n) + " m=" + std::to_string(m) + " k=" + std::to_string(k));
  }
  for (std::size_t i = 0; i < instances; ++i) {
    const Rational r = random_ratio(true);
    const WordStream u = random_word_stream();
    const std::size_t terms = terms_for_bits(r * r, bits);
    if (i % 2 == 0) {
      record(dbl_t, doubling_identity(u, r, terms), u.describe() + " r=" + detail::str(r));
    } else {
      record(dbl_t, lead_doubling_identity(static_cast<Letter>(rng() & 1u), u, r, terms), "a" + u.describe() + " r=" + detail::str(r));
    }
  }
  auto add = [&](const char* id, const char* claim, const Tally& t) {
    rep.add(detail::make_check(id, claim, t.ok == instances, t.witness,
                               {{"instances", std::to_string(instances)}, {"worst_width", detail::dec(t.worst, 40)}}));
  };
  add("concat", "t_r(uv) - r^k t_r(v) = t_r(u)", concat_t);
  add("shift_pair", "shift-pair telescoping identity", shift_t);
  add("doubling", "t_{-r}(Du) = -(1/r - 1) t_{r^2}(u) and t_{-r}(aDu) = -ar + (1-r) t_{r^2}(u)", dbl_t);
  rep.finalize();
  return rep;
}

// --------------------------------------------------------------------------
// Combinatorics and generators

inline std::vector<QuadraticReal> reference_slopes() {
  static const char* const texts[] = {"(3-sqrt(5))/2", "(sqrt(5)-1)/2", "sqrt(2)-1",     "2-sqrt(2)",
                                      "sqrt(3)-1",     "2-sqrt(3)",     "(sqrt(13)-3)/2", "sqrt(7)-2",
                                      "3-sqrt(7)",     "(5-sqrt(17))/2", "sqrt(10)-3",    "sqrt(11)-3",
                                      "sqrt(6)-2",     "3-sqrt(6)",     "sqrt(17)-4",     "(sqrt(29)-5)/2",
                                      "sqrt(19)-4",    "sqrt(3)/3",     "sqrt(2)/2",      "sqrt(5)/5"};
  std::vector<QuadraticReal> out;
  for (const char* t : texts) out.push_back(parse_quadratic(t));
  return out;
}

/// floor, ceil and directive generators agree letterwise.
inline VerdictReport suite_generators(std::size_t letters, const std::vector<QuadraticReal>& slopes = reference_slopes()) {
  VerdictReport rep;
  rep.suite = "generators";
  rep.params = {{"letters", std::to_string(letters)}, {"slopes", std::to_string(slopes.size())}};
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    const QuadraticReal& t = slopes[i];
    const FiniteWord f = mechanical({t, QuadraticReal(0L), Rounding::floor}).prefix(letters);
    const FiniteWord c = mechanical({t, QuadraticReal(0L), Rounding::ceil}).prefix(letters);
    const FiniteWord d = characteristic_directive(t).prefix(letters);
    std::string witness;
    if (f != c || f != d) {
      std::size_t k = 0;
      while (k < letters && f[k] == c[k] && f[k] == d[k]) ++k;
      witness = "slope " + t.to_string() + " letter " + std::to_string(k + 1);
    }
    char id[32];
    std::snprintf(id, sizeof id, "slope_%02zu", i + 1);
    rep.add(detail::make_check(id, "floor, ceiling and directive words agree", witness.empty(), witness,
                               {{"theta", t.to_string()}, {"cf", continued_fraction(t).to_string()}}));
  }
  rep.finalize();
  return rep;
}

/// For all 1 <= n, k <= K: |k theta - (s_n + ... + s_{n+k-1})| < 1, exactly.
inline std::optional<std::pair<std::size_t, std::size_t>> partial_sum_violation(const WordStream& s,
                                                                                const QuadraticReal& theta,
                                                                                std::size_t K) {
  const FiniteWord p = s.prefix(2 * K);
  std::vector<long> sums(p.size() + 1, 0);
  for (std::size_t i = 0; i < p.size(); ++i) sums[i + 1] = sums[i] + p[i];
  for (std::size_t k = 1; k <= K; ++k) {
    // k theta is irrational: |k theta - m| < 1 iff floor(k theta) in {m - 1, m}
    const long f = (QuadraticReal(static_cast<long>(k)) * theta).floor().get_si();
    for (std::size_t n = 1; n <= K; ++n) {
      const long m = sums[n + k - 1] - sums[n - 1];
      if (f != m && f != m - 1) return std::pair{n, k};
    }
  }
  return std::nullopt;
}

inline VerdictReport suite_combinatorics(std::size_t K = 2000, std::size_t L = 16) {
  VerdictReport rep;
  rep.suite = "combinatorics";
  rep.params = {{"K", std::to_string(K)}, {"L", std::to_string(L)}};
  const auto slopes = reference_slopes();
  struct Member {
    std::string name;
    WordStream w;
    QuadraticReal theta;
  };
  std::vector<Member> sturmian;
  for (std::size_t i = 0; i < 4; ++i) {
    const QuadraticReal& t = slopes[i];
    sturmian.push_back({"c", characteristic(t), t});
    sturmian.push_back({"mech_1/3", mechanical({t, QuadraticReal(Rational(1, 3)), Rounding::floor}), t});
    sturmian.push_back({"1c", mechanical({t, -t, Rounding::ceil}), t});
  }
  for (std::size_t i = 0; i < sturmian.size(); ++i) {
    const auto& m = sturmian[i];
    const auto bad = partial_sum_violation(m.w, m.theta, K);
    rep.add(detail::make_check("partial_sums_" + std::to_string(i), "|k theta - sum of k consecutive letters| < 1",
                               !bad, bad ? "n=" + std::to_string(bad->first) + " k=" + std::to_string(bad->second) : "",
                               {{"word", m.w.describe()}}));
    const auto defect = balance_defect(m.w, K);
    rep.add(detail::make_check("balance_" + std::to_string(i), "no u with 0u0 and 1u1 in a Sturmian word", !defect,
                               defect ? "u=" + defect->to_string() : "", {{"word", m.w.describe()}}));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const WordStream w = build_class({static_cast<Letter>(i % 2), 3 * i, characteristic(slopes[i]), ClassTarget::s_class});
    const auto defect = s_defect(w, K);
    rep.add(detail::make_check("s_defect_" + std::to_string(i), "no u with 01u1 and 10u0 in an S-word", !defect,
                               defect ? "u=" + defect->to_string() : "", {{"word", w.describe()}}));
  }
  std::size_t disagreements = 0;
  std::string witness;
  const std::uint32_t total = 1u << L;
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    const FiniteWord w = detail::word_of_bits(bits, L);
    if (balance_defect(w).has_value() == is_balanced_by_spread(w)) {
      ++disagreements;
      if (witness.empty()) witness = w.to_string();
    }
  }
  rep.add(detail::make_check("balance_equivalence", "defect search and factor-sum spread agree on all words of length L",
                             disagreements == 0, "word " + witness, {{"words", std::to_string(total)}}));
  rep.finalize();
  return rep;
}

// --------------------------------------------------------------------------
// Digits

struct DigitCase {
  std::string name;
  WordStream w;
  BaseSign sign;
};

inline std::vector<DigitCase> reference_digit_cases() {
  const QuadraticReal fib = parse_quadratic("(3-sqrt(5))/2");
  const QuadraticReal silver = parse_quadratic("sqrt(2)-1");
  const QuadraticReal t3 = parse_quadratic("sqrt(3)-1");
  return {
      {"Dc", doubled(characteristic(fib)), BaseSign::negative},
      {"011Dc", c_representative(CVariant::e011, silver), BaseSign::negative},
      {"1111Dm", build_class({1, 4, mechanical({t3, QuadraticReal(Rational(1, 3)), Rounding::floor}), ClassTarget::d_class}),
       BaseSign::negative},
      {"c", characteristic(fib), BaseSign::positive},
      {"0c", mechanical({silver, -silver, Rounding::floor}), BaseSign::positive},
      {"mech", mechanical({t3, QuadraticReal(Rational(2, 7)), Rounding::ceil}), BaseSign::positive},
  };
}

/// Extracted digits equal -g + w_i (negative) or g + w_i (positive).
inline VerdictReport suite_digits(std::size_t n, const std::vector<long>& gs = {-1, 0, 1, 2},
                                  const std::vector<long>& bases = {2, 3}) {
  VerdictReport rep;
  rep.suite = "digits";
  rep.params = {{"N", std::to_string(n)}};
  for (const auto& dc : reference_digit_cases()) {
    for (long b : bases) {
      for (long g : gs) {
        const XiSpec spec{g, b, dc.w, dc.sign};
        const std::string id = std::string(dc.sign == BaseSign::negative ? "neg" : "pos") + "_" + dc.name + "_b" +
                               std::to_string(b) + "_g" + std::to_string(g);
        const long shift_by = dc.sign == BaseSign::negative ? -g : g;
        std::vector<Letter> expected;
        for (Letter x : dc.w.prefix(n)) expected.push_back(static_cast<Letter>(x + shift_by));
        try {
          const DigitExtraction got = digit_extract(spec, std::nullopt, n);
          const bool ok = got.digits == FiniteWord(expected);
          rep.add(detail::make_check(id, "extracted digits reproduce the shifted word", ok,
                                     "got " + got.digits.to_string() + " expected " + FiniteWord(expected).to_string(),
                                     {{"bits", std::to_string(got.bits)}, {"escalations", std::to_string(got.escalations)}}));
        } catch (const InconclusiveError& e) {
          rep.add({id, "extracted digits reproduce the shifted word", Status::inconclusive, e.what(), {}});
        }
      }
    }
  }
  rep.finalize();
  return rep;
}

// --------------------------------------------------------------------------
// Constants of the four excluded arcs

struct DubickasConstants {
  long b = 2;
  RealEnclosure P, A, A_prime, B;
  std::size_t factors = 0;
};

/// Enclosures of P = prod_{k>=0} (1 - b^{-2^k}), B = 1 - prod_{k>=1} (1 - b^{-e_k})
/// with e_k = (2^k + (-1)^{k-1})/3, A = (1 - (1 - 1/b) P)/2, and A' = A for
/// odd b, (1 - P)/2 for even b. A truncated product Q_K satisfies
/// Q_K (1 - tail) <= Q <= Q_K, tail = sum of the omitted b^{-e}.
inline DubickasConstants dubickas_constants(long b, unsigned bits) {
  if (b < 2) throw std::invalid_argument("base b must be at least 2");
  DubickasConstants out;
  out.b = b;
  const Rational target(Integer(1), pow_int(2, bits));
  const Rational rb(b);
  const Rational geometric = rb / (rb - 1);
  auto product = [&](auto exponent, std::size_t first) {
    Rational q = 1;
    std::size_t k = first;
    for (;; ++k) {
      q *= 1 - 1 / pow_rat(rb, exponent(k));
      // exponents grow by at least one per step from here on
      const Rational tail = geometric / pow_rat(rb, exponent(k + 1));
      if (k >= first + 2 && tail <= target) {
        out.factors = std::max(out.factors, k - first + 1);
        return RealEnclosure(q * (1 - tail), q);
      }
    }
  };
  out.P = product([](std::size_t k) { return 1ul << k; }, 0);
  const RealEnclosure q = product(
      [](std::size_t k) { return ((1ul << k) + (k % 2 == 1 ? 1ul : 0ul) - (k % 2 == 0 ? 1ul : 0ul)) / 3; }, 1);
  out.B = RealEnclosure(1 - q.hi, 1 - q.lo);
  const Rational c = (1 - 1 / rb) / 2;
  out.A = RealEnclosure(Rational(1, 2) - c * out.P.hi, Rational(1, 2) - c * out.P.lo);
  out.A_prime = b % 2 == 1 ? out.A : RealEnclosure(Rational(1, 2) - out.P.hi / 2, Rational(1, 2) - out.P.lo / 2);
  return out;
}

/// Arc relation on the circle for arcs of length < 1: is pi([x0, x1]) inside
/// pi([c0, c1])? Returns nullopt when the enclosures cannot decide.
inline std::optional<bool> arc_contained(const RealEnclosure& x0, const RealEnclosure& x1, const RealEnclosure& c0,
                                         const RealEnclosure& c1) {
  // contained iff some integer k has c0 <= x0 + k and x1 + k <= c1
  const Integer k_lo = floor_of(c0.lo - x0.hi) - 1;
  const Integer k_hi = ceil_of(c1.hi - x0.lo) + 1;
  bool undecided = false;
  for (Integer k = k_lo; k <= k_hi; ++k) {
    const Rational kk(k);
    const bool surely_out = x0.hi + kk < c0.lo || x1.lo + kk > c1.hi;
    const bool surely_in = c0.hi <= x0.lo + kk && x1.hi + kk <= c1.lo;
    if (surely_in) return true;
    if (!surely_out) undecided = true;
  }
  if (undecided) return std::nullopt;
  return false;
}

inline VerdictReport dubickas_intervals(long b, unsigned bits, const std::vector<long>& gs = {-1, 0, 1, 2},
                                        const std::vector<QuadraticReal>& slopes = {},
                                        const Rational& eps = Rational(1, 1000)) {
  VerdictReport rep;
  rep.suite = "dubickas";
  rep.params = {{"b", std::to_string(b)}, {"bits", std::to_string(bits)}, {"eps", detail::str(eps)}};
  const DubickasConstants k = dubickas_constants(b, bits);
  rep.add({"constants", "enclosures of P, A, A', B", Status::pass, {},
           {{"P", detail::dec(k.P, 12)}, {"A", detail::dec(k.A, 12)}, {"A_prime", detail::dec(k.A_prime, 12)},
            {"B", detail::dec(k.B, 12)}, {"factors", std::to_string(k.factors)}}});
  const RealEnclosure e = RealEnclosure::exact(eps);
  const RealEnclosure one = RealEnclosure::exact(1);
  const RealEnclosure half = RealEnclosure::exact(Rational(1, 2));
  const std::vector<std::pair<std::string, std::pair<RealEnclosure, RealEnclosure>>> arcs{
      {"[-A+eps, A-eps]", {e - k.A, k.A - e}},
      {"[eps, B-eps]", {e, k.B - e}},
      {"[1/2-A'+eps, 1/2+A'-eps]", {half - k.A_prime + e, half + k.A_prime - e}},
      {"[1-B+eps, 1-eps]", {one - k.B + e, one - e}},
  };
  std::vector<QuadraticReal> thetas = slopes;
  if (thetas.empty()) {
    const auto all = reference_slopes();
    thetas.assign(all.begin(), all.begin() + 5);
  }
  std::size_t tested = 0, contained = 0, undecided = 0;
  std::string witness;
  for (long g : gs) {
    for (const auto& t : thetas) {
      const OrbitSpec spec{Rational(1, b), BaseSign::negative, g, doubled(characteristic(t))};
      const Endpoints ends = endpoints(spec, t, bits);
      for (const auto& [name, arc] : arcs) {
        ++tested;
        const auto in = arc_contained(ends.lower, ends.upper, arc.first, arc.second);
        if (!in) {
          ++undecided;
        } else if (*in) {
          ++contained;
          if (witness.empty()) witness = "g=" + std::to_string(g) + " theta=" + t.to_string() + " arc " + name;
        }
      }
    }
  }
  Check c{"not_contained", "the endpoint arc lies in none of the four excluded arcs",
          contained ? Status::fail : (undecided ? Status::inconclusive : Status::pass),
          contained ? witness : (undecided ? std::to_string(undecided) + " arc comparisons undecided" : ""),
          {{"comparisons", std::to_string(tested)}}};
  rep.add(std::move(c));
  rep.finalize();
  return rep;
}

}  // namespace sturmod
