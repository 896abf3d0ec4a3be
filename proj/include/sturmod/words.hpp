// Finite and lazy infinite words over small integer alphabets.
//
// Indexing: words are 1-indexed at this module's boundary, matching
// w = w_1 w_2 ...; `letter(n)` takes n >= 1. Spans and `operator[]` on
// FiniteWord are 0-based like any C++ container.
#pragma once

#include "sturmod/exact.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sturmod {

using Letter = std::int32_t;

/// Closed letter range [lo, hi] a word is known to stay within.
struct Alphabet {
  Letter lo = 0;
  Letter hi = 1;
  bool contains(Letter x) const noexcept { return lo <= x && x <= hi; }
  bool is_binary() const noexcept { return lo >= 0 && hi <= 1; }
  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

class FiniteWord {
 public:
  FiniteWord() = default;
  explicit FiniteWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  FiniteWord(std::initializer_list<Letter> letters) : letters_(letters) {}

  /// Digits only, e.g. "0110".
  static FiniteWord from_digits(std::string_view digits) {
    std::vector<Letter> out;
    out.reserve(digits.size());
    for (char c : digits) {
      if (c < '0' || c > '9') throw std::invalid_argument(std::string("not a digit letter: '") + c + "'");
      out.push_back(c - '0');
    }
    return FiniteWord(std::move(out));
  }

  static FiniteWord run(Letter a, std::size_t length) { return FiniteWord(std::vector<Letter>(length, a)); }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  /// 1-indexed access.
  Letter letter(std::size_t n) const {
    if (n == 0 || n > letters_.size()) throw std::out_of_range("FiniteWord::letter index " + std::to_string(n));
    return letters_[n - 1];
  }
  std::span<const Letter> letters() const noexcept { return letters_; }
  const std::vector<Letter>& vector() const noexcept { return letters_; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  /// Letters at 0-based positions [from, from + length).
  FiniteWord slice(std::size_t from, std::size_t length) const {
    if (from + length > letters_.size()) throw std::out_of_range("FiniteWord::slice");
    return FiniteWord(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                                          letters_.begin() + static_cast<std::ptrdiff_t>(from + length)));
  }

  friend FiniteWord operator+(const FiniteWord& a, const FiniteWord& b) {
    std::vector<Letter> out = a.letters_;
    out.insert(out.end(), b.letters_.begin(), b.letters_.end());
    return FiniteWord(std::move(out));
  }

  Alphabet bounds() const {
    if (letters_.empty()) return {0, 0};
    auto [lo, hi] = std::minmax_element(letters_.begin(), letters_.end());
    return {*lo, *hi};
  }

  /// Digits for letters 0..9, parenthesised otherwise: "01(-1)".
  std::string to_string() const {
    std::string out;
    out.reserve(letters_.size());
    for (Letter x : letters_) {
      if (x >= 0 && x <= 9) {
        out.push_back(static_cast<char>('0' + x));
      } else {
        out += "(" + std::to_string(x) + ")";
      }
    }
    return out;
  }

  friend bool operator==(const FiniteWord&, const FiniteWord&) = default;
  friend auto operator<=>(const FiniteWord& a, const FiniteWord& b) { return a.letters_ <=> b.letters_; }

 private:
  std::vector<Letter> letters_;
};

enum class Rounding { floor, ceil };

inline const char* to_string(Rounding r) { return r == Rounding::floor ? "floor" : "ceil"; }

namespace detail {
struct StreamNode;
}

enum class ProvenanceKind {
  raw,             // arbitrary generator
  constant,        // a^infinity
  mechanical,      // floor/ceil difference sequence with slope theta, intercept rho
  characteristic,  // c_theta
  directive,       // standard-word recurrence from partial quotients
  shift,           // T^count of parent
  doubled,         // D of parent
  prefixed,        // word . parent
  alt_negated,     // N of parent
  modified,        // parent with one letter replaced
};

/// How a stream was built. Parents are held by shared ownership so the
/// construction tree stays inspectable.
struct Provenance {
  ProvenanceKind kind = ProvenanceKind::raw;
  std::optional<QuadraticReal> theta;
  std::optional<QuadraticReal> rho;
  Rounding rounding = Rounding::floor;
  std::size_t count = 0;  // shift amount or modified index (1-based)
  Letter letter = 0;      // constant letter or replacement letter
  FiniteWord word;        // prefix for `prefixed`
  std::optional<ContinuedFraction> cf;
  std::string label;  // display name for raw streams
  std::shared_ptr<const detail::StreamNode> parent;
};

namespace detail {

// Letters [from, to) (0-based) appended to `out`.
using FillFn = std::function<void(std::size_t from, std::size_t to, std::vector<Letter>& out)>;

struct StreamNode {
  StreamNode(Provenance prov, Alphabet alpha, FillFn f)
      : provenance(std::move(prov)), alphabet(alpha), fill(std::move(f)) {}

  Provenance provenance;
  Alphabet alphabet;
  FillFn fill;

  // Readers may race on the memo; extension happens under the lock and is
  // idempotent because `fill` is pure.
  mutable std::mutex mutex;
  mutable std::vector<Letter> memo;

  void ensure_locked(std::size_t n) const {
    if (memo.size() >= n) return;
    const std::size_t from = memo.size();
    memo.reserve(std::max(n, memo.capacity()));
    fill(from, n, memo);
    if (memo.size() != n) throw std::logic_error("stream generator produced a wrong number of letters");
  }

  void copy_range(std::size_t from, std::size_t to, std::vector<Letter>& out) const {
    std::lock_guard lock(mutex);
    ensure_locked(to);
    out.insert(out.end(), memo.begin() + static_cast<std::ptrdiff_t>(from),
               memo.begin() + static_cast<std::ptrdiff_t>(to));
  }

  Letter at(std::size_t index0) const {
    std::lock_guard lock(mutex);
    ensure_locked(index0 + 1);
    return memo[index0];
  }

  std::size_t memo_size() const {
    std::lock_guard lock(mutex);
    return memo.size();
  }
};

}  // namespace detail

/// Lazy infinite word w_1 w_2 ... with a memoized prefix. Copies share the
/// generator and memo.
class WordStream {
 public:
  WordStream(Provenance prov, Alphabet alpha, detail::FillFn fill)
      : node_(std::make_shared<detail::StreamNode>(std::move(prov), alpha, std::move(fill))) {}
  explicit WordStream(std::shared_ptr<const detail::StreamNode> node) : node_(std::move(node)) {}

  /// 1-indexed letter.
  Letter letter(std::size_t n) const {
    if (n == 0) throw std::out_of_range("WordStream letters are 1-indexed");
    return node_->at(n - 1);
  }

  FiniteWord prefix(std::size_t n) const { return window(0, n); }

  /// Letters w_{from+1} ... w_{from+length}, i.e. prefix(shift(w, from), length).
  FiniteWord window(std::size_t from, std::size_t length) const {
    std::vector<Letter> out;
    out.reserve(length);
    node_->copy_range(from, from + length, out);
    return FiniteWord(std::move(out));
  }

  const Provenance& provenance() const noexcept { return node_->provenance; }
  Alphabet alphabet() const noexcept { return node_->alphabet; }
  std::optional<WordStream> parent() const {
    if (!node_->provenance.parent) return std::nullopt;
    return WordStream(node_->provenance.parent);
  }
  std::size_t memo_size() const { return node_->memo_size(); }
  const std::shared_ptr<const detail::StreamNode>& node() const noexcept { return node_; }

  std::string describe() const;

 private:
  std::shared_ptr<const detail::StreamNode> node_;
};

// --------------------------------------------------------------------------
// Constructors and operators

inline WordStream constant_word(Letter a) {
  Provenance prov;
  prov.kind = ProvenanceKind::constant;
  prov.letter = a;
  return WordStream(std::move(prov), {a, a},
                    [a](std::size_t from, std::size_t to, std::vector<Letter>& out) { out.insert(out.end(), to - from, a); });
}

/// Stream from a pure function of the 1-based index.
inline WordStream word_from_function(std::function<Letter(std::size_t)> f, Alphabet alpha, std::string label = "raw") {
  Provenance prov;
  prov.kind = ProvenanceKind::raw;
  prov.label = std::move(label);
  return WordStream(std::move(prov), alpha, [f = std::move(f), alpha](std::size_t from, std::size_t to, std::vector<Letter>& out) {
    for (std::size_t i = from; i < to; ++i) {
      const Letter x = f(i + 1);
      if (!alpha.contains(x)) throw std::domain_error("raw stream letter outside its declared alphabet");
      out.push_back(x);
    }
  });
}

inline WordStream shift(const WordStream& w, std::size_t n) {
  if (n == 0) return w;
  const Provenance& p = w.provenance();
  if (p.kind == ProvenanceKind::shift) return shift(*w.parent(), p.count + n);
  Provenance prov;
  prov.kind = ProvenanceKind::shift;
  prov.count = n;
  prov.parent = w.node();
  auto parent = w.node();
  return WordStream(std::move(prov), w.alphabet(), [parent, n](std::size_t from, std::size_t to, std::vector<Letter>& out) {
    parent->copy_range(from + n, to + n, out);
  });
}

/// D w = w_1 w_1 w_2 w_2 ...
inline WordStream doubled(const WordStream& w) {
  Provenance prov;
  prov.kind = ProvenanceKind::doubled;
  prov.parent = w.node();
  auto parent = w.node();
  return WordStream(std::move(prov), w.alphabet(), [parent](std::size_t from, std::size_t to, std::vector<Letter>& out) {
    std::vector<Letter> src;
    const std::size_t lo = from / 2;
    const std::size_t hi = (to + 1) / 2;
    parent->copy_range(lo, hi, src);
    for (std::size_t i = from; i < to; ++i) out.push_back(src[i / 2 - lo]);
  });
}

/// N w = (-w_1) w_2 (-w_3) w_4 ...
inline WordStream alt_negate(const WordStream& w) {
  Provenance prov;
  prov.kind = ProvenanceKind::alt_negated;
  prov.parent = w.node();
  auto parent = w.node();
  const Alphabet a = w.alphabet();
  const Alphabet alpha{std::min<Letter>(a.lo, -a.hi), std::max<Letter>(a.hi, -a.lo)};
  return WordStream(std::move(prov), alpha, [parent](std::size_t from, std::size_t to, std::vector<Letter>& out) {
    const std::size_t base = out.size();
    parent->copy_range(from, to, out);
    for (std::size_t i = from; i < to; ++i) {
      if (i % 2 == 0) out[base + (i - from)] = -out[base + (i - from)];
    }
  });
}

/// u . w
inline WordStream concat(const FiniteWord& u, const WordStream& w) {
  if (u.empty()) return w;
  Provenance prov;
  prov.kind = ProvenanceKind::prefixed;
  prov.word = u;
  prov.parent = w.node();
  auto parent = w.node();
  const Alphabet a = w.alphabet();
  const Alphabet b = u.bounds();
  const Alphabet alpha{std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
  return WordStream(std::move(prov), alpha, [parent, u](std::size_t from, std::size_t to, std::vector<Letter>& out) {
    const std::size_t k = u.size();
    for (std::size_t i = from; i < std::min(to, k); ++i) out.push_back(u[i]);
    if (to > k) parent->copy_range(std::max(from, k) - k, to - k, out);
  });
}

/// w with letter n (1-based) replaced by x. Used for mutation tests.
inline WordStream with_letter(const WordStream& w, std::size_t n, Letter x) {
  if (n == 0) throw std::out_of_range("with_letter: letters are 1-indexed");
  Provenance prov;
  prov.kind = ProvenanceKind::modified;
  prov.count = n;
  prov.letter = x;
  prov.parent = w.node();
  auto parent = w.node();
  const Alphabet a = w.alphabet();
  const Alphabet alpha{std::min(a.lo, x), std::max(a.hi, x)};
  return WordStream(std::move(prov), alpha, [parent, n, x](std::size_t from, std::size_t to, std::vector<Letter>& out) {
    const std::size_t base = out.size();
    parent->copy_range(from, to, out);
    if (n - 1 >= from && n - 1 < to) out[base + (n - 1 - from)] = x;
  });
}

inline std::string WordStream::describe() const {
  const Provenance& p = provenance();
  auto inner = [&] { return parent()->describe(); };
  switch (p.kind) {
    case ProvenanceKind::raw:
      return p.label;
    case ProvenanceKind::constant:
      return std::to_string(p.letter) + "^inf";
    case ProvenanceKind::mechanical:
      return "mech(" + p.theta->to_string() + "," + p.rho->to_string() + "," + to_string(p.rounding) + ")";
    case ProvenanceKind::characteristic:
      return "c(" + p.theta->to_string() + ")";
    case ProvenanceKind::directive:
      return "directive(" + p.cf->to_string() + ")";
    case ProvenanceKind::shift:
      return "T^" + std::to_string(p.count) + " " + inner();
    case ProvenanceKind::doubled:
      return "D " + inner();
    case ProvenanceKind::prefixed:
      return p.word.to_string() + " " + inner();
    case ProvenanceKind::alt_negated:
      return "N " + inner();
    case ProvenanceKind::modified:
      return "modified[" + std::to_string(p.count) + "=" + std::to_string(p.letter) + "](" + inner() + ")";
  }
  return "?";
}

// --------------------------------------------------------------------------
// Orders

enum class WordOrder { lex, alt };

enum class Relation { less, greater, equal_up_to_horizon };

/// Outcome of comparing two infinite words on a finite horizon. For less and
/// greater, `index` is the (1-based) deciding position; otherwise it is the
/// horizon that was checked.
struct OrderVerdict {
  Relation relation = Relation::equal_up_to_horizon;
  std::size_t index = 0;
  friend bool operator==(const OrderVerdict&, const OrderVerdict&) = default;
};

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::less:
      return "less";
    case Relation::greater:
      return "greater";
    case Relation::equal_up_to_horizon:
      return "equal_up_to_horizon";
  }
  return "?";
}

/// Compares two letter windows that both start at word position `first_index`
/// (1-based). Returns the first difference within the windows, if any.
inline std::optional<OrderVerdict> compare_letters(std::span<const Letter> u, std::span<const Letter> v, WordOrder order,
                                                   std::size_t first_index = 1) {
  const std::size_t n = std::min(u.size(), v.size());
  const auto mism = std::mismatch(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(n), v.begin());
  if (mism.first == u.begin() + static_cast<std::ptrdiff_t>(n)) return std::nullopt;
  const std::size_t i = static_cast<std::size_t>(mism.first - u.begin());
  const std::size_t index = first_index + i;
  bool less = *mism.first < *mism.second;
  if (order == WordOrder::alt && index % 2 == 1) less = !less;
  return OrderVerdict{less ? Relation::less : Relation::greater, index};
}

/// Lexicographic or alternate comparison up to `horizon` letters. Letters are
/// fetched in growing chunks so an early difference never forces the full
/// horizon.
inline OrderVerdict compare(const WordStream& u, const WordStream& v, WordOrder order, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("compare: horizon must be positive");
  std::size_t done = 0;
  std::size_t chunk = 64;
  while (done < horizon) {
    const std::size_t len = std::min(chunk, horizon - done);
    const FiniteWord a = u.window(done, len);
    const FiniteWord b = v.window(done, len);
    if (auto verdict = compare_letters(a.letters(), b.letters(), order, done + 1)) return *verdict;
    done += len;
    chunk *= 2;
  }
  return {Relation::equal_up_to_horizon, horizon};
}

// --------------------------------------------------------------------------
// Factors and defects

/// Distinct length-k factors of the first N letters.
inline std::set<FiniteWord> factor_set(const WordStream& w, std::size_t k, std::size_t n) {
  if (k == 0 || k > n) throw std::invalid_argument("factor_set: need 1 <= k <= N");
  const FiniteWord p = w.prefix(n);
  std::set<FiniteWord> out;
  for (std::size_t i = 0; i + k <= n; ++i) out.insert(p.slice(i, k));
  return out;
}

namespace detail {

inline void require_binary(std::span<const Letter> p, const char* who) {
  for (Letter x : p) {
    if (x != 0 && x != 1) throw std::invalid_argument(std::string(who) + ": word is not over {0,1}");
  }
}

// Polynomial hashes of all factors; hash(i, m) covers positions [i, i + m).
class FactorHasher {
 public:
  explicit FactorHasher(std::span<const Letter> p) : prefix_(p.size() + 1, 0), power_(p.size() + 1, 1) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      prefix_[i + 1] = prefix_[i] * kBase + static_cast<std::uint64_t>(static_cast<std::int64_t>(p[i]) + 0x9e37);
      power_[i + 1] = power_[i] * kBase;
    }
  }
  std::uint64_t hash(std::size_t i, std::size_t m) const { return prefix_[i + m] - prefix_[i] * power_[m]; }

 private:
  static constexpr std::uint64_t kBase = 0x100000001b3ULL;
  std::vector<std::uint64_t> prefix_;
  std::vector<std::uint64_t> power_;
};

inline bool matches_at(std::span<const Letter> p, std::size_t at, const FiniteWord& pattern) {
  if (at + pattern.size() > p.size()) return false;
  return std::equal(pattern.begin(), pattern.end(), p.begin() + static_cast<std::ptrdiff_t>(at));
}

// Shortest u such that (left_a u right_a) and (left_b u right_b) both occur in
// p. Per middle length: collect hashes of the a-contexts, sort, and probe with
// the b-contexts; candidates are verified letter by letter.
inline std::optional<FiniteWord> paired_context_search(std::span<const Letter> p, const FiniteWord& left_a,
                                                       const FiniteWord& right_a, const FiniteWord& left_b,
                                                       const FiniteWord& right_b) {
  const std::size_t n = p.size();
  const FactorHasher hasher(p);
  const std::size_t ctx_a = left_a.size() + right_a.size();
  const std::size_t ctx_b = left_b.size() + right_b.size();
  const std::size_t ctx = std::max(ctx_a, ctx_b);
  std::vector<std::pair<std::uint64_t, std::size_t>> table;
  for (std::size_t m = 0; m + ctx <= n; ++m) {
    table.clear();
    for (std::size_t i = 0; i + ctx_a + m <= n; ++i) {
      if (matches_at(p, i, left_a) && matches_at(p, i + left_a.size() + m, right_a)) {
        table.emplace_back(hasher.hash(i + left_a.size(), m), i + left_a.size());
      }
    }
    if (table.empty()) continue;
    std::sort(table.begin(), table.end());
    for (std::size_t j = 0; j + ctx_b + m <= n; ++j) {
      if (!(matches_at(p, j, left_b) && matches_at(p, j + left_b.size() + m, right_b))) continue;
      const std::size_t mid = j + left_b.size();
      const std::uint64_t h = hasher.hash(mid, m);
      auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(h, std::size_t{0}));
      for (; it != table.end() && it->first == h; ++it) {
        if (std::equal(p.begin() + static_cast<std::ptrdiff_t>(it->second),
                       p.begin() + static_cast<std::ptrdiff_t>(it->second + m),
                       p.begin() + static_cast<std::ptrdiff_t>(mid))) {
          return FiniteWord(std::vector<Letter>(p.begin() + static_cast<std::ptrdiff_t>(mid),
                                                p.begin() + static_cast<std::ptrdiff_t>(mid + m)));
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Some u with both 0u0 and 1u1 factors of the word (shortest such u), or none.
inline std::optional<FiniteWord> balance_defect(const FiniteWord& p) {
  detail::require_binary(p.letters(), "balance_defect");
  return detail::paired_context_search(p.letters(), {0}, {0}, {1}, {1});
}

inline std::optional<FiniteWord> balance_defect(const WordStream& w, std::size_t n) { return balance_defect(w.prefix(n)); }

/// Balance via factor sums: for every length, the letter sums of the
/// length-m factors differ by at most one.
inline bool is_balanced_by_spread(const FiniteWord& p) {
  detail::require_binary(p.letters(), "is_balanced_by_spread");
  const std::size_t n = p.size();
  std::vector<int> sums(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) sums[i + 1] = sums[i] + p[i];
  for (std::size_t m = 1; m < n; ++m) {
    int lo = sums[m];
    int hi = sums[m];
    for (std::size_t i = 1; i + m <= n; ++i) {
      const int s = sums[i + m] - sums[i];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (hi - lo > 1) return false;
  }
  return true;
}

/// Some u with both 01u1 and 10u0 factors of the word, or none.
inline std::optional<FiniteWord> s_defect(const FiniteWord& p) {
  detail::require_binary(p.letters(), "s_defect");
  return detail::paired_context_search(p.letters(), {0, 1}, {1}, {1, 0}, {0});
}

inline std::optional<FiniteWord> s_defect(const WordStream& w, std::size_t n) { return s_defect(w.prefix(n)); }

/// (w_1 + ... + w_N) / N, exactly.
inline Rational slope_estimate(const WordStream& w, std::size_t n) {
  if (n == 0) throw std::invalid_argument("slope_estimate: N must be positive");
  const FiniteWord p = w.prefix(n);
  long long total = 0;
  for (Letter x : p) total += x;
  Rational r(Integer(static_cast<long>(total)), Integer(static_cast<unsigned long>(n)));
  r.canonicalize();
  return r;
}

}  // namespace sturmod
