// Certified evaluation of t_r(w) = sum_{i>=1} w_i r^i for rational |r| < 1.
// One evaluator serves both signs: t_{-r} is evaluation at ratio -r.
#pragma once

#include "sturmod/exact.hpp"
#include "sturmod/words.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sturmod {

class RatioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_ratio(const Rational& r) {
  if (abs_rat(r) >= 1) throw RatioError("series ratio must satisfy |r| < 1, got " + rational_to_string(r));
}

/// sum_{i>N} r^i over even i (first) and odd i (second), for r = |ratio|.
inline std::pair<Rational, Rational> parity_tails(const Rational& rho, std::size_t n) {
  const Rational one_minus_sq = 1 - rho * rho;
  const std::size_t first_even = (n + 1) % 2 == 0 ? n + 1 : n + 2;
  const std::size_t first_odd = (n + 1) % 2 == 1 ? n + 1 : n + 2;
  Rational even = pow_rat(rho, first_even) / one_minus_sq;
  Rational odd = pow_rat(rho, first_odd) / one_minus_sq;
  return {even, odd};
}

/// Range of sum_{i>N} w_i r^i over all continuations with letters in [m, M].
inline RealEnclosure tail_enclosure(const Rational& r, std::size_t n, Alphabet letters) {
  require_ratio(r);
  const Rational m(letters.lo), big_m(letters.hi);
  if (r >= 0) {
    const Rational g = pow_rat(r, n + 1) / (1 - r);
    return {m * g, big_m * g};
  }
  const auto [even, odd] = parity_tails(-r, n);
  return {m * even - big_m * odd, big_m * even - m * odd};
}

/// Width of the tail enclosure: (M - m) |r|^{N+1} / (1 - |r|).
inline Rational tail_width(const Rational& r, std::size_t n, Alphabet letters) {
  const Rational rho = abs_rat(r);
  return Rational(letters.hi - letters.lo) * pow_rat(rho, n + 1) / (1 - rho);
}

/// Smallest N whose tail width is at most 2^{-bits}.
inline std::size_t terms_for_bits(const Rational& r, unsigned bits, Alphabet letters = {0, 1}) {
  require_ratio(r);
  if (r == 0 || letters.lo == letters.hi) return 1;
  const Rational target(Integer(1), pow_int(2, bits));
  const Rational rho = abs_rat(r);
  const Rational scale = Rational(letters.hi - letters.lo) / (1 - rho);
  Rational power = rho;
  std::size_t n = 0;
  // width(N) = scale * rho^{N+1}
  for (;;) {
    power *= rho;
    ++n;
    if (scale * power <= target) return n;
  }
}

/// Partial sums with a fixed ratio p/q and term count N, using the integer
/// coefficients p^i q^{N-i} over the common denominator q^N.
class SeriesKernel {
 public:
  SeriesKernel(Rational r, std::size_t terms) : r_(std::move(r)), terms_(terms) {
    require_ratio(r_);
    if (terms_ == 0) throw std::invalid_argument("series term count must be positive");
    const Integer p = r_.get_num();
    const Integer q = r_.get_den();
    coef_.resize(terms_);
    // coef_[i-1] = p^i q^{N-i}
    Integer qpow = 1;
    std::vector<Integer> qpows(terms_ + 1);
    for (std::size_t k = 0; k <= terms_; ++k) {
      qpows[k] = qpow;
      qpow *= q;
    }
    Integer ppow = p;
    for (std::size_t i = 1; i <= terms_; ++i) {
      coef_[i - 1] = ppow * qpows[terms_ - i];
      ppow *= p;
    }
    denominator_ = qpows[terms_];
  }

  const Rational& ratio() const noexcept { return r_; }
  std::size_t terms() const noexcept { return terms_; }

  /// sum_{i<=N} w_i r^i for the first N letters.
  Rational partial(std::span<const Letter> letters) const {
    if (letters.size() < terms_) throw std::invalid_argument("partial: not enough letters");
    Integer acc = 0;
    for (std::size_t i = 0; i < terms_; ++i) {
      const Letter x = letters[i];
      if (x == 0) continue;
      if (x == 1) {
        acc += coef_[i];
      } else if (x == -1) {
        acc -= coef_[i];
      } else {
        acc += coef_[i] * static_cast<long>(x);
      }
    }
    Rational out(acc, denominator_);
    out.canonicalize();
    return out;
  }

  RealEnclosure evaluate(std::span<const Letter> letters, Alphabet tail_letters) const {
    return tail_enclosure(r_, terms_, tail_letters) + partial(letters);
  }

 private:
  Rational r_;
  std::size_t terms_;
  std::vector<Integer> coef_;
  Integer denominator_;
};

/// Exact t_r of a finite word (all later letters zero).
inline Rational eval_finite(const Rational& r, const FiniteWord& u) {
  require_ratio(r);
  Rational acc = 0;
  for (std::size_t i = u.size(); i-- > 0;) acc = r * (acc + u[i]);
  return acc;
}

/// t_r of the letters of `prefix` followed by an unknown continuation over
/// `tail_letters`.
inline RealEnclosure eval_prefix(const Rational& r, const FiniteWord& prefix, Alphabet tail_letters) {
  require_ratio(r);
  return tail_enclosure(r, prefix.size(), tail_letters) + eval_finite(r, prefix);
}

/// Closed form for a constant word: a r / (1 - r).
inline Rational const_tail(const Integer& a, const Rational& r) {
  require_ratio(r);
  return Rational(a) * r / (1 - r);
}

/// t_r(w) from N terms plus the alphabet tail bound.
inline RealEnclosure eval_t(const Rational& r, const WordStream& w, std::size_t terms) {
  require_ratio(r);
  if (w.provenance().kind == ProvenanceKind::constant) {
    return RealEnclosure::exact(const_tail(w.provenance().letter, r));
  }
  const FiniteWord p = w.prefix(terms);
  return SeriesKernel(r, terms).evaluate(p.letters(), w.alphabet());
}

/// t_r(w) with enclosure width at most 2^{-bits}.
inline RealEnclosure eval_t_bits(const Rational& r, const WordStream& w, unsigned bits) {
  return eval_t(r, w, terms_for_bits(r, bits, w.alphabet()));
}

// --------------------------------------------------------------------------
// Identities

struct IdentityResidual {
  std::string name;
  RealEnclosure residual;
  Rational width_bound;  // sum of the tail widths that enter the residual

  bool contains_zero() const { return residual.contains(Rational(0)); }
  bool within_bound() const { return residual.width() <= width_bound; }
};

/// t_r(uv) - r^k t_r(v) - t_r(u), k = |u|.
inline IdentityResidual concat_identity(const FiniteWord& u, const WordStream& v, const Rational& r, std::size_t terms) {
  const Rational rk = pow_rat(r, u.size());
  const RealEnclosure uv = eval_t(r, concat(u, v), terms);
  const RealEnclosure tv = eval_t(r, v, terms);
  IdentityResidual out{"concat", uv - rk * tv - eval_finite(r, u), {}};
  out.width_bound = uv.width() + abs_rat(rk) * tv.width();
  return out;
}

/// (t_r(T^n w) - t_r(T^m w)) - r^k (t_r(T^{n+k} w) - t_r(T^{m+k} w)) - (t_r(u) - t_r(u'))
/// with u = w_{n+1..n+k}, u' = w_{m+1..m+k}.
inline IdentityResidual shift_pair_identity(const WordStream& w, std::size_t n, std::size_t m, std::size_t k,
                                            const Rational& r, std::size_t terms) {
  const Rational rk = pow_rat(r, k);
  const RealEnclosure a = eval_t(r, shift(w, n), terms);
  const RealEnclosure b = eval_t(r, shift(w, m), terms);
  const RealEnclosure c = eval_t(r, shift(w, n + k), terms);
  const RealEnclosure d = eval_t(r, shift(w, m + k), terms);
  const Rational rhs = eval_finite(r, w.window(n, k)) - eval_finite(r, w.window(m, k));
  IdentityResidual out{"shift_pair", (a - b) - rk * (c - d) - rhs, {}};
  out.width_bound = a.width() + b.width() + abs_rat(rk) * (c.width() + d.width());
  return out;
}

/// Exact form of the shift-pair identity on finite words: the residual of
/// (t(u x) - t(u' y)) - r^k (t(x) - t(y)) - (t(u) - t(u')).
inline Rational shift_pair_residual_exact(const FiniteWord& u, const FiniteWord& up, const FiniteWord& x,
                                          const FiniteWord& y, const Rational& r) {
  if (u.size() != up.size()) throw std::invalid_argument("shift_pair_residual_exact: |u| != |u'|");
  const Rational rk = pow_rat(r, u.size());
  return (eval_finite(r, u + x) - eval_finite(r, up + y)) - rk * (eval_finite(r, x) - eval_finite(r, y)) -
         (eval_finite(r, u) - eval_finite(r, up));
}

/// t_{-r}(D u) + (1/r - 1) t_{r^2}(u), for 0 < r < 1.
inline IdentityResidual doubling_identity(const WordStream& u, const Rational& r, std::size_t terms) {
  if (r <= 0 || r >= 1) throw RatioError("doubling identity needs 0 < r < 1");
  const RealEnclosure lhs = eval_t(-r, doubled(u), 2 * terms);
  const RealEnclosure half = eval_t(r * r, u, terms);
  const Rational k = 1 / r - 1;
  IdentityResidual out{"doubling", lhs + k * half, {}};
  out.width_bound = lhs.width() + k * half.width();
  return out;
}

/// t_{-r}(a D u) - (-a r + (1 - r) t_{r^2}(u)).
inline IdentityResidual lead_doubling_identity(Letter a, const WordStream& u, const Rational& r, std::size_t terms) {
  if (r <= 0 || r >= 1) throw RatioError("doubling identity needs 0 < r < 1");
  const RealEnclosure lhs = eval_t(-r, concat(FiniteWord{a}, doubled(u)), 2 * terms + 1);
  const RealEnclosure half = eval_t(r * r, u, terms);
  const Rational k = 1 - r;
  IdentityResidual out{"lead_doubling", lhs - (k * half + Rational(-a) * r), {}};
  out.width_bound = lhs.width() + k * half.width();
  return out;
}

// --------------------------------------------------------------------------
// Endpoint gaps

/// t_{-r}(011u) - t_{-r}(100u) = r + r^2 - r^3: the first three letters
/// carry the whole difference.
inline Rational endpoint_gap(const Rational& r) {
  if (r <= 0 || r >= 1) throw RatioError("endpoint gap needs 0 < r < 1");
  const Rational m = -r;
  const Rational head_hi = eval_finite(m, FiniteWord{0, 1, 1});
  const Rational head_lo = eval_finite(m, FiniteWord{1, 0, 0});
  return head_hi - head_lo;
}

/// The same difference evaluated on explicit finite words 011u and 100u.
inline Rational endpoint_gap_exact(const Rational& r, const FiniteWord& u) {
  return eval_finite(-r, FiniteWord{0, 1, 1} + u) - eval_finite(-r, FiniteWord{1, 0, 0} + u);
}

/// Enclosure of t_{-r}(011u) - t_{-r}(100u) from two independent evaluations.
inline RealEnclosure endpoint_gap_enclosure(const Rational& r, const WordStream& u, std::size_t terms) {
  return eval_t(-r, concat(FiniteWord{0, 1, 1}, u), terms) - eval_t(-r, concat(FiniteWord{1, 0, 0}, u), terms);
}

/// t_r(1u) - t_r(0u) = r.
inline Rational lex_endpoint_gap(const Rational& r) {
  if (r <= 0 || r >= 1) throw RatioError("endpoint gap needs 0 < r < 1");
  return eval_finite(r, FiniteWord{1}) - eval_finite(r, FiniteWord{0});
}

}  // namespace sturmod
