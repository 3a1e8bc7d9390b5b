#pragma once

// Certified evaluation of the handful of transcendentals the conformal closed
// forms need: sqrt, exp, log, atan/atan2, sin, cos and pi, each as a directed
// (lower/upper) dyadic bound. Backed by MPFR directed rounding at adaptive
// precision; every returned Dyadic is an exact reading of an MPFR value.

#include <mpfr.h>

#include <algorithm>
#include <cstdint>

#include "carat/dyadic.hpp"

namespace carat {

namespace detail {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(x_, prec); }
  ~Mpfr() { mpfr_clear(x_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return x_; }

 private:
  mpfr_t x_;
};

inline mpfr_prec_t needed_prec(const Dyadic& d) {
  if (d.is_zero()) return 16;
  return static_cast<mpfr_prec_t>(boost::multiprecision::msb(abs(d).mantissa())) + 2;
}

// Exact: every dyadic fits in an MPFR number of sufficient precision.
inline void set_dyadic(mpfr_ptr x, const Dyadic& d) {
  if (d.is_zero()) {
    mpfr_set_zero(x, 1);
    return;
  }
  BigInt m = d.mantissa();
  // cpp_int -> mpfr via decimal string round-trips exactly at adequate precision.
  mpfr_set_str(x, m.str().c_str(), 10, MPFR_RNDN);
  mpfr_mul_2si(x, x, static_cast<long>(d.exponent()), MPFR_RNDN);
}

// Exact reading of an MPFR value as a Dyadic.
inline Dyadic get_dyadic(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return Dyadic();
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 2, 0, x, MPFR_RNDN);
  std::string bits(s);
  mpfr_free_str(s);
  bool neg = !bits.empty() && bits[0] == '-';
  if (neg) bits.erase(bits.begin());
  BigInt m = 0;
  for (char c : bits) m = (m << 1) + (c - '0');
  if (neg) m = -m;
  return Dyadic(m, static_cast<std::int64_t>(e) - static_cast<std::int64_t>(bits.size()));
}

// Evaluates fn at precision growing until the directed bracket has width
// <= 2^-n. fn must fill out with a value rounded in direction rnd.
template <typename Fn>
DyInterval bracket(int n, mpfr_prec_t start, Fn&& fn) {
  mpfr_prec_t p = std::max<mpfr_prec_t>(start, 16);
  for (int iter = 0; iter < 64; ++iter) {
    Mpfr lo(p), hi(p);
    fn(lo.get(), MPFR_RNDD);
    fn(hi.get(), MPFR_RNDU);
    Dyadic dlo = get_dyadic(lo.get());
    Dyadic dhi = get_dyadic(hi.get());
    if (dhi - dlo <= Dyadic::pow2(-n)) return {dlo, dhi};
    p = p + p / 2 + 16;
  }
  throw contract_fault("realfns: directed bracket did not converge");
}

}  // namespace detail

inline DyInterval pi_bracket(int n) {
  return detail::bracket(n, n + 8, [](mpfr_ptr out, mpfr_rnd_t r) { mpfr_const_pi(out, r); });
}

#define CARAT_UNARY_BRACKET(NAME, MPFR_FN)                              \
  inline DyInterval NAME##_bracket(const Dyadic& a, int n) {            \
    return detail::bracket(n, n + 16, [&](mpfr_ptr out, mpfr_rnd_t r) { \
      detail::Mpfr in(detail::needed_prec(a));                          \
      detail::set_dyadic(in.get(), a);                                  \
      MPFR_FN(out, in.get(), r);                                        \
    });                                                                 \
  }

CARAT_UNARY_BRACKET(sqrt, mpfr_sqrt)
CARAT_UNARY_BRACKET(exp, mpfr_exp)
CARAT_UNARY_BRACKET(log, mpfr_log)
CARAT_UNARY_BRACKET(atan, mpfr_atan)
CARAT_UNARY_BRACKET(sin, mpfr_sin)
CARAT_UNARY_BRACKET(cos, mpfr_cos)
#undef CARAT_UNARY_BRACKET

inline Dyadic sqrt_upper(const Dyadic& a, int n) { return sqrt_bracket(a, n).hi; }
inline Dyadic sqrt_lower(const Dyadic& a, int n) { return sqrt_bracket(a, n).lo; }

// sqrt of an exact nonnegative rational, bracketed to width <= 2^-n.
inline DyInterval sqrt_bracket(const BigRat& q, int n) {
  if (q < 0) throw contract_fault("sqrt of negative rational");
  if (q == 0) return {Dyadic(), Dyadic()};
  // floor(sqrt(num * 4^k / den)) / 2^k brackets sqrt(q) within 2^-k.
  int k = n + 2;
  BigInt num = boost::multiprecision::numerator(q) << static_cast<unsigned>(2 * k);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt quotient = num / den;
  BigInt s = boost::multiprecision::sqrt(quotient);
  // s <= sqrt(num/den) < s+2 (integer sqrt of a floor can lose 1 extra).
  return {Dyadic(s, -k), Dyadic(s + 2, -k)};
}

inline DyInterval atan2_bracket(const Dyadic& y, const Dyadic& x, int n) {
  return detail::bracket(n, n + 16, [&](mpfr_ptr out, mpfr_rnd_t r) {
    detail::Mpfr yy(detail::needed_prec(y)), xx(detail::needed_prec(x));
    detail::set_dyadic(yy.get(), y);
    detail::set_dyadic(xx.get(), x);
    mpfr_atan2(out, yy.get(), xx.get(), r);
  });
}

// Directed rational->dyadic brackets (for exact squared distances etc).
// Exactly representable rationals yield a degenerate interval.
inline DyInterval rat_bracket(const BigRat& q, int n) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  unsigned k = static_cast<unsigned>(n + 1);
  BigInt scaled = num << k;
  BigInt fl = scaled / den;
  if (fl * den > scaled) fl -= 1;  // make it a true floor for negatives
  Dyadic lo(fl, -static_cast<std::int64_t>(k));
  if (fl * den == scaled) return {lo, lo};
  return {lo, Dyadic(fl + 1, -static_cast<std::int64_t>(k))};
}

inline Dyadic IrrationalThreshold_value_upper(const IrrationalThreshold& t, int n) {
  DyInterval s2 = sqrt_bracket(Dyadic(2), n + 4);
  Dyadic off = t.offset_coeff.sign() >= 0 ? t.offset_coeff * s2.hi : t.offset_coeff * s2.lo;
  return t.base + off;
}

}  // namespace carat
