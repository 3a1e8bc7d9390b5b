#pragma once

// Complex ball arithmetic: exact dyadic centers with certified radius bounds.
// Centers are snapped to a working grid after every operation; all radius
// arithmetic rounds upward, so a CBall always encloses the true value of the
// expression it evaluates.

#include "carat/dyadic.hpp"
#include "carat/realfns.hpp"

namespace carat::conf {

struct Cx {
  Dyadic re, im;

  friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  Cx operator-() const { return {-re, -im}; }
  Cx conj() const { return {re, -im}; }
  Dyadic norm2() const { return re * re + im * im; }
  friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
  double to_double_re() const { return re.to_double(); }
  double to_double_im() const { return im.to_double(); }
};

class precision_unachievable : public contract_fault {
 public:
  explicit precision_unachievable(const std::string& what, int achievable = -1)
      : contract_fault(what), achievable_bits(achievable) {}
  int achievable_bits;
};

namespace detail {

// internal marker for retryable ball-arithmetic failures (cut contact, 0-div)
struct ball_retry {
  std::string reason;
};

inline Dyadic up(const Dyadic& v, std::int64_t p) { return v.ceil_to(p); }

}  // namespace detail

enum class SqrtCut { PositiveReal, NegativeReal };

struct CBall {
  Cx c;
  Dyadic r;  // >= 0

  static CBall exact(Cx z) { return {z, Dyadic(0)}; }
};

// All operations take the working grid p (centers snapped to 2^-p, radii
// rounded up on the 2^-p grid) so mantissas stay bounded along compositions.
class BallOps {
 public:
  explicit BallOps(std::int64_t p) : p_(p), snap_(Dyadic::pow2(-p)) {}

  std::int64_t grid() const { return p_; }

  CBall make(const Cx& z) const { return CBall::exact(z); }

  CBall add(const CBall& a, const CBall& b) const {
    return rounded({a.c + b.c, a.r + b.r});
  }
  CBall sub(const CBall& a, const CBall& b) const {
    return rounded({a.c - b.c, a.r + b.r});
  }
  CBall neg(const CBall& a) const { return {-a.c, a.r}; }

  CBall mul(const CBall& a, const CBall& b) const {
    if (a.r.is_zero() && b.r.is_zero()) return rounded({a.c * b.c, Dyadic(0)});
    Dyadic ma = abs_upper(a.c), mb = abs_upper(b.c);
    return rounded({a.c * b.c, ma * b.r + mb * a.r + a.r * b.r});
  }
  CBall mul_const(const Cx& k, const CBall& a) const {
    return rounded({k * a.c, abs_upper(k) * a.r});
  }

  CBall div(const CBall& num, const CBall& den) const {
    Dyadic dlo = abs_lower(den.c);
    if (!(dlo > den.r)) throw detail::ball_retry{"division by ball containing zero"};
    Dyadic gap = dlo - den.r;
    // exact rational quotient, snapped
    BigRat d2 = den.c.norm2().to_rational();
    Cx wcz = num.c * den.c.conj();
    Cx q{snap(BigRat(wcz.re.to_rational() / d2)), snap(BigRat(wcz.im.to_rational() / d2))};
    Dyadic qmag = abs_upper(q) + snap_;
    // |w'/z' - w/z| <= r_num/gap + |w| r_den / (gap * |z|):
    // bound with |w| <= |q||z| + small; use conservative (r_num + qmag*r_den)/gap
    Dyadic rad = div_up(num.r + qmag * den.r + snap_ * den.r, gap);
    return {q, detail::up(rad + snap_.mul_pow2(1), p_)};
  }

  // sqrt with selectable branch cut; ball must avoid the cut and zero.
  CBall sqrt(const CBall& a, SqrtCut cut) const {
    Dyadic alo = abs_lower(a.c);
    if (!(alo > a.r)) throw detail::ball_retry{"sqrt of ball containing zero"};
    // cut avoidance: the cut ray is y = 0, x >= 0 (or x <= 0)
    bool y_straddles = abs(a.c.im) <= a.r;
    bool x_on_cut = cut == SqrtCut::PositiveReal ? a.c.re + a.r >= Dyadic(0)
                                                 : a.c.re - a.r <= Dyadic(0);
    if (y_straddles && x_on_cut) throw detail::ball_retry{"sqrt ball touches branch cut"};

    int nb = static_cast<int>(p_) + 8;
    DyInterval theta = atan2_bracket(a.c.im, a.c.re, nb);  // in (-pi, pi]
    if (cut == SqrtCut::PositiveReal && a.c.im.sign() < 0) {
      DyInterval tau = pi_bracket(nb);
      theta = {theta.lo + tau.lo.mul_pow2(1), theta.hi + tau.hi.mul_pow2(1)};
    }
    // half-angle, magnitude sqrt
    DyInterval m = sqrt_bracket(a.c.norm2().to_rational(), nb);     // |c|
    DyInterval rt = sqrt_bracket(m.hi.to_rational(), nb);           // sqrt|c| upper leg
    DyInterval rt_lo = sqrt_bracket(m.lo.to_rational(), nb);
    Dyadic half_lo = theta.lo.mul_pow2(-1), half_hi = theta.hi.mul_pow2(-1);
    DyInterval c1 = cos_bracket(half_lo, nb), c2 = cos_bracket(half_hi, nb);
    DyInterval s1 = sin_bracket(half_lo, nb), s2 = sin_bracket(half_hi, nb);
    Dyadic cmid = (min(c1.lo, c2.lo) + max(c1.hi, c2.hi)).mul_pow2(-1);
    Dyadic smid = (min(s1.lo, s2.lo) + max(s1.hi, s2.hi)).mul_pow2(-1);
    Dyadic rmid = (rt_lo.lo + rt.hi).mul_pow2(-1);
    Cx center{(rmid * cmid).round_to(p_), (rmid * smid).round_to(p_)};
    // enclosure slack of the polar reconstruction (the theta-width term covers
    // non-monotone cos/sin across the tiny angle interval)
    Dyadic slack = (rt.hi - rt_lo.lo) +
                   rmid * ((max(c1.hi, c2.hi) - min(c1.lo, c2.lo)) +
                           (max(s1.hi, s2.hi) - min(s1.lo, s2.lo)) +
                           (theta.hi - theta.lo)) +
                   snap_.mul_pow2(2);
    // derivative bound over the ball: 1/(2 sqrt(|c| - r))
    Dyadic inner = alo - a.r;
    Dyadic root_lo = sqrt_bracket(inner.to_rational(), nb).lo;
    if (root_lo.sign() <= 0) throw detail::ball_retry{"sqrt derivative bound degenerate"};
    Dyadic deriv = div_up(Dyadic(1), root_lo.mul_pow2(1));
    return {center, detail::up(deriv * a.r + slack, p_)};
  }

  Dyadic abs_upper(const Cx& z) const {
    return sqrt_bracket(z.norm2().to_rational(), static_cast<int>(p_) + 4).hi;
  }
  Dyadic abs_lower(const Cx& z) const {
    return sqrt_bracket(z.norm2().to_rational(), static_cast<int>(p_) + 4).lo;
  }

 private:
  Dyadic snap(const BigRat& q) const { return rat_bracket(q, static_cast<int>(p_)).lo; }
  Dyadic div_up(const Dyadic& num, const Dyadic& den) const {
    if (den.sign() <= 0) throw detail::ball_retry{"nonpositive denominator"};
    return rat_bracket(num.to_rational() / den.to_rational(), static_cast<int>(p_)).hi;
  }
  CBall rounded(CBall b) const {
    Cx c{b.c.re.round_to(p_), b.c.im.round_to(p_)};
    return {c, detail::up(b.r + snap_, p_)};
  }

  std::int64_t p_;
  Dyadic snap_;
};

}  // namespace carat::conf
