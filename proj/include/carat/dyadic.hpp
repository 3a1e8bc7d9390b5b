#pragma once

// Exact base-2 rational arithmetic. Dyadic is the precision currency of the
// whole library: every approximation contract is "within 2^-n" of a Dyadic.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace carat {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Thrown when a module-level contract is violated (oracle inconsistency,
// invalid geometric input, precondition failures).
class contract_fault : public std::runtime_error {
 public:
  explicit contract_fault(const std::string& what) : std::runtime_error(what) {}
};

// value = mantissa * 2^exponent, canonical: mantissa odd, or zero with exponent 0.
class Dyadic {
 public:
  Dyadic() : m_(0), e_(0) {}
  Dyadic(long v) : m_(v), e_(0) { canonicalize(); }          // NOLINT(implicit)
  Dyadic(BigInt m, std::int64_t e) : m_(std::move(m)), e_(e) { canonicalize(); }

  static Dyadic pow2(std::int64_t k) { return Dyadic(BigInt(1), k); }
  // v / 2^k for integer v.
  static Dyadic scaled(long v, std::int64_t k) { return Dyadic(BigInt(v), -k); }

  const BigInt& mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }

  bool is_zero() const { return m_.is_zero(); }
  int sign() const { return m_.sign(); }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::int64_t e = std::min(a.e_, b.e_);
    return Dyadic((a.m_ << static_cast<unsigned>(a.e_ - e)) +
                      (b.m_ << static_cast<unsigned>(b.e_ - e)),
                  e);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.m_ * b.m_, a.e_ + b.e_);
  }
  Dyadic operator-() const {
    Dyadic r;
    r.m_ = -m_;
    r.e_ = e_;
    return r;
  }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  Dyadic mul_pow2(std::int64_t k) const {
    if (is_zero()) return Dyadic();
    Dyadic r;
    r.m_ = m_;
    r.e_ = e_ + k;
    return r;
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.m_ == b.m_ && a.e_ == b.e_;
  }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Dyadic& b, const Dyadic& a) { return a < b; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return !(a < b); }

  friend Dyadic abs(const Dyadic& a) { return a.sign() < 0 ? -a : a; }

  BigRat to_rational() const {
    if (e_ >= 0) return BigRat(m_ << static_cast<unsigned>(e_));
    return BigRat(m_, BigInt(1) << static_cast<unsigned>(-e_));
  }

  // Nearest representable double; for Monte-Carlo mirrors and reports only.
  double to_double() const {
    if (is_zero()) return 0.0;
    BigInt a = abs_mant();
    std::int64_t bits = static_cast<std::int64_t>(boost::multiprecision::msb(a)) + 1;
    std::int64_t drop = bits > 62 ? bits - 62 : 0;
    BigInt t = a >> static_cast<unsigned>(drop);
    double v = std::ldexp(static_cast<double>(t.convert_to<std::int64_t>()),
                          static_cast<int>(e_ + drop));
    return m_.sign() < 0 ? -v : v;
  }

  // Largest multiple of 2^-n that is <= value (floor on the 2^-n grid).
  Dyadic floor_to(std::int64_t n) const {
    if (is_zero()) return Dyadic();
    if (e_ >= -n) return *this;  // already on a coarser grid
    unsigned shift = static_cast<unsigned>(-n - e_);
    if (m_.sign() > 0) return Dyadic(m_ >> shift, -n);
    BigInt a = -m_;
    BigInt q = (a + (BigInt(1) << shift) - 1) >> shift;  // ceil(|m|/2^shift)
    return Dyadic(-q, -n);
  }
  Dyadic ceil_to(std::int64_t n) const { return -((-*this).floor_to(n)); }
  // Round to nearest multiple of 2^-n (ties up); |result - value| <= 2^-(n+1).
  Dyadic round_to(std::int64_t n) const {
    return (*this + Dyadic::pow2(-n - 1)).floor_to(n);
  }

  // Exact exponent bound: value != 0 implies 2^(msb_exp-1) <= |value| < 2^msb_exp.
  std::int64_t msb_exp() const {
    if (is_zero()) throw contract_fault("msb_exp of zero");
    return static_cast<std::int64_t>(boost::multiprecision::msb(abs_mant())) + 1 + e_;
  }

  std::string str() const { return m_.str() + "*2^" + std::to_string(e_); }

 private:
  BigInt abs_mant() const { return m_.sign() < 0 ? BigInt(-m_) : m_; }
  void canonicalize() {
    if (m_.is_zero()) {
      e_ = 0;
      return;
    }
    unsigned tz = boost::multiprecision::lsb(abs_mant());
    if (tz > 0) {
      m_ >>= tz;
      e_ += tz;
    }
  }
  BigInt m_;
  std::int64_t e_;
};

inline Dyadic min(const Dyadic& a, const Dyadic& b) { return a < b ? a : b; }
inline Dyadic max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

// Exact integer value of a dyadic with nonnegative exponent.
inline std::int64_t dyadic_to_int64(const Dyadic& v) {
  if (v.is_zero()) return 0;
  if (v.exponent() < 0) throw contract_fault("dyadic_to_int64: not integral");
  BigInt n = v.mantissa() * (BigInt(1) << static_cast<unsigned>(v.exponent()));
  return n.convert_to<std::int64_t>();
}

// Exact conversion: every finite double is a dyadic rational.
inline Dyadic dyadic_from_double(double v) {
  if (v == 0.0) return Dyadic();
  if (!std::isfinite(v)) throw contract_fault("dyadic_from_double: non-finite");
  int e;
  double m = std::frexp(v, &e);  // v = m * 2^e, |m| in [0.5, 1)
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  return Dyadic(BigInt(mant), static_cast<std::int64_t>(e) - 53);
}

// Approximation oracle for a real number x: query(n) returns a Dyadic a_n with
// |a_n - x| < 2^-n. Oracles must be pure (same n, same answer).
struct RealOracle {
  std::function<Dyadic(int)> query;

  static RealOracle constant(const Dyadic& v) {
    return RealOracle{[v](int) { return v; }};
  }
};

// approx: oracle access with a consistency spot-check between consecutive
// precision levels. Violations are contract faults of the oracle, not of the
// caller.
inline Dyadic approx(const RealOracle& oracle, int n) {
  if (n < 0) throw contract_fault("approx: precision must be >= 0");
  Dyadic a = oracle.query(n);
  Dyadic b = oracle.query(n + 1);
  if (abs(a - b) >= Dyadic::pow2(-n) + Dyadic::pow2(-n - 1))
    throw contract_fault("approx: oracle answers at n and n+1 are inconsistent");
  return a;
}

// base + offset_coeff*sqrt(2); irrational whenever offset_coeff != 0, so exact
// strict comparison against dyadics always terminates.
struct IrrationalThreshold {
  Dyadic base;
  Dyadic offset_coeff;
};

enum class Order { Less, Greater };

inline Order compare_threshold(const Dyadic& q, const IrrationalThreshold& t) {
  Dyadic d = q - t.base;  // compare d against offset_coeff * sqrt(2)
  const Dyadic& c = t.offset_coeff;
  if (c.is_zero()) {
    if (d.is_zero())
      throw contract_fault("compare_threshold: ambiguous (rational threshold equals query)");
    return d.sign() < 0 ? Order::Less : Order::Greater;
  }
  if (c.sign() > 0) {
    if (d.sign() <= 0) return Order::Less;
    // both positive: q > t  <=>  d^2 > 2 c^2
    return d * d > c * c * Dyadic(2) ? Order::Greater : Order::Less;
  }
  // c < 0: threshold below base.
  if (d.sign() >= 0) return Order::Greater;
  return d * d > c * c * Dyadic(2) ? Order::Less : Order::Greater;
}

// Certified enclosure [lo, hi] of a real quantity.
struct DyInterval {
  Dyadic lo;
  Dyadic hi;

  Dyadic width() const { return hi - lo; }
  bool contains(const Dyadic& v) const { return lo <= v && v <= hi; }
  friend DyInterval operator+(const DyInterval& a, const DyInterval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
  }
};

}  // namespace carat
