#pragma once

#include <mpfr.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace wrt {

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline mpfr_prec_t& precision_slot() {
  thread_local mpfr_prec_t bits = 192;
  return bits;
}

inline mpfr_prec_t working_precision() { return precision_slot(); }

// Sets the thread's working precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits) : saved_(precision_slot()) {
    if (bits < MPFR_PREC_MIN) bits = MPFR_PREC_MIN;
    precision_slot() = bits;
  }
  ~PrecisionScope() { precision_slot() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

class BigReal {
 public:
  BigReal() { mpfr_init2(v_, working_precision()); mpfr_set_zero(v_, 1); }
  BigReal(int x) { mpfr_init2(v_, working_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  BigReal(long x) { mpfr_init2(v_, working_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  BigReal(long long x) { mpfr_init2(v_, working_precision()); mpfr_set_si(v_, static_cast<long>(x), MPFR_RNDN); }
  BigReal(unsigned long x) { mpfr_init2(v_, working_precision()); mpfr_set_ui(v_, x, MPFR_RNDN); }
  BigReal(double x) { mpfr_init2(v_, working_precision()); mpfr_set_d(v_, x, MPFR_RNDN); }
  explicit BigReal(const std::string& text, int base = 10) {
    mpfr_init2(v_, working_precision());
    if (mpfr_set_str(v_, text.c_str(), base, MPFR_RNDN) != 0)
      throw DomainError("cannot parse number: " + text);
  }
  BigReal(const BigReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  static BigReal with_precision(mpfr_prec_t bits) {
    PrecisionScope scope(bits);
    return BigReal();
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  // Rounds in place to the given precision.
  void round_to(mpfr_prec_t bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  long exponent() const { return is_zero() ? LONG_MIN / 2 : static_cast<long>(mpfr_get_exp(v_)); }

  std::string to_string(int digits = 0) const {
    if (digits <= 0) digits = static_cast<int>(precision() * 0.30103) + 1;
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }
  std::string to_hex() const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%Ra", v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  BigReal& operator+=(const BigReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator-=(const BigReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator*=(const BigReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator/=(const BigReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator*=(long s) { mpfr_mul_si(v_, v_, s, MPFR_RNDN); return *this; }
  BigReal& operator/=(long s) { mpfr_div_si(v_, v_, s, MPFR_RNDN); return *this; }

  BigReal operator-() const {
    BigReal r;
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  friend BigReal operator+(const BigReal& a, const BigReal& b) { BigReal r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend BigReal operator-(const BigReal& a, const BigReal& b) { BigReal r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend BigReal operator*(const BigReal& a, const BigReal& b) { BigReal r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend BigReal operator/(const BigReal& a, const BigReal& b) { BigReal r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend BigReal operator*(const BigReal& a, long s) { BigReal r; mpfr_mul_si(r.v_, a.v_, s, MPFR_RNDN); return r; }
  friend BigReal operator*(long s, const BigReal& a) { return a * s; }
  friend BigReal operator/(const BigReal& a, long s) { BigReal r; mpfr_div_si(r.v_, a.v_, s, MPFR_RNDN); return r; }
  friend BigReal operator*(const BigReal& a, int s) { return a * static_cast<long>(s); }
  friend BigReal operator*(int s, const BigReal& a) { return a * static_cast<long>(s); }
  friend BigReal operator/(const BigReal& a, int s) { return a / static_cast<long>(s); }

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const BigReal& a, const BigReal& b) { return !(a == b); }

 private:
  mpfr_t v_;
};

namespace detail {
template <class F>
BigReal unary(const BigReal& x, F f) {
  BigReal r;
  f(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline BigReal sqrt(const BigReal& x) { return detail::unary(x, mpfr_sqrt); }
inline BigReal sin(const BigReal& x) { return detail::unary(x, mpfr_sin); }
inline BigReal cos(const BigReal& x) { return detail::unary(x, mpfr_cos); }
inline BigReal exp(const BigReal& x) { return detail::unary(x, mpfr_exp); }
inline BigReal log(const BigReal& x) { return detail::unary(x, mpfr_log); }
inline BigReal acos(const BigReal& x) { return detail::unary(x, mpfr_acos); }
inline BigReal abs(const BigReal& x) { return detail::unary(x, mpfr_abs); }
inline BigReal log2(const BigReal& x) { return detail::unary(x, mpfr_log2); }
inline BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r;
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}
inline BigReal pow(const BigReal& x, const BigReal& y) {
  BigReal r;
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}
inline BigReal floor(const BigReal& x) {
  BigReal r;
  mpfr_floor(r.raw(), x.raw());
  return r;
}
inline BigReal pi() {
  BigReal r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}
// 2^e exactly.
inline BigReal pow2(long e) {
  BigReal r(1);
  mpfr_mul_2si(r.raw(), r.raw(), e, MPFR_RNDN);
  return r;
}
inline BigReal rational(long num, long den) { return BigReal(num) / BigReal(den); }
inline BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

class BigComplex {
 public:
  BigComplex() = default;
  BigComplex(const BigReal& re) : re_(re) {}
  BigComplex(const BigReal& re, const BigReal& im) : re_(re), im_(im) {}
  BigComplex(int re) : re_(re) {}
  BigComplex(long re) : re_(re) {}
  BigComplex(double re) : re_(re) {}

  const BigReal& re() const { return re_; }
  const BigReal& im() const { return im_; }
  BigReal& re() { return re_; }
  BigReal& im() { return im_; }

  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }
  std::complex<long double> to_complex_ld() const { return {re_.to_long_double(), im_.to_long_double()}; }

  BigComplex& operator+=(const BigComplex& o) { re_ += o.re_; im_ += o.im_; return *this; }
  BigComplex& operator-=(const BigComplex& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
  BigComplex& operator*=(const BigComplex& o) { *this = *this * o; return *this; }
  BigComplex& operator*=(const BigReal& s) { re_ *= s; im_ *= s; return *this; }
  BigComplex& operator/=(const BigReal& s) { re_ /= s; im_ /= s; return *this; }

  BigComplex operator-() const { return {-re_, -im_}; }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend BigComplex operator*(const BigComplex& a, const BigReal& s) { return {a.re_ * s, a.im_ * s}; }
  friend BigComplex operator*(const BigReal& s, const BigComplex& a) { return a * s; }
  friend BigComplex operator/(const BigComplex& a, const BigReal& s) { return {a.re_ / s, a.im_ / s}; }
  friend BigComplex operator*(const BigComplex& a, long s) { return {a.re_ * s, a.im_ * s}; }
  friend BigComplex operator*(long s, const BigComplex& a) { return a * s; }
  friend BigComplex operator*(const BigComplex& a, int s) { return a * static_cast<long>(s); }
  friend BigComplex operator/(const BigComplex& a, long s) { return {a.re_ / s, a.im_ / s}; }
  friend BigComplex operator/(const BigComplex& a, int s) { return a / static_cast<long>(s); }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigReal d = b.re_ * b.re_ + b.im_ * b.im_;
    return {(a.re_ * b.re_ + a.im_ * b.im_) / d, (a.im_ * b.re_ - a.re_ * b.im_) / d};
  }

 private:
  BigReal re_;
  BigReal im_;
};

inline BigComplex conj(const BigComplex& z) { return {z.re(), -z.im()}; }
inline BigReal norm(const BigComplex& z) { return z.re() * z.re() + z.im() * z.im(); }
inline BigReal abs(const BigComplex& z) {
  BigReal r;
  mpfr_hypot(r.raw(), z.re().raw(), z.im().raw(), MPFR_RNDN);
  return r;
}
inline BigReal arg(const BigComplex& z) { return atan2(z.im(), z.re()); }

// e^{i theta}.
inline BigComplex expi(const BigReal& theta) {
  BigReal s, c;
  mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
  return {c, s};
}
inline BigComplex exp(const BigComplex& z) { return expi(z.im()) * exp(z.re()); }
inline BigComplex polar(const BigReal& r, const BigReal& theta) { return expi(theta) * r; }
inline BigComplex i_times(const BigComplex& z) { return {-z.im(), z.re()}; }

inline BigComplex pow(BigComplex base, long e) {
  if (e < 0) return pow(BigComplex(1) / base, -e);
  BigComplex r(1);
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

// Bound 2^{-bits} as a BigReal, used for rounding-level tolerances.
inline BigReal ulp_scale(long bits) { return pow2(-bits); }

}  // namespace wrt
