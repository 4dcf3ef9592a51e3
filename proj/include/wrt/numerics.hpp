#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wrt/bigfloat.hpp"

namespace wrt {

// ---------------------------------------------------------------------------
// Roots of unity
// ---------------------------------------------------------------------------

// Power cache for t_k = -e^{i pi/2k} and q_k = e^{i pi/k}.
// Entries e^{i pi j/2k} for j in [0, 4k) are computed once at construction.
class UnitRoot {
 public:
  explicit UnitRoot(long k) : k_(k) {
    if (k < 1) throw DomainError("UnitRoot: level must be positive");
    const long n = 4 * k;
    cache_.reserve(static_cast<size_t>(n));
    BigReal step = pi() / (2 * k);
    for (long j = 0; j < n; ++j) cache_.push_back(expi(step * j));
  }

  long k() const { return k_; }

  // e^{i pi j / 2k}
  const BigComplex& eighth(long j) const {
    long n = 4 * k_;
    long r = ((j % n) + n) % n;
    return cache_[static_cast<size_t>(r)];
  }
  // t_k^j
  BigComplex t_pow(long j) const {
    const BigComplex& e = eighth(j);
    return (j % 2 == 0) ? e : -e;
  }
  // q_k^j = e^{i pi j / k}
  const BigComplex& q_pow(long j) const { return eighth(2 * j); }
  BigComplex t() const { return t_pow(1); }
  BigComplex q() const { return q_pow(1); }

 private:
  long k_;
  std::vector<BigComplex> cache_;
};

// [l] = (t^{2l} - t^{-2l}) / (t^2 - t^{-2}).
inline BigComplex quantum_integer(long l, const BigComplex& t) {
  BigComplex t2 = t * t;
  BigComplex t2inv = BigComplex(1) / t2;
  BigComplex den = t2 - t2inv;
  BigReal tol = abs(t2) * ulp_scale(static_cast<long>(working_precision()) - 8);
  if (abs(den) <= tol) throw DomainError("quantum_integer: t^4 = 1");
  if (l == 0) return BigComplex(0);
  if (l < 0) return -quantum_integer(-l, t);
  if (l == 1) return BigComplex(1);
  BigComplex num = pow(t2, l) - pow(t2inv, l);
  return num / den;
}

// Exact values of [l] at t_k: sin(pi l/k) / sin(pi/k).
inline BigReal quantum_integer_at_root(long l, long k) {
  BigReal a = pi() / k;
  return sin(a * l) / sin(a);
}

// ---------------------------------------------------------------------------
// Exact Laurent polynomials over Z
// ---------------------------------------------------------------------------

class IntLaurentPoly {
 public:
  IntLaurentPoly() = default;
  IntLaurentPoly(long lo, std::vector<mpz_class> coeffs) : lo_(lo), c_(std::move(coeffs)) { normalize(); }

  static IntLaurentPoly constant(const mpz_class& v) { return IntLaurentPoly(0, {v}); }
  static IntLaurentPoly monomial(const mpz_class& v, long e) { return IntLaurentPoly(e, {v}); }
  // Builds from (exponent, coefficient) pairs; repeated exponents accumulate.
  static IntLaurentPoly from_terms(const std::vector<std::pair<long, long>>& terms) {
    IntLaurentPoly r;
    for (auto [e, v] : terms) r += monomial(mpz_class(v), e);
    return r;
  }

  bool is_zero() const { return c_.empty(); }
  long lo() const { return is_zero() ? 0 : lo_; }
  long hi() const { return is_zero() ? -1 : lo_ + static_cast<long>(c_.size()) - 1; }
  // Width of the exponent range (degree for ordinary polynomials with lo = 0).
  long span() const { return is_zero() ? -1 : static_cast<long>(c_.size()) - 1; }
  const std::vector<mpz_class>& coefficients() const { return c_; }

  mpz_class coeff(long e) const {
    if (is_zero() || e < lo_ || e > hi()) return 0;
    return c_[static_cast<size_t>(e - lo_)];
  }
  const mpz_class& leading() const { return c_.back(); }
  const mpz_class& trailing() const { return c_.front(); }

  IntLaurentPoly shifted(long e) const {
    IntLaurentPoly r = *this;
    r.lo_ += e;
    return r;
  }
  // Multiplies by the monomial that moves the lowest exponent to 0.
  IntLaurentPoly normalized() const { return shifted(-lo()); }

  IntLaurentPoly derivative() const {
    if (is_zero()) return {};
    std::vector<mpz_class> d(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) d[i] = c_[i] * (lo_ + static_cast<long>(i));
    return IntLaurentPoly(lo_ - 1, std::move(d));
  }

  // p(1/X)
  IntLaurentPoly reflected() const {
    if (is_zero()) return {};
    std::vector<mpz_class> r(c_.rbegin(), c_.rend());
    return IntLaurentPoly(-hi(), std::move(r));
  }

  bool is_palindromic() const {
    for (size_t i = 0, j = c_.size(); i < j; ++i) {
      --j;
      if (i >= j) break;
      if (c_[i] != c_[j]) return false;
    }
    return true;
  }

  IntLaurentPoly& operator+=(const IntLaurentPoly& o) { return *this = *this + o; }
  IntLaurentPoly& operator-=(const IntLaurentPoly& o) { return *this = *this - o; }
  IntLaurentPoly& operator*=(const IntLaurentPoly& o) { return *this = *this * o; }

  friend IntLaurentPoly operator+(const IntLaurentPoly& a, const IntLaurentPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    long lo = std::min(a.lo_, b.lo_), hi = std::max(a.hi(), b.hi());
    std::vector<mpz_class> r(static_cast<size_t>(hi - lo + 1));
    for (size_t i = 0; i < a.c_.size(); ++i) r[static_cast<size_t>(a.lo_ - lo) + i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[static_cast<size_t>(b.lo_ - lo) + i] += b.c_[i];
    return IntLaurentPoly(lo, std::move(r));
  }
  IntLaurentPoly operator-() const {
    IntLaurentPoly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend IntLaurentPoly operator-(const IntLaurentPoly& a, const IntLaurentPoly& b) { return a + (-b); }
  friend IntLaurentPoly operator*(const IntLaurentPoly& a, const IntLaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return IntLaurentPoly(a.lo_ + b.lo_, std::move(r));
  }
  friend IntLaurentPoly operator*(const IntLaurentPoly& a, const mpz_class& s) {
    if (s == 0) return {};
    IntLaurentPoly r = a;
    for (auto& v : r.c_) v *= s;
    return r;
  }
  friend bool operator==(const IntLaurentPoly& a, const IntLaurentPoly& b) {
    return a.c_ == b.c_ && (a.is_zero() || a.lo_ == b.lo_);
  }
  friend bool operator!=(const IntLaurentPoly& a, const IntLaurentPoly& b) { return !(a == b); }

  IntLaurentPoly pow(unsigned e) const {
    IntLaurentPoly r = constant(1), base = *this;
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  // Exact value at an integer (requires lo >= 0 unless x = +-1).
  mpz_class eval(const mpz_class& x) const {
    if (lo() < 0 && x != 1 && x != -1) throw DomainError("IntLaurentPoly::eval: negative exponent at integer point");
    mpz_class acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    if (!is_zero()) {
      long shift = lo_ < 0 ? -lo_ : lo_;
      mpz_class m;
      mpz_pow_ui(m.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(shift));
      if (lo_ >= 0) acc *= m; else acc /= m;
    }
    return acc;
  }

  BigComplex eval(const BigComplex& x) const {
    BigComplex acc;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + BigComplex(BigReal(mpz_get_d(c_[i].get_mpz_t())));
    if (!is_zero()) acc = acc * wrt::pow(x, lo_);
    return acc;
  }
  // Evaluation at a BigComplex with exact big-integer coefficients.
  BigComplex eval_exact_coeffs(const BigComplex& x) const {
    BigComplex acc;
    for (size_t i = c_.size(); i-- > 0;) {
      BigReal ci;
      mpfr_set_z(ci.raw(), c_[i].get_mpz_t(), MPFR_RNDN);
      acc = acc * x + BigComplex(ci);
    }
    if (!is_zero()) acc = acc * wrt::pow(x, lo_);
    return acc;
  }

  std::string to_string(const std::string& var = "X") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
      const mpz_class& v = c_[i];
      if (v == 0) continue;
      long e = lo_ + static_cast<long>(i);
      mpz_class a = abs(v);
      if (first) { if (v < 0) os << "-"; }
      else os << (v < 0 ? " - " : " + ");
      first = false;
      if (e == 0) { os << a.get_str(); continue; }
      if (a != 1) os << a.get_str() << "*";
      os << var;
      if (e != 1) os << "^" << e;
    }
    return os.str();
  }

 private:
  void normalize() {
    size_t b = 0;
    while (b < c_.size() && c_[b] == 0) ++b;
    if (b == c_.size()) { c_.clear(); lo_ = 0; return; }
    size_t e = c_.size();
    while (c_[e - 1] == 0) --e;
    c_.erase(c_.begin() + static_cast<long>(e), c_.end());
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(b));
    lo_ += static_cast<long>(b);
  }

  long lo_ = 0;
  std::vector<mpz_class> c_;
};

// T_0 = 0, T_1 = 1, T_{l+1} + x T_l + T_{l-1} = 0, as polynomials in x.
inline IntLaurentPoly chebyshev_T(long l) {
  const IntLaurentPoly x = IntLaurentPoly::monomial(1, 1);
  IntLaurentPoly a;                                 // T_0
  IntLaurentPoly b = IntLaurentPoly::constant(1);   // T_1
  if (l == 0) return a;
  if (l > 0) {
    for (long i = 1; i < l; ++i) {
      IntLaurentPoly c = -(x * b) - a;
      a = std::move(b);
      b = std::move(c);
    }
    return b;
  }
  // Backwards: T_{l-1} = -x T_l - T_{l+1}.
  IntLaurentPoly up = b, cur = a;  // T_1, T_0
  for (long i = 0; i > l; --i) {
    IntLaurentPoly down = -(x * cur) - up;
    up = std::move(cur);
    cur = std::move(down);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Ordinary integer polynomials (IntLaurentPoly with lo >= 0)
// ---------------------------------------------------------------------------

namespace poly {

inline long degree(const IntLaurentPoly& p) { return p.hi(); }

inline IntLaurentPoly as_poly(const IntLaurentPoly& p) {
  if (p.lo() < 0) throw DomainError("poly: negative exponent");
  return p;
}

inline mpz_class content(const IntLaurentPoly& p) {
  mpz_class g = 0;
  for (const auto& v : p.coefficients()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

inline IntLaurentPoly divide_scalar_exact(const IntLaurentPoly& p, const mpz_class& s) {
  std::vector<mpz_class> c = p.coefficients();
  for (auto& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), s.get_mpz_t());
  return IntLaurentPoly(p.lo(), std::move(c));
}

// Primitive part with positive leading coefficient.
inline IntLaurentPoly primitive_part(const IntLaurentPoly& p) {
  if (p.is_zero()) return p;
  mpz_class g = content(p);
  if (p.leading() < 0) g = -g;
  return divide_scalar_exact(p, g);
}

// Dense coefficient vector indexed by exponent 0..deg.
inline std::vector<mpz_class> dense(const IntLaurentPoly& p) {
  IntLaurentPoly q = as_poly(p);
  if (q.is_zero()) return {};
  std::vector<mpz_class> d(static_cast<size_t>(q.hi() + 1));
  for (long e = q.lo(); e <= q.hi(); ++e) d[static_cast<size_t>(e)] = q.coeff(e);
  return d;
}

// lc(b)^{deg a - deg b + 1} a = Q b + R.
inline IntLaurentPoly pseudo_remainder(const IntLaurentPoly& a, const IntLaurentPoly& b) {
  if (b.is_zero()) throw DomainError("pseudo_remainder: division by zero");
  std::vector<mpz_class> r = dense(a), d = dense(b);
  long n = static_cast<long>(r.size()) - 1, m = static_cast<long>(d.size()) - 1;
  if (n < m) return a;
  const mpz_class lb = d.back();
  long e = n - m + 1;
  for (long top = n; top >= m; --top) {
    mpz_class lead = r[static_cast<size_t>(top)];
    for (long i = 0; i <= top; ++i) r[static_cast<size_t>(i)] *= lb;
    if (lead != 0) {
      for (long i = 0; i <= m; ++i) r[static_cast<size_t>(top - m + i)] -= lead * d[static_cast<size_t>(i)];
    }
    --e;
  }
  if (e > 0) {
    mpz_class f;
    mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
    for (auto& v : r) v *= f;
  }
  r.resize(static_cast<size_t>(m));
  return IntLaurentPoly(0, std::move(r));
}

// Exact quotient a / b over Z; throws if b does not divide a.
inline IntLaurentPoly divide_exact(const IntLaurentPoly& a, const IntLaurentPoly& b) {
  if (b.is_zero()) throw DomainError("divide_exact: division by zero");
  if (a.is_zero()) return {};
  // Shift Laurent exponents so both are ordinary polynomials.
  long sa = a.lo(), sb = b.lo();
  std::vector<mpz_class> r = dense(a.shifted(-sa)), d = dense(b.shifted(-sb));
  long n = static_cast<long>(r.size()) - 1, m = static_cast<long>(d.size()) - 1;
  if (n < m) throw DomainError("divide_exact: not divisible");
  std::vector<mpz_class> q(static_cast<size_t>(n - m + 1));
  const mpz_class& lb = d.back();
  for (long top = n; top >= m; --top) {
    mpz_class& lead = r[static_cast<size_t>(top)];
    if (lead == 0) continue;
    if (!mpz_divisible_p(lead.get_mpz_t(), lb.get_mpz_t())) throw DomainError("divide_exact: not divisible");
    mpz_class c;
    mpz_divexact(c.get_mpz_t(), lead.get_mpz_t(), lb.get_mpz_t());
    q[static_cast<size_t>(top - m)] = c;
    for (long i = 0; i <= m; ++i) r[static_cast<size_t>(top - m + i)] -= c * d[static_cast<size_t>(i)];
  }
  for (const auto& v : r)
    if (v != 0) throw DomainError("divide_exact: not divisible");
  return IntLaurentPoly(sa - sb, std::move(q));
}

inline bool divides(const IntLaurentPoly& b, const IntLaurentPoly& a) {
  try {
    divide_exact(a, b);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

// Primitive gcd over Z[X] with positive leading coefficient.
inline IntLaurentPoly gcd(IntLaurentPoly a, IntLaurentPoly b) {
  a = as_poly(a);
  b = as_poly(b);
  if (a.is_zero()) return primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  mpz_class ca = content(a), cb = content(b), cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  a = primitive_part(a);
  b = primitive_part(b);
  if (degree(a) < degree(b)) std::swap(a, b);
  while (!b.is_zero()) {
    IntLaurentPoly r = pseudo_remainder(a, b);
    a = std::move(b);
    b = r.is_zero() ? r : primitive_part(r);
  }
  return primitive_part(a) * cg;
}

inline mpz_class ipow(const mpz_class& b, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

// Resultant by the subresultant algorithm.
inline mpz_class resultant(IntLaurentPoly a, IntLaurentPoly b) {
  a = as_poly(a);
  b = as_poly(b);
  if (a.is_zero() || b.is_zero()) return 0;
  int s = 1;
  if (degree(a) < degree(b)) {
    std::swap(a, b);
    if ((degree(a) % 2 == 1) && (degree(b) % 2 == 1)) s = -1;
  }
  mpz_class ca = content(a), cb = content(b);
  a = divide_scalar_exact(a, ca);
  b = divide_scalar_exact(b, cb);
  mpz_class t = ipow(ca, degree(b)) * ipow(cb, degree(a));
  mpz_class g = 1, h = 1;
  while (true) {
    if (degree(b) == 0) break;
    long delta = degree(a) - degree(b);
    if ((degree(a) % 2 == 1) && (degree(b) % 2 == 1)) s = -s;
    IntLaurentPoly r = pseudo_remainder(a, b);
    if (r.is_zero()) return 0;
    a = std::move(b);
    b = divide_scalar_exact(r, g * ipow(h, delta));
    g = a.leading();
    // h <- h^{1-delta} g^delta
    if (delta == 0) {
      // h unchanged
    } else {
      mpz_class num = ipow(g, delta), den = ipow(h, delta - 1);
      mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
  }
  long da = degree(a);
  mpz_class num = ipow(b.leading(), da);
  mpz_class hh;
  if (da == 0) {
    hh = num * h;
  } else {
    mpz_class den = ipow(h, da - 1);
    mpz_divexact(hh.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  }
  return s * t * hh;
}

inline mpz_class discriminant(const IntLaurentPoly& f) {
  IntLaurentPoly p = as_poly(f);
  long n = degree(p);
  if (n < 1) throw DomainError("discriminant: degree < 1");
  mpz_class r = resultant(p, p.derivative());
  mpz_class d;
  mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), p.leading().get_mpz_t());
  if ((n * (n - 1) / 2) % 2 == 1) d = -d;
  return d;
}

// Squarefree factorization (Yun): returns pairs (factor, multiplicity), factors primitive.
inline std::vector<std::pair<IntLaurentPoly, int>> squarefree_decomposition(const IntLaurentPoly& f) {
  std::vector<std::pair<IntLaurentPoly, int>> out;
  IntLaurentPoly p = primitive_part(as_poly(f));
  if (degree(p) < 1) return out;
  IntLaurentPoly a0 = gcd(p, p.derivative());
  IntLaurentPoly b = divide_exact(p, a0);
  IntLaurentPoly c = divide_exact(p.derivative(), a0);
  // Yun works over a field; scale to stay in Z by working with primitive parts.
  IntLaurentPoly d = c - b.derivative();
  int i = 1;
  while (degree(b) > 0) {
    IntLaurentPoly a = gcd(b, d);
    if (degree(a) > 0) out.emplace_back(primitive_part(a), i);
    IntLaurentPoly b2 = divide_exact(b, a);
    IntLaurentPoly c2 = divide_exact(d, a);
    b = std::move(b2);
    d = c2 - b.derivative();
    ++i;
  }
  return out;
}

// Sign of p(num/den) with den > 0, computed exactly.
inline int sign_at(const IntLaurentPoly& p, const mpq_class& x) {
  if (p.is_zero()) return 0;
  const mpz_class& a = x.get_num();
  const mpz_class& b = x.get_den();
  long n = degree(p);
  mpz_class acc = 0;
  mpz_class apow = 1;
  std::vector<mpz_class> bpow(static_cast<size_t>(n + 1));
  bpow[0] = 1;
  for (long j = 1; j <= n; ++j) bpow[static_cast<size_t>(j)] = bpow[static_cast<size_t>(j - 1)] * b;
  for (long j = 0; j <= n; ++j) {
    acc += p.coeff(j) * apow * bpow[static_cast<size_t>(n - j)];
    apow *= a;
  }
  return sgn(acc);
}

inline std::vector<IntLaurentPoly> sturm_sequence(const IntLaurentPoly& f) {
  std::vector<IntLaurentPoly> s;
  s.push_back(primitive_part(as_poly(f)));
  s.push_back(primitive_part(s[0].derivative()));
  while (!s.back().is_zero() && degree(s.back()) > 0) {
    const IntLaurentPoly& a = s[s.size() - 2];
    const IntLaurentPoly& b = s.back();
    IntLaurentPoly r = pseudo_remainder(a, b);
    long e = degree(a) - degree(b) + 1;
    // prem = lc(b)^e a - Q b; the Sturm step needs -rem, so fix the sign of lc^e.
    bool flip = (b.leading() < 0) && (e % 2 == 1);
    if (r.is_zero()) break;
    mpz_class c = content(r);
    r = divide_scalar_exact(r, c);
    s.push_back(flip ? r : -r);
  }
  if (s.back().is_zero()) s.pop_back();
  return s;
}

inline int sign_variations(const std::vector<IntLaurentPoly>& seq, const mpq_class& x) {
  int v = 0, last = 0;
  for (const auto& p : seq) {
    int sg = sign_at(p, x);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++v;
    last = sg;
  }
  return v;
}

struct RealRootInterval {
  mpq_class lo;
  mpq_class hi;  // lo == hi means the root is exactly the rational lo
  int multiplicity = 1;
};

// Isolates the real roots of a squarefree polynomial inside the open interval (a, b),
// assuming f(a) != 0 and f(b) != 0.
inline std::vector<RealRootInterval> isolate_real_roots(const IntLaurentPoly& f, const mpq_class& a, const mpq_class& b,
                                                        const mpq_class& width = mpq_class(1, 1 << 20)) {
  std::vector<RealRootInterval> out;
  auto seq = sturm_sequence(f);
  struct Job { mpq_class lo, hi; int vlo, vhi; };
  std::vector<Job> stack{{a, b, sign_variations(seq, a), sign_variations(seq, b)}};
  while (!stack.empty()) {
    Job j = stack.back();
    stack.pop_back();
    int count = j.vlo - j.vhi;
    if (count <= 0) continue;
    if (count == 1 && j.hi - j.lo <= width) {
      out.push_back({j.lo, j.hi, 1});
      continue;
    }
    mpq_class mid = (j.lo + j.hi) / 2;
    if (sign_at(f, mid) == 0) {
      out.push_back({mid, mid, 1});
      // Step off the exact root to keep Sturm endpoints non-roots.
      mpq_class eps = (j.hi - j.lo) / 1024;
      while (sign_at(f, mid - eps) == 0 || sign_at(f, mid + eps) == 0 ||
             sign_variations(seq, mid - eps) - sign_variations(seq, mid + eps) != 1)
        eps /= 2;
      stack.push_back({j.lo, mid - eps, j.vlo, sign_variations(seq, mid - eps)});
      stack.push_back({mid + eps, j.hi, sign_variations(seq, mid + eps), j.vhi});
      continue;
    }
    int vm = sign_variations(seq, mid);
    stack.push_back({mid, j.hi, vm, j.vhi});
    stack.push_back({j.lo, mid, j.vlo, vm});
  }
  std::sort(out.begin(), out.end(), [](const RealRootInterval& x, const RealRootInterval& y) { return x.lo < y.lo; });
  return out;
}

}  // namespace poly

// ---------------------------------------------------------------------------
// Unit-circle roots of palindromic polynomials
// ---------------------------------------------------------------------------

struct UnitCircleRoot {
  // Interval for Y = X + 1/X; X = exp(+-i acos(Y/2)).
  mpq_class y_lo;
  mpq_class y_hi;
  int multiplicity = 1;  // multiplicity of each X root in the original polynomial
  int x_count = 2;       // 2 for a conjugate pair, 1 for X = +-1
  double y_approx() const { return (y_lo.get_d() + y_hi.get_d()) / 2; }
};

// Reduces a palindromic polynomial of even span 2n to g(Y) with X^{-n} p(X) = g(X + 1/X).
inline IntLaurentPoly palindromic_to_y(const IntLaurentPoly& p) {
  long span = p.span();
  if (span % 2 != 0) throw DomainError("palindromic_to_y: odd span");
  long n = span / 2;
  long centre = p.lo() + n;
  // D_0 = 2 is not used; D_1 = Y, D_{j+1} = Y D_j - D_{j-1} with D_0 = 2.
  const IntLaurentPoly y = IntLaurentPoly::monomial(1, 1);
  IntLaurentPoly g = IntLaurentPoly::constant(p.coeff(centre));
  IntLaurentPoly dprev = IntLaurentPoly::constant(2), dcur = y;
  for (long j = 1; j <= n; ++j) {
    g += dcur * p.coeff(centre + j);
    IntLaurentPoly dnext = y * dcur - dprev;
    dprev = std::move(dcur);
    dcur = std::move(dnext);
  }
  return g;
}

inline std::vector<UnitCircleRoot> isolate_unit_circle_roots(const IntLaurentPoly& input) {
  if (input.is_zero()) throw DomainError("isolate_unit_circle_roots: zero polynomial");
  if (!input.is_palindromic()) throw DomainError("isolate_unit_circle_roots: polynomial is not palindromic");
  std::vector<UnitCircleRoot> out;
  IntLaurentPoly p = input.normalized();
  const IntLaurentPoly xp1 = IntLaurentPoly::from_terms({{1, 1}, {0, 1}});
  const IntLaurentPoly xm1 = IntLaurentPoly::from_terms({{1, 1}, {0, -1}});
  int m_minus = 0, m_plus = 0;
  while (p.span() > 0 && p.eval(mpz_class(-1)) == 0) { p = poly::divide_exact(p, xp1); ++m_minus; }
  while (p.span() > 0 && p.eval(mpz_class(1)) == 0) { p = poly::divide_exact(p, xm1); ++m_plus; }
  if (m_minus > 0) out.push_back({mpq_class(-2), mpq_class(-2), m_minus, 1});
  if (p.span() > 0) {
    if (!p.is_palindromic()) throw DomainError("isolate_unit_circle_roots: reduction lost palindromy");
    IntLaurentPoly g = palindromic_to_y(p);
    for (const auto& [factor, mult] : poly::squarefree_decomposition(g)) {
      for (const auto& r : poly::isolate_real_roots(factor, mpq_class(-2), mpq_class(2)))
        out.push_back({r.lo, r.hi, mult, 2});
    }
  }
  if (m_plus > 0) out.push_back({mpq_class(2), mpq_class(2), m_plus, 1});
  std::sort(out.begin(), out.end(), [](const UnitCircleRoot& a, const UnitCircleRoot& b) { return a.y_lo < b.y_lo; });
  return out;
}

// Total number of X-roots on |X| = 1 counted with multiplicity.
inline long unit_circle_root_count(const std::vector<UnitCircleRoot>& roots, bool with_multiplicity = true) {
  long n = 0;
  for (const auto& r : roots) n += static_cast<long>(r.x_count) * (with_multiplicity ? r.multiplicity : 1);
  return n;
}

}  // namespace wrt

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace wrt {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each worker inherits the
// caller's working precision. The first exception is rethrown after joining.
template <class Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  const mpfr_prec_t prec = working_precision();
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    PrecisionScope scope(prec);
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  int count = static_cast<int>(std::min<long>(threads, n));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace wrt
