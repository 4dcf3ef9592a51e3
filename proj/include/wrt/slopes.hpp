#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wrt/numerics.hpp"
#include "wrt/tqft.hpp"

namespace wrt {

// Phi_{p,q} = X^{2p} - X^{p+4q} + X^{p+2q} + 2X^p + X^{p-2q} - X^{p-4q} + 1,
// shifted to nonnegative exponents. Phi(e^{2 pi i t}) = 2 X^p F(pt, qt).
inline IntLaurentPoly build_phi(const Slope& s) {
  const long p = s.p, q = s.q;
  IntLaurentPoly phi = IntLaurentPoly::from_terms(
      {{2 * p, 1}, {p + 4 * q, -1}, {p + 2 * q, 1}, {p, 2}, {p - 2 * q, 1}, {p - 4 * q, -1}, {0, 1}});
  return phi.normalized();
}

struct H1Verdict {
  bool pass = true;
  long p_mod_4 = 0;
};

inline H1Verdict check_h1(const Slope& s) { return {s.p % 4 != 0, ((s.p % 4) + 4) % 4}; }

// Removes the factors carried by the exceptional points: (X+1)^2 when p is odd,
// (X^2+1)^2 when p = 0 mod 4.
inline IntLaurentPoly strip_exceptional(const IntLaurentPoly& phi, const Slope& s) {
  IntLaurentPoly r = phi;
  if (s.p % 2 != 0) {
    IntLaurentPoly f = IntLaurentPoly::from_terms({{1, 1}, {0, 1}});
    r = poly::divide_exact(r, f * f);
  } else if (s.p % 4 == 0) {
    IntLaurentPoly f = IntLaurentPoly::from_terms({{2, 1}, {0, 1}});
    r = poly::divide_exact(r, f * f);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Arithmetic modulo a prime
// ---------------------------------------------------------------------------

namespace modp {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}
inline uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}
inline uint64_t inv(uint64_t a, uint64_t m) {
  if (a % m == 0) throw DomainError("modp::inv: zero");
  return powmod(a, m - 2, m);
}
inline bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

using Poly = std::vector<uint64_t>;  // dense, index = exponent

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly reduce(const IntLaurentPoly& f, uint64_t m) {
  IntLaurentPoly g = poly::as_poly(f);
  Poly r(static_cast<size_t>(g.hi() + 1), 0);
  mpz_class mm(static_cast<unsigned long>(m)), v;
  for (long e = g.lo(); e <= g.hi(); ++e) {
    mpz_fdiv_r(v.get_mpz_t(), g.coeff(e).get_mpz_t(), mm.get_mpz_t());
    r[static_cast<size_t>(e)] = v.get_ui();
  }
  trim(r);
  return r;
}

inline Poly derivative(const Poly& a, uint64_t m) {
  if (a.size() <= 1) return {};
  Poly d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = mulmod(a[i], i % m, m);
  trim(d);
  return d;
}

// a mod b in place.
inline void rem(Poly& a, const Poly& b, uint64_t m) {
  uint64_t li = inv(b.back(), m);
  while (a.size() >= b.size()) {
    uint64_t c = mulmod(a.back(), li, m);
    size_t off = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[off + i] = (a[off + i] + m - mulmod(c, b[i], m)) % m;
    trim(a);
    if (a.empty()) break;
  }
}

// Res(a, b) over F_m with a of formal degree deg(a) and b of formal degree db.
inline uint64_t resultant(Poly a, Poly b, long db, uint64_t m) {
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return 0;
  long da = static_cast<long>(a.size()) - 1;
  // Res_{da,db}(a,b) = lc(a)^{db - deg b} Res(a,b) via the product formula.
  uint64_t scale = powmod(a.back(), static_cast<uint64_t>(db - (static_cast<long>(b.size()) - 1)), m);
  uint64_t res = 1;
  while (true) {
    long n = static_cast<long>(a.size()) - 1, k = static_cast<long>(b.size()) - 1;
    if (k == 0) {
      res = mulmod(res, powmod(b[0], static_cast<uint64_t>(n), m), m);
      break;
    }
    Poly r = a;
    rem(r, b, m);
    if (r.empty()) return 0;
    long dr = static_cast<long>(r.size()) - 1;
    // Res(a,b) = (-1)^{nk} lc(b)^{n - dr} Res(b, r)
    if ((n * k) % 2 == 1) res = (m - res) % m;
    res = mulmod(res, powmod(b.back(), static_cast<uint64_t>(n - dr), m), m);
    a = std::move(b);
    b = std::move(r);
  }
  (void)da;
  return mulmod(res, scale, m);
}

// disc(f) mod m, for lc(f) nonzero mod m.
inline uint64_t discriminant(const IntLaurentPoly& f, uint64_t m) {
  Poly a = reduce(f, m);
  long n = poly::degree(poly::as_poly(f));
  if (static_cast<long>(a.size()) - 1 != n) throw DomainError("modp::discriminant: prime divides leading coefficient");
  Poly d = derivative(a, m);
  uint64_t r = resultant(a, d, n - 1, m);
  r = mulmod(r, inv(a.back(), m), m);
  if ((n * (n - 1) / 2) % 2 == 1) r = (m - r) % m;
  return r;
}

}  // namespace modp

// ---------------------------------------------------------------------------
// F_{l^2} = F_l[theta]/(theta^2 - n), n the smallest positive non-residue
// ---------------------------------------------------------------------------

class Fq2Elem {
 public:
  Fq2Elem(uint64_t a, uint64_t b, uint64_t l) : a_(a % l), b_(b % l), l_(l), n_(nonresidue(l)) {}
  static Fq2Elem from_int(long v, uint64_t l) {
    long r = v % static_cast<long>(l);
    if (r < 0) r += static_cast<long>(l);
    return Fq2Elem(static_cast<uint64_t>(r), 0, l);
  }

  static uint64_t nonresidue(uint64_t l) {
    if (l == 2 || !modp::is_prime(l)) throw DomainError("Fq2Elem: l must be an odd prime");
    for (uint64_t n = 2; n < l; ++n)
      if (modp::powmod(n, (l - 1) / 2, l) == l - 1) return n;
    throw DomainError("Fq2Elem: no non-residue");
  }

  uint64_t a() const { return a_; }
  uint64_t b() const { return b_; }
  uint64_t prime() const { return l_; }
  uint64_t theta_square() const { return n_; }

  friend Fq2Elem operator+(const Fq2Elem& x, const Fq2Elem& y) { return {(x.a_ + y.a_) % x.l_, (x.b_ + y.b_) % x.l_, x.l_}; }
  friend Fq2Elem operator-(const Fq2Elem& x, const Fq2Elem& y) {
    return {(x.a_ + x.l_ - y.a_) % x.l_, (x.b_ + x.l_ - y.b_) % x.l_, x.l_};
  }
  friend Fq2Elem operator*(const Fq2Elem& x, const Fq2Elem& y) {
    const uint64_t l = x.l_;
    uint64_t a = (modp::mulmod(x.a_, y.a_, l) + modp::mulmod(modp::mulmod(x.b_, y.b_, l), x.n_, l)) % l;
    uint64_t b = (modp::mulmod(x.a_, y.b_, l) + modp::mulmod(x.b_, y.a_, l)) % l;
    return {a, b, l};
  }
  friend bool operator==(const Fq2Elem& x, const Fq2Elem& y) { return x.a_ == y.a_ && x.b_ == y.b_ && x.l_ == y.l_; }
  friend bool operator!=(const Fq2Elem& x, const Fq2Elem& y) { return !(x == y); }

  bool is_zero() const { return a_ == 0 && b_ == 0; }

  Fq2Elem inverse() const {
    // (a + b theta)^{-1} = (a - b theta) / (a^2 - n b^2)
    uint64_t nrm = (modp::mulmod(a_, a_, l_) + l_ - modp::mulmod(modp::mulmod(b_, b_, l_), n_, l_)) % l_;
    uint64_t ni = modp::inv(nrm, l_);
    return {modp::mulmod(a_, ni, l_), modp::mulmod((l_ - b_) % l_, ni, l_), l_};
  }

  Fq2Elem pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Fq2Elem r(1, 0, l_), base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  // Square root of an element of F_l inside F_{l^2}.
  static Fq2Elem sqrt_of(long v, uint64_t l) {
    long r = v % static_cast<long>(l);
    if (r < 0) r += static_cast<long>(l);
    uint64_t u = static_cast<uint64_t>(r);
    if (u == 0) return Fq2Elem(0, 0, l);
    for (uint64_t x = 1; x < l; ++x)
      if (modp::mulmod(x, x, l) == u) return Fq2Elem(x, 0, l);
    // u = c^2 n
    uint64_t n = nonresidue(l), target = modp::mulmod(u, modp::inv(n, l), l);
    for (uint64_t c = 1; c < l; ++c)
      if (modp::mulmod(c, c, l) == target) return Fq2Elem(0, c, l);
    throw DomainError("Fq2Elem::sqrt_of: no square root");
  }

 private:
  uint64_t a_, b_, l_, n_;
};

// A root of 2 xi^2 - xi + 2 = 0 in F_{l^2}: xi = (1 + sqrt(-15)) / 4.
inline Fq2Elem modl_xi(uint64_t l) {
  Fq2Elem s = Fq2Elem::sqrt_of(-15, l);
  Fq2Elem quarter = Fq2Elem::from_int(static_cast<long>(modp::inv(4, l)), l);
  return (Fq2Elem::from_int(1, l) + s) * quarter;
}

// Conclusive iff 2^{4q} is neither xi^p nor xi^{-p}.
inline bool modl_test(long p, long q, long l) {
  if (l <= 2 || !modp::is_prime(static_cast<uint64_t>(l))) throw DomainError("modl_test: l must be an odd prime");
  if (p % l != 0) throw DomainError("modl_test: l does not divide p");
  const uint64_t ul = static_cast<uint64_t>(l);
  Fq2Elem xi = modl_xi(ul);
  Fq2Elem chk = Fq2Elem::from_int(2, ul) * xi * xi - xi + Fq2Elem::from_int(2, ul);
  if (!chk.is_zero()) throw DomainError("modl_test: xi is not a root");
  // A common root of Phi and Phi' has X^{2q} = xi and X^p + X^{-p} = -17/4,
  // so X^p is -4 or -1/4 and xi^p = 2^{+-4q}.
  Fq2Elem two4q = Fq2Elem::from_int(2, ul).pow(4 * q);
  return two4q != xi.pow(p) && two4q != xi.pow(-p);
}

inline std::vector<long> odd_prime_factors(long n) {
  std::vector<long> r;
  n = std::abs(n);
  while (n % 2 == 0 && n > 0) n /= 2;
  for (long d = 3; d * d <= n; d += 2)
    if (n % d == 0) {
      r.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) r.push_back(n);
  return r;
}

// ---------------------------------------------------------------------------
// H'2 verdicts
// ---------------------------------------------------------------------------

enum class H2Method { Auto, SlopeBound, Discriminant, ModL, Exact };
enum class H2Status { ProvedBySlopeBound, ProvedByDiscriminant, ProvedByModL, ProvedExact, Refuted, Inconclusive };

inline std::string to_string(H2Status s) {
  switch (s) {
    case H2Status::ProvedBySlopeBound: return "ProvedBySlopeBound";
    case H2Status::ProvedByDiscriminant: return "ProvedByDiscriminant";
    case H2Status::ProvedByModL: return "ProvedByModL";
    case H2Status::ProvedExact: return "ProvedExact";
    case H2Status::Refuted: return "Refuted";
    case H2Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}
inline std::string to_string(H2Method m) {
  switch (m) {
    case H2Method::Auto: return "auto";
    case H2Method::SlopeBound: return "slope-bound";
    case H2Method::Discriminant: return "discriminant";
    case H2Method::ModL: return "modl";
    case H2Method::Exact: return "exact";
  }
  return "?";
}
inline H2Method parse_h2_method(const std::string& s) {
  if (s == "auto") return H2Method::Auto;
  if (s == "slope-bound" || s == "slopebound" || s == "bound") return H2Method::SlopeBound;
  if (s == "discriminant" || s == "disc") return H2Method::Discriminant;
  if (s == "modl" || s == "mod-l") return H2Method::ModL;
  if (s == "exact") return H2Method::Exact;
  throw DomainError("unknown H2 method: " + s);
}

inline bool is_proved(H2Status s) {
  return s == H2Status::ProvedBySlopeBound || s == H2Status::ProvedByDiscriminant || s == H2Status::ProvedByModL ||
         s == H2Status::ProvedExact;
}

struct H2Verdict {
  H2Status status = H2Status::Inconclusive;
  std::string evidence;
  long modl_prime = 0;
  std::optional<UnitCircleRoot> root;  // witness when refuted
};

inline constexpr uint64_t kDiscPrime1 = 2147483647ULL;  // 2^31 - 1
inline constexpr uint64_t kDiscPrime2 = 4294967291ULL;  // largest prime below 2^32

inline H2Verdict h2_slope_bound(const Slope& s) {
  H2Verdict v;
  // p/q < 2 sqrt 5 with q > 0, compared exactly as p^2 < 20 q^2.
  long aq = std::abs(s.q);
  if (aq > 0 && s.p * s.p < 20 * aq * aq) {
    v.status = H2Status::ProvedBySlopeBound;
    v.evidence = "p^2 = " + std::to_string(s.p * s.p) + " < 20 q^2 = " + std::to_string(20 * aq * aq);
  } else {
    v.evidence = "p/|q| >= 2 sqrt 5";
  }
  return v;
}

inline H2Verdict h2_exact(const Slope& s) {
  H2Verdict v;
  IntLaurentPoly st = strip_exceptional(build_phi(s), s);
  if (poly::degree(st) < 1) {
    v.status = H2Status::ProvedExact;
    v.evidence = "stripped polynomial is constant";
    return v;
  }
  IntLaurentPoly g = poly::gcd(st, st.derivative());
  if (poly::degree(g) < 1) {
    v.status = H2Status::ProvedExact;
    v.evidence = "gcd(Phi, Phi') = 1";
    return v;
  }
  IntLaurentPoly gn = g.normalized();
  if (!gn.is_palindromic()) {
    IntLaurentPoly r = gn.reflected().normalized();
    if (r == -gn) gn = gn * mpz_class(-1);
    if (!gn.is_palindromic()) throw DomainError("h2_exact: repeated part is not self-reciprocal");
  }
  auto roots = isolate_unit_circle_roots(gn);
  if (roots.empty()) {
    v.status = H2Status::ProvedExact;
    v.evidence = "repeated factor of degree " + std::to_string(poly::degree(gn)) + " has no unit-circle roots";
  } else {
    v.status = H2Status::Refuted;
    v.root = roots.front();
    v.evidence = "multiple unit-circle root with X + 1/X in [" + roots.front().y_lo.get_str() + ", " +
                 roots.front().y_hi.get_str() + "]";
  }
  return v;
}

inline H2Verdict h2_discriminant(const Slope& s) {
  H2Verdict v;
  IntLaurentPoly st = strip_exceptional(build_phi(s), s);
  if (poly::degree(st) < 1) {
    v.status = H2Status::ProvedByDiscriminant;
    v.evidence = "stripped polynomial is constant";
    return v;
  }
  uint64_t d1 = modp::discriminant(st, kDiscPrime1);
  uint64_t d2 = modp::discriminant(st, kDiscPrime2);
  if (d1 != 0 && d2 != 0) {
    v.status = H2Status::ProvedByDiscriminant;
    v.evidence = "disc = " + std::to_string(d1) + " mod " + std::to_string(kDiscPrime1) + ", " + std::to_string(d2) +
                 " mod " + std::to_string(kDiscPrime2);
    return v;
  }
  mpz_class d = poly::discriminant(st);
  if (d != 0) {
    v.status = H2Status::ProvedByDiscriminant;
    v.evidence = "exact discriminant nonzero (" + std::to_string(mpz_sizeinbase(d.get_mpz_t(), 10)) + " digits)";
  } else {
    v.status = H2Status::Inconclusive;
    v.evidence = "discriminant vanishes";
  }
  return v;
}

inline H2Verdict h2_modl(const Slope& s) {
  auto primes = odd_prime_factors(s.p);
  if (primes.empty()) throw DomainError("ModL method inapplicable: p has no odd prime factor");
  H2Verdict v;
  for (long l : primes) {
    if (modl_test(s.p, s.q, l)) {
      v.status = H2Status::ProvedByModL;
      v.modl_prime = l;
      v.evidence = "2^{4q} != xi^{+-p} in F_{" + std::to_string(l) + "^2}";
      return v;
    }
  }
  v.status = H2Status::Inconclusive;
  v.evidence = "2^{4q} = xi^{+-p} for every odd prime factor of p";
  return v;
}

inline H2Verdict check_h2(const Slope& s, H2Method method) {
  switch (method) {
    case H2Method::SlopeBound: return h2_slope_bound(s);
    case H2Method::Discriminant: return h2_discriminant(s);
    case H2Method::ModL: return h2_modl(s);
    case H2Method::Exact: return h2_exact(s);
    case H2Method::Auto: {
      H2Verdict v = h2_slope_bound(s);
      if (is_proved(v.status)) return v;
      v = h2_discriminant(s);
      if (is_proved(v.status)) return v;
      return h2_exact(s);
    }
  }
  return {};
}

struct SlopeReport {
  Slope slope;
  H1Verdict h1;
  H2Method method = H2Method::Auto;
  H2Verdict h2;

  bool hypotheses_hold() const { return h1.pass && is_proved(h2.status); }
  std::string summary() const {
    std::string s = "slope " + slope.str() + ": ";
    s += h1.pass ? "H1 holds (p ≡ " + std::to_string(h1.p_mod_4) + " mod 4)" : "H1 fails: p ≡ 0 mod 4";
    s += "; H2 " + to_string(h2.status);
    if (!h2.evidence.empty()) s += " (" + h2.evidence + ")";
    return s;
  }
};

inline SlopeReport analyze_slope(const Slope& s, H2Method method = H2Method::Auto) {
  SlopeReport r;
  r.slope = s;
  r.h1 = check_h1(s);
  r.method = method;
  r.h2 = check_h2(s, method);
  return r;
}

class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(SlopeReport r) : std::runtime_error(r.summary()), report_(std::move(r)) {}
  const SlopeReport& report() const { return report_; }

 private:
  SlopeReport report_;
};

}  // namespace wrt
