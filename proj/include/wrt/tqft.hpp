#pragma once

#include <array>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "wrt/knotstate.hpp"

namespace wrt {

using Matrix = std::vector<std::vector<BigComplex>>;

inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline long ceil_div(long a, long b) { return -floor_div(-a, b); }

struct Slope {
  long p = 1;
  long q = 0;

  Slope() = default;
  Slope(long pp, long qq) : p(pp), q(qq) {
    if (std::gcd(p, q) != 1) throw DomainError("slope (" + std::to_string(pp) + "," + std::to_string(qq) + ") is not coprime");
    if (p < 0 || (p == 0 && q < 0)) {
      p = -p;
      q = -q;
    }
  }
  std::string str() const { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }
  friend bool operator==(const Slope& a, const Slope& b) { return a.p == b.p && a.q == b.q; }
  friend bool operator<(const Slope& a, const Slope& b) { return a.p != b.p ? a.p < b.p : a.q < b.q; }
};

using IntMatrix2 = std::array<std::array<long, 2>, 2>;

inline IntMatrix2 mat_mul(const IntMatrix2& a, const IntMatrix2& b) {
  IntMatrix2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

// Word T^{-a_1} S T^{-a_2} S ... T^{-a_n} S from the negative-regular continued
// fraction p/q = a_1 - 1/(a_2 - 1/(...)). The integer image uses
// S = [[0,-1],[1,0]] and T = [[1,-1],[0,1]].
struct MappingClass {
  std::vector<long> a;

  static MappingClass for_slope(long p, long q) {
    MappingClass m;
    while (q != 0) {
      long ai = ceil_div(p, q);
      m.a.push_back(ai);
      long nq = ai * q - p;
      p = q;
      q = nq;
    }
    return m;
  }
  static MappingClass for_slope(const Slope& s) { return for_slope(s.p, s.q); }

  IntMatrix2 matrix() const {
    IntMatrix2 r{{{1, 0}, {0, 1}}};
    const IntMatrix2 S{{{0, -1}, {1, 0}}};
    for (long ai : a) {
      IntMatrix2 tpow{{{1, ai}, {0, 1}}};
      r = mat_mul(r, mat_mul(tpow, S));
    }
    return r;
  }
  std::string str() const {
    if (a.empty()) return "id";
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) {
      if (i) s += " ";
      s += "T^" + std::to_string(-a[i]) + " S";
    }
    return s;
  }
};

// S_{ml} = e^{-i pi m l / k} / sqrt(2k).
inline Matrix rep_S(long k) {
  if (k < 2) throw DomainError("rep_S: k must be >= 2");
  UnitRoot root(k);
  const long n = 2 * k;
  BigReal f = BigReal(1) / sqrt(BigReal(n));
  Matrix m(static_cast<size_t>(n), std::vector<BigComplex>(static_cast<size_t>(n)));
  for (long a = 0; a < n; ++a)
    for (long b = 0; b < n; ++b) m[static_cast<size_t>(a)][static_cast<size_t>(b)] = root.q_pow(-(a * b % n)) * f;
  return m;
}

// T = diag e^{i pi l^2 / 2k}.
inline Matrix rep_T(long k) {
  if (k < 2) throw DomainError("rep_T: k must be >= 2");
  UnitRoot root(k);
  const long n = 2 * k;
  Matrix m(static_cast<size_t>(n), std::vector<BigComplex>(static_cast<size_t>(n)));
  for (long l = 0; l < n; ++l) m[static_cast<size_t>(l)][static_cast<size_t>(l)] = root.eighth(l * l % (4 * k));
  return m;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  size_t n = a.size();
  Matrix r(n, std::vector<BigComplex>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < n; ++l) {
      if (a[i][l].re().is_zero() && a[i][l].im().is_zero()) continue;
      for (size_t j = 0; j < n; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

inline Matrix adjoint(const Matrix& a) {
  size_t n = a.size();
  Matrix r(n, std::vector<BigComplex>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r[i][j] = conj(a[j][i]);
  return r;
}

inline StateVector apply_S(const StateVector& v, const UnitRoot& root) {
  const long k = v.k, n = 2 * k;
  StateVector out = make_state(k);
  BigReal f = BigReal(1) / sqrt(BigReal(n));
  for (long l = 0; l < n; ++l) {
    const BigComplex& c = v.at(l);
    if (c.re().is_zero() && c.im().is_zero()) continue;
    BigComplex cf = c * f;
    for (long m = 0; m < n; ++m) out.at(m) += root.q_pow(-(m * l % n)) * cf;
  }
  out.alternating = v.alternating;
  return out;
}

// T^e.
inline StateVector apply_T(const StateVector& v, long e, const UnitRoot& root) {
  const long k = v.k, n = 2 * k;
  StateVector out = v;
  for (long l = 0; l < n; ++l) {
    long ex = ((e % (4 * k)) * (l * l % (4 * k))) % (4 * k);
    out.at(l) = v.at(l) * root.eighth(ex);
  }
  return out;
}

inline StateVector apply_word(const MappingClass& w, StateVector v) {
  if (w.a.empty()) return v;
  UnitRoot root(v.k);
  for (auto it = w.a.rbegin(); it != w.a.rend(); ++it) {
    v = apply_S(v, root);
    v = apply_T(v, -*it, root);
  }
  return v;
}

// e_l = (Psi_l - Psi_{-l}) / sqrt 2.
inline StateVector colored_state(long l, long k) {
  if (l <= 0 || l >= k) throw DomainError("colored_state: need 0 < l < k");
  StateVector s = make_state(k);
  BigReal r = BigReal(1) / sqrt(BigReal(2));
  s.at(l) = BigComplex(r);
  s.at(-l) = BigComplex(-r);
  s.alternating = true;
  return s;
}

// Image of the vacuum e_1 under the word carrying (1,0) to the slope.
inline StateVector solid_torus_state(const Slope& slope, long k) {
  return apply_word(MappingClass::for_slope(slope), colored_state(1, k));
}

inline const char* anomaly_convention() {
  return "fixed: S_ml = exp(-i pi m l/k)/sqrt(2k), T = diag exp(i pi l^2/2k), word prod(T^-a S) e_1, "
         "pairing sum c_l conj(n_l), no framing correction";
}

inline BigComplex wrt_invariant(const StateVector& knot_state, const Slope& slope) {
  return inner_product(knot_state.c, solid_torus_state(slope, knot_state.k).c);
}

inline BigComplex wrt_invariant(const Slope& slope, long k, KnotId knot = KnotId::FigureEight) {
  if (k < 3) throw DomainError("wrt_invariant: k must be >= 3");
  return wrt_invariant(build_state(knot, k), slope);
}

// Z_{k,l}: pairing with e_l transported by the frame; only the image of the
// meridian (first column) enters, up to a phase.
inline BigComplex colored_wrt(const StateVector& knot_state, const IntMatrix2& frame, long l) {
  long det = frame[0][0] * frame[1][1] - frame[0][1] * frame[1][0];
  if (det != 1) throw DomainError("colored_wrt: frame not in SL2(Z)");
  Slope mu(frame[0][0], frame[1][0]);
  StateVector e = apply_word(MappingClass::for_slope(mu), colored_state(l, knot_state.k));
  return inner_product(knot_state.c, e.c);
}

inline IntMatrix2 identity_frame() { return {{{1, 0}, {0, 1}}}; }

struct WrtSeries {
  Slope slope;
  KnotId knot = KnotId::FigureEight;
  std::map<long, BigComplex> entries;
  std::string anomaly = anomaly_convention();
};

inline WrtSeries wrt_series(const Slope& slope, const std::vector<long>& ks, int threads = 1,
                            KnotId knot = KnotId::FigureEight) {
  WrtSeries s;
  s.slope = slope;
  s.knot = knot;
  std::vector<BigComplex> vals(ks.size());
  parallel_for(static_cast<long>(ks.size()), threads, [&](long i) {
    vals[static_cast<size_t>(i)] = wrt_invariant(slope, ks[static_cast<size_t>(i)], knot);
  });
  for (size_t i = 0; i < ks.size(); ++i) s.entries[ks[i]] = vals[i];
  return s;
}

}  // namespace wrt
