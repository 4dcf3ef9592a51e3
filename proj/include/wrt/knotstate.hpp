#pragma once

#include <vector>

#include "wrt/jones.hpp"
#include "wrt/quantization.hpp"

namespace wrt {

struct StateVector {
  long k = 0;
  std::vector<BigComplex> c;  // coefficients against Psi_0 .. Psi_{2k-1}
  bool alternating = false;

  const BigComplex& at(long l) const {
    long n = 2 * k;
    return c[static_cast<size_t>(((l % n) + n) % n)];
  }
  BigComplex& at(long l) {
    long n = 2 * k;
    return c[static_cast<size_t>(((l % n) + n) % n)];
  }
};

inline StateVector make_state(long k) {
  StateVector s;
  s.k = k;
  s.c.assign(static_cast<size_t>(2 * k), BigComplex(0));
  return s;
}

// Largest |c_{-l} + c_l| over the index set.
inline BigReal alternation_defect(const StateVector& s) {
  BigReal worst(0);
  for (long l = 0; l < 2 * s.k; ++l) worst = max(worst, abs(s.at(-l) + s.at(l)));
  return worst;
}

// Largest |c_{l+k} + c_l|.
inline BigReal half_shift_defect(const StateVector& s) {
  BigReal worst(0);
  for (long l = 0; l < 2 * s.k; ++l) worst = max(worst, abs(s.at(l + s.k) + s.at(l)));
  return worst;
}

inline StateVector state_from_table(const ColoredJonesTable& tab) {
  StateVector s = make_state(tab.k);
  BigReal f = sin(pi() / tab.k) / sqrt(BigReal(tab.k));
  for (long l = 0; l < 2 * tab.k; ++l) s.at(l) = tab.at(l) * f;
  s.alternating = true;
  return s;
}

// c_l = sin(pi/k)/sqrt(k) J_l(t_k).
inline StateVector build_state(KnotId knot, long k) {
  if (k < 3) throw DomainError("build_state: k must be >= 3");
  return state_from_table(jones_table(knot, k));
}

inline StateVector build_Z0(long k) {
  if (k < 2) throw DomainError("build_Z0: k must be >= 2");
  StateVector s = make_state(k);
  // 1/(2i sqrt k) = -i/(2 sqrt k)
  BigComplex v(BigReal(0), -BigReal(1) / (sqrt(BigReal(k)) * 2));
  for (auto& c : s.c) c = v;
  return s;
}

// (A c)_l = d_l c_l + u_l c_{l+1} + v_l c_{l-1}, indices mod 2k.
struct BandedOperator {
  long k = 0;
  std::vector<BigComplex> d, u, v;

  StateVector apply(const StateVector& in) const {
    if (in.k != k) throw DomainError("BandedOperator: level mismatch");
    StateVector out = make_state(k);
    for (long l = 0; l < 2 * k; ++l) {
      size_t i = static_cast<size_t>(l);
      out.at(l) = d[i] * in.at(l) + u[i] * in.at(l + 1) + v[i] * in.at(l - 1);
    }
    return out;
  }

  // Dense matrix, row-major, for small-k identity checks.
  std::vector<std::vector<BigComplex>> dense() const {
    long n = 2 * k;
    std::vector<std::vector<BigComplex>> m(static_cast<size_t>(n), std::vector<BigComplex>(static_cast<size_t>(n)));
    for (long l = 0; l < n; ++l) {
      size_t i = static_cast<size_t>(l);
      m[i][i] += d[i];
      m[i][static_cast<size_t>((l + 1) % n)] += u[i];
      m[i][static_cast<size_t>((l - 1 + n) % n)] += v[i];
    }
    return m;
  }
};

// Q = (q^{-1}M^2 - qM^{-2}) L + (qM^2 - q^{-1}M^{-2}) L^{-1}
//     + (M^2 - M^{-2})(-M^4 - M^{-4} + M^2 + M^{-2} + q^2 + q^{-2}),
// with M Psi_l = e^{i pi l/k} Psi_l, L Psi_l = Psi_{l-1} (so (Lc)_l = c_{l+1}), q = e^{i pi/k}.
inline BandedOperator build_Q(long k) {
  if (k < 2) throw DomainError("build_Q: k must be >= 2");
  UnitRoot root(k);
  BandedOperator op;
  op.k = k;
  const long n = 2 * k;
  op.d.resize(static_cast<size_t>(n));
  op.u.resize(static_cast<size_t>(n));
  op.v.resize(static_cast<size_t>(n));
  const BigComplex q2sum = root.q_pow(2) + root.q_pow(-2);
  for (long l = 0; l < n; ++l) {
    const BigComplex& m2 = root.q_pow(2 * l);
    const BigComplex& m2i = root.q_pow(-2 * l);
    const BigComplex& m4 = root.q_pow(4 * l);
    const BigComplex& m4i = root.q_pow(-4 * l);
    size_t i = static_cast<size_t>(l);
    op.u[i] = root.q_pow(-1) * m2 - root.q_pow(1) * m2i;
    op.v[i] = root.q_pow(1) * m2 - root.q_pow(-1) * m2i;
    op.d[i] = (m2 - m2i) * (-m4 - m4i + m2 + m2i + q2sum);
  }
  return op;
}

// R = M^5 + M^{-5} + M^3 + M^{-3} - (q^2 + q^{-2})(M + M^{-1}), diagonal.
inline BandedOperator build_R(long k) {
  if (k < 2) throw DomainError("build_R: k must be >= 2");
  UnitRoot root(k);
  BandedOperator op;
  op.k = k;
  const long n = 2 * k;
  op.d.resize(static_cast<size_t>(n));
  op.u.assign(static_cast<size_t>(n), BigComplex(0));
  op.v.assign(static_cast<size_t>(n), BigComplex(0));
  const BigComplex q2sum = root.q_pow(2) + root.q_pow(-2);
  for (long l = 0; l < n; ++l) {
    op.d[static_cast<size_t>(l)] = root.q_pow(5 * l) + root.q_pow(-5 * l) + root.q_pow(3 * l) + root.q_pow(-3 * l) -
                                   q2sum * (root.q_pow(l) + root.q_pow(-l));
  }
  return op;
}

struct QdiffResult {
  BigReal residual;  // ||Q Z - R Z0||
  BigReal scale;     // ||R Z0||
};

inline QdiffResult qdiff_residual_of(const StateVector& z) {
  const long k = z.k;
  StateVector lhs = build_Q(k).apply(z);
  StateVector rhs = build_R(k).apply(build_Z0(k));
  BigReal r(0), s(0);
  for (long l = 0; l < 2 * k; ++l) {
    r += norm(lhs.at(l) - rhs.at(l));
    s += norm(rhs.at(l));
  }
  return {sqrt(r), sqrt(s)};
}

inline QdiffResult qdiff_residual_detail(long k) {
  if (k < 3) throw DomainError("qdiff_residual: k must be >= 3");
  return qdiff_residual_of(build_state(KnotId::FigureEight, k));
}

inline BigReal qdiff_residual(long k) { return qdiff_residual_detail(k).residual; }

}  // namespace wrt
