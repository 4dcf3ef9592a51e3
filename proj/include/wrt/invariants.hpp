#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wrt/charvar.hpp"
#include "wrt/quantization.hpp"
#include "wrt/slopes.hpp"
#include "wrt/tqft.hpp"

namespace wrt {

inline BigReal rational(const mpq_class& r) {
  BigReal out;
  mpfr_set_q(out.raw(), r.get_mpq_t(), MPFR_RNDN);
  return out;
}

// ---------------------------------------------------------------------------
// Chern-Simons phases
// ---------------------------------------------------------------------------

// exp(2 i pi r) for an exact rational r, reduced mod 1 before going to floating point.
inline BigComplex rational_phase(mpq_class r) {
  r.canonicalize();
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  r -= fl;
  return expi(pi() * 2 * rational(r));
}

inline BigComplex cs_abelian(long ell, const Slope& s) {
  if (s.p == 0) throw DomainError("cs_abelian: p = 0");
  return rational_phase(mpq_class(ell * ell * s.q, s.p));
}

// Value of CS on branch A at the double point x_o = (0, 1/4). The continuity
// anchor is 1; the calibrated one reproduces the Sigma(2,3,7) phases.
enum class CsAnchor { Continuity, Calibrated };

inline BigComplex cs_anchor_value(CsAnchor a) {
  if (a == CsAnchor::Continuity) return BigComplex(1);
  return rational_phase(mpq_class(-1, 5));
}

namespace detail {

// Branch A written as a graph over d = q - 1/4 on |d| <= 1/12:
// sin^2(pi p) = sin^2(4 pi d) + sin^2(2 pi d), with p of sign opposite to d.
inline double branch_a_p(double q) {
  double d = q - 0.25;
  double s4 = std::sin(4 * M_PI * d), s2 = std::sin(2 * M_PI * d);
  double g = s4 * s4 + s2 * s2;
  if (g > 1) g = 1;
  double p = std::asin(std::sqrt(g)) / M_PI;
  return d > 0 ? -p : p;
}

inline double branch_a_dp(double q) {
  double d = q - 0.25;
  if (d == 0) return -2 * std::sqrt(5.0);
  double s4 = std::sin(4 * M_PI * d), s2 = std::sin(2 * M_PI * d);
  double g = s4 * s4 + s2 * s2;
  double dg = 4 * M_PI * std::sin(8 * M_PI * d) + 2 * M_PI * std::sin(4 * M_PI * d);
  double one_minus = std::max(1 - g, 1e-300);
  double v = dg / (2 * std::sqrt(g) * std::sqrt(one_minus)) / M_PI;
  return d > 0 ? -v : v;
}

inline void check_band(double q) {
  if (q < 1.0 / 6 - 1e-12 || q > 1.0 / 3 + 1e-12) throw DomainError("cs transport: q outside the irreducible band [1/6, 1/3]");
}

}  // namespace detail

enum class TransportParam { ByQ, Quadratic };

// I(q) = integral of (p dq - q dp) along branch A from x_o to (p_A(q), q).
// ByQ integrates the by-parts form 2 int p_A ds - q p_A(q); Quadratic integrates
// p s' - s p' directly with s(u) = 1/4 + (q - 1/4) u^2.
inline double cs_transport_integral(double q, TransportParam param = TransportParam::ByQ) {
  detail::check_band(q);
  q = std::clamp(q, 1.0 / 6, 1.0 / 3);
  if (q == 0.25) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double tol = 1e-14;
  if (param == TransportParam::ByQ) {
    double lo = std::min(q, 0.25), hi = std::max(q, 0.25);
    double v = integrator.integrate([](double s) { return detail::branch_a_p(s); }, lo, hi, tol);
    if (q < 0.25) v = -v;
    return 2 * v - q * detail::branch_a_p(q);
  }
  const double dq = q - 0.25;
  auto f = [dq](double u) {
    double s = 0.25 + dq * u * u, ds = 2 * dq * u;
    return (detail::branch_a_p(s) - s * detail::branch_a_dp(s)) * ds;
  };
  return integrator.integrate(f, 0.0, 1.0, tol);
}

// CS on branch A over the base band, from parallel transport out of x_o.
inline BigComplex cs_branch_a(const BigReal& q, CsAnchor anchor = CsAnchor::Calibrated,
                              TransportParam param = TransportParam::ByQ) {
  double I = cs_transport_integral(q.to_double(), param);
  return cs_anchor_value(anchor) * expi(-pi() * 2 * BigReal(I));
}

// CS at any point of the irreducible part of X. The base cell value is carried
// to the point by the lattice cocycle and the lambda/2 symmetry.
inline BigComplex cs_irreducible(const BigReal& p, const BigReal& q, CsAnchor anchor = CsAnchor::Calibrated,
                                 TransportParam param = TransportParam::ByQ) {
  if (abs(char_function(p, q)) > BigReal(1e-8)) throw DomainError("cs_irreducible: point is not on X");
  ReducedPoint r = reduce_point(p, q);
  Branch b = branch_of(p, q);
  if (b == Branch::DoublePoint && !r.p.is_zero()) throw DomainError("cs_irreducible: double point");
  BigReal q_cell = r.half ? r.q + BigReal(0.5) : r.q;
  // lattice part: F(x + m mu + n lambda) = e^{2 i pi (m q - n p)} F(x), CS is its conjugate
  BigComplex ph = expi(-pi() * 2 * (q_cell * r.m - r.p * r.n));
  if (r.half) ph *= expi(pi() * r.p);
  BigComplex base = cs_branch_a(r.q, anchor, param);
  if (b == Branch::IrreducibleB) base = conj(base);
  return ph * base;
}

inline BigComplex cs_irreducible(const CharPoint& x, CsAnchor anchor = CsAnchor::Calibrated) {
  if (x.cls != PointClass::Irreducible) throw DomainError("cs_irreducible: point is not irreducible");
  return cs_irreducible(x.p, x.q, anchor);
}

// Phase relating CS at x + lambda/2 to CS at x.
inline BigComplex lambda_half_phase(const BigReal& p) { return expi(pi() * p); }

// ---------------------------------------------------------------------------
// Torsion densities
// ---------------------------------------------------------------------------

enum class TorsionFrame { PerDp, PerDq, PerUnitGamma };

inline std::string to_string(TorsionFrame f) {
  switch (f) {
    case TorsionFrame::PerDp: return "per_dp";
    case TorsionFrame::PerDq: return "per_dq";
    case TorsionFrame::PerUnitGamma: return "per_unit_gamma";
  }
  return "?";
}

struct TorsionDensity {
  BigReal magnitude;
  TorsionFrame frame = TorsionFrame::PerDp;
  long gamma_p = 0, gamma_q = 0;  // for PerUnitGamma

  // Value on a tangent vector v.
  BigReal evaluate(const PointE& v) const {
    switch (frame) {
      case TorsionFrame::PerDp: return magnitude * abs(v.p);
      case TorsionFrame::PerDq: return magnitude * abs(v.q);
      case TorsionFrame::PerUnitGamma: {
        BigReal cross = v.p * gamma_q - v.q * gamma_p;
        BigReal scale = abs(v.p) + abs(v.q);
        if (abs(cross) > scale * BigReal(1e-20)) throw DomainError("TorsionDensity: vector is not along gamma");
        BigReal s = (gamma_p != 0) ? v.p / BigReal(gamma_p) : v.q / BigReal(gamma_q);
        return magnitude * abs(s);
      }
    }
    return magnitude;
  }

  // Same density against another covector, using the branch tangent.
  TorsionDensity reframed(TorsionFrame target, const PointE& tangent) const {
    BigReal value = evaluate(tangent);
    TorsionDensity out;
    out.frame = target;
    if (target == TorsionFrame::PerDp) {
      if (tangent.p.is_zero()) throw DomainError("reframe: dp vanishes on the tangent");
      out.magnitude = value / abs(tangent.p);
    } else if (target == TorsionFrame::PerDq) {
      if (tangent.q.is_zero()) throw DomainError("reframe: dq vanishes on the tangent");
      out.magnitude = value / abs(tangent.q);
    } else {
      throw DomainError("reframe: per_unit_gamma needs a slope");
    }
    return out;
  }
};

inline TorsionDensity torsion_fig8(const BigReal& q) {
  BigReal a = BigReal(1) - cos(pi() * 4 * q) * 4;
  if (abs(a) < BigReal(1e-30)) throw DomainError("torsion_fig8: 1 - 4 cos(4 pi q) vanishes");
  return {sqrt(BigReal(8)) * pi() / abs(a), TorsionFrame::PerDp};
}

inline BigComplex alexander_fig8_at_holonomy(const BigReal& q) { return alexander_fig8(expi(pi() * 4 * q)); }

inline TorsionDensity torsion_abelian_exterior(const BigReal& q) {
  BigReal s = sin(pi() * 2 * q);
  if (abs(s) < BigReal(1e-30)) throw DomainError("torsion_abelian_exterior: central holonomy");
  BigReal d = abs(alexander_fig8_at_holonomy(q));
  if (d.is_zero()) throw DomainError("torsion_abelian_exterior: Alexander polynomial vanishes");
  return {s * s * 4 / (d * d) * sqrt(BigReal(8)) * pi(), TorsionFrame::PerDq};
}

inline long inverse_mod(long b, long a) {
  long t = 0, nt = 1, r = a, nr = ((b % a) + a) % a;
  while (nr != 0) {
    long qt = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - qt * nt);
    std::tie(r, nr) = std::make_pair(nr, r - qt * nr);
  }
  if (r != 1) throw DomainError("inverse_mod: not invertible");
  return ((t % a) + a) % a;
}

namespace detail {
inline void check_lens(long a, long b, long n) {
  if (a < 2 || std::gcd(a, b) != 1) throw DomainError("torsion_lens: need a >= 2 and gcd(a, b) = 1");
  if (n % a == 0) throw DomainError("torsion_lens: central representation");
}
}  // namespace detail

// (16/a) |sin(2 pi n/a) sin(2 pi b* n/a)|.
inline BigReal torsion_lens(long a, long b, long n) {
  detail::check_lens(a, b, n);
  long bs = inverse_mod(b, a);
  return abs(sin(pi() * 2 * n / BigReal(a)) * sin(pi() * 2 * (bs * n) / BigReal(a))) * 16 / BigReal(a);
}

// The form reproduced by gluing: (16/a) sin^2(2 pi n/a) sin^2(2 pi b* n/a).
inline BigReal torsion_lens_glued(long a, long b, long n) {
  detail::check_lens(a, b, n);
  long bs = inverse_mod(b, a);
  BigReal s1 = sin(pi() * 2 * n / BigReal(a)), s2 = sin(pi() * 2 * (bs * n) / BigReal(a));
  return s1 * s1 * s2 * s2 * 16 / BigReal(a);
}

inline TorsionDensity torsion_torus_knot(long a, long b, long ell, long m) {
  if (a < 2 || b < 2 || ell <= 0 || ell >= a || m <= 0 || m >= b) throw DomainError("torsion_torus_knot: parameters out of range");
  BigReal s1 = sin(pi() * ell / BigReal(a)), s2 = sin(pi() * m / BigReal(b));
  BigReal v = s1 * s1 * s2 * s2 * 16 / BigReal(a * a * b * b) * sqrt(BigReal(8)) * pi();
  return {v, TorsionFrame::PerDp};
}

inline BigReal kappa_theoretical() { return sqrt(BigReal(2)) * pi() * 8; }

// Torsion of the filling solid torus, against the unit vector of the slope.
inline TorsionDensity solid_torus_torsion(const Slope& s, const BigReal& t, const BigReal& kappa) {
  BigReal v = sin(pi() * 2 * t);
  return {kappa * v * v, TorsionFrame::PerUnitGamma, s.p, s.q};
}

inline BigReal glue_torsion(const TorsionDensity& t1, const PointE& v1, const TorsionDensity& t2, const PointE& v2) {
  BigReal w = abs(omega(v1, v2));
  BigReal scale = (abs(v1.p) + abs(v1.q)) * (abs(v2.p) + abs(v2.q));
  if (w <= scale * BigReal(1e-24)) throw DomainError("glue_torsion: parallel tangents (non-transversal gluing)");
  return t1.evaluate(v1) * t2.evaluate(v2) / (pi() * 2 * w);
}

// Tangent to X at a regular point.
inline PointE branch_tangent(const BigReal& p, const BigReal& q) {
  Gradient g = char_gradient(p, q);
  if ((abs(g.fp) + abs(g.fq)) < BigReal(1e-20)) throw DomainError("branch_tangent: double point");
  return {-g.fq, g.fp};
}

inline BigReal irreducible_filled_torsion(const CharPoint& x, const Slope& s, const BigReal& kappa) {
  PointE v = branch_tangent(x.p, x.q);
  return glue_torsion(torsion_fig8(x.q), v, solid_torus_torsion(s, x.t, kappa), PointE(BigReal(s.p), BigReal(s.q)));
}

inline BigReal abelian_filled_torsion_glued(const AbelianPoint& a, const Slope& s, const BigReal& kappa) {
  PointE lambda(BigReal(0), BigReal(1));
  return glue_torsion(torsion_abelian_exterior(rational(a.holonomy_q)), lambda, solid_torus_torsion(s, a.t, kappa),
                      PointE(BigReal(s.p), BigReal(s.q)));
}

// Closed form matched by the gluing: (16/p) sin^2(2 pi l/p) sin^2(2 pi l q/p) / |Delta(e^{4 i pi l q/p})|^2.
inline BigReal torsion_abelian_filled(long ell, const Slope& s) {
  BigReal h = BigReal(ell * s.q) / BigReal(s.p);
  BigReal s1 = sin(pi() * 2 * ell / BigReal(s.p)), s2 = sin(pi() * 2 * h);
  BigReal d = abs(alexander_fig8_at_holonomy(h));
  return s1 * s1 * s2 * s2 * 16 / (BigReal(s.p) * d * d);
}

// The displayed first-power form (2/sqrt p) sin(2 pi l/p) sin(2 pi q l/p) / Delta(e^{4 i pi q l/p}), in modulus.
inline BigReal torsion_abelian_filled_printed(long ell, const Slope& s) {
  BigReal h = BigReal(ell * s.q) / BigReal(s.p);
  BigReal v = sin(pi() * 2 * ell / BigReal(s.p)) * sin(pi() * 2 * h) * 2 / sqrt(BigReal(s.p));
  return abs(v) / abs(alexander_fig8_at_holonomy(h));
}

// Sigma(2,3,7) data for the (1,1) filling; index 0 is the point on branch A.
inline BigComplex hikami_cs(int j) {
  return j == 0 ? rational_phase(mpq_class(-25, 168)) : rational_phase(mpq_class(47, 168));
}
inline BigReal hikami_torsion_printed(int j) {
  return sqrt(BigReal(8)) / sqrt(BigReal(7)) * sin(pi() * (j == 0 ? 2 : 3) / BigReal(7));
}
inline BigReal hikami_torsion_squared(int j) {
  BigReal v = hikami_torsion_printed(j);
  return v * v;
}

// kappa such that the (1,1) gluing at the branch-A point equals `target`.
inline BigReal calibrate_kappa(const BigReal& target) {
  Slope s(1, 1);
  auto pts = intersect_line(s).of_class(PointClass::Irreducible);
  for (const auto& x : pts)
    if (x.branch == Branch::IrreducibleA) return target / irreducible_filled_torsion(x, s, BigReal(1));
  throw DomainError("calibrate_kappa: no branch-A point on the (1,1) line");
}

// Seifert-matrix Alexander polynomial det(V - t V^T), normalized to Delta(1) = 1 and symmetric.
inline IntLaurentPoly alexander_from_seifert(const std::vector<std::vector<long>>& V) {
  const size_t n = V.size();
  using P = IntLaurentPoly;
  std::vector<std::vector<P>> M(n, std::vector<P>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) M[i][j] = P::constant(V[i][j]) - P::monomial(V[j][i], 1);
  // Bareiss fraction-free elimination over Z[t]
  P prev = P::constant(1);
  int sign = 1;
  for (size_t c = 0; c + 1 < n; ++c) {
    if (M[c][c] == P()) {
      size_t r = c + 1;
      while (r < n && M[r][c] == P()) ++r;
      if (r == n) return P();
      std::swap(M[c], M[r]);
      sign = -sign;
    }
    for (size_t i = c + 1; i < n; ++i)
      for (size_t j = c + 1; j < n; ++j) M[i][j] = poly::divide_exact(M[i][j] * M[c][c] - M[i][c] * M[c][j], prev);
    prev = M[c][c];
  }
  P det = M[n - 1][n - 1];
  if (sign < 0) det = det * mpz_class(-1);
  // centre and fix the sign by Delta(1) = 1
  long centre = (det.lo() + det.hi()) / 2;
  det = det.shifted(-centre);
  if (det.eval(mpz_class(1)) < 0) det = det * mpz_class(-1);
  return det;
}

inline std::vector<std::vector<long>> fig8_seifert_matrix() { return {{1, 1}, {0, -1}}; }

// ---------------------------------------------------------------------------
// Symbols and transport
// ---------------------------------------------------------------------------

struct Symbols {
  BigComplex f0;
  BigReal f1;
};

inline Symbols symbols_f0_f1(const BigReal& p, const BigReal& q) {
  BigReal s4 = sin(pi() * 4 * q);
  return {BigComplex(BigReal(0), -s4 * 4 * char_function(p, q)), -pi() * 8 * cos(pi() * 4 * q) * sin(pi() * 2 * p)};
}

enum class TransportVariant { Paper, NegativeControl };

namespace detail {

// sigma(X_0) with X_0 = -4 i sin(4 pi q) Y and Y the Hamiltonian field of F for omega.
inline BigComplex transport_phi(const BigReal& p, const BigReal& q, TransportVariant v) {
  Gradient g = char_gradient(p, q);
  BigReal a = BigReal(1) - cos(pi() * 4 * q) * (v == TransportVariant::Paper ? 4 : 3);
  BigReal b = sin(pi() * 4 * q);
  return BigComplex(BigReal(0), b * g.fq / (pi() * a));
}

}  // namespace detail

// |L_{X_0} sigma + 2 i f_1 sigma| at a point of X, with the Lie derivative by central differences.
inline BigReal transport_residual(const BigReal& p, const BigReal& q, const BigReal& h,
                                  TransportVariant variant = TransportVariant::Paper) {
  if (abs(char_function(p, q)) > BigReal(1e-20)) throw DomainError("transport_residual: point is not on X");
  Gradient g = char_gradient(p, q);
  if ((abs(g.fp) + abs(g.fq)) < BigReal(1e-8)) throw DomainError("transport_residual: double point");
  BigReal yp = -g.fq / (pi() * 4), yq = g.fp / (pi() * 4);
  BigReal ny = sqrt(yp * yp + yq * yq);
  BigReal up = yp / ny, uq = yq / ny;
  BigComplex fplus = detail::transport_phi(p + up * h, q + uq * h, variant);
  BigComplex fminus = detail::transport_phi(p - up * h, q - uq * h, variant);
  BigComplex y_phi = (fplus - fminus) * ny / (h * 2);
  BigReal b = sin(pi() * 4 * q);
  BigComplex x0_phi = BigComplex(BigReal(0), -b * 4) * y_phi;
  Symbols sym = symbols_f0_f1(p, q);
  BigComplex phi = detail::transport_phi(p, q, variant);
  BigComplex res = x0_phi + BigComplex(BigReal(0), sym.f1 * 2) * phi;
  return abs(res);
}

// ---------------------------------------------------------------------------
// Predictions
// ---------------------------------------------------------------------------

enum class FlatClass { Central, Abelian, Irreducible };

inline std::string to_string(FlatClass c) {
  switch (c) {
    case FlatClass::Central: return "central";
    case FlatClass::Abelian: return "abelian";
    case FlatClass::Irreducible: return "irreducible";
  }
  return "?";
}

// One term k^n a0 CS^k of the expansion. cs_phase is in the pairing orientation
// of wrt_invariant, so abelian entries hold the conjugate of cs_abelian.
struct FlatConnectionData {
  FlatClass cls = FlatClass::Irreducible;
  CharPoint boundary_point;
  BigComplex cs_phase;
  TorsionDensity torsion;
  BigReal torsion_value;  // T(rho) of the closed manifold
  double n = 0;
  BigReal a0;
  long ell = -1;
};

struct PredictOptions {
  BigReal kappa = kappa_theoretical();
  CsAnchor anchor = CsAnchor::Calibrated;
  bool check_hypotheses = true;
};

inline std::vector<FlatConnectionData> predict(const Slope& s, const PredictOptions& opt = {}) {
  if (opt.check_hypotheses) {
    SlopeReport rep = analyze_slope(s);
    if (!rep.hypotheses_hold()) throw HypothesisError(rep);
  }
  if (s.p == 0) throw DomainError("predict: p = 0");
  std::vector<FlatConnectionData> out;

  IntersectionSet inter = intersect_line(s);
  for (const auto& x : inter.of_class(PointClass::Irreducible)) {
    FlatConnectionData d;
    d.cls = FlatClass::Irreducible;
    d.boundary_point = x;
    d.cs_phase = cs_irreducible(x, opt.anchor);
    d.torsion = torsion_fig8(x.q);
    d.torsion_value = irreducible_filled_torsion(x, s, opt.kappa);
    d.n = 0;
    d.a0 = sqrt(d.torsion_value) / 2;
    out.push_back(d);
  }

  for (const auto& a : abelian_points(s)) {
    FlatConnectionData d;
    d.ell = a.ell;
    d.boundary_point.p = BigReal(a.ell);
    d.boundary_point.q = rational(a.holonomy_q);
    d.boundary_point.t = a.t;
    d.boundary_point.branch = Branch::AbelianArc;
    d.boundary_point.ell = a.ell;
    d.cs_phase = conj(cs_abelian(a.ell, s));
    if (a.central) {
      d.cls = FlatClass::Central;
      d.boundary_point.cls = PointClass::Central;
      d.n = -1.5;
      d.a0 = sqrt(BigReal(2)) * pi() / pow(BigReal(s.p), BigReal(1.5));
      d.torsion = {BigReal(0), TorsionFrame::PerDq};
      d.torsion_value = BigReal(0);
    } else {
      if (!a.regular) throw DomainError("predict: abelian point at a double point");
      d.cls = FlatClass::Abelian;
      d.boundary_point.cls = PointClass::Abelian;
      d.n = -0.5;
      d.torsion = torsion_abelian_exterior(rational(a.holonomy_q));
      d.torsion_value = abelian_filled_torsion_glued(a, s, opt.kappa);
      d.a0 = sqrt(d.torsion_value) / sqrt(BigReal(2));
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace wrt
