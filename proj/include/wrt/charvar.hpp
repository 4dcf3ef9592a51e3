#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wrt/tqft.hpp"

namespace wrt {

// F(p,q) = cos(2 pi p) - cos(8 pi q) + cos(4 pi q) + 1.
inline BigReal char_function(const BigReal& p, const BigReal& q) {
  BigReal tp = pi() * 2;
  return cos(tp * p) - cos(tp * 4 * q) + cos(tp * 2 * q) + BigReal(1);
}
inline double char_function(double p, double q) {
  return std::cos(2 * M_PI * p) - std::cos(8 * M_PI * q) + std::cos(4 * M_PI * q) + 1;
}
// Same function written as 2 cos^2(pi p) + 2 sin(6 pi q) sin(2 pi q).
inline BigReal char_function_product_form(const BigReal& p, const BigReal& q) {
  BigReal c = cos(pi() * p);
  return c * c * 2 + sin(pi() * 6 * q) * sin(pi() * 2 * q) * 2;
}

struct Gradient {
  BigReal fp, fq;
};
inline Gradient char_gradient(const BigReal& p, const BigReal& q) {
  BigReal tp = pi() * 2;
  return {-tp * sin(tp * p), pi() * 8 * sin(tp * 4 * q) - pi() * 4 * sin(tp * 2 * q)};
}

enum class Branch { AbelianArc, IrreducibleA, IrreducibleB, DoublePoint };
enum class PointClass { Central, Abelian, Irreducible, RealDouble, ImaginaryDouble };

inline std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::Central: return "central";
    case PointClass::Abelian: return "abelian";
    case PointClass::Irreducible: return "irreducible";
    case PointClass::RealDouble: return "real-double";
    case PointClass::ImaginaryDouble: return "imaginary-double";
  }
  return "?";
}
inline std::string to_string(Branch b) {
  switch (b) {
    case Branch::AbelianArc: return "abelian-arc";
    case Branch::IrreducibleA: return "irreducible-A";
    case Branch::IrreducibleB: return "irreducible-B";
    case Branch::DoublePoint: return "double-point";
  }
  return "?";
}

struct CharPoint {
  BigReal p, q;
  BigReal t;                 // line parameter, x = t (p_slope, q_slope)
  Branch branch = Branch::AbelianArc;
  PointClass cls = PointClass::Irreducible;
  double tangent_slope = 0;  // dp/dq along the branch; +-inf for vertical tangents
  int multiplicity = 1;
  bool transversal = true;
  bool representative = true;  // t in [0, 1/2]: one point per pair x ~ -x
  long ell = -1;               // abelian index when on the abelian arc
};

// Lattice reduction used for branch labels: p into [-1/2, 1/2), q into [0, 1/2).
struct ReducedPoint {
  BigReal p, q;
  long m = 0, n = 0;  // x = (p + m, q + n + half/2)
  bool half = false;
};

inline ReducedPoint reduce_point(const BigReal& p, const BigReal& q) {
  ReducedPoint r;
  BigReal half(0.5);
  BigReal fm = floor(p + half), fn = floor(q);
  r.m = static_cast<long>(fm.to_double());
  r.n = static_cast<long>(fn.to_double());
  r.p = p - fm;
  r.q = q - fn;
  if (r.q >= half) {
    r.q -= half;
    r.half = true;
  }
  return r;
}

// Branch A passes through x_o = (0, 1/4) with p decreasing in q; B is its mirror p -> -p.
inline Branch branch_of(const BigReal& p, const BigReal& q) {
  ReducedPoint r = reduce_point(p, q);
  if (r.p.is_zero()) return Branch::IrreducibleA;
  BigReal quarter(0.25);
  int s1 = r.p.sign();
  int s2 = (quarter - r.q).sign();
  if (s2 == 0) return Branch::DoublePoint;
  return s1 == s2 ? Branch::IrreducibleA : Branch::IrreducibleB;
}

// p >= 0 solution of F(p, q) = 0 for q in the band [1/6, 1/3] + Z/2.
inline BigReal branch_p_of_q(const BigReal& q) {
  BigReal tp = pi() * 2;
  BigReal arg = cos(tp * 4 * q) - cos(tp * 2 * q) - BigReal(1);
  if (arg > BigReal(1)) arg = BigReal(1);
  if (arg < BigReal(-1)) arg = BigReal(-1);
  return acos(arg) / tp;
}

inline double tangent_slope_at(const BigReal& p, const BigReal& q) {
  Gradient g = char_gradient(p, q);
  BigReal scale = abs(g.fp) + abs(g.fq);
  if (scale < BigReal(1e-12)) throw DomainError("tangent_slope: vanishing gradient (double point)");
  if (g.fp.is_zero() || abs(g.fp) < scale * BigReal(1e-30)) return std::numeric_limits<double>::infinity();
  return (-g.fq / g.fp).to_double();
}

inline double tangent_slope(const CharPoint& x) { return tangent_slope_at(x.p, x.q); }

// Branch limits of dp/dq at a double point from the Hessian of F.
inline std::pair<double, double> double_point_tangent_slopes(const BigReal& p, const BigReal& q) {
  BigReal tp = pi() * 2;
  BigReal fpp = -tp * tp * cos(tp * p);
  BigReal fqq = pi() * pi() * 64 * cos(tp * 4 * q) - pi() * pi() * 16 * cos(tp * 2 * q);
  BigReal disc = -(fpp * fqq);  // f_pq = 0
  if (disc.sign() < 0) throw DomainError("double_point_tangent_slopes: isolated (imaginary) double point");
  BigReal r = sqrt(disc) / fpp;
  return {r.to_double(), -r.to_double()};
}

inline bool is_real_double_point(long num_p, long num_q, long den) {
  // p = num_p/den in Z and q = num_q/den in 1/4 + Z/2, i.e. 4 num_q / den odd.
  if (num_p % den != 0) return false;
  if ((4 * num_q) % den != 0) return false;
  long v = 4 * num_q / den;
  return (v % 2 + 2) % 2 == 1;
}
inline bool is_imaginary_double_point(long num_p, long num_q, long den) {
  // p in 1/2 + Z and q in Z/2.
  if ((2 * num_p) % den != 0) return false;
  long v = 2 * num_p / den;
  if ((v % 2 + 2) % 2 != 1) return false;
  return (2 * num_q) % den == 0;
}

struct AbelianPoint {
  long ell = 0;
  BigReal t;
  mpq_class holonomy_q;  // l q / p mod 1
  bool central = false;
  bool regular = true;
};

// Points l/p on the line, l = 0 .. floor(p/2) (l ~ p - l).
inline std::vector<AbelianPoint> abelian_points(const Slope& s) {
  if (s.p == 0) throw DomainError("abelian_points: p = 0");
  std::vector<AbelianPoint> out;
  for (long l = 0; 2 * l <= s.p; ++l) {
    AbelianPoint a;
    a.ell = l;
    a.t = BigReal(l) / BigReal(s.p);
    mpq_class h(l * s.q, s.p);
    h.canonicalize();
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
    h -= fl;
    a.holonomy_q = h;
    mpq_class twice(h * 2);
    a.central = twice.get_den() == 1;
    mpq_class four(h * 4);
    bool on_double = four.get_den() == 1 && (four.get_num() % 2 != 0);
    a.regular = !a.central && !on_double;
    out.push_back(a);
  }
  return out;
}

inline BigComplex alexander_fig8(const BigComplex& t) { return BigComplex(3) - t - BigComplex(1) / t; }

struct IntersectionSet {
  Slope slope;
  std::vector<CharPoint> points;

  std::vector<CharPoint> of_class(PointClass c, bool representatives_only = true) const {
    std::vector<CharPoint> r;
    for (const auto& x : points)
      if (x.cls == c && (!representatives_only || x.representative)) r.push_back(x);
    return r;
  }
  // Zeros of t -> F(pt, qt) on [0,1) counted with multiplicity.
  long zero_count() const {
    long n = 0;
    for (const auto& x : points)
      if (x.cls != PointClass::Central && x.cls != PointClass::Abelian) n += x.multiplicity;
    return n;
  }
};

namespace detail {

inline BigReal line_f(const Slope& s, const BigReal& t) { return char_function(t * s.p, t * s.q); }
inline BigReal line_df(const Slope& s, const BigReal& t) {
  Gradient g = char_gradient(t * s.p, t * s.q);
  return g.fp * s.p + g.fq * s.q;
}
inline BigReal line_d2f(const Slope& s, const BigReal& t) {
  BigReal tp = pi() * 2;
  BigReal P = t * s.p, Q = t * s.q;
  BigReal fpp = -tp * tp * cos(tp * P);
  BigReal fqq = pi() * pi() * 64 * cos(tp * 4 * Q) - pi() * pi() * 16 * cos(tp * 2 * Q);
  return fpp * (s.p * s.p) + fqq * (s.q * s.q);
}

inline BigReal newton_polish(const Slope& s, BigReal t, bool on_derivative) {
  BigReal tol = ulp_scale(static_cast<long>(working_precision()) - 8);
  for (int it = 0; it < 200; ++it) {
    BigReal f = on_derivative ? line_df(s, t) : line_f(s, t);
    BigReal df = on_derivative ? line_d2f(s, t) : line_df(s, t);
    if (df.is_zero()) break;
    BigReal step = f / df;
    t -= step;
    if (abs(step) <= tol) break;
  }
  return t;
}

}  // namespace detail

inline IntersectionSet intersect_line(const Slope& s) {
  if (s.p == 0) throw DomainError("intersect_line: the line p = 0 is the abelian arc");
  IntersectionSet out;
  out.slope = s;
  const long den = 4 * s.p;
  BigReal half(0.5);

  auto make_point = [&](const BigReal& t) {
    CharPoint x;
    x.t = t;
    x.p = t * s.p;
    x.q = t * s.q;
    x.representative = t <= half;
    return x;
  };

  // Exact rational points: abelian arc crossings and double points.
  std::vector<long> exact_j;
  for (long j = 0; j < den; ++j) {
    long np = s.p * j, nq = s.q * j;
    bool real_dp = is_real_double_point(np, nq, den);
    bool imag_dp = is_imaginary_double_point(np, nq, den);
    bool on_arc = (np % den) == 0;
    if (!real_dp && !imag_dp && !on_arc) continue;
    CharPoint x = make_point(BigReal(j) / BigReal(den));
    if (real_dp) {
      x.cls = PointClass::RealDouble;
      x.branch = Branch::DoublePoint;
      x.multiplicity = 2;
      x.transversal = false;
      x.tangent_slope = double_point_tangent_slopes(x.p, x.q).first;
      exact_j.push_back(j);
    } else if (imag_dp) {
      x.cls = PointClass::ImaginaryDouble;
      x.branch = Branch::DoublePoint;
      x.multiplicity = 2;
      x.transversal = false;
      x.tangent_slope = std::numeric_limits<double>::quiet_NaN();
      exact_j.push_back(j);
    } else {
      long l = np / den;
      x.ell = l;
      mpq_class h(l * s.q, s.p);
      h.canonicalize();
      x.cls = mpq_class(h * 2).get_den() == 1 ? PointClass::Central : PointClass::Abelian;
      x.branch = Branch::AbelianArc;
      x.multiplicity = 0;  // not a zero of F
      x.tangent_slope = 0;
    }
    out.points.push_back(x);
  }
  auto near_exact = [&](const BigReal& t) {
    for (long j : exact_j)
      if (abs(t - BigReal(j) / BigReal(den)) < BigReal(1e-9)) return true;
    return false;
  };

  // Sign changes on the sampling grid, then bisection and Newton polish.
  const long n = 8 * (std::abs(s.p) + std::abs(s.q)) * 16;
  std::vector<BigReal> ts(static_cast<size_t>(n + 1)), fs(static_cast<size_t>(n + 1));
  for (long i = 0; i <= n; ++i) {
    ts[static_cast<size_t>(i)] = (BigReal(i) + BigReal(0.5)) / BigReal(n);
    fs[static_cast<size_t>(i)] = detail::line_f(s, ts[static_cast<size_t>(i)]);
  }
  // Wrap-around sample at t = 1 + 1/2n equals t = 1/2n by periodicity.
  ts[static_cast<size_t>(n)] = ts[0] + BigReal(1);
  fs[static_cast<size_t>(n)] = fs[0];
  auto add_root = [&](BigReal t, int mult) {
    t -= floor(t);
    if (near_exact(t)) return;
    for (const auto& x : out.points)
      if (abs(x.t - t) < BigReal(1e-12)) return;
    CharPoint x = make_point(t);
    x.cls = PointClass::Irreducible;
    x.branch = branch_of(x.p, x.q);
    x.multiplicity = mult;
    x.tangent_slope = tangent_slope_at(x.p, x.q);
    Gradient g = char_gradient(x.p, x.q);
    // Tangent direction v = (-F_q, F_p); transversal iff not parallel to (p, q).
    BigReal vp = -g.fq, vq = g.fp;
    BigReal cross = vp * s.q - vq * s.p;
    BigReal nrm = sqrt(vp * vp + vq * vq) * sqrt(BigReal(s.p * s.p + s.q * s.q));
    x.transversal = mult == 1 && abs(cross) >= nrm * BigReal(1e-9);
    out.points.push_back(x);
  };
  for (long i = 0; i < n; ++i) {
    const BigReal& fa = fs[static_cast<size_t>(i)];
    const BigReal& fb = fs[static_cast<size_t>(i + 1)];
    if (fa.sign() * fb.sign() < 0) {
      BigReal a = ts[static_cast<size_t>(i)], b = ts[static_cast<size_t>(i + 1)];
      int sa = fa.sign();
      for (int it = 0; it < 60; ++it) {
        BigReal m = (a + b) / 2;
        int sm = detail::line_f(s, m).sign();
        if (sm == 0) { a = b = m; break; }
        if (sm == sa) a = m; else b = m;
      }
      add_root(detail::newton_polish(s, (a + b) / 2, false), 1);
    } else if (fa.is_zero()) {
      add_root(ts[static_cast<size_t>(i)], 1);
    }
  }
  // Tangential zeros: local minima of |f| without a sign change.
  for (long i = 1; i < n; ++i) {
    const BigReal& f0 = fs[static_cast<size_t>(i - 1)];
    const BigReal& f1 = fs[static_cast<size_t>(i)];
    const BigReal& f2 = fs[static_cast<size_t>(i + 1)];
    if (f0.sign() != f1.sign() || f1.sign() != f2.sign()) continue;
    if (!(abs(f1) < abs(f0) && abs(f1) <= abs(f2))) continue;
    BigReal tc = detail::newton_polish(s, ts[static_cast<size_t>(i)], true);
    if (abs(tc - ts[static_cast<size_t>(i)]) > BigReal(2.0 / static_cast<double>(n))) continue;
    if (abs(detail::line_f(s, tc)) < BigReal(1e-25)) add_root(tc, 2);
  }
  std::sort(out.points.begin(), out.points.end(), [](const CharPoint& a, const CharPoint& b) { return a.t < b.t; });
  return out;
}

}  // namespace wrt
