#pragma once

#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "wrt/numerics.hpp"

namespace wrt {

enum class KnotId { Unknot, FigureEight };

inline std::string to_string(KnotId k) { return k == KnotId::Unknot ? "unknot" : "figure-eight"; }

inline KnotId parse_knot(const std::string& s) {
  if (s == "unknot" || s == "0_1") return KnotId::Unknot;
  if (s == "figure-eight" || s == "figure8" || s == "4_1" || s == "fig8") return KnotId::FigureEight;
  throw DomainError("unsupported knot: " + s);
}

// ---------------------------------------------------------------------------
// Symbolic colored Jones polynomials in Z[t, t^-1]
// ---------------------------------------------------------------------------

// t^{2a} - t^{-2a}
inline IntLaurentPoly t2_difference(long a) {
  return IntLaurentPoly::from_terms({{2 * a, 1}, {-2 * a, -1}});
}

inline IntLaurentPoly quantum_integer_laurent(long l) {
  if (l == 0) return {};
  if (l < 0) return -quantum_integer_laurent(-l);
  std::vector<std::pair<long, long>> terms;
  for (long j = 0; j < l; ++j) terms.push_back({2 * (l - 1) - 4 * j, 1});
  return IntLaurentPoly::from_terms(terms);
}

inline IntLaurentPoly colored_jones_laurent(KnotId knot, long l) {
  if (l == 0) return {};
  if (l < 0) return -colored_jones_laurent(knot, -l);
  IntLaurentPoly ql = quantum_integer_laurent(l);
  if (knot == KnotId::Unknot) return ql;
  IntLaurentPoly sum = IntLaurentPoly::constant(1);
  IntLaurentPoly prod = IntLaurentPoly::constant(1);
  for (long j = 1; j < l; ++j) {
    prod *= t2_difference(l - j) * t2_difference(l + j);
    sum += prod;
  }
  return ql * sum;
}

// ---------------------------------------------------------------------------
// Evaluation at arbitrary t
// ---------------------------------------------------------------------------

inline BigComplex colored_jones(KnotId knot, long l, const BigComplex& t) {
  if (t.re().is_zero() && t.im().is_zero()) throw DomainError("colored_jones: t = 0");
  if (l == 0) return BigComplex(0);
  if (l < 0) return -colored_jones(knot, -l, t);
  BigComplex ql = quantum_integer(l, t);
  if (knot == KnotId::Unknot) return ql;
  BigComplex t2 = t * t, t2i = BigComplex(1) / t2;
  auto diff = [&](long a) { return pow(t2, a) - pow(t2i, a); };
  BigComplex sum(1), prod(1);
  for (long j = 1; j < l; ++j) {
    prod = prod * diff(l - j) * diff(l + j);
    sum += prod;
  }
  return ql * sum;
}

// ---------------------------------------------------------------------------
// Tables at t_k = -e^{i pi / 2k}
// ---------------------------------------------------------------------------

struct ColoredJonesTable {
  long k = 0;
  KnotId knot = KnotId::Unknot;
  std::vector<BigComplex> values;  // J_l(t_k) for l = 0 .. 2k-1
  long guard_bits = 0;             // extra bits used to absorb cancellation

  const BigComplex& at(long l) const {
    long n = 2 * k;
    return values[static_cast<size_t>(((l % n) + n) % n)];
  }
};

namespace detail {

// sin(pi a / k) for a in [0, 2k), extended by s_{a+k} = -s_a.
inline std::vector<BigReal> sine_table(long k) {
  std::vector<BigReal> s(static_cast<size_t>(2 * k));
  BigReal step = pi() / k;
  long half = k / 2;
  for (long a = 0; a <= half; ++a) s[static_cast<size_t>(a)] = sin(step * a);
  for (long a = half + 1; a < k; ++a) s[static_cast<size_t>(a)] = s[static_cast<size_t>(k - a)];
  for (long a = k; a < 2 * k; ++a) s[static_cast<size_t>(a)] = -s[static_cast<size_t>(a - k)];
  return s;
}

inline const BigReal& sine_at(const std::vector<BigReal>& s, long a) {
  long n = static_cast<long>(s.size());
  return s[static_cast<size_t>(((a % n) + n) % n)];
}

struct RootEvaluation {
  BigReal value;
  long lost_bits = 0;
};

// J_l(t_k) is real: [l] = s_l / s_1 and each factor of the cyclotomic sum
// becomes -4 s_{l-m} s_{l+m}.
inline RootEvaluation figure_eight_at_root(long l, const std::vector<BigReal>& s) {
  RootEvaluation r;
  BigReal tot(1), prod(1);
  long max_exp = 1;
  for (long m = 1; m < l; ++m) {
    prod *= sine_at(s, l - m);
    prod *= sine_at(s, l + m);
    prod *= -4L;
    if (prod.is_zero()) break;
    tot += prod;
    max_exp = std::max(max_exp, prod.exponent());
  }
  r.value = tot * sine_at(s, l) / s[1];
  r.lost_bits = tot.is_zero() ? max_exp + 64 : std::max(0L, max_exp - tot.exponent());
  return r;
}

}  // namespace detail

// Direct evaluation of J_l(t_k) for any integer l, without using the table symmetries.
inline BigReal jones_at_root(KnotId knot, long l, long k) {
  const mpfr_prec_t target = working_precision();
  if (knot == KnotId::Unknot) return quantum_integer_at_root(l, k);
  if (l < 0) return -jones_at_root(knot, -l, k);
  long guard = static_cast<long>(0.6 * static_cast<double>(l)) + 64;
  for (;;) {
    PrecisionScope scope(target + guard);
    auto s = detail::sine_table(k);
    auto r = detail::figure_eight_at_root(l, s);
    if (r.lost_bits + 32 <= guard || r.value.is_zero()) {
      r.value.round_to(target);
      return r.value;
    }
    guard = r.lost_bits + 64;
  }
}

// The table evaluates l = 1..k-1 directly and fills the rest from J_0 = J_k = 0,
// J_{l+k} = -J_l.
inline ColoredJonesTable jones_table(KnotId knot, long k) {
  if (k < 2) throw DomainError("jones_table: k must be >= 2");
  const mpfr_prec_t target = working_precision();
  ColoredJonesTable tab;
  tab.k = k;
  tab.knot = knot;
  tab.values.assign(static_cast<size_t>(2 * k), BigComplex(0));
  std::vector<BigReal> vals(static_cast<size_t>(k));
  if (knot == KnotId::Unknot) {
    BigReal step = pi() / k;
    BigReal s1 = sin(step);
    for (long l = 1; l < k; ++l) vals[static_cast<size_t>(l)] = sin(step * l) / s1;
  } else {
    long guard = static_cast<long>(std::ceil(0.56 * static_cast<double>(k))) + 64;
    for (;;) {
      PrecisionScope scope(target + guard);
      auto s = detail::sine_table(k);
      long worst = 0;
      for (long l = 1; l < k; ++l) {
        auto r = detail::figure_eight_at_root(l, s);
        worst = std::max(worst, r.lost_bits);
        vals[static_cast<size_t>(l)] = std::move(r.value);
      }
      if (worst + 32 <= guard) break;
      guard = worst + 64;
    }
    tab.guard_bits = guard;
  }
  for (long l = 1; l < k; ++l) {
    BigReal v = vals[static_cast<size_t>(l)];
    v.round_to(target);
    tab.values[static_cast<size_t>(l)] = BigComplex(v, BigReal(0));
    tab.values[static_cast<size_t>(l + k)] = BigComplex(-v, BigReal(0));
  }
  return tab;
}

// ---------------------------------------------------------------------------
// Kauffman bracket state-sum oracle on cables of the figure-eight diagram
// ---------------------------------------------------------------------------

// A PD crossing X[a,b,c,d]: edges listed counterclockwise starting from the
// incoming under-strand. The over-strand joins positions 1 and 3.
using PDCrossing = std::array<int, 4>;

inline std::vector<PDCrossing> figure_eight_pd() {
  return {{{4, 2, 5, 1}}, {{8, 6, 1, 5}}, {{6, 3, 7, 4}}, {{2, 7, 3, 8}}};
}

class KauffmanOracle {
 public:
  KauffmanOracle(int color, IntLaurentPoly poly) : color_(color), poly_(std::move(poly)) {}
  int color() const { return color_; }
  // Colored Jones value as a Laurent polynomial in t = A.
  const IntLaurentPoly& polynomial() const { return poly_; }
  BigComplex operator()(const BigComplex& t) const { return poly_.eval_exact_coeffs(t); }

 private:
  int color_;
  IntLaurentPoly poly_;
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<size_t>(a)] = b;
    return true;
  }
};

// Ends of a sub-crossing: under strand runs S -> N, over strand W -> E.
enum End { kS = 0, kN = 1, kW = 2, kE = 3 };

struct CabledDiagram {
  int n_sub = 0;
  std::vector<std::pair<int, int>> fixed;  // end-to-end connections
  // Port end ids at each PD position, ccw order, for every crossing.
  std::vector<std::array<std::vector<int>, 4>> ports;
};

inline CabledDiagram cable(const std::vector<PDCrossing>& pd, int n, int projector_edge, bool cap_cup) {
  CabledDiagram d;
  const int nc = static_cast<int>(pd.size());
  d.n_sub = nc * n * n;
  auto end_id = [n](int c, int v, int h, End e) { return ((c * n + v) * n + h) * 4 + e; };
  d.ports.resize(static_cast<size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    for (int v = 0; v < n; ++v)
      for (int h = 0; h + 1 < n; ++h) d.fixed.push_back({end_id(c, v, h, kN), end_id(c, v, h + 1, kS)});
    for (int h = 0; h < n; ++h)
      for (int v = 0; v + 1 < n; ++v) d.fixed.push_back({end_id(c, v, h, kE), end_id(c, v + 1, h, kW)});
    auto& P = d.ports[static_cast<size_t>(c)];
    for (int r = 0; r < n; ++r) {
      P[0].push_back(end_id(c, r, 0, kS));
      P[1].push_back(end_id(c, n - 1, r, kE));
      P[2].push_back(end_id(c, n - 1 - r, n - 1, kN));
      P[3].push_back(end_id(c, 0, n - 1 - r, kW));
    }
  }
  std::map<int, std::vector<std::pair<int, int>>> where;
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < 4; ++i) where[pd[static_cast<size_t>(c)][static_cast<size_t>(i)]].push_back({c, i});
  for (const auto& [edge, occ] : where) {
    if (occ.size() != 2) throw DomainError("PD code: edge must appear twice");
    const auto& px = d.ports[static_cast<size_t>(occ[0].first)][static_cast<size_t>(occ[0].second)];
    const auto& py = d.ports[static_cast<size_t>(occ[1].first)][static_cast<size_t>(occ[1].second)];
    if (edge == projector_edge && cap_cup) {
      if (n != 2) throw DomainError("cap-cup insertion implemented for 2-cables");
      d.fixed.push_back({px[0], px[1]});
      d.fixed.push_back({py[0], py[1]});
    } else {
      for (int r = 0; r < n; ++r) d.fixed.push_back({px[static_cast<size_t>(r)], py[static_cast<size_t>(n - 1 - r)]});
    }
  }
  return d;
}

// Kauffman bracket with <empty> = 1 and delta per loop, as a Laurent polynomial in A.
inline IntLaurentPoly bracket(const CabledDiagram& d) {
  const int ns = d.n_sub;
  if (ns > 20) throw DomainError("bracket: too many crossings");
  std::map<std::pair<int, int>, long> hist;  // (a - b, loops) -> count
  const int nodes = ns * 4;
  for (unsigned long state = 0; state < (1UL << ns); ++state) {
    UnionFind uf(nodes);
    int comps = nodes;
    for (const auto& [a, b] : d.fixed)
      if (uf.unite(a, b)) --comps;
    int a_count = 0;
    for (int s = 0; s < ns; ++s) {
      int base = s * 4;
      if (state & (1UL << s)) {  // A-smoothing: (N,W), (S,E)
        ++a_count;
        if (uf.unite(base + kN, base + kW)) --comps;
        if (uf.unite(base + kS, base + kE)) --comps;
      } else {  // B-smoothing: (N,E), (S,W)
        if (uf.unite(base + kN, base + kE)) --comps;
        if (uf.unite(base + kS, base + kW)) --comps;
      }
    }
    hist[{2 * a_count - ns, comps}] += 1;
  }
  const IntLaurentPoly delta = IntLaurentPoly::from_terms({{2, -1}, {-2, -1}});
  int max_loops = 0;
  for (const auto& [key, cnt] : hist) max_loops = std::max(max_loops, key.second);
  std::vector<IntLaurentPoly> dpow(static_cast<size_t>(max_loops + 1));
  dpow[0] = IntLaurentPoly::constant(1);
  for (int i = 1; i <= max_loops; ++i) dpow[static_cast<size_t>(i)] = dpow[static_cast<size_t>(i - 1)] * delta;
  IntLaurentPoly total;
  for (const auto& [key, cnt] : hist)
    total += dpow[static_cast<size_t>(key.second)] * IntLaurentPoly::monomial(mpz_class(cnt), key.first);
  return total;
}

}  // namespace detail

// Colored Jones J_color(t) of the figure-eight knot from the (color-1)-cable of
// the standard diagram with the Jones-Wenzl idempotent. The diagram has writhe 0.
inline KauffmanOracle kauffman_bracket_oracle(int color) {
  if (color < 1) throw DomainError("kauffman_bracket_oracle: color must be positive");
  if (color > 3) throw DomainError("kauffman_bracket_oracle: color > 3 refused (state sum too large)");
  const auto pd = figure_eight_pd();
  if (color == 1) return KauffmanOracle(1, IntLaurentPoly::constant(1));
  if (color == 2) {
    IntLaurentPoly b = detail::bracket(detail::cable(pd, 1, 0, false));
    return KauffmanOracle(2, -b);
  }
  // p_2 = id - delta^{-1} E on one edge of the 2-cable.
  const IntLaurentPoly delta = IntLaurentPoly::from_terms({{2, -1}, {-2, -1}});
  IntLaurentPoly plain = detail::bracket(detail::cable(pd, 2, 1, false));
  IntLaurentPoly with_e = detail::bracket(detail::cable(pd, 2, 1, true));
  return KauffmanOracle(3, plain - poly::divide_exact(with_e, delta));
}

}  // namespace wrt
