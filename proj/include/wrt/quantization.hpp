#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "wrt/numerics.hpp"

namespace wrt {

struct QuantParams {
  long k = 2;
  BigComplex tau = BigComplex(BigReal(0), BigReal(1));

  QuantParams() = default;
  explicit QuantParams(long level) : k(level) { validate(); }
  QuantParams(long level, BigComplex t) : k(level), tau(std::move(t)) { validate(); }

  void validate() const {
    if (k < 2) throw DomainError("QuantParams: level must be >= 2");
    if (tau.im().sign() <= 0) throw DomainError("QuantParams: Im tau must be positive");
  }
};

// x = p mu + q lambda.
struct PointE {
  BigReal p;
  BigReal q;
  PointE() = default;
  PointE(BigReal pp, BigReal qq) : p(std::move(pp)), q(std::move(qq)) {}
  PointE(double pp, double qq) : p(pp), q(qq) {}
  friend PointE operator+(const PointE& a, const PointE& b) { return {a.p + b.p, a.q + b.q}; }
  friend PointE operator-(const PointE& a, const PointE& b) { return {a.p - b.p, a.q - b.q}; }
  PointE operator-() const { return {-p, -q}; }
  // Representative in [0,1)^2.
  PointE reduced() const { return {p - floor(p), q - floor(q)}; }
};

// omega = 4 pi dp ^ dq.
inline BigReal omega(const PointE& x, const PointE& y) { return pi() * 4 * (x.p * y.q - x.q * y.p); }

enum class HalfForm { Mu, Lambda };

struct SectionValue {
  BigComplex amplitude;
  HalfForm halfform = HalfForm::Mu;
};

// Norm of the half-form Omega_gamma with Omega_gamma^2(gamma) = 1 for gamma = a mu + b lambda,
// in the Kahler metric g = omega(., j .) where |dz|_g^2 = Im(tau) / 2 pi and z = p + tau q.
inline BigReal halfform_norm(const BigReal& a, const BigReal& b, const BigComplex& tau) {
  BigReal dz = sqrt(tau.im() / (pi() * 2));
  BigComplex w = BigComplex(a) + tau * b;
  if (abs(w).is_zero()) throw DomainError("halfform_norm: zero direction");
  return sqrt(dz / abs(w));
}

inline BigReal halfform_norm(HalfForm tag, const QuantParams& params) {
  return tag == HalfForm::Mu ? halfform_norm(BigReal(1), BigReal(0), params.tau)
                             : halfform_norm(BigReal(0), BigReal(1), params.tau);
}

namespace detail {

// Range of n for which the Gaussian factor exceeds 2^{-(prec+16)}.
inline std::pair<long, long> theta_window(const QuantParams& params, const BigReal& q) {
  double tau2 = params.tau.im().to_double();
  double bits = static_cast<double>(working_precision()) + 16.0;
  double radius = std::sqrt(2.0 * static_cast<double>(params.k) * bits * std::log(2.0) / (M_PI * tau2)) + 2.0;
  double centre = -2.0 * static_cast<double>(params.k) * q.to_double();
  return {static_cast<long>(std::floor(centre - radius)), static_cast<long>(std::ceil(centre + radius))};
}

}  // namespace detail

// Z(x) = (k/2pi)^{1/4} e^{2 pi i k p q} sum_n c_{n mod 2k} e^{i pi tau (n+2kq)^2/2k} e^{2 pi i n p},
// expressed against Omega_mu.
inline SectionValue evaluate_state(const QuantParams& params, const std::vector<BigComplex>& coeffs, const PointE& x) {
  const long k = params.k;
  const long n2k = 2 * k;
  if (static_cast<long>(coeffs.size()) != n2k) throw DomainError("evaluate_state: coefficient count must be 2k");
  const BigReal two_pi = pi() * 2;
  auto [lo, hi] = detail::theta_window(params, x.q);
  BigComplex sum;
  const BigComplex itau_pi = i_times(params.tau) * pi() / BigReal(n2k);
  const BigReal shift = x.q * n2k;
  for (long n = lo; n <= hi; ++n) {
    const BigComplex& c = coeffs[static_cast<size_t>(((n % n2k) + n2k) % n2k)];
    if (c.re().is_zero() && c.im().is_zero()) continue;
    BigReal m = BigReal(n) + shift;
    BigComplex gauss = exp(itau_pi * (m * m));
    BigComplex wave = expi(two_pi * n * x.p);
    sum += c * gauss * wave;
  }
  BigReal pref = sqrt(sqrt(BigReal(k) / two_pi));
  BigComplex phase = expi(two_pi * k * x.p * x.q);
  return {sum * phase * pref, HalfForm::Mu};
}

inline std::vector<BigComplex> unit_vector(long k, long l) {
  std::vector<BigComplex> e(static_cast<size_t>(2 * k));
  long n = 2 * k;
  e[static_cast<size_t>(((l % n) + n) % n)] = BigComplex(1);
  return e;
}

inline SectionValue basis_section(const QuantParams& params, long l, const PointE& x) {
  return evaluate_state(params, unit_vector(params.k, l), x);
}

using SectionFn = std::function<SectionValue(const PointE&)>;

// (T*_a f)(y) = e^{-(ik/2) omega(a,y)} f(a + y).
inline SectionValue heisenberg_pullback(const QuantParams& params, const PointE& a, const SectionFn& f, const PointE& y) {
  SectionValue v = f(a + y);
  BigReal ang = -omega(a, y) * params.k / 2;
  v.amplitude = v.amplitude * expi(ang);
  return v;
}

// M = T*_{mu/2k}, L = T*_{-lambda/2k}.
inline PointE m_shift(const QuantParams& params) { return {BigReal(1) / BigReal(2 * params.k), BigReal(0)}; }
inline PointE l_shift(const QuantParams& params) { return {BigReal(0), BigReal(-1) / BigReal(2 * params.k)}; }

inline BigComplex inner_product(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b) {
  if (a.size() != b.size()) throw DomainError("inner_product: mismatched level");
  BigComplex s;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * conj(b[i]);
  return s;
}

inline BigReal norm2(const std::vector<BigComplex>& a) { return sqrt(inner_product(a, a).re()); }

// Trapezoid quadrature of <a(x), b(x)> |Omega_mu|^2 against 4 pi dp dq on [0,1)^2.
inline BigComplex quadrature_inner_product(const QuantParams& params, const std::vector<BigComplex>& a,
                                           const std::vector<BigComplex>& b, int grid = 48) {
  if (a.size() != b.size()) throw DomainError("quadrature_inner_product: mismatched level");
  BigReal w = halfform_norm(HalfForm::Mu, params);
  w = w * w;
  BigComplex s;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      PointE x(BigReal(i) / BigReal(grid), BigReal(j) / BigReal(grid));
      s += evaluate_state(params, a, x).amplitude * conj(evaluate_state(params, b, x).amplitude);
    }
  }
  return s * w * pi() * 4 / BigReal(static_cast<long>(grid) * grid);
}

// Holomorphy defect in the unitary trivialization:
// (i/(2 tau2)) (d_q - tau d_p) Psi + (k pi / tau2)(p + tau q) Psi, by central differences.
inline BigReal cauchy_riemann_residual(const QuantParams& params, const std::vector<BigComplex>& coeffs,
                                       const PointE& x, const BigReal& h) {
  auto f = [&](const PointE& y) { return evaluate_state(params, coeffs, y).amplitude; };
  BigComplex dp = (f({x.p + h, x.q}) - f({x.p - h, x.q})) / (h * 2);
  BigComplex dq = (f({x.p, x.q + h}) - f({x.p, x.q - h})) / (h * 2);
  BigComplex v = f(x);
  const BigReal& tau2 = params.tau.im();
  BigComplex dbar = i_times(dq - params.tau * dp) / (tau2 * 2);
  BigComplex corr = (BigComplex(x.p) + params.tau * x.q) * v * (pi() * params.k / tau2);
  return abs(dbar + corr);
}

}  // namespace wrt
