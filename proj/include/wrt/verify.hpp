#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "wrt/invariants.hpp"
#include "wrt/knotstate.hpp"
#include "wrt/quantization.hpp"
#include "wrt/tqft.hpp"

namespace wrt {

using cd = std::complex<double>;

inline cd to_cd(const BigComplex& z) { return {z.re().to_double(), z.im().to_double()}; }

struct KRange {
  long kmin = 200;
  long kmax = 2000;
  long kstep = 11;

  std::vector<long> ks() const {
    if (kmin < 3 || kstep < 1 || kmax < kmin) throw DomainError("KRange: need 3 <= kmin <= kmax and kstep >= 1");
    std::vector<long> r;
    for (long k = kmin; k <= kmax; k += kstep) r.push_back(k);
    return r;
  }
};

// Knot states are reused across sweeps; keyed by knot, level and precision.
class StateCache {
 public:
  const StateVector& get(KnotId knot, long k) {
    auto key = std::make_tuple(static_cast<int>(knot), k, working_precision());
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    StateVector s = build_state(knot, k);
    std::lock_guard<std::mutex> lock(mu_);
    return map_.emplace(key, std::move(s)).first->second;
  }
  void clear() {
    std::lock_guard<std::mutex> lock(mu_);
    map_.clear();
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, long, long>, StateVector> map_;
};

inline StateCache& state_cache() {
  static StateCache cache;
  return cache;
}

// ---------------------------------------------------------------------------
// Least-squares fits against oscillatory atoms
// ---------------------------------------------------------------------------

struct FitAtom {
  std::string label;
  BigComplex phase;       // CS per unit k
  double n = 0;           // power of k
  double predicted = 0;   // a0, or 0 when no prediction is attached
  // Optional per-k phase override: u(k) = k^n * phase_of_k(k)^k.
  std::function<BigComplex(long)> phase_of_k;
};

struct FitReport {
  std::string subject;
  std::vector<long> ks;
  std::vector<FitAtom> atoms;
  std::vector<cd> data;
  std::vector<cd> coefficients;
  std::vector<double> amplitude_error;  // |c|/a0 - 1 where a0 is known, NaN otherwise
  std::vector<double> grid_distance;    // distance of arg c to the pi/4 grid
  std::vector<double> residuals;        // |Z_k - fit_k|
  double relative_residual = 0;
  double decay_exponent = 0;
  double decay_stderr = 0;
  double condition = 0;
};

inline double pi4_grid_distance(double angle) {
  const double step = M_PI / 4;
  double r = std::remainder(angle, step);
  return std::abs(r);
}

// Slope of log(window RMS of r) against log(window mean k), with standard error.
inline std::pair<double, double> decay_exponent(const std::vector<long>& ks, const std::vector<double>& r, int windows = 8) {
  const size_t m = ks.size();
  if (m < static_cast<size_t>(2 * windows)) windows = std::max<int>(2, static_cast<int>(m / 2));
  std::vector<double> xs, ys;
  for (int w = 0; w < windows; ++w) {
    size_t a = m * static_cast<size_t>(w) / static_cast<size_t>(windows);
    size_t b = m * static_cast<size_t>(w + 1) / static_cast<size_t>(windows);
    if (b <= a) continue;
    double s2 = 0, sk = 0;
    for (size_t i = a; i < b; ++i) {
      s2 += r[i] * r[i];
      sk += static_cast<double>(ks[i]);
    }
    double rms = std::sqrt(s2 / static_cast<double>(b - a));
    if (rms <= 0) continue;
    xs.push_back(std::log(sk / static_cast<double>(b - a)));
    ys.push_back(std::log(rms));
  }
  const size_t n = xs.size();
  if (n < 3) return {0.0, std::numeric_limits<double>::infinity()};
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  double slope = sxy / sxx;
  double sse = 0;
  for (size_t i = 0; i < n; ++i) {
    double e = ys[i] - my - slope * (xs[i] - mx);
    sse += e * e;
  }
  double se = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  return {slope, se};
}

inline double max_condition() { return 1e10; }

inline FitReport fit_atoms(const std::string& subject, const std::vector<FitAtom>& atoms, const std::vector<long>& ks,
                           const std::vector<cd>& data) {
  const size_t m = ks.size(), n = atoms.size();
  if (n == 0) throw DomainError("fit_atoms: no atoms");
  if (data.size() != m) throw DomainError("fit_atoms: data size mismatch");
  if (m < 4 * n) throw DomainError("fit_atoms: need at least 4 samples per atom");

  Eigen::MatrixXcd A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  Eigen::VectorXcd z(static_cast<Eigen::Index>(m));
  for (size_t i = 0; i < m; ++i) {
    const long k = ks[i];
    z(static_cast<Eigen::Index>(i)) = data[i];
    for (size_t j = 0; j < n; ++j) {
      const FitAtom& a = atoms[j];
      BigComplex ph = a.phase_of_k ? a.phase_of_k(k) : a.phase;
      cd u = to_cd(pow(ph, k)) * std::pow(static_cast<double>(k), a.n);
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u;
    }
  }
  // Equilibrate columns so the condition number reflects the phases, not the powers of k.
  Eigen::VectorXd scale(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    scale(j) = A.col(j).norm();
    A.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond < max_condition()))
    throw DomainError("fit_atoms: ill-conditioned atom matrix (condition " + std::to_string(cond) +
                      "); near-coincident CS phases");
  Eigen::VectorXcd c = svd.solve(z);
  Eigen::VectorXcd fitted = A * c;
  for (Eigen::Index j = 0; j < c.size(); ++j) c(j) /= scale(j);

  FitReport r;
  r.subject = subject;
  r.ks = ks;
  r.atoms = atoms;
  r.data = data;
  r.condition = cond;
  for (size_t j = 0; j < n; ++j) {
    cd cj = c(static_cast<Eigen::Index>(j));
    r.coefficients.push_back(cj);
    r.amplitude_error.push_back(atoms[j].predicted > 0 ? std::abs(cj) / atoms[j].predicted - 1.0
                                                       : std::numeric_limits<double>::quiet_NaN());
    r.grid_distance.push_back(pi4_grid_distance(std::arg(cj)));
  }
  double rn = 0, zn = 0;
  for (size_t i = 0; i < m; ++i) {
    double e = std::abs(data[i] - fitted(static_cast<Eigen::Index>(i)));
    r.residuals.push_back(e);
    rn += e * e;
    zn += std::norm(data[i]);
  }
  r.relative_residual = std::sqrt(rn / zn);
  std::tie(r.decay_exponent, r.decay_stderr) = decay_exponent(ks, r.residuals);
  return r;
}

inline std::vector<cd> wrt_values(const Slope& s, const std::vector<long>& ks, int threads,
                                  KnotId knot = KnotId::FigureEight) {
  std::vector<cd> out(ks.size());
  parallel_for(static_cast<long>(ks.size()), threads, [&](long i) {
    const StateVector& st = state_cache().get(knot, ks[static_cast<size_t>(i)]);
    out[static_cast<size_t>(i)] = to_cd(wrt_invariant(st, s));
  });
  return out;
}

inline std::vector<FitAtom> atoms_from_prediction(const std::vector<FlatConnectionData>& pred, bool include_central = true) {
  std::vector<FitAtom> atoms;
  for (const auto& d : pred) {
    if (d.cls == FlatClass::Central && !include_central) continue;
    FitAtom a;
    a.label = to_string(d.cls) + (d.cls == FlatClass::Irreducible ? " t=" + std::to_string(d.boundary_point.t.to_double())
                                                                   : " l=" + std::to_string(d.ell));
    a.phase = d.cs_phase;
    a.n = d.n;
    a.predicted = d.a0.to_double();
    atoms.push_back(a);
  }
  return atoms;
}

struct FitOptions {
  int threads = 1;
  bool include_central = true;
  PredictOptions predict;
};

inline FitReport fit_expansion(const Slope& s, const std::vector<long>& ks, const FitOptions& opt = {}) {
  auto pred = predict(s, opt.predict);
  auto atoms = atoms_from_prediction(pred, opt.include_central);
  return fit_atoms("slope " + s.str(), atoms, ks, wrt_values(s, ks, opt.threads));
}

// Sigma(2,3,7): the (1,1) filling against the two irreducible atoms with the
// published CS values and torsions.
inline std::vector<FitAtom> hikami_atoms(bool squared_torsion = false) {
  std::vector<FitAtom> atoms;
  for (int j = 0; j < 2; ++j) {
    FitAtom a;
    a.label = j == 0 ? "rho_1" : "rho_2";
    a.phase = hikami_cs(j);
    a.n = 0;
    BigReal T = squared_torsion ? hikami_torsion_squared(j) : hikami_torsion_printed(j);
    a.predicted = (sqrt(T) / 2).to_double();
    atoms.push_back(a);
  }
  return atoms;
}

// ---------------------------------------------------------------------------
// Lens-space envelope: unknot (a,1) fillings
// ---------------------------------------------------------------------------

enum class LensTorsion { Glued, Printed };

inline std::vector<FitAtom> lens_atoms(long a, LensTorsion which = LensTorsion::Glued) {
  if (a < 2) throw DomainError("lens_atoms: a >= 2");
  Slope s(a, 1);
  std::vector<FitAtom> atoms;
  for (long l = 0; 2 * l <= a; ++l) {
    FitAtom f;
    f.phase = conj(cs_abelian(l, s));
    if (l == 0 || 2 * l == a) {
      f.label = "central l=" + std::to_string(l);
      f.n = -1.5;
      f.predicted = (sqrt(BigReal(2)) * pi() / pow(BigReal(a), BigReal(1.5))).to_double();
    } else {
      f.label = "abelian l=" + std::to_string(l);
      f.n = -0.5;
      BigReal T = which == LensTorsion::Glued ? torsion_lens_glued(a, 1, l) : torsion_lens(a, 1, l);
      f.predicted = (sqrt(T) / sqrt(BigReal(2))).to_double();
    }
    atoms.push_back(f);
  }
  return atoms;
}

inline FitReport lens_fit(long a, const std::vector<long>& ks, int threads = 1, LensTorsion which = LensTorsion::Glued) {
  return fit_atoms("lens L(" + std::to_string(a) + ",1)", lens_atoms(a, which), ks,
                   wrt_values(Slope(a, 1), ks, threads, KnotId::Unknot));
}

// ---------------------------------------------------------------------------
// Pointwise checks on the knot state
// ---------------------------------------------------------------------------

inline BigComplex state_at(const StateVector& st, const PointE& x, const QuantParams& qp) {
  return evaluate_state(qp, st.c, x).amplitude;
}

// Norm of the tangent vector v in the Kahler metric.
inline BigReal kahler_length(const PointE& v, const BigComplex& tau) {
  BigComplex w = BigComplex(v.p) + tau * v.q;
  return abs(w) * sqrt(pi() * 2 / tau.im());
}

// sqrt of the exterior torsion on a Kahler-unit tangent at (p_A(q), q).
inline BigReal pointwise_irreducible_prediction(const BigReal& p, const BigReal& q, const BigComplex& tau) {
  PointE v = branch_tangent(p, q);
  return sqrt(torsion_fig8(q).evaluate(v) / kahler_length(v, tau));
}

struct PointwiseRow {
  long k = 0;
  double q = 0, p = 0;
  double measured = 0, predicted = 0, rel_error = 0;
  double phase = 0;  // arg(Z_k(x) CS(x)^k), irreducible points only
};

struct PointwiseReport {
  std::vector<PointwiseRow> rows;
  std::vector<std::string> warnings;
};

inline void check_irreducible_q(double q, std::vector<std::string>& warnings) {
  double r = q - std::floor(2 * q) / 2;
  if (r <= 1.0 / 6 || r >= 1.0 / 3) throw DomainError("pointwise_irreducible_check: q outside the irreducible band");
  if (std::abs(r - 0.25) < 0.01) throw DomainError("pointwise_irreducible_check: q at the double point");
  if (r - 1.0 / 6 < 0.01 || 1.0 / 3 - r < 0.01) warnings.push_back("q = " + std::to_string(q) + " near the band edge");
}

// I_k(x) |Omega_mu| = |Z_k(x)| 4 pi^{3/4} k^{-3/4} |Omega_mu| -> sqrt(T(unit tangent)).
inline PointwiseReport pointwise_irreducible_check(const std::vector<double>& qs, const std::vector<long>& ks,
                                                   int threads = 1, const BigComplex& tau = BigComplex(BigReal(0), BigReal(1))) {
  PointwiseReport rep;
  for (double q : qs) check_irreducible_q(q, rep.warnings);
  rep.rows.resize(qs.size() * ks.size());
  parallel_for(static_cast<long>(ks.size()), threads, [&](long i) {
    long k = ks[static_cast<size_t>(i)];
    QuantParams qp(k, tau);
    const StateVector& st = state_cache().get(KnotId::FigureEight, k);
    BigReal hn = halfform_norm(HalfForm::Mu, qp);
    for (size_t j = 0; j < qs.size(); ++j) {
      BigReal Q(qs[j]), P = branch_p_of_q(Q);
      BigComplex z = state_at(st, PointE(P, Q), qp);
      BigReal I = abs(z) * pow(pi(), BigReal(0.75)) * 4 / pow(BigReal(k), BigReal(0.75)) * hn;
      BigReal pr = pointwise_irreducible_prediction(P, Q, tau);
      PointwiseRow row;
      row.k = k;
      row.q = qs[j];
      row.p = P.to_double();
      row.measured = I.to_double();
      row.predicted = pr.to_double();
      row.rel_error = row.measured / row.predicted - 1;
      row.phase = arg(z * pow(cs_irreducible(P, Q), k)).to_double();
      rep.rows[static_cast<size_t>(i) * qs.size() + j] = row;
    }
  });
  return rep;
}

inline BigReal pointwise_abelian_prediction(const BigReal& q, const BigComplex& tau) {
  BigComplex s = expi(pi() * 2 * q);
  BigReal lim = abs(s - BigComplex(1) / s) / (sqrt(BigReal(2)) * abs(alexander_fig8(s * s)));
  return lim * halfform_norm(BigReal(0), BigReal(1), tau);
}

// |Z_k(q lambda)| |Omega_mu| (2 pi/k)^{1/4} -> |sigma - sigma^{-1}| / (sqrt 2 |Delta(sigma^2)|) |Omega_lambda|.
inline PointwiseReport pointwise_abelian_check(const std::vector<double>& qs, const std::vector<long>& ks, int threads = 1,
                                               const BigComplex& tau = BigComplex(BigReal(0), BigReal(1))) {
  PointwiseReport rep;
  for (double q : qs) {
    double r = q - std::floor(2 * q) / 2;
    if (r >= 1.0 / 6 && r <= 1.0 / 3) throw DomainError("pointwise_abelian_check: q in the irreducible band");
    if (r == 0) throw DomainError("pointwise_abelian_check: central holonomy");
    if (r - 0 < 0.01 || std::abs(r - 1.0 / 6) < 0.01 || std::abs(r - 1.0 / 3) < 0.01 || 0.5 - r < 0.01)
      rep.warnings.push_back("q = " + std::to_string(q) + " near a band edge; divergence expected");
  }
  rep.rows.resize(qs.size() * ks.size());
  parallel_for(static_cast<long>(ks.size()), threads, [&](long i) {
    long k = ks[static_cast<size_t>(i)];
    QuantParams qp(k, tau);
    const StateVector& st = state_cache().get(KnotId::FigureEight, k);
    BigReal hn = halfform_norm(HalfForm::Mu, qp);
    for (size_t j = 0; j < qs.size(); ++j) {
      BigReal Q(qs[j]);
      BigComplex z = state_at(st, PointE(BigReal(0), Q), qp);
      BigReal m = abs(z) * hn * sqrt(sqrt(pi() * 2 / BigReal(k)));
      PointwiseRow row;
      row.k = k;
      row.q = qs[j];
      row.measured = m.to_double();
      row.predicted = pointwise_abelian_prediction(Q, tau).to_double();
      row.rel_error = row.measured / row.predicted - 1;
      rep.rows[static_cast<size_t>(i) * qs.size() + j] = row;
    }
  });
  return rep;
}

struct MicrosupportRow {
  double p = 0, q = 0;
  std::vector<long> ks;
  std::vector<double> values;
  double slope = 0;
};

inline double loglog_slope(const std::vector<long>& ks, const std::vector<double>& v) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(ks.size());
  for (size_t i = 0; i < ks.size(); ++i) {
    double x = std::log(static_cast<double>(ks[i])), y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Empirical log-log slope of |Z_k(x)| over the sweep.
inline std::vector<MicrosupportRow> microsupport_check(const std::vector<PointE>& pts, const std::vector<long>& ks,
                                                       int threads = 1) {
  std::vector<MicrosupportRow> rows(pts.size());
  std::vector<std::vector<double>> vals(pts.size(), std::vector<double>(ks.size()));
  parallel_for(static_cast<long>(ks.size()), threads, [&](long i) {
    long k = ks[static_cast<size_t>(i)];
    QuantParams qp(k);
    const StateVector& st = state_cache().get(KnotId::FigureEight, k);
    for (size_t j = 0; j < pts.size(); ++j) vals[j][static_cast<size_t>(i)] = abs(state_at(st, pts[j], qp)).to_double();
  });
  for (size_t j = 0; j < pts.size(); ++j) {
    rows[j].p = pts[j].p.to_double();
    rows[j].q = pts[j].q.to_double();
    rows[j].ks = ks;
    rows[j].values = vals[j];
    rows[j].slope = loglog_slope(ks, vals[j]);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Colored invariants Z_{k,l} in the identity frame
// ---------------------------------------------------------------------------

// Per-k phase of the branch-A atom at holonomy q: e^{2 i pi (2 int_{1/4}^q p_A + 1/5)}
// in the orientation of the pairing with e_l.
inline BigComplex colored_irreducible_phase(const BigReal& q, CsAnchor anchor = CsAnchor::Calibrated) {
  BigReal pA(detail::branch_a_p(q.to_double()));
  return conj(cs_branch_a(q, anchor)) * expi(pi() * 2 * q * pA);
}

inline std::vector<FitAtom> generalized_atoms(double qdot, CsAnchor anchor = CsAnchor::Calibrated) {
  double r = qdot - std::floor(2 * qdot) / 2;
  if (r <= 0 || r >= 0.5) throw DomainError("generalized_fit: central holonomy");
  std::vector<FitAtom> atoms;
  BigReal Q(r);
  BigReal four_pi = pi() * 4;
  if (r > 1.0 / 6 && r < 1.0 / 3) {
    if (std::abs(r - 0.25) < 1e-9) throw DomainError("generalized_fit: q at the double point");
    BigReal P(detail::branch_a_p(r));
    PointE v = branch_tangent(P, Q);
    BigReal Tmu = torsion_fig8(Q).evaluate(v) / (four_pi * abs(v.q));
    double a0 = (pow(BigReal(2), BigReal(-0.75)) * sqrt(Tmu)).to_double();
    for (int b = 0; b < 2; ++b) {
      FitAtom f;
      f.label = b == 0 ? "irreducible A" : "irreducible B";
      f.n = 0;
      f.predicted = a0;
      f.phase = b == 0 ? colored_irreducible_phase(Q, anchor) : conj(colored_irreducible_phase(Q, anchor));
      atoms.push_back(f);
    }
  }
  FitAtom ab;
  ab.label = "abelian";
  ab.n = -0.5;
  ab.phase = BigComplex(1);
  BigReal Tmu = torsion_abelian_exterior(Q).evaluate(PointE(BigReal(0), BigReal(1))) / four_pi;
  ab.predicted = (pow(BigReal(2), BigReal(-0.25)) * sqrt(Tmu)).to_double();
  atoms.push_back(ab);
  return atoms;
}

inline long colored_index(double qdot, long k) { return std::lround(2 * qdot * static_cast<double>(k)); }

inline FitReport generalized_fit(const IntMatrix2& frame, double qdot, const std::vector<long>& ks, int threads = 1,
                                 CsAnchor anchor = CsAnchor::Calibrated) {
  if (frame != identity_frame()) throw DomainError("generalized_fit: only the identity frame is supported");
  std::vector<FitAtom> atoms = generalized_atoms(qdot, anchor);
  // Atoms use the holonomy actually sampled, q_k = l / 2k.
  for (auto& a : atoms) {
    if (a.label.rfind("irreducible", 0) != 0) continue;
    bool branch_b = a.label == "irreducible B";
    a.phase_of_k = [qdot, anchor, branch_b](long k) {
      long l = colored_index(qdot, k);
      BigReal qk = BigReal(l) / BigReal(2 * k);
      qk = qk - floor(qk * 2) / 2;
      BigComplex w = colored_irreducible_phase(qk, anchor);
      return branch_b ? conj(w) : w;
    };
  }
  std::vector<cd> data(ks.size());
  parallel_for(static_cast<long>(ks.size()), threads, [&](long i) {
    long k = ks[static_cast<size_t>(i)];
    const StateVector& st = state_cache().get(KnotId::FigureEight, k);
    data[static_cast<size_t>(i)] = to_cd(colored_wrt(st, frame, colored_index(qdot, k)));
  });
  return fit_atoms("colored q=" + std::to_string(qdot), atoms, ks, data);
}

}  // namespace wrt
