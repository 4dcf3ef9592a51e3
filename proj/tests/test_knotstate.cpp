#include <gtest/gtest.h>

#include "wrt/knotstate.hpp"

using namespace wrt;

namespace {

double gate(const QdiffResult& r) {
  return (r.residual / (r.scale * pow2(-(static_cast<long>(working_precision()) - 24)))).to_double();
}

StateVector involution(const StateVector& v) {
  StateVector out = make_state(v.k);
  for (long l = 0; l < 2 * v.k; ++l) out.at(l) = v.at(-l);
  return out;
}

}  // namespace

TEST(KnotState, QDifferenceIdentityHolds) {
  for (long k : {3L, 4L, 5L, 17L, 64L, 131L, 200L}) {
    QdiffResult r = qdiff_residual_detail(k);
    EXPECT_LE(gate(r), 1.0) << "k=" << k << " residual " << r.residual.to_double();
    EXPECT_GT(r.scale.to_double(), 0);
  }
}

TEST(KnotState, UnknotViolatesFigureEightEquation) {
  QdiffResult r = qdiff_residual_of(build_state(KnotId::Unknot, 9));
  EXPECT_GT((r.residual / r.scale).to_double(), 1e-3);
}

TEST(KnotState, AlternationAndHalfShift) {
  for (long k : {3L, 10L, 57L}) {
    StateVector s = build_state(KnotId::FigureEight, k);
    EXPECT_TRUE(s.alternating);
    EXPECT_EQ(s.c.size(), static_cast<size_t>(2 * k));
    EXPECT_LT(alternation_defect(s).to_double(), 1e-50);
    EXPECT_LT(half_shift_defect(s).to_double(), 1e-50);
  }
}

TEST(KnotState, CoefficientNormalization) {
  const long k = 12;
  StateVector s = build_state(KnotId::FigureEight, k);
  BigReal f = sin(pi() / k) / sqrt(BigReal(k));
  for (long l = 1; l < k; ++l) {
    BigReal want = jones_at_root(KnotId::FigureEight, l, k) * f;
    EXPECT_LT(abs(s.at(l) - BigComplex(want)).to_double(), 1e-50);
  }
  // J_{k-1} = 1, so c_{k-1} = sin(pi/k)/sqrt k.
  EXPECT_NEAR(s.at(k - 1).re().to_double(), std::sin(M_PI / k) / std::sqrt(k), 1e-15);
}

TEST(KnotState, Z0IsConstant) {
  StateVector z = build_Z0(6);
  for (long l = 0; l < 12; ++l) {
    EXPECT_TRUE(z.at(l).re().is_zero());
    EXPECT_NEAR(z.at(l).im().to_double(), -1 / (2 * std::sqrt(6.0)), 1e-15);
  }
  EXPECT_LT(abs(z.at(0) - z.at(-3)).to_double(), 1e-60);
}

TEST(KnotState, QAnticommutesWithInvolution) {
  for (long k : {3L, 7L}) {
    BandedOperator Q = build_Q(k);
    auto dense = Q.dense();
    const long n = 2 * k;
    for (long a = 0; a < n; ++a)
      for (long b = 0; b < n; ++b) {
        // I Q I = -Q entrywise: Q[-a][-b] = -Q[a][b].
        const BigComplex& x = dense[static_cast<size_t>(a)][static_cast<size_t>(b)];
        const BigComplex& y = dense[static_cast<size_t>((n - a) % n)][static_cast<size_t>((n - b) % n)];
        EXPECT_LT(abs(x + y).to_double(), 1e-50) << k << " " << a << "," << b;
      }
    StateVector v = make_state(k);
    for (long l = 0; l < n; ++l) v.at(l) = BigComplex(BigReal(l * l + 1), BigReal(3 - l));
    StateVector lhs = involution(Q.apply(v));
    StateVector rhs = Q.apply(involution(v));
    for (long l = 0; l < n; ++l) EXPECT_LT(abs(lhs.at(l) + rhs.at(l)).to_double(), 1e-45);
  }
}

TEST(KnotState, RIsDiagonalAndEven) {
  BandedOperator R = build_R(8);
  for (long l = 0; l < 16; ++l) {
    EXPECT_TRUE(R.u[static_cast<size_t>(l)].re().is_zero());
    EXPECT_LT(abs(R.d[static_cast<size_t>(l)] - R.d[static_cast<size_t>((16 - l) % 16)]).to_double(), 1e-50);
  }
}

TEST(KnotState, LevelMismatchAndSmallLevels) {
  EXPECT_THROW(build_Q(5).apply(make_state(4)), DomainError);
  EXPECT_THROW(build_state(KnotId::FigureEight, 2), DomainError);
  EXPECT_THROW(qdiff_residual(2), DomainError);
}

TEST(KnotState, ShiftOrientationMatchesSections) {
  // (L c)_l = c_{l+1} must agree with pulling the section back by -lambda/2k.
  const long k = 5;
  QuantParams P(k);
  StateVector s = build_state(KnotId::FigureEight, k);
  StateVector shifted = make_state(k);
  for (long l = 0; l < 2 * k; ++l) shifted.at(l) = s.at(l + 1);
  PointE x(0.21, 0.33);
  SectionFn f = [&](const PointE& y) { return evaluate_state(P, s.c, y); };
  BigComplex pulled = heisenberg_pullback(P, l_shift(P), f, x).amplitude;
  BigComplex direct = evaluate_state(P, shifted.c, x).amplitude;
  EXPECT_LT(abs(pulled - direct).to_double(), 1e-40);
}
