#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "wrt/numerics.hpp"

using namespace wrt;

namespace {

BigReal tol_bits(long slack) { return pow2(-(static_cast<long>(working_precision()) - slack)); }

IntLaurentPoly quad(long b, long a = 1) {
  // a X^2 - b X + a: palindromic, roots on the circle iff |b| <= 2a.
  return IntLaurentPoly::from_terms({{2, a}, {1, -b}, {0, a}});
}

}  // namespace

TEST(UnitRoot, PowersCloseUpAtFourK) {
  for (long k : {3L, 7L, 64L}) {
    UnitRoot r(k);
    BigComplex t = r.t();
    BigComplex acc(1);
    for (long j = 0; j < 4 * k; ++j) acc = acc * t;
    EXPECT_LT(abs(acc - BigComplex(1)).to_double(), tol_bits(16).to_double()) << k;
    EXPECT_LT(abs(r.t_pow(2) - r.q()).to_double(), tol_bits(16).to_double());
    EXPECT_LT(abs(r.q() - expi(pi() / k)).to_double(), tol_bits(16).to_double());
  }
}

TEST(UnitRoot, RejectsNonPositiveLevel) { EXPECT_THROW(UnitRoot(0), DomainError); }

TEST(QuantumInteger, SmallValues) {
  UnitRoot r(11);
  EXPECT_TRUE(quantum_integer(0, r.t()).re().is_zero());
  EXPECT_LT(abs(quantum_integer(1, r.t()) - BigComplex(1)).to_double(), 1e-50);
  // [2] = t^2 + t^-2 = 2 cos(pi/k) at t_k.
  BigComplex two = quantum_integer(2, r.t());
  EXPECT_LT(abs(two - BigComplex(cos(pi() / 11) * 2)).to_double(), 1e-50);
}

TEST(QuantumInteger, PeriodicityAndSignsAtRoots) {
  for (long k : {3L, 5L, 12L, 31L}) {
    UnitRoot r(k);
    for (long l = 1; l <= 2 * k; ++l) {
      BigComplex base = quantum_integer(l, r.t());
      EXPECT_LT(abs(quantum_integer(l + 2 * k, r.t()) - base).to_double(), tol_bits(24).to_double());
      EXPECT_LT(abs(quantum_integer(-l, r.t()) + base).to_double(), tol_bits(24).to_double());
      EXPECT_LT(abs(quantum_integer(l + k, r.t()) + base).to_double(), tol_bits(24).to_double());
      EXPECT_LT(abs(base - BigComplex(quantum_integer_at_root(l, k))).to_double(), tol_bits(24).to_double());
    }
  }
}

TEST(QuantumInteger, DegenerateParameterIsAnError) {
  EXPECT_THROW(quantum_integer(3, BigComplex(1)), DomainError);
  EXPECT_THROW(quantum_integer(3, BigComplex(BigReal(0), BigReal(1))), DomainError);
}

TEST(Summation, RepeatsBitForBit) {
  UnitRoot r(97);
  auto run = [&] {
    BigComplex s;
    for (long j = 0; j < 4 * 97; ++j) s += r.eighth(j * j);
    return s;
  };
  BigComplex a = run(), b = run();
  EXPECT_EQ(a.re().to_hex(), b.re().to_hex());
  EXPECT_EQ(a.im().to_hex(), b.im().to_hex());
}

TEST(Precision, ScopeRestores) {
  mpfr_prec_t before = working_precision();
  {
    PrecisionScope s(300);
    EXPECT_EQ(working_precision(), 300);
    EXPECT_EQ(BigReal(1).precision(), 300);
  }
  EXPECT_EQ(working_precision(), before);
}

TEST(Chebyshev, FirstTerms) {
  EXPECT_TRUE(chebyshev_T(0).is_zero());
  EXPECT_EQ(chebyshev_T(1), IntLaurentPoly::constant(1));
  EXPECT_EQ(chebyshev_T(2), IntLaurentPoly::monomial(-1, 1));
}

TEST(Chebyshev, RecurrenceIdentity) {
  auto T = [](long l) { return chebyshev_T(l); };
  for (long k = 2; k <= 9; ++k)
    for (long l = -4; l <= 6; ++l) EXPECT_EQ(T(k - l), T(k - 1) * T(l) - T(k) * T(l - 1)) << k << "," << l;
  EXPECT_EQ(T(3), T(4) * T(2) - T(5) * T(1));
}

TEST(LaurentPoly, ArithmeticAndShape) {
  auto p = IntLaurentPoly::from_terms({{-2, 3}, {0, -1}, {5, 2}});
  EXPECT_EQ(p.lo(), -2);
  EXPECT_EQ(p.hi(), 5);
  EXPECT_EQ(p.leading(), 2);
  EXPECT_EQ(p.trailing(), 3);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((p * p).hi(), 10);
  EXPECT_EQ(p.normalized().lo(), 0);
  EXPECT_EQ(p.derivative().coeff(-3), -6);
}

TEST(LaurentPoly, GcdAndDiscriminant) {
  auto a = quad(3), b = quad(1);
  auto g = poly::gcd(a * b, a * a);
  EXPECT_EQ(poly::degree(g), 2);
  EXPECT_TRUE(poly::divides(g, a * b));
  // X^2 - 3X + 1: disc = 9 - 4 = 5.
  EXPECT_EQ(poly::discriminant(a), 5);
  EXPECT_EQ(poly::discriminant(a * a), 0);
}

TEST(UnitCircle, Examples) {
  auto r = isolate_unit_circle_roots(IntLaurentPoly::from_terms({{2, 1}, {0, 1}}));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_LE(r[0].y_lo, 0);
  EXPECT_GE(r[0].y_hi, 0);
  EXPECT_EQ(r[0].x_count, 2);
  EXPECT_TRUE(isolate_unit_circle_roots(quad(3)).empty());
}

TEST(UnitCircle, Rejections) {
  EXPECT_THROW(isolate_unit_circle_roots(IntLaurentPoly()), DomainError);
  EXPECT_THROW(isolate_unit_circle_roots(IntLaurentPoly::from_terms({{2, 1}, {1, 1}, {0, 2}})), DomainError);
}

TEST(UnitCircle, PlusMinusOne) {
  auto xp1 = IntLaurentPoly::from_terms({{1, 1}, {0, 1}});
  auto r = isolate_unit_circle_roots(xp1 * xp1 * quad(2));  // (X+1)^2 (X-1)^2
  long n = unit_circle_root_count(r);
  EXPECT_EQ(n, 4);
}

// Random palindromic products with known unit-circle roots Y = b/a in (-2, 2).
TEST(UnitCircle, RandomPalindromicAgainstConstruction) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<long> coin(0, 2), mult(1, 2), small(-7, 7), den(1, 4), big(3, 9);
  for (int trial = 0; trial < 20; ++trial) {
    IntLaurentPoly p = IntLaurentPoly::constant(1);
    std::vector<std::pair<double, int>> expected;  // y, multiplicity
    long deg = 0;
    while (deg < 34) {
      long c = coin(rng);
      if (c == 0) {
        long a = den(rng), b = small(rng) % (2 * a);
        if (std::abs(b) >= 2 * a) continue;
        int m = static_cast<int>(mult(rng));
        bool dup = false;
        for (auto& e : expected)
          if (std::abs(e.first - static_cast<double>(b) / a) < 1e-12) dup = true;
        if (dup) continue;
        for (int i = 0; i < m; ++i) p *= quad(b, a);
        expected.push_back({static_cast<double>(b) / a, m});
        deg += 2 * m;
      } else {
        long b = big(rng) * (coin(rng) == 0 ? -1 : 1);
        p *= quad(b);
        deg += 2;
      }
    }
    ASSERT_LE(poly::degree(p.normalized()), 40);
    auto roots = isolate_unit_circle_roots(p);
    ASSERT_EQ(roots.size(), expected.size()) << "trial " << trial;
    std::sort(expected.begin(), expected.end());
    long mult_sum = 0;
    for (size_t i = 0; i < roots.size(); ++i) {
      EXPECT_LE(mpq_class(roots[i].y_lo).get_d(), expected[i].first + 1e-10);
      EXPECT_GE(mpq_class(roots[i].y_hi).get_d(), expected[i].first - 1e-10);
      EXPECT_EQ(roots[i].multiplicity, expected[i].second);
      mult_sum += 2 * roots[i].multiplicity;
    }
    // Numerical cross-check: companion-matrix eigenvalues of the squarefree part.
    IntLaurentPoly sq = p.normalized();
    sq = poly::divide_exact(sq, poly::gcd(sq, sq.derivative()));
    const long n = poly::degree(sq);
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    const double lead = sq.leading().get_d();
    for (long i = 0; i < n; ++i) {
      comp(0, i) = -sq.coeff(n - 1 - i).get_d() / lead;
      if (i + 1 < n) comp(i + 1, i) = 1;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(comp);
    long on_circle = 0;
    for (long i = 0; i < n; ++i)
      if (std::abs(std::abs(es.eigenvalues()(i)) - 1) < 1e-6) ++on_circle;
    EXPECT_EQ(on_circle, static_cast<long>(2 * expected.size())) << "trial " << trial;
    long with_mult = 0;
    for (auto& e : expected) with_mult += 2 * e.second;
    EXPECT_EQ(mult_sum, with_mult);
  }
}
