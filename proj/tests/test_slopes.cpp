#include <gtest/gtest.h>

#include <random>

#include "wrt/charvar.hpp"
#include "wrt/slopes.hpp"

using namespace wrt;

namespace {

std::vector<Slope> scan(long pmax, long qmax) {
  std::vector<Slope> out;
  for (long p = 1; p <= pmax; ++p)
    for (long q = -qmax; q <= qmax; ++q)
      if (q != 0 && std::gcd(p, q) == 1) out.emplace_back(p, q);
  return out;
}

// Verdict on H'2 alone: +1 proved, -1 refuted, 0 no verdict.
int definite(const H2Verdict& v) {
  if (is_proved(v.status)) return 1;
  if (v.status == H2Status::Refuted) return -1;
  return 0;
}

}  // namespace

TEST(Phi, FiveOne) {
  EXPECT_EQ(build_phi(Slope(5, 1)), IntLaurentPoly::from_terms({{10, 1}, {9, -1}, {7, 1}, {5, 2}, {3, 1}, {1, -1}, {0, 1}}));
}

TEST(Phi, PalindromicAndDegree) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> P(1, 60), Q(-12, 12);
  int done = 0;
  while (done < 20) {
    long p = P(rng), q = Q(rng);
    if (q == 0 || std::gcd(p, q) != 1) continue;
    Slope s(p, q);
    IntLaurentPoly phi = build_phi(s);
    EXPECT_TRUE(phi.is_palindromic()) << s.str();
    EXPECT_EQ(phi.lo(), 0);
    long aq = std::abs(q);
    EXPECT_EQ(poly::degree(phi), std::max(2 * p, p + 4 * aq) - std::min(0L, p - 4 * aq)) << s.str();
    if (p > 4 * aq) {
      EXPECT_EQ(poly::degree(phi), 2 * p);
    }
    // Phi(1) = 4 after normalization: 1 - 1 + 1 + 2 + 1 - 1 + 1.
    EXPECT_EQ(phi.eval(mpz_class(1)), 4);
    ++done;
  }
}

TEST(Phi, UnitCircleRootsMatchCharVariety) {
  // X = e^{2 pi i t}: X^{-p} Phi(X) = 2 F(pt, qt).
  for (auto [p, q] : std::vector<std::pair<long, long>>{{5, 1}, {7, 2}, {3, 1}}) {
    Slope s(p, q);
    IntLaurentPoly phi = build_phi(s);
    for (double t : {0.013, 0.37, 0.81}) {
      BigComplex X = expi(pi() * 2 * BigReal(t));
      BigComplex v = phi.shifted(-phi.hi() / 2).eval(X);
      BigReal f = char_function(BigReal(t) * p, BigReal(t) * q) * 2;
      EXPECT_LT(abs(v - BigComplex(f)).to_double(), 1e-40);
    }
  }
}

TEST(H1, Examples) {
  EXPECT_FALSE(check_h1(Slope(4, 1)).pass);
  EXPECT_TRUE(check_h1(Slope(5, 1)).pass);
  EXPECT_FALSE(check_h1(Slope(8, 3)).pass);
  for (long p = 1; p <= 40; ++p) EXPECT_EQ(check_h1(Slope(p, 1)).pass, p % 4 != 0);
}

TEST(H2, SlopeBound) {
  EXPECT_EQ(check_h2(Slope(1, 1), H2Method::SlopeBound).status, H2Status::ProvedBySlopeBound);
  EXPECT_EQ(check_h2(Slope(8, 1), H2Method::SlopeBound).status, H2Status::Inconclusive);
  // 9/2 > 2 sqrt 5 = 4.472..., 4/1 < 2 sqrt 5.
  EXPECT_EQ(check_h2(Slope(9, 2), H2Method::SlopeBound).status, H2Status::Inconclusive);
  EXPECT_EQ(check_h2(Slope(4, 1), H2Method::SlopeBound).status, H2Status::ProvedBySlopeBound);
}

TEST(H2, StrippingTable) {
  for (auto [p, q] : std::vector<std::pair<long, long>>{{5, 1}, {7, 1}, {8, 1}, {12, 5}, {6, 1}}) {
    Slope s(p, q);
    IntLaurentPoly phi = build_phi(s);
    IntLaurentPoly st = strip_exceptional(phi, s);
    if (p % 2 == 1) EXPECT_EQ(poly::degree(st), poly::degree(phi) - 2);
    else if (p % 4 == 0) EXPECT_EQ(poly::degree(st), poly::degree(phi) - 4);
    else EXPECT_EQ(st, phi);
  }
}

TEST(H2, DiscriminantProvesPaperRange) {
  // All slopes 2 sqrt 5 q < p <= 200 with q > 0 (checked on a deterministic subsample of q).
  long checked = 0;
  for (long p = 5; p <= 200; ++p)
    for (long q = 1; 20 * q * q < p * p; q += (p > 100 ? 5 : 1)) {
      if (std::gcd(p, q) != 1) continue;
      H2Verdict v = check_h2(Slope(p, q), H2Method::Discriminant);
      EXPECT_EQ(v.status, H2Status::ProvedByDiscriminant) << p << "," << q;
      ++checked;
    }
  EXPECT_GT(checked, 1000);
}

TEST(ModL, FieldArithmetic) {
  for (uint64_t l : {7ULL, 11ULL, 83ULL}) {
    Fq2Elem xi = modl_xi(l);
    Fq2Elem two = Fq2Elem::from_int(2, l);
    EXPECT_TRUE((two * xi * xi - xi + two).is_zero());
    EXPECT_TRUE(xi * xi.inverse() == Fq2Elem::from_int(1, l));
    EXPECT_TRUE(xi.pow(static_cast<long>(l * l - 1)) == Fq2Elem::from_int(1, l));
    EXPECT_TRUE(xi.pow(-3) * xi.pow(3) == Fq2Elem::from_int(1, l));
  }
}

TEST(ModL, Examples) {
  EXPECT_FALSE(modl_test(83, 1, 83));
  EXPECT_THROW(modl_test(83, 1, 7), DomainError);
  EXPECT_THROW(modl_test(8, 1, 2), DomainError);
  EXPECT_THROW(check_h2(Slope(16, 3), H2Method::ModL), DomainError);
  for (auto [p, q] : std::vector<std::pair<long, long>>{{5, 1}, {7, 2}}) {
    bool conclusive = modl_test(p, q, p);
    H2Verdict ex = check_h2(Slope(p, q), H2Method::Exact);
    if (conclusive) {
      EXPECT_TRUE(is_proved(ex.status)) << p << "," << q;
    }
  }
}

TEST(ModL, EightyThreeEscalates) {
  H2Verdict m = check_h2(Slope(83, 1), H2Method::ModL);
  EXPECT_EQ(m.status, H2Status::Inconclusive);
  H2Verdict e = check_h2(Slope(83, 1), H2Method::Exact);
  EXPECT_NE(e.status, H2Status::Inconclusive);
  EXPECT_TRUE(is_proved(check_h2(Slope(83, 1), H2Method::Auto).status));
}

TEST(H2, MethodAgreementScan) {
  for (const Slope& s : scan(60, 7)) {
    H2Verdict ex = check_h2(s, H2Method::Exact);
    ASSERT_NE(ex.status, H2Status::Inconclusive) << s.str();
    std::vector<H2Verdict> others{check_h2(s, H2Method::SlopeBound), check_h2(s, H2Method::Discriminant)};
    if (!odd_prime_factors(s.p).empty()) others.push_back(check_h2(s, H2Method::ModL));
    for (const auto& v : others) {
      int d = definite(v);
      if (d != 0) {
        EXPECT_EQ(d, definite(ex)) << s.str() << " " << to_string(v.status);
      }
    }
  }
}

TEST(H2, ReportShape) {
  SlopeReport r = analyze_slope(Slope(4, 1));
  EXPECT_FALSE(r.hypotheses_hold());
  EXPECT_NE(r.summary().find("H1 fails: p ≡ 0 mod 4"), std::string::npos);
  SlopeReport ok = analyze_slope(Slope(5, 1));
  EXPECT_TRUE(ok.hypotheses_hold());
  EXPECT_FALSE(ok.h2.root.has_value());
}

TEST(H2, MethodNames) {
  for (auto m : {H2Method::Auto, H2Method::SlopeBound, H2Method::Discriminant, H2Method::ModL, H2Method::Exact})
    EXPECT_EQ(parse_h2_method(to_string(m)), m);
  EXPECT_THROW(parse_h2_method("guess"), DomainError);
}
