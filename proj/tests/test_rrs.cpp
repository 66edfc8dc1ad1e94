#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "wp/rrs.hpp"
#include "wp/rudinshapiro.hpp"

using namespace wp;

namespace {

RRSParams smallParams(int L) {
  std::vector<double> eps;
  std::vector<int> n;
  for (int k = 1; k <= L; ++k) {
    n.push_back(k);
    eps.push_back(0.9 * std::pow(2.0, -(k + 3) / 2.0));
  }
  return paramsFromLevels(eps, n);
}

using DenseMap = std::map<long long, double>;

DenseMap wOracle(const RRSParams& p, int k) {
  DenseMap w;
  const long long r = p.r[k - 1].convert_to<long long>(), m = p.m[k - 1].convert_to<long long>();
  for (std::uint64_t j = 0; j < (std::uint64_t(1) << p.n[k - 1]); ++j) {
    const double c = p.eps[k - 1] * rsSign(j);
    w[r + static_cast<long long>(j) * m] += c;
    w[-(r + static_cast<long long>(j) * m)] += c;
  }
  return w;
}

DenseMap productOracle(const RRSParams& p, int N) {
  DenseMap f{{0, 1.0}};
  for (int k = 1; k <= N; ++k) {
    DenseMap g = f;
    for (const auto& [a, x] : f)
      for (const auto& [b, y] : wOracle(p, k)) g[a + b] -= x * y;
    f = g;
  }
  return f;
}

}  // namespace

TEST(RRS, LevelFromEps) {
  for (double e : {0.2, 0.1, 0.03, 1e-3, 1e-6}) {
    const int n = nFromEps(e);
    const double L = 2 * std::log2(1 / e);
    EXPECT_GT(n, L - 5);
    EXPECT_LT(n, L - 3);
    EXPECT_GE(n, 1);
    if (n > 1) EXPECT_LE(n - 1, L - 5);
  }
}

TEST(RRS, GapsAndDerivedParams) {
  const auto p = deriveParams({0.99 * std::pow(2.0, -2.5), 0.99 * 0.99 * std::pow(2.0, -3.5), std::pow(0.99, 3) * std::pow(2.0, -4.5)});
  EXPECT_EQ(p.n, (std::vector<int>{1, 3, 5}));
  EXPECT_EQ(p.r[0], 1);
  EXPECT_EQ(p.m[0], 2);
  for (int k = 1; k <= p.levels(); ++k) {
    Frequency g = 0;
    for (int j = 1; j < k; ++j) g += 2 * (((Frequency(1) << p.n[j - 1]) - 1) * p.m[j - 1] + p.r[j - 1]);
    EXPECT_EQ(gapSum(p, k), g);
    EXPECT_GT(p.r[k - 1], g);
    EXPECT_GT(p.m[k - 1], g);
  }
  EXPECT_NO_THROW(validateParams(p, EpsBound::TwoSided));
  EXPECT_THROW(deriveParams({0.3}), std::invalid_argument);
  EXPECT_THROW(deriveParams({0.1, 0.06}), std::invalid_argument);
}

TEST(RRS, ValidationRejectsBadEps) {
  auto p = smallParams(3);
  p.eps[1] = 0.5;
  EXPECT_THROW(validateParams(p, EpsBound::UpperOnly), std::invalid_argument);
  auto q = smallParams(3);
  q.r[2] = 1;
  EXPECT_THROW(validateParams(q, EpsBound::UpperOnly), std::invalid_argument);
}

TEST(RRS, WPolyMatchesOracle) {
  const auto p = smallParams(4);
  for (int k = 1; k <= 4; ++k) {
    const auto w = wPoly(k, p);
    const auto o = wOracle(p, k);
    ASSERT_EQ(w.size(), o.size());
    for (const auto& [f, c] : o) EXPECT_DOUBLE_EQ(w.at(Frequency(f)).real(), c);
    EXPECT_NEAR(wL2SquaredStructured(k, p), l2NormSquared(w), 1e-15);
    // |w_k| <= 2 eps_k 2^{(n_k+1)/2}
    EXPECT_LE(wGridSup(k, p, 4096), 2 * p.eps[k - 1] * std::pow(2.0, (p.n[k - 1] + 1) / 2.0) * (1 + 1e-12));
  }
}

TEST(RRS, PartialProductMatchesOracle) {
  const auto p = smallParams(3);
  const auto f = partialProduct(p, 3);
  const auto o = productOracle(p, 3);
  std::size_t nonzero = 0;
  for (const auto& [fr, c] : o)
    if (c != 0.0) {
      ++nonzero;
      EXPECT_NEAR(f.at(Frequency(fr)).real(), c, 1e-15);
    }
  EXPECT_EQ(f.size(), nonzero);
  EXPECT_EQ(f.size(), 5u * 9u * 17u);
}

TEST(RRS, CoeffAtAgreesWithProduct) {
  const auto p = smallParams(4);
  const auto f = partialProduct(p, 4);
  for (const auto& [s, c] : f.entries()) {
    const auto a = coeffAt(s, p, 4);
    ASSERT_TRUE(a.exact.has_value());
    EXPECT_NEAR(a.value.real(), c.value.real(), 1e-16);
    EXPECT_NEAR(a.exact->evaluate(p.eps), c.value.real(), 1e-16);
    const auto rep = uniqueRepresentation(s, p, 4);
    ASSERT_TRUE(rep.has_value());
    Frequency back = 0;
    for (int k = 0; k < 4; ++k) back += rep->b[k] * rep->c[k];
    EXPECT_EQ(back, s);
  }
  const Frequency off = f.maxAbsFrequency() + 1;
  EXPECT_EQ(coeffAt(off, p, 4).value, Complex(0, 0));
  EXPECT_FALSE(uniqueRepresentation(off, p, 4).has_value());
}
