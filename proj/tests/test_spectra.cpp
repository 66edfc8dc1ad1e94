#include <cmath>

#include <gtest/gtest.h>

#include "wp/spectra.hpp"

using namespace wp;

namespace {

const Complex I(0.0, 1.0);

SparseSpectrum threeValued() {
  return SparseSpectrum::fromPairs({{-4, 1.0}, {0, 2.0}, {1, 1.0}, {3, I}, {7, 2.0}, {9, I}, {12, 1.0}});
}

}  // namespace

TEST(Spectra, ValueSet) {
  const auto v = valueSet(threeValued());
  EXPECT_EQ(v.size(), 3u);
  const auto near = SparseSpectrum::fromPairs({{0, 1.0}, {1, 1.0 + 1e-9}, {2, 2.0}});
  EXPECT_EQ(valueSet(near).size(), 3u);
  EXPECT_EQ(valueSet(near, 1e-6).size(), 2u);
  const auto chain = SparseSpectrum::fromPairs({{0, 1.0}, {1, 1.0 + 1.5e-6}});
  EXPECT_THROW(valueSet(chain, 1e-6), std::invalid_argument);
}

TEST(Spectra, IdempotentDecomposition) {
  const auto f = threeValued();
  const auto d = idempotentDecompose(f);
  ASSERT_EQ(d.k(), 3);
  for (const auto& e : d.idempotents)
    for (const auto& [n, c] : e.entries()) EXPECT_EQ(c.value, Complex(1.0, 0.0));
  const auto back = reconstruct(d);
  ASSERT_EQ(back.size(), f.size());
  for (const auto& [n, c] : f.entries()) EXPECT_EQ(back.at(n), c.value);
  // delta is the least distance within {0, 1, 2, i}
  EXPECT_DOUBLE_EQ(d.delta, 1.0);
  EXPECT_DOUBLE_EQ(d.lambdaMax, 2.0);
  const auto rep = checkIdempotents(f, d);
  EXPECT_TRUE(rep.idempotent);
  EXPECT_TRUE(rep.orthogonal);
  EXPECT_TRUE(rep.reconstructs);
  EXPECT_TRUE(rep.normBoundPass);
}

TEST(Spectra, ConvolutionPowers) {
  const auto f = threeValued();
  const auto f3 = convPower(f, 3);
  EXPECT_EQ(f3.at(0), Complex(8.0, 0.0));
  EXPECT_LT(std::abs(f3.at(3) - I * I * I), 1e-15);
  const auto rep = convPowerBoundCheck(f, 6);
  EXPECT_EQ(rep.k, 3);
  ASSERT_EQ(rep.rows.size(), 6u);
  EXPECT_TRUE(rep.allPass());
  for (const auto& row : rep.rows) EXPECT_GE(row.margin, 0.0);
}

TEST(Spectra, PerturbedPowers) {
  auto f = SparseSpectrum::fromPairs({{0, 1.01}, {2, 0.99}, {5, Complex(-1.0, 0.02)}, {8, 0.005}});
  const auto r = perturbedPowerBoundCheck(f, {0.0, 1.0, -1.0}, 0.05, 4);
  EXPECT_EQ(r.m, 2);
  EXPECT_EQ(r.f0.size(), 3u);
  EXPECT_TRUE(r.gPass);
  EXPECT_TRUE(r.boundPass);
  EXPECT_DOUBLE_EQ(r.delta, 1.0);
  EXPECT_THROW(perturbedPowerBoundCheck(f, {1.0, -1.0}, 0.05, 4), std::invalid_argument);
  EXPECT_THROW(perturbedPowerBoundCheck(f, {0.0, 1.0, -1.0}, 0.6, 4), std::invalid_argument);
  EXPECT_THROW(perturbedPowerBoundCheck(f, {0.0, 1.0, -1.0}, 0.001, 4), std::invalid_argument);
}

TEST(Spectra, AnnihilatingPolynomial) {
  const AffineSpectrum f{Complex(0.0, 0.0), threeValued()};
  const auto r = annihilatingPolynomialCheck(f, {1.0, 2.0, I});
  EXPECT_EQ(r.values.size(), 4u);
  EXPECT_LT(r.residual, 1e-12);
  const auto bad = annihilatingPolynomialCheck(f, {1.0, 2.0});
  EXPECT_GT(bad.residual, 0.5);
}
