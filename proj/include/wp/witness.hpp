#pragma once

// Witness polynomials f_k separating the RRS measure from Lebesgue measure.
// All mu-integrals are taken against the finite product f_N.

#include <vector>

#include "wp/rrs.hpp"
#include "wp/trigcore.hpp"

namespace wp {

// Block k (1-based) covers levels cutoffs[k-1]+1 .. cutoffs[k]; cutoffs[0] = 0.
struct BlockPlan {
  std::vector<int> cutoffs;
  std::vector<double> weights;    // c_l, index l-1
  std::vector<double> blockMass;  // T_k = sum_block 2^{n_l} eps_l^2, index k-1
  int blocks() const { return static_cast<int>(blockMass.size()); }
  int firstLevel(int k) const { return cutoffs.at(k - 1) + 1; }
  int lastLevel(int k) const { return cutoffs.at(k); }
};

// A_l = {r_l + j m_l : 0 <= j < 2^{n_l}}.
struct FrequencyBlock {
  int level = 0;
  int n = 0;
  Frequency r;
  Frequency m;
  std::uint64_t size() const { return std::uint64_t(1) << n; }
  Frequency at(std::uint64_t j) const { return r + Frequency(j) * m; }
  bool contains(const Frequency& s) const;
};

FrequencyBlock frequencyBlock(const RRSParams& p, int l);

// c_l = eps_l / T_k; blocks are the shortest runs of levels with
// T_k >= k/32 and T_k > T_{k-1}.
BlockPlan buildBlockPlan(const RRSParams& p, int blocks);

// |sum_block c_l 2^{n_l} eps_l - 1|
double blockSumResidual(const BlockPlan& plan, int k, const RRSParams& p);
// sum_block 2^{n_l} c_l^2
double blockL2Squared(const BlockPlan& plan, int k, const RRSParams& p);

SparseSpectrum witnessPoly(const BlockPlan& plan, int k, const RRSParams& p);

// 1 + sum_block c_l^2 2^{n_l} (1 - 2^{n_l} eps_l^2)
double l2MuClosedForm(const BlockPlan& plan, int k, const RRSParams& p);

// sum_{a,b} f(a) conj f(b) fN(b - a), fN looked up through coeffAt.
double l2MuBruteForce(const SparseSpectrum& f, const RRSParams& p, int N);
double l2MuBruteForce(const BlockPlan& plan, int k, const RRSParams& p, int N);

// int f dmu_N = sum_n f(n) fN(-n).
Complex integralAgainstProduct(const SparseSpectrum& f, const RRSParams& p, int N);

// sqrt(int |f|^2 dmu_N - 2 Re int f dmu_N + 1), an upper bound for ||f - 1||_{L1(mu_N)}.
double l1MuDistanceToOne(const SparseSpectrum& f, const RRSParams& p, int N);
double l1MuDistanceToOne(const BlockPlan& plan, int k, const RRSParams& p, int N);

}  // namespace wp
