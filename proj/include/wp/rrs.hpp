#pragma once

// Riesz-Rudin-Shapiro products f_N = prod_{k<=N} (1 - w_k) with
// w_k = eps_k P_{n_k}(m_k t) e^{i r_k t} + conj(...).

#include <cstdint>
#include <optional>
#include <vector>

#include "wp/trigcore.hpp"

namespace wp {

struct RRSParams {
  std::vector<double> eps;
  std::vector<int> n;
  std::vector<Frequency> m;
  std::vector<Frequency> r;
  int levels() const { return static_cast<int>(eps.size()); }
};

enum class EpsBound {
  UpperOnly,  // eps_k 2^{(n_k+3)/2} < 1
  TwoSided    // 1/2 < eps_k 2^{(n_k+3)/2} < 1
};

// (2^{n_j} - 1) m_j + r_j, largest frequency of w_j (1-based j).
Frequency blockExtent(const RRSParams& p, int j);
// 2 * sum_{j<k} blockExtent(j).
Frequency gapSum(const RRSParams& p, int k);

// Smallest positive integer strictly inside (2log2(1/eps)-5, 2log2(1/eps)-3).
int nFromEps(double eps);

// n_k from eps_k, r_k = gapSum(k) + 1, m_k = 2 r_k.
// Requires eps_1 < 1/4 and eps_{k+1} < eps_k / 2.
RRSParams deriveParams(const std::vector<double>& eps);

// Caller-chosen n_k (strictly increasing), same r_k, m_k. Only the
// upper eps bound is enforced.
RRSParams paramsFromLevels(const std::vector<double>& eps, const std::vector<int>& n);

// Throws std::invalid_argument naming the violated index.
void validateParams(const RRSParams& p, EpsBound bound);

// Explicit w_k; exact forms +-eps_k.
SparseSpectrum wPoly(int k, const RRSParams& p);

// ||w_k||_2^2 from the support layout without materializing it: two
// disjoint progressions of 2^{n_k} points each, every coefficient of modulus eps_k.
double wL2SquaredStructured(int k, const RRSParams& p);

// max |w_k(2 pi j / S)| over j < S, phases reduced exactly mod S.
double wGridSup(int k, const RRSParams& p, std::uint64_t samples);

SparseSpectrum partialProduct(const RRSParams& p, int N);

// s = sum_j b_j c_j with c_j = r_j + idx_j m_j.
struct Representation {
  std::vector<int> b;
  std::vector<std::uint64_t> idx;
  std::vector<Frequency> c;
};

std::optional<Representation> uniqueRepresentation(const Frequency& s, const RRSParams& p, int N);

// Coefficient of f_N at s via the representation; exact form attached.
Coefficient coeffAt(const Frequency& s, const RRSParams& p, int N);

}  // namespace wp
