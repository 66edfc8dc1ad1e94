#pragma once

#include <vector>

#include "wp/trigcore.hpp"

namespace wp {

// prod_k (1 + a_k cos(n_k t)), -1 <= a_k <= 1, n_{k+1} >= 3 n_k.
struct RieszParams {
  std::vector<double> a;
  std::vector<Frequency> n;
};

// Throws std::invalid_argument on a violated invariant for k <= N.
void validateRiesz(const RieszParams& params, int N);

SparseSpectrum rieszPartial(const RieszParams& params, int N);

// Partial sums of sum_{k<=N} (a_k - b_k)^2.
std::vector<double> brownMoranDiagnostic(const std::vector<double>& a, const std::vector<double>& b, int N);

// Partial sums of sum_{k<=N} |a_k|^m.
std::vector<double> zafranCriterionDiagnostic(const std::vector<double>& a, int m, int N);

}  // namespace wp
