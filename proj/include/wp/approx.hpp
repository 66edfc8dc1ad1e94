#pragma once

#include <cstddef>
#include <vector>

#include "wp/trigcore.hpp"

namespace wp {

// Residue class {s : s = rho mod q}, q = 2^splits.
struct Progression {
  Frequency q{1};
  Frequency rho{0};
  std::size_t count = 0;
  int splits = 0;
};

// Halving: while the class holds >= 2d points, pass to a class mod 2q
// holding >= d points (the smaller such class; ties to the smaller residue).
// Result satisfies d <= count < 2d. Throws if |support| < d or d == 0.
Progression progressionSplit(const std::vector<Frequency>& support, std::size_t d);

struct InterpolationProblem {
  std::vector<long long> lambda;            // f^ = 1 here
  std::vector<long long> candidateSupport;  // superset of lambda
  std::size_t gridSize = 0;                 // 0: 64 (2 max|support| + 1)
  void validate() const;                    // throws std::invalid_argument
  std::size_t effectiveGrid() const;
};

struct BpbOptions {
  int maxIterations = 400;
  double relTol = 1e-6;
};

struct BpbResult {
  SparseSpectrum f;
  double gridL1 = 0.0;      // objective on the problem grid
  double l1 = 0.0;          // l1Norm estimate
  double l1Error = 0.0;
  double constraintResidual = 0.0;  // max |f^(lambda) - 1|
  std::vector<double> history;      // accepted objective values, non-increasing
  int iterations = 0;
  bool converged = false;
  bool withinTarget = false;  // l1 <= 1 + targetEps
};

// Grid-L1 minimization over coefficients on candidateSupport with f^ = 1 on
// lambda, by iteratively reweighted least squares.
BpbResult bpbMinimize(const InterpolationProblem& problem, double targetEps = 0.5, const BpbOptions& opt = {});

// All coefficients 1 on [-N, N].
SparseSpectrum dirichletKernel(long long N);

struct LittlewoodResult {
  double ratio = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double l1 = 0.0;
  double l1Error = 0.0;
  std::size_t count = 0;
};

// ||f||_1 / ln #f. Throws if a nonzero coefficient has modulus < 1 or #f < 2.
LittlewoodResult littlewoodRatio(const SparseSpectrum& f, int oversample = 64);

// Minimum ratio over the family; throws on an empty family.
double littlewoodEmpiricalL(const std::vector<SparseSpectrum>& family, int oversample = 64);

}  // namespace wp
