#pragma once

#include <cstdint>
#include <utility>

#include "wp/trigcore.hpp"

namespace wp {

// P_0 = Q_0 = 1,
// P_{n+1}(t) = P_n(t) + e^{i 2^n t} Q_n(t),
// Q_{n+1}(t) = P_n(t) - e^{i 2^n t} Q_n(t).
struct RSPair {
  int n = 0;
  SparseSpectrum P;
  SparseSpectrum Q;
};

RSPair rudinShapiroPair(int n);

// Coefficient a_k of P_n for any n with 2^n > k.
inline int rsSign(std::uint64_t k) { return (__builtin_popcountll(k & (k >> 1)) & 1) ? -1 : 1; }

// (P_n(t), Q_n(t)) by the recursion, O(n).
std::pair<Complex, Complex> rsEvaluate(int n, double t);
// Same at t = 2*pi*u/M with the doubling of t done exactly mod M.
std::pair<Complex, Complex> rsEvaluateGrid(int n, std::uint64_t u, std::uint64_t M);

struct FlatnessReport {
  bool plusMinusOne = false;
  bool l2Exact = false;
  bool supBound = false;
  bool parallelogram = false;
  double l2 = 0.0;
  double gridSup = 0.0;
  double supLimit = 0.0;
  double maxParallelogramDev = 0.0;
  std::size_t gridSize = 0;
  bool allPass() const { return plusMinusOne && l2Exact && supBound && parallelogram; }
};

// supLimit = 2^{(n+1)/2} (1 + 1e-6).
FlatnessReport verifyFlatness(const RSPair& pair, int gridOversample = 64);

}  // namespace wp
