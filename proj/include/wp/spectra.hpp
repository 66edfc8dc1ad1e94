#pragma once

// Finite-valued Fourier data: idempotent decompositions and convolution
// power bounds. Convolution is the pointwise product of coefficients.

#include <vector>

#include "wp/trigcore.hpp"

namespace wp {

// Distinct nonzero coefficient values. tol = 0 means exact equality;
// otherwise values within tol are clustered to their mean, and clusters
// closer than 2*tol raise std::invalid_argument.
std::vector<Complex> valueSet(const SparseSpectrum& f, double tol = 0.0);

struct SpectralDecomposition {
  std::vector<Complex> values;              // lambda_1..lambda_k, nonzero
  std::vector<SparseSpectrum> idempotents;  // 0/1 coefficients
  double delta = 0.0;                       // min distance within {0, lambda_i}
  double lambdaMax = 0.0;
  int k() const { return static_cast<int>(values.size()); }
};

SpectralDecomposition idempotentDecompose(const SparseSpectrum& f, double tol = 0.0);
SparseSpectrum reconstruct(const SpectralDecomposition& d);

// m-fold convolution power: coefficients raised to the m-th power.
SparseSpectrum convPower(const SparseSpectrum& f, int m);

struct IdempotentReport {
  bool idempotent = false;
  bool orthogonal = false;
  bool reconstructs = false;
  // ||f_i||_1 <= delta^{-k} 2^k ||f||_1^k, k = number of nonzero values.
  std::vector<double> l1;
  std::vector<double> l1Error;
  std::vector<double> bound;
  bool normBoundPass = false;
};

IdempotentReport checkIdempotents(const SparseSpectrum& f, const SpectralDecomposition& d);

struct PowerBoundRow {
  int m = 0;
  double l1 = 0.0;
  double l1Error = 0.0;
  double bound = 0.0;  // k delta^{-k} 2^k ||f||^k lambda_max^m
  bool pass = false;
  double margin = 0.0;  // bound + l1Error - l1
};

struct PowerBoundReport {
  int k = 0;
  double delta = 0.0;
  double lambdaMax = 0.0;
  double l1f = 0.0;
  double l1fError = 0.0;
  std::vector<PowerBoundRow> rows;
  bool allPass() const;
};

// The pass line is bound(||f|| + err) + err(f^m).
PowerBoundReport convPowerBoundCheck(const SparseSpectrum& f, int mMax);

struct PerturbedReport {
  std::vector<Complex> lambda;  // nonzero elements of Lambda
  int m = 0;
  double eps = 0.0;
  double delta = 0.0;
  double lambdaMax = 0.0;
  double C = 0.0;  // m 2^{m+1} lambda_max^m / delta^m
  SparseSpectrum f0;
  SparseSpectrum g;
  double gL2 = 0.0;
  double gBound = 0.0;  // eps sqrt(#g)
  bool gPass = false;
  int k = 0;
  double l1f = 0.0;
  double l1fk = 0.0;
  double l1Error = 0.0;
  double bound = 0.0;  // C lambda_max^{k-m} ||f||^m
  bool boundPass = false;
  // Both sides of gamma ||f|| >= L ln #f, reported only.
  double gammaTimesNorm = 0.0;
  double LlnCount = 0.0;
};

// Lambda must contain 0 and eps < delta/2; otherwise std::invalid_argument.
PerturbedReport perturbedPowerBoundCheck(const SparseSpectrum& f, const std::vector<Complex>& Lambda, double eps,
                                         int k, double L = 0.4);

struct AnnihilationReport {
  std::vector<Complex> values;  // after adding 0 for finitely supported input
  AffineSpectrum product;
  double residual = 0.0;  // sup_n |P(f)^(n)|
};

AnnihilationReport annihilatingPolynomialCheck(const AffineSpectrum& f, const std::vector<Complex>& values);

}  // namespace wp
