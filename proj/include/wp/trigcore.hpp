#pragma once

// Sparse Fourier data on the circle with normalized Haar measure.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

namespace wp {

using Frequency = boost::multiprecision::cpp_int;
using Complex = std::complex<double>;

// Product sign * prod eps_k over a multiset of 1-based indices.
struct ExactForm {
  int sign = 1;
  std::vector<int> epsIndices;  // sorted

  ExactForm times(const ExactForm& o) const;
  ExactForm negated() const { return {-sign, epsIndices}; }
  double evaluate(const std::vector<double>& eps) const;
  bool operator==(const ExactForm&) const = default;
};

struct Coefficient {
  Complex value;
  std::optional<ExactForm> exact;
};

// Finitely supported map Frequency -> Coefficient, sorted by frequency.
// Exact zeros are never stored.
class SparseSpectrum {
 public:
  using Entry = std::pair<Frequency, Coefficient>;

  SparseSpectrum() = default;

  // Sorts, merges equal frequencies and drops exact zeros.
  static SparseSpectrum fromEntries(std::vector<Entry> entries);
  static SparseSpectrum constant(Complex c);
  static SparseSpectrum monomial(const Frequency& n, Complex c);
  static SparseSpectrum fromPairs(const std::vector<std::pair<long long, Complex>>& pairs);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const Coefficient* find(const Frequency& n) const;
  Complex at(const Frequency& n) const;
  Frequency maxAbsFrequency() const;
  bool allExact() const;

 private:
  std::vector<Entry> entries_;
};

// c * unit + sparsePart; the unit has Fourier sequence identically 1.
struct AffineSpectrum {
  Complex unitScale{0.0, 0.0};
  SparseSpectrum sparsePart;

  Complex at(const Frequency& n) const { return unitScale + sparsePart.at(n); }
  static AffineSpectrum unit() { return {Complex(1.0, 0.0), {}}; }
};

// Pointwise product of Fourier sequences.
SparseSpectrum convolve(const SparseSpectrum& a, const SparseSpectrum& b);
AffineSpectrum convolve(const AffineSpectrum& a, const AffineSpectrum& b);

// Coefficient convolution (pointwise product of functions).
SparseSpectrum multiply(const SparseSpectrum& a, const SparseSpectrum& b);

SparseSpectrum add(const SparseSpectrum& a, const SparseSpectrum& b);
SparseSpectrum scale(const SparseSpectrum& a, Complex c);

double l2NormSquared(const SparseSpectrum& f);
double l2Norm(const SparseSpectrum& f);

struct L1Estimate {
  double value = 0.0;
  double errorBound = 0.0;
  std::size_t gridSize = 0;
};

// Trapezoid rule for |f| on M = oversample*(2*maxAbsFreq+1) points.
// errorBound = (pi*deg/M)*max grid |f|.
L1Estimate l1Norm(const SparseSpectrum& f, int oversample = 64);

double supCoeff(const SparseSpectrum& f);
double minNonzeroCoeff(const SparseSpectrum& f);  // throws on empty support
std::size_t supportSize(const SparseSpectrum& f);
bool inClassF(const SparseSpectrum& f, double eps);
bool inClassG(const SparseSpectrum& f, double a);
bool isConjugateSymmetric(const SparseSpectrum& f, double tol = 0.0);

// f(2*pi*j/M), j = 0..M-1. Exact at grid points for any M; frequencies are
// reduced mod M.
std::vector<Complex> evalOnGrid(const SparseSpectrum& f, std::size_t M);

// Largest grid accepted by evalOnGrid / l1Norm.
constexpr std::size_t kMaxGrid = std::size_t(1) << 27;

Frequency floorMod(const Frequency& n, const Frequency& q);
std::string toDecimal(const Frequency& n);
Frequency parseFrequency(const std::string& s);

nlohmann::json toJson(const SparseSpectrum& f);
SparseSpectrum spectrumFromJson(const nlohmann::json& j);

}  // namespace wp
