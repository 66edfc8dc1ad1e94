#include "wp/riesz.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wp {

void validateRiesz(const RieszParams& params, int N) {
  if (N < 0) throw std::invalid_argument("riesz: N must be >= 0");
  if (params.a.size() < static_cast<std::size_t>(N) || params.n.size() < static_cast<std::size_t>(N))
    throw std::invalid_argument("riesz: fewer than N parameters");
  for (int k = 0; k < N; ++k) {
    if (!(params.a[k] >= -1.0 && params.a[k] <= 1.0))
      throw std::invalid_argument("riesz: a_" + std::to_string(k + 1) + " outside [-1,1]");
    if (params.n[k] <= 0) throw std::invalid_argument("riesz: n_" + std::to_string(k + 1) + " must be positive");
    if (k > 0 && params.n[k] < 3 * params.n[k - 1])
      throw std::invalid_argument("riesz: lacunarity n_{k+1} >= 3 n_k fails at k=" + std::to_string(k));
  }
}

SparseSpectrum rieszPartial(const RieszParams& params, int N) {
  validateRiesz(params, N);
  SparseSpectrum f = SparseSpectrum::constant(1.0);
  for (int k = 0; k < N; ++k) {
    std::vector<SparseSpectrum::Entry> e;
    e.push_back({Frequency(0), Coefficient{1.0, std::nullopt}});
    e.push_back({params.n[k], Coefficient{params.a[k] / 2.0, std::nullopt}});
    e.push_back({Frequency(-params.n[k]), Coefficient{params.a[k] / 2.0, std::nullopt}});
    f = multiply(f, SparseSpectrum::fromEntries(std::move(e)));
  }
  return f;
}

std::vector<double> brownMoranDiagnostic(const std::vector<double>& a, const std::vector<double>& b, int N) {
  if (a.size() != b.size()) throw std::invalid_argument("brownMoran: length mismatch");
  if (N < 0 || static_cast<std::size_t>(N) > a.size()) throw std::invalid_argument("brownMoran: N out of range");
  std::vector<double> out;
  out.reserve(N);
  double s = 0.0;
  for (int k = 0; k < N; ++k) {
    s += (a[k] - b[k]) * (a[k] - b[k]);
    out.push_back(s);
  }
  return out;
}

std::vector<double> zafranCriterionDiagnostic(const std::vector<double>& a, int m, int N) {
  if (m < 1) throw std::invalid_argument("zafran: m must be >= 1");
  if (N < 0 || static_cast<std::size_t>(N) > a.size()) throw std::invalid_argument("zafran: N out of range");
  std::vector<double> out;
  out.reserve(N);
  double s = 0.0;
  for (int k = 0; k < N; ++k) {
    s += std::pow(std::abs(a[k]), m);
    out.push_back(s);
  }
  return out;
}

}  // namespace wp
