#include "wp/rudinshapiro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wp {

RSPair rudinShapiroPair(int n) {
  if (n < 0) throw std::invalid_argument("rudinShapiroPair: n must be >= 0");
  if (n > 40) throw std::length_error("rudinShapiroPair: level too large to materialize");
  std::vector<int> p{1}, q{1};
  for (int k = 0; k < n; ++k) {
    const std::size_t h = p.size();
    std::vector<int> np(2 * h), nq(2 * h);
    for (std::size_t j = 0; j < h; ++j) {
      np[j] = p[j];
      nq[j] = p[j];
      np[h + j] = q[j];
      nq[h + j] = -q[j];
    }
    p.swap(np);
    q.swap(nq);
  }
  auto build = [](const std::vector<int>& c) {
    std::vector<SparseSpectrum::Entry> e;
    e.reserve(c.size());
    for (std::size_t j = 0; j < c.size(); ++j)
      e.push_back({Frequency(j), Coefficient{Complex(c[j], 0.0), ExactForm{c[j], {}}}});
    return SparseSpectrum::fromEntries(std::move(e));
  };
  return {n, build(p), build(q)};
}

std::pair<Complex, Complex> rsEvaluate(int n, double t) {
  Complex p(1.0, 0.0), q(1.0, 0.0);
  double phase = t;  // 2^k t
  for (int k = 0; k < n; ++k) {
    const Complex e = std::polar(1.0, std::fmod(phase, 2.0 * M_PI));
    const Complex np = p + e * q;
    const Complex nq = p - e * q;
    p = np;
    q = nq;
    phase = std::fmod(2.0 * phase, 2.0 * M_PI);
  }
  return {p, q};
}

std::pair<Complex, Complex> rsEvaluateGrid(int n, std::uint64_t u, std::uint64_t M) {
  Complex p(1.0, 0.0), q(1.0, 0.0);
  unsigned __int128 v = u % M;
  for (int k = 0; k < n; ++k) {
    const Complex e = std::polar(1.0, 2.0 * M_PI * static_cast<double>(v) / static_cast<double>(M));
    const Complex np = p + e * q;
    const Complex nq = p - e * q;
    p = np;
    q = nq;
    v = (2 * v) % M;
  }
  return {p, q};
}

FlatnessReport verifyFlatness(const RSPair& pair, int gridOversample) {
  FlatnessReport r;
  const std::size_t len = std::size_t(1) << pair.n;

  // integer sum of squares against 2^n
  long long sumSq = 0;
  bool pm = pair.P.size() == len && pair.Q.size() == len;
  for (const auto* s : {&pair.P, &pair.Q}) {
    for (const auto& e : s->entries()) {
      const Complex v = e.second.value;
      const bool unit = v.imag() == 0.0 && (v.real() == 1.0 || v.real() == -1.0);
      pm = pm && unit && e.first >= 0 && e.first < Frequency(len);
      if (s == &pair.P) sumSq += std::llround(std::norm(v));
    }
  }
  r.plusMinusOne = pm;
  r.l2 = l2Norm(pair.P);
  r.l2Exact = pm && sumSq == static_cast<long long>(len);

  const std::size_t M = static_cast<std::size_t>(gridOversample) * (2 * len + 1);
  r.gridSize = M;
  const auto gp = evalOnGrid(pair.P, M);
  const auto gq = evalOnGrid(pair.Q, M);
  const double target = std::ldexp(1.0, pair.n + 1);
  for (std::size_t j = 0; j < M; ++j) {
    r.gridSup = std::max(r.gridSup, std::abs(gp[j]));
    const double s = std::norm(gp[j]) + std::norm(gq[j]);
    r.maxParallelogramDev = std::max(r.maxParallelogramDev, std::abs(s - target) / target);
  }
  r.supLimit = std::pow(2.0, (pair.n + 1) / 2.0) * (1.0 + 1e-6);
  r.supBound = r.gridSup <= r.supLimit;
  r.parallelogram = r.maxParallelogramDev <= 1e-9;
  return r;
}

}  // namespace wp
