#include "wp/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace wp {

Progression progressionSplit(const std::vector<Frequency>& support, std::size_t d) {
  if (d == 0) throw std::invalid_argument("progressionSplit: d must be positive");
  if (support.size() < d) throw std::invalid_argument("progressionSplit: |support| < d");
  Progression p;
  std::vector<Frequency> cls = support;
  while (cls.size() >= 2 * d) {
    const Frequency q2 = p.q * 2;
    std::vector<Frequency> lo, hi;  // residues rho and rho + q mod 2q
    for (const auto& s : cls) (floorMod(s, q2) == p.rho ? lo : hi).push_back(s);
    const Frequency rhoHi = p.rho + p.q;
    bool takeLo;
    if (lo.size() >= d && hi.size() >= d)
      takeLo = lo.size() != hi.size() ? lo.size() < hi.size() : true;  // p.rho < rhoHi
    else
      takeLo = lo.size() >= d;
    if (takeLo) {
      cls = std::move(lo);
    } else {
      cls = std::move(hi);
      p.rho = rhoHi;
    }
    p.q = q2;
    ++p.splits;
  }
  p.count = cls.size();
  return p;
}

void InterpolationProblem::validate() const {
  if (lambda.empty()) throw std::invalid_argument("bpb: empty lambda");
  const std::set<long long> s(candidateSupport.begin(), candidateSupport.end());
  for (long long l : lambda)
    if (!s.count(l)) throw std::invalid_argument("bpb: lambda not contained in candidate support");
  long long mx = 0;
  for (long long v : candidateSupport) mx = std::max(mx, v < 0 ? -v : v);
  if (gridSize != 0 && gridSize <= static_cast<std::size_t>(2 * mx))
    throw std::invalid_argument("bpb: grid size must exceed 2 max|support|");
}

std::size_t InterpolationProblem::effectiveGrid() const {
  if (gridSize) return gridSize;
  long long mx = 0;
  for (long long v : candidateSupport) mx = std::max(mx, v < 0 ? -v : v);
  return static_cast<std::size_t>(64 * (2 * mx + 1));
}

namespace {

Complex unitRoot(long long s, long long i, long long M) {
  long long k = static_cast<long long>((static_cast<__int128>(s) * i) % M);
  if (k < 0) k += M;
  return std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(M));
}

}  // namespace

BpbResult bpbMinimize(const InterpolationProblem& problem, double targetEps, const BpbOptions& opt) {
  problem.validate();
  const std::set<long long> lam(problem.lambda.begin(), problem.lambda.end());
  std::vector<long long> freeFreq;
  for (long long s : std::set<long long>(problem.candidateSupport.begin(), problem.candidateSupport.end()))
    if (!lam.count(s)) freeFreq.push_back(s);
  const long long M = static_cast<long long>(problem.effectiveGrid());
  const Eigen::Index nf = static_cast<Eigen::Index>(freeFreq.size());

  Eigen::VectorXcd b(M);
  Eigen::MatrixXcd A(M, nf);
  for (long long i = 0; i < M; ++i) {
    Complex v(0.0, 0.0);
    for (long long l : lam) v += unitRoot(l, i, M);
    b(i) = v;
    for (Eigen::Index j = 0; j < nf; ++j) A(i, j) = unitRoot(freeFreq[j], i, M);
  }
  auto objective = [&](const Eigen::VectorXcd& x) {
    const Eigen::VectorXcd r = nf ? Eigen::VectorXcd(b + A * x) : b;
    return r.cwiseAbs().mean();
  };

  BpbResult res;
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(nf);
  double J = objective(x);
  res.history.push_back(J);
  double eta = J;
  if (nf > 0) {
    for (int it = 0; it < opt.maxIterations; ++it) {
      res.iterations = it + 1;
      const Eigen::VectorXcd r = b + A * x;
      Eigen::VectorXd sw(M);
      for (long long i = 0; i < M; ++i) sw(i) = 1.0 / std::sqrt(std::sqrt(std::norm(r(i)) + eta * eta));
      const Eigen::MatrixXcd As = sw.asDiagonal() * A;
      const Eigen::VectorXcd bs = sw.asDiagonal() * b;
      const Eigen::VectorXcd xn = As.colPivHouseholderQr().solve(-bs);
      const double Jn = objective(xn);
      if (Jn < J) {
        const double rel = (J - Jn) / J;
        x = xn;
        J = Jn;
        res.history.push_back(J);
        if (rel < opt.relTol && eta < 1e-6 * J) {
          res.converged = true;
          break;
        }
        eta = std::max(eta * 0.5, 1e-12 * J);
      } else {
        if (eta <= 1e-12 * J) {
          res.converged = true;
          break;
        }
        eta = std::max(eta * 0.1, 1e-12 * J);
      }
    }
  } else {
    res.converged = true;
  }

  std::vector<SparseSpectrum::Entry> e;
  for (long long l : lam) e.push_back({Frequency(l), Coefficient{Complex(1.0, 0.0), ExactForm{1, {}}}});
  for (Eigen::Index j = 0; j < nf; ++j)
    if (x(j) != Complex(0.0, 0.0)) e.push_back({Frequency(freeFreq[j]), Coefficient{x(j), std::nullopt}});
  res.f = SparseSpectrum::fromEntries(std::move(e));
  res.gridL1 = J;
  const L1Estimate est = l1Norm(res.f);
  res.l1 = est.value;
  res.l1Error = est.errorBound;
  for (long long l : lam) res.constraintResidual = std::max(res.constraintResidual, std::abs(res.f.at(l) - 1.0));
  res.withinTarget = res.l1 <= 1.0 + targetEps;
  return res;
}

SparseSpectrum dirichletKernel(long long N) {
  if (N < 0) throw std::invalid_argument("dirichletKernel: N must be >= 0");
  std::vector<SparseSpectrum::Entry> e;
  e.reserve(2 * N + 1);
  for (long long n = -N; n <= N; ++n) e.push_back({Frequency(n), Coefficient{Complex(1.0, 0.0), ExactForm{1, {}}}});
  return SparseSpectrum::fromEntries(std::move(e));
}

LittlewoodResult littlewoodRatio(const SparseSpectrum& f, int oversample) {
  std::size_t count = 0;
  for (const auto& e : f.entries()) {
    if (e.second.value == Complex(0.0, 0.0)) continue;
    if (std::abs(e.second.value) < 1.0) throw std::invalid_argument("littlewood: coefficient of modulus < 1");
    ++count;
  }
  if (count < 2) throw std::invalid_argument("littlewood: need at least 2 nonzero coefficients");
  const L1Estimate est = l1Norm(f, oversample);
  LittlewoodResult r;
  const double ln = std::log(static_cast<double>(count));
  r.count = count;
  r.l1 = est.value;
  r.l1Error = est.errorBound;
  r.ratio = est.value / ln;
  r.lo = std::max(0.0, est.value - est.errorBound) / ln;
  r.hi = (est.value + est.errorBound) / ln;
  return r;
}

double littlewoodEmpiricalL(const std::vector<SparseSpectrum>& family, int oversample) {
  if (family.empty()) throw std::invalid_argument("littlewood: empty family");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : family) best = std::min(best, littlewoodRatio(f, oversample).ratio);
  return best;
}

}  // namespace wp
