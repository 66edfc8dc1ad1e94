#include "wp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wp {

namespace {

bool lessComplex(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double minSeparation(std::vector<Complex> pts) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::min(d, std::abs(pts[i] - pts[j]));
  return d;
}

std::size_t nearest(const std::vector<Complex>& vals, Complex v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (std::abs(vals[i] - v) < std::abs(vals[best] - v)) best = i;
  return best;
}

}  // namespace

std::vector<Complex> valueSet(const SparseSpectrum& f, double tol) {
  if (tol < 0.0) throw std::invalid_argument("valueSet: tol must be >= 0");
  std::vector<Complex> raw;
  for (const auto& e : f.entries())
    if (e.second.value != Complex(0.0, 0.0)) raw.push_back(e.second.value);
  std::sort(raw.begin(), raw.end(), lessComplex);
  if (tol == 0.0) {
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    return raw;
  }
  // single-linkage clusters under distance <= tol
  std::vector<int> label(raw.size(), -1);
  int nc = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (label[i] >= 0) continue;
    std::vector<std::size_t> stack{i};
    label[i] = nc;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < raw.size(); ++b)
        if (label[b] < 0 && std::abs(raw[a] - raw[b]) <= tol) {
          label[b] = nc;
          stack.push_back(b);
        }
    }
    ++nc;
  }
  std::vector<Complex> sum(nc, Complex(0.0, 0.0));
  std::vector<int> cnt(nc, 0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    sum[label[i]] += raw[i];
    ++cnt[label[i]];
  }
  for (std::size_t a = 0; a < raw.size(); ++a)
    for (std::size_t b = 0; b < raw.size(); ++b)
      if (label[a] != label[b] && std::abs(raw[a] - raw[b]) < 2.0 * tol)
        throw std::invalid_argument("valueSet: ambiguous clusters closer than 2*tol");
  std::vector<Complex> out;
  for (int c = 0; c < nc; ++c) out.push_back(sum[c] / static_cast<double>(cnt[c]));
  std::sort(out.begin(), out.end(), lessComplex);
  return out;
}

SpectralDecomposition idempotentDecompose(const SparseSpectrum& f, double tol) {
  SpectralDecomposition d;
  d.values = valueSet(f, tol);
  std::vector<std::vector<SparseSpectrum::Entry>> parts(d.values.size());
  for (const auto& e : f.entries()) {
    if (e.second.value == Complex(0.0, 0.0)) continue;
    const std::size_t i = nearest(d.values, e.second.value);
    parts[i].push_back({e.first, Coefficient{Complex(1.0, 0.0), std::nullopt}});
  }
  for (auto& p : parts) d.idempotents.push_back(SparseSpectrum::fromEntries(std::move(p)));
  std::vector<Complex> withZero = d.values;
  withZero.push_back(Complex(0.0, 0.0));
  d.delta = minSeparation(withZero);
  for (const auto& v : d.values) d.lambdaMax = std::max(d.lambdaMax, std::abs(v));
  return d;
}

SparseSpectrum reconstruct(const SpectralDecomposition& d) {
  SparseSpectrum s;
  for (int i = 0; i < d.k(); ++i) s = add(s, scale(d.idempotents[i], d.values[i]));
  return s;
}

SparseSpectrum convPower(const SparseSpectrum& f, int m) {
  if (m < 0) throw std::invalid_argument("convPower: m must be >= 0");
  std::vector<SparseSpectrum::Entry> out;
  for (const auto& e : f.entries()) {
    Complex v(1.0, 0.0);
    for (int i = 0; i < m; ++i) v *= e.second.value;
    out.push_back({e.first, Coefficient{v, std::nullopt}});
  }
  return SparseSpectrum::fromEntries(std::move(out));
}

IdempotentReport checkIdempotents(const SparseSpectrum& f, const SpectralDecomposition& d) {
  IdempotentReport r;
  r.idempotent = true;
  r.orthogonal = true;
  for (int i = 0; i < d.k(); ++i) {
    const SparseSpectrum sq = convolve(d.idempotents[i], d.idempotents[i]);
    if (sq.entries().size() != d.idempotents[i].size()) r.idempotent = false;
    for (const auto& e : d.idempotents[i].entries())
      if (sq.at(e.first) != Complex(1.0, 0.0) || e.second.value != Complex(1.0, 0.0)) r.idempotent = false;
    for (int j = i + 1; j < d.k(); ++j)
      if (!convolve(d.idempotents[i], d.idempotents[j]).empty()) r.orthogonal = false;
  }
  const SparseSpectrum back = reconstruct(d);
  r.reconstructs = back.size() == f.size();
  for (const auto& e : f.entries())
    if (back.at(e.first) != e.second.value) r.reconstructs = false;
  const L1Estimate nf = l1Norm(f);
  const int k = d.k();
  r.normBoundPass = true;
  for (int i = 0; i < k; ++i) {
    const L1Estimate ni = l1Norm(d.idempotents[i]);
    const double b = std::pow(2.0 * (nf.value + nf.errorBound) / d.delta, k);
    r.l1.push_back(ni.value);
    r.l1Error.push_back(ni.errorBound);
    r.bound.push_back(b);
    if (!(ni.value <= b + ni.errorBound)) r.normBoundPass = false;
  }
  return r;
}

bool PowerBoundReport::allPass() const {
  return std::all_of(rows.begin(), rows.end(), [](const PowerBoundRow& r) { return r.pass; });
}

PowerBoundReport convPowerBoundCheck(const SparseSpectrum& f, int mMax) {
  const SpectralDecomposition d = idempotentDecompose(f);
  PowerBoundReport rep;
  rep.k = d.k();
  rep.delta = d.delta;
  rep.lambdaMax = d.lambdaMax;
  const L1Estimate nf = l1Norm(f);
  rep.l1f = nf.value;
  rep.l1fError = nf.errorBound;
  const double base = rep.k * std::pow(2.0 * (nf.value + nf.errorBound) / d.delta, rep.k);
  for (int m = 1; m <= mMax; ++m) {
    PowerBoundRow row;
    row.m = m;
    const L1Estimate nm = l1Norm(convPower(f, m));
    row.l1 = nm.value;
    row.l1Error = nm.errorBound;
    row.bound = base * std::pow(d.lambdaMax, m);
    row.margin = row.bound + row.l1Error - row.l1;
    row.pass = row.margin >= 0.0;
    rep.rows.push_back(row);
  }
  return rep;
}

PerturbedReport perturbedPowerBoundCheck(const SparseSpectrum& f, const std::vector<Complex>& Lambda, double eps,
                                         int k, double L) {
  std::vector<Complex> all = Lambda;
  std::sort(all.begin(), all.end(), lessComplex);
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (std::find(all.begin(), all.end(), Complex(0.0, 0.0)) == all.end())
    throw std::invalid_argument("perturbed: Lambda must contain 0");
  if (all.size() < 2) throw std::invalid_argument("perturbed: Lambda needs a nonzero value");
  if (eps < 0.0) throw std::invalid_argument("perturbed: eps must be >= 0");
  PerturbedReport r;
  r.eps = eps;
  r.delta = minSeparation(all);
  if (!(eps < r.delta / 2.0)) throw std::invalid_argument("perturbed: eps >= delta/2, snapping ill-defined");
  for (const auto& v : all)
    if (v != Complex(0.0, 0.0)) {
      r.lambda.push_back(v);
      r.lambdaMax = std::max(r.lambdaMax, std::abs(v));
    }
  r.m = static_cast<int>(r.lambda.size());
  r.k = k;
  r.C = r.m * std::pow(2.0, r.m + 1) * std::pow(r.lambdaMax / r.delta, r.m);
  std::vector<SparseSpectrum::Entry> f0, g;
  double gmax = 0.0;
  for (const auto& e : f.entries()) {
    const Complex v = all[nearest(all, e.second.value)];
    const double dist = std::abs(e.second.value - v);
    gmax = std::max(gmax, dist);
    f0.push_back({e.first, Coefficient{v, std::nullopt}});
    g.push_back({e.first, Coefficient{e.second.value - v, std::nullopt}});
  }
  if (gmax > eps) throw std::invalid_argument("perturbed: a coefficient lies outside Lambda + B(0, eps)");
  r.f0 = SparseSpectrum::fromEntries(std::move(f0));
  r.g = SparseSpectrum::fromEntries(std::move(g));
  r.gL2 = l2Norm(r.g);
  r.gBound = eps * std::sqrt(static_cast<double>(r.g.size()));
  r.gPass = r.gL2 <= r.gBound * (1.0 + 1e-12);
  const L1Estimate nf = l1Norm(f);
  const L1Estimate nk = l1Norm(convPower(f, k));
  r.l1f = nf.value;
  r.l1fk = nk.value;
  r.l1Error = nk.errorBound;
  r.bound = r.C * std::pow(r.lambdaMax, k - r.m) * std::pow(nf.value + nf.errorBound, r.m);
  r.boundPass = r.l1fk <= r.bound + r.l1Error;
  if (!f.empty()) {
    r.gammaTimesNorm = minNonzeroCoeff(f) * nf.value;
    r.LlnCount = L * std::log(static_cast<double>(f.size()));
  }
  return r;
}

AnnihilationReport annihilatingPolynomialCheck(const AffineSpectrum& f, const std::vector<Complex>& values) {
  AnnihilationReport r;
  r.values = values;
  if (f.unitScale == Complex(0.0, 0.0) &&
      std::find(r.values.begin(), r.values.end(), Complex(0.0, 0.0)) == r.values.end())
    r.values.push_back(Complex(0.0, 0.0));
  AffineSpectrum p = AffineSpectrum::unit();
  for (const auto& a : r.values) {
    AffineSpectrum factor{f.unitScale - a, f.sparsePart};
    p = convolve(p, factor);
  }
  r.product = p;
  r.residual = std::abs(p.unitScale);
  for (const auto& e : p.sparsePart.entries()) r.residual = std::max(r.residual, std::abs(p.at(e.first)));
  return r;
}

}  // namespace wp
