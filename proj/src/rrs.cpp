#include "wp/rrs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wp/rudinshapiro.hpp"

namespace wp {

namespace {

std::string idx(int k) { return std::to_string(k); }

Frequency pow2(int n) { return Frequency(1) << n; }

void checkLevel(const RRSParams& p, int k) {
  if (k < 1 || k > p.levels()) throw std::out_of_range("level " + idx(k) + " outside 1.." + idx(p.levels()));
}

}  // namespace

Frequency blockExtent(const RRSParams& p, int j) {
  checkLevel(p, j);
  return (pow2(p.n[j - 1]) - 1) * p.m[j - 1] + p.r[j - 1];
}

Frequency gapSum(const RRSParams& p, int k) {
  Frequency s = 0;
  for (int j = 1; j < k; ++j) s += blockExtent(p, j);
  return 2 * s;
}

int nFromEps(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double x = std::log2(1.0 / eps);
  const double lo = 2.0 * x - 5.0, hi = 2.0 * x - 3.0;
  int n = static_cast<int>(std::floor(lo)) + 1;
  if (n < 1) n = 1;
  if (!(n > lo && n < hi)) throw std::invalid_argument("no positive integer n inside the interval for eps");
  return n;
}

namespace {

// r_k = G_k + 1 and m_k = 2 r_k with G_k = gapSum(k). Then r_k sits halfway
// between multiples of m_k, so (j - j') m_k never has a representation and
// the cross terms inside A_k vanish.
void fillGaps(RRSParams& p) {
  const int L = p.levels();
  p.m.assign(L, Frequency(0));
  p.r.assign(L, Frequency(0));
  for (int k = 1; k <= L; ++k) {
    const Frequency g = gapSum(p, k) + 1;
    p.r[k - 1] = g;
    p.m[k - 1] = 2 * g;
  }
}

}  // namespace

RRSParams deriveParams(const std::vector<double>& eps) {
  if (eps.empty()) throw std::invalid_argument("deriveParams: empty eps sequence");
  if (!(eps[0] > 0.0 && eps[0] < 0.25)) throw std::invalid_argument("deriveParams: need 0 < eps_1 < 1/4");
  for (std::size_t k = 1; k < eps.size(); ++k)
    if (!(eps[k] > 0.0 && eps[k] < eps[k - 1] / 2.0))
      throw std::invalid_argument("deriveParams: eps_" + idx(k + 1) + " < eps_" + idx(k) + "/2 violated");
  RRSParams p;
  p.eps = eps;
  for (double e : eps) p.n.push_back(nFromEps(e));
  fillGaps(p);
  validateParams(p, EpsBound::TwoSided);
  return p;
}

RRSParams paramsFromLevels(const std::vector<double>& eps, const std::vector<int>& n) {
  if (eps.size() != n.size()) throw std::invalid_argument("paramsFromLevels: length mismatch");
  RRSParams p;
  p.eps = eps;
  p.n = n;
  fillGaps(p);
  validateParams(p, EpsBound::UpperOnly);
  return p;
}

void validateParams(const RRSParams& p, EpsBound bound) {
  const int L = p.levels();
  if (static_cast<int>(p.n.size()) != L || static_cast<int>(p.m.size()) != L || static_cast<int>(p.r.size()) != L)
    throw std::invalid_argument("params: sequence lengths differ");
  for (int k = 1; k <= L; ++k) {
    const double e = p.eps[k - 1];
    const int n = p.n[k - 1];
    if (!(e > 0.0)) throw std::invalid_argument("params: eps_" + idx(k) + " must be positive");
    if (n < 1) throw std::invalid_argument("params: n_" + idx(k) + " must be positive");
    if (p.m[k - 1] < 1 || p.r[k - 1] < 1) throw std::invalid_argument("params: m_k, r_k must be positive at " + idx(k));
    const double v = e * std::pow(2.0, (n + 3) / 2.0);
    if (!(v < 1.0)) throw std::invalid_argument("params: eps_" + idx(k) + " 2^{(n+3)/2} < 1 violated");
    if (bound == EpsBound::TwoSided && !(v > 0.5))
      throw std::invalid_argument("params: eps_" + idx(k) + " 2^{(n+3)/2} > 1/2 violated");
    if (k > 1) {
      if (!(e < p.eps[k - 2])) throw std::invalid_argument("params: eps not decreasing at " + idx(k));
      if (n <= p.n[k - 2]) throw std::invalid_argument("params: n not increasing at " + idx(k));
      const Frequency g = gapSum(p, k);
      if (!(p.r[k - 1] > g)) throw std::invalid_argument("params: gap condition on r_" + idx(k) + " violated");
      if (!(p.m[k - 1] > g)) throw std::invalid_argument("params: gap condition on m_" + idx(k) + " violated");
    }
  }
}

SparseSpectrum wPoly(int k, const RRSParams& p) {
  checkLevel(p, k);
  const int n = p.n[k - 1];
  if (n > 24) throw std::length_error("wPoly: level too large to materialize");
  const double e = p.eps[k - 1];
  const std::uint64_t len = std::uint64_t(1) << n;
  std::vector<SparseSpectrum::Entry> out;
  out.reserve(2 * len);
  for (std::uint64_t j = 0; j < len; ++j) {
    const int a = rsSign(j);
    const Frequency f = p.r[k - 1] + Frequency(j) * p.m[k - 1];
    const Coefficient c{Complex(e * a, 0.0), ExactForm{a, {k}}};
    out.push_back({f, c});
    out.push_back({Frequency(-f), c});
  }
  return SparseSpectrum::fromEntries(std::move(out));
}

double wL2SquaredStructured(int k, const RRSParams& p) {
  checkLevel(p, k);
  const Frequency& r = p.r[k - 1];
  const Frequency& m = p.m[k - 1];
  // positive progression [r, extent] and its mirror are disjoint iff r > 0;
  // points inside one progression are distinct iff m > 0
  if (!(r > 0 && m > 0)) throw std::logic_error("w_k progressions overlap");
  const double e = p.eps[k - 1];
  const double perPoint = e * e;  // |eps a_j|^2 with a_j = +-1
  return 2.0 * std::ldexp(1.0, p.n[k - 1]) * perPoint;
}

double wGridSup(int k, const RRSParams& p, std::uint64_t samples) {
  checkLevel(p, k);
  const Frequency S(samples);
  const auto mu = static_cast<std::uint64_t>(floorMod(p.m[k - 1], S));
  const auto ru = static_cast<std::uint64_t>(floorMod(p.r[k - 1], S));
  const double e = p.eps[k - 1];
  double sup = 0.0;
  for (std::uint64_t j = 0; j < samples; ++j) {
    const auto um = static_cast<std::uint64_t>((static_cast<unsigned __int128>(mu) * j) % samples);
    const auto ur = static_cast<std::uint64_t>((static_cast<unsigned __int128>(ru) * j) % samples);
    const Complex P = rsEvaluateGrid(p.n[k - 1], um, samples).first;
    const Complex rot = std::polar(1.0, 2.0 * M_PI * static_cast<double>(ur) / static_cast<double>(samples));
    sup = std::max(sup, std::abs(2.0 * e * (P * rot).real()));
  }
  return sup;
}

SparseSpectrum partialProduct(const RRSParams& p, int N) {
  if (N < 0 || N > p.levels()) throw std::out_of_range("partialProduct: N outside 0..levels");
  std::vector<SparseSpectrum::Entry> one;
  one.push_back({Frequency(0), Coefficient{1.0, ExactForm{1, {}}}});
  SparseSpectrum f = SparseSpectrum::fromEntries(one);
  for (int k = 1; k <= N; ++k) {
    std::vector<SparseSpectrum::Entry> e = one;
    const SparseSpectrum w = wPoly(k, p);
    for (const auto& x : w.entries())
      e.push_back({x.first, Coefficient{-x.second.value, x.second.exact->negated()}});
    f = multiply(f, SparseSpectrum::fromEntries(std::move(e)));
  }
  return f;
}

std::optional<Representation> uniqueRepresentation(const Frequency& s, const RRSParams& p, int N) {
  if (N < 0 || N > p.levels()) throw std::out_of_range("uniqueRepresentation: N outside 0..levels");
  Representation rep;
  rep.b.assign(N, 0);
  rep.idx.assign(N, 0);
  rep.c.assign(N, Frequency(0));
  Frequency rest = s;
  for (int k = N; k >= 1; --k) {
    const Frequency half = gapSum(p, k) / 2;  // max |sum over lower levels|
    if (abs(rest) <= half) continue;
    const int sign = rest > 0 ? 1 : -1;
    const Frequency t = abs(rest) - p.r[k - 1];
    const Frequency& m = p.m[k - 1];
    Frequency j = t >= 0 ? Frequency((t + m / 2) / m) : Frequency(0);
    const Frequency jmax = pow2(p.n[k - 1]) - 1;
    if (j > jmax) j = jmax;
    const Frequency c = p.r[k - 1] + j * m;
    if (abs(abs(rest) - c) > half) return std::nullopt;
    rep.b[k - 1] = sign;
    rep.idx[k - 1] = static_cast<std::uint64_t>(j);
    rep.c[k - 1] = c;
    rest -= sign * c;
  }
  if (rest != 0) return std::nullopt;
  return rep;
}

Coefficient coeffAt(const Frequency& s, const RRSParams& p, int N) {
  const auto rep = uniqueRepresentation(s, p, N);
  if (!rep) return Coefficient{Complex(0.0, 0.0), std::nullopt};
  ExactForm x{1, {}};
  double v = 1.0;
  for (int k = 1; k <= N; ++k) {
    if (rep->b[k - 1] == 0) continue;
    const int a = -rsSign(rep->idx[k - 1]);
    x.sign *= a;
    x.epsIndices.push_back(k);
    v *= a * p.eps[k - 1];
  }
  return Coefficient{Complex(v, 0.0), x};
}

}  // namespace wp
