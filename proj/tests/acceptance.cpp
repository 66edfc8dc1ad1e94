// Acceptance suite. Usage: acceptance [--criterion N]. Prints one PASS/FAIL
// line per criterion and exits nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "wp/approx.hpp"
#include "wp/rrs.hpp"
#include "wp/rudinshapiro.hpp"
#include "wp/spectra.hpp"
#include "wp/witness.hpp"
#include "wp/wpsets.hpp"

using namespace wp;

namespace {

// Tolerances and limits.
constexpr double kSupSlack = 1e-6;          // criterion 1
constexpr double kRunTime1 = 10.0;          // seconds
constexpr double kRel2 = 1e-12;             // criterion 2
constexpr double kGridMin3 = -1e-9;         // criterion 3
constexpr double kRunTime3 = 60.0;
constexpr double kExactRel = 1e-15;         // exact-form vs double value
constexpr double kNormIdentity = 1e-12;             // criterion 5
constexpr double kBrute5 = 1e-8;
constexpr double kBlockSum = 1e-12;
constexpr double kL2Slack6 = 1e-9;          // criterion 6
constexpr double kBpbTol = 1e-3;            // criterion 9
constexpr double kBpbResidual = 1e-9;
constexpr double kRatioLo = 0.38, kRatioHi = 0.55, kRatioFloor = 0.1;  // criterion 10
constexpr double kRunTime11 = 30.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail.str("");
    pass = false;
    detail << why << "; ";
  }
  void note(const std::string& s) {
    if (pass) detail << s << "; ";
  }
};

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// The small-parameter family: n = 1..L, eps_k = 0.9 2^{-(n_k+3)/2}.
RRSParams smallFamily(int L) {
  std::vector<double> eps;
  std::vector<int> n;
  for (int k = 1; k <= L; ++k) {
    n.push_back(k);
    eps.push_back(0.9 * std::pow(2.0, -(k + 3) / 2.0));
  }
  return paramsFromLevels(eps, n);
}

// eps_k = 0.99^k 2^{-k-1.5}.
RRSParams witnessFamily(int L) {
  std::vector<double> eps;
  for (int k = 1; k <= L; ++k) eps.push_back(std::pow(0.99, k) * std::pow(2.0, -k - 1.5));
  return deriveParams(eps);
}

std::uint64_t modU(const Frequency& x, std::uint64_t M) {
  return static_cast<std::uint64_t>(floorMod(x, Frequency(M)));
}

// f_N(2 pi u / M) from the product form.
double productAt(const RRSParams& p, int N, std::uint64_t u, std::uint64_t M, const std::vector<std::uint64_t>& mm,
                 const std::vector<std::uint64_t>& rm) {
  double v = 1.0;
  for (int k = 0; k < N; ++k) {
    const std::uint64_t mu = static_cast<std::uint64_t>((static_cast<unsigned __int128>(mm[k]) * u) % M);
    const std::uint64_t ru = static_cast<std::uint64_t>((static_cast<unsigned __int128>(rm[k]) * u) % M);
    const Complex P = rsEvaluateGrid(p.n[k], mu, M).first;
    const Complex e = std::polar(1.0, 2.0 * M_PI * static_cast<double>(ru) / static_cast<double>(M));
    v *= 1.0 - 2.0 * p.eps[k] * (P * e).real();
  }
  return v;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n = 0; n <= 16; ++n) {
    const RSPair pr = rudinShapiroPair(n);
    const std::uint64_t len = std::uint64_t(1) << n;
    if (pr.P.size() != len) o.fail("P_" + std::to_string(n) + " has wrong length");
    // Oracle: a_k = (-1)^{number of adjacent 11 pairs in k}.
    for (const auto& e : pr.P.entries()) {
      const std::uint64_t k = static_cast<std::uint64_t>(e.first);
      int pairs = 0;
      for (int b = 0; b + 1 < 64; ++b) pairs += ((k >> b) & 3) == 3;
      const double want = (pairs % 2) ? -1.0 : 1.0;
      if (e.second.value != Complex(want, 0.0)) {
        o.fail("coefficient of P_" + std::to_string(n) + " at " + std::to_string(k) + " not the expected +-1");
        break;
      }
    }
    if (l2NormSquared(pr.P) != static_cast<double>(len)) o.fail("||P_" + std::to_string(n) + "||^2 != 2^n");
    if (std::abs(l2Norm(pr.P) - std::pow(2.0, n / 2.0)) > 4e-16 * std::pow(2.0, n / 2.0))
      o.fail("||P_" + std::to_string(n) + "|| != 2^{n/2}");
    const FlatnessReport fr = verifyFlatness(pr);
    const double limit = std::pow(2.0, (n + 1) / 2.0) * (1.0 + kSupSlack);
    if (!(fr.gridSup <= limit)) o.fail("grid sup of P_" + std::to_string(n) + " = " + fmt(fr.gridSup));
    if (n == 16) o.note("n=16 grid sup " + fmt(fr.gridSup) + " <= " + fmt(limit));
  }
  const double t = seconds(t0);
  if (t >= kRunTime1) o.fail("runtime " + fmt(t) + " s");
  o.note("runtime " + fmt(t) + " s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::vector<double> eps;
  for (int k = 1; k <= 8; ++k) eps.push_back(std::pow(8.0, -k));
  const RRSParams p = deriveParams(eps);
  int identityFailures = 0;
  double worst = 0;
  for (int k = 1; k <= 8; ++k) {
    const double e = p.eps[k - 1];
    const int n = p.n[k - 1];
    const double l2 = wL2SquaredStructured(k, p);
    if (n <= 16) {
      // Oracle: explicit coefficients.
      const double direct = l2NormSquared(wPoly(k, p));
      if (std::abs(direct - l2) > 1e-15 * direct) o.fail("structured and explicit ||w_" + std::to_string(k) + "||^2 differ");
    }
    const double stated = e * e * (std::ldexp(1.0, n + 1) - 1.0);
    const double rel = std::abs(l2 - stated) / stated;
    worst = std::max(worst, rel);
    if (rel > kRel2) ++identityFailures;
    const double sup = wGridSup(k, p, 1 << 14);
    const double bound = e * std::pow(2.0, (n + 3) / 2.0);
    if (!(sup <= bound)) o.fail("grid sup of w_" + std::to_string(k) + " exceeds eps 2^{(n+3)/2}");
  }
  if (identityFailures)
    o.fail("||w_k||^2 = eps^2 (2^{n+1}-1) fails at " + std::to_string(identityFailures) +
           " of 8 levels (measured eps^2 2^{n+1}; worst rel. error " + fmt(worst) + ")");
  else
    o.note("identity within " + fmt(worst));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const RRSParams p = smallFamily(5);
  for (int N = 1; N <= 5; ++N) {
    const SparseSpectrum f = partialProduct(p, N);
    const std::string tag = "N=" + std::to_string(N);
    const Coefficient* c0 = f.find(0);
    if (!c0 || c0->value != Complex(1.0, 0.0) || !c0->exact || !(c0->exact->sign == 1 && c0->exact->epsIndices.empty()))
      o.fail(tag + ": f_N^(0) != 1");
    std::size_t mismatches = 0, badForms = 0;
    for (const auto& e : f.entries()) {
      const auto& x = e.second.exact;
      if (!x || std::abs(x->sign) != 1) {
        ++badForms;
        continue;
      }
      std::set<int> seen(x->epsIndices.begin(), x->epsIndices.end());
      if (seen.size() != x->epsIndices.size() || (!seen.empty() && (*seen.begin() < 1 || *seen.rbegin() > N))) ++badForms;
      const double v = x->evaluate(p.eps);
      if (std::abs(v - e.second.value.real()) > kExactRel * std::abs(v) || e.second.value.imag() != 0.0) ++badForms;
      const Coefficient c = coeffAt(e.first, p, N);
      if (c.value != e.second.value || !c.exact || !(*c.exact == *x)) ++mismatches;
    }
    if (badForms) o.fail(tag + ": " + std::to_string(badForms) + " coefficients outside {+-prod eps_k^{l_k}}");
    if (mismatches) o.fail(tag + ": coeffAt disagrees with expansion at " + std::to_string(mismatches) + " frequencies");
    // Off-support frequencies have coefficient 0.
    std::mt19937_64 rng(7 + N);
    const long long span = static_cast<long long>(f.maxAbsFrequency()) + 10;
    for (int t = 0; t < 2000; ++t) {
      const long long s = std::uniform_int_distribution<long long>(-span, span)(rng);
      if (f.find(s) == nullptr && coeffAt(s, p, N).value != Complex(0.0, 0.0)) {
        o.fail(tag + ": coeffAt nonzero off the support");
        break;
      }
    }
    // Grid minimum from the product form, and the expansion checked against it.
    const std::uint64_t M = N <= 3 ? (std::uint64_t(1) << 16) : (std::uint64_t(1) << 22);
    std::vector<std::uint64_t> mm, rm;
    for (int k = 0; k < N; ++k) {
      mm.push_back(modU(p.m[k], M));
      rm.push_back(modU(p.r[k], M));
    }
    double mn = INFINITY;
    for (std::uint64_t u = 0; u < M; ++u) mn = std::min(mn, productAt(p, N, u, M, mm, rm));
    if (!(mn >= kGridMin3)) o.fail(tag + ": grid minimum " + fmt(mn));
    const std::size_t Mf = std::size_t(1) << 20;
    const std::vector<Complex> g = evalOnGrid(f, Mf);
    double dev = 0;
    for (std::size_t u = 0; u < Mf; u += 97) {
      std::vector<std::uint64_t> m2, r2;
      for (int k = 0; k < N; ++k) {
        m2.push_back(modU(p.m[k], Mf));
        r2.push_back(modU(p.r[k], Mf));
      }
      dev = std::max(dev, std::abs(g[u] - productAt(p, N, u, Mf, m2, r2)));
    }
    if (dev > 1e-9) o.fail(tag + ": expansion and product form differ by " + fmt(dev));
    if (N == 5) o.note("N=5: " + std::to_string(f.size()) + " terms, grid min " + fmt(mn));
  }
  const double t = seconds(t0);
  if (t >= kRunTime3) o.fail("runtime " + fmt(t) + " s");
  o.note("runtime " + fmt(t) + " s");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const std::vector<std::vector<int>> levelSets = {{1, 2, 3}, {1, 3, 4}, {2, 3, 5}, {1, 2, 4}};
  for (const auto& ns : levelSets) {
    std::vector<double> eps;
    for (int n : ns) eps.push_back(0.9 * std::pow(2.0, -(n + 3) / 2.0));
    const RRSParams p = paramsFromLevels(eps, ns);
    std::map<Frequency, int> reps;
    std::size_t total = 0;
    std::function<void(int, Frequency)> rec = [&](int k, Frequency s) {
      if (k == 3) {
        ++reps[s];
        ++total;
        return;
      }
      rec(k + 1, s);
      for (std::uint64_t j = 0; j < (std::uint64_t(1) << p.n[k]); ++j) {
        const Frequency c = p.r[k] + Frequency(j) * p.m[k];
        rec(k + 1, s + c);
        rec(k + 1, s - c);
      }
    };
    rec(0, Frequency(0));
    std::size_t dup = 0;
    for (const auto& [s, cnt] : reps) {
      if (cnt > 1) ++dup;
      const auto r = uniqueRepresentation(s, p, 3);
      if (!r) {
        o.fail("uniqueRepresentation found nothing for an attained frequency");
        break;
      }
      Frequency back = 0;
      for (int k = 0; k < 3; ++k) back += r->b[k] * r->c[k];
      if (back != s) o.fail("representation does not sum to s");
    }
    if (dup) o.fail(std::to_string(dup) + " frequencies with two representations");
    if (o.pass) o.note("n=(" + std::to_string(ns[0]) + "," + std::to_string(ns[1]) + "," + std::to_string(ns[2]) +
                       "): " + std::to_string(total) + " sums, all distinct");
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const RRSParams p = witnessFamily(10);
  const BlockPlan plan = buildBlockPlan(p, 4);
  double prevL2 = INFINITY, prevMu = INFINITY;
  for (int k = 1; k <= 4; ++k) {
    const std::string tag = "block " + std::to_string(k);
    const double bsr = blockSumResidual(plan, k, p);
    if (!(bsr <= kBlockSum)) o.fail(tag + ": block sum residual " + fmt(bsr));
    // Oracle for the block sum, recomputed here.
    double sum = 0;
    for (int l = plan.firstLevel(k); l <= plan.lastLevel(k); ++l)
      sum += plan.weights[l - 1] * std::ldexp(1.0, p.n[l - 1]) * p.eps[l - 1];
    if (std::abs(sum - 1.0) > kBlockSum) o.fail(tag + ": block sum " + fmt(sum));
    const SparseSpectrum f = witnessPoly(plan, k, p);
    const double l2 = l2NormSquared(f);
    double closed = 0;
    for (int l = plan.firstLevel(k); l <= plan.lastLevel(k); ++l)
      closed += std::ldexp(1.0, p.n[l - 1]) * plan.weights[l - 1] * plan.weights[l - 1];
    if (std::abs(l2 - closed) > kNormIdentity * closed) o.fail(tag + ": ||f_k||^2 identity off by " + fmt(std::abs(l2 - closed)));
    if (!(l2 < prevL2)) o.fail(tag + ": ||f_k||^2 not decreasing");
    prevL2 = l2;
    const double mu = l2MuClosedForm(plan, k, p);
    if (!(mu < prevMu && mu > 1.0)) o.fail(tag + ": closed-form L2(mu) not decreasing to 1");
    prevMu = mu;
    if (plan.lastLevel(k) <= 6) {
      for (int N = plan.lastLevel(k); N <= 6; ++N) {
        const double brute = l2MuBruteForce(f, p, N);
        if (std::abs(brute - mu) > kBrute5 * mu)
          o.fail(tag + ", N=" + std::to_string(N) + ": brute " + fmt(brute) + " vs closed " + fmt(mu));
        const Complex in = integralAgainstProduct(f, p, N);
        if (std::abs(in - 1.0) > kBlockSum) o.fail(tag + ": integral against f_N is " + fmt(in.real()));
      }
    }
    o.note("k=" + std::to_string(k) + " ||f||^2=" + fmt(l2) + " L2(mu)=" + fmt(mu));
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const RRSParams p = smallFamily(5);
  double lower = 1.0;
  for (int N = 1; N <= 5; ++N) {
    const double e = p.eps[N - 1];
    const double ne = std::ldexp(1.0, p.n[N - 1]);
    if (!(ne * e * e > 1.0 / 32)) o.fail("2^n eps^2 > 1/32 fails at " + std::to_string(N));
    lower += 2 * e * e * (ne - 1);
    const SparseSpectrum f = partialProduct(p, N);
    const double l2 = l2NormSquared(f);
    if (N <= 3) {
      // Oracle: Parseval on a grid finer than the support.
      const std::size_t M = std::size_t(1) << 14;
      const auto g = evalOnGrid(f, M);
      double mean = 0;
      for (const auto& v : g) mean += std::norm(v);
      mean /= static_cast<double>(M);
      if (std::abs(mean - l2) > 1e-9 * l2) o.fail("Parseval mismatch at N=" + std::to_string(N));
    }
    if (!(l2 >= lower - kL2Slack6)) o.fail("||f_N||^2 below the lower bound at N=" + std::to_string(N));
    if (!(l2 >= 1.0 + N / 16.0)) o.fail("||f_N||^2 < 1 + N/16 at N=" + std::to_string(N));
    o.note("N=" + std::to_string(N) + ": " + fmt(l2) + " >= " + fmt(lower));
  }
  return o;
}

SparseSpectrum randomFiniteValued(std::mt19937_64& rng) {
  static const std::vector<double> pool = {1.0, -1.0, 2.0, -2.0, 0.5, 3.0, -0.5, 1.5};
  std::uniform_int_distribution<int> nk(1, 3), sz(1, 12), fr(-20, 20);
  std::vector<double> vals;
  std::vector<double> shuffled = pool;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  vals.assign(shuffled.begin(), shuffled.begin() + nk(rng));
  std::map<long long, double> m;
  const int count = sz(rng);
  for (int i = 0; i < count; ++i) m[fr(rng)] = vals[std::uniform_int_distribution<std::size_t>(0, vals.size() - 1)(rng)];
  std::vector<std::pair<long long, Complex>> pairs;
  for (const auto& [k, v] : m) pairs.push_back({k, Complex(v, 0.0)});
  return SparseSpectrum::fromPairs(pairs);
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  int annihilateExact = 0;
  double minMargin = INFINITY;
  for (int t = 0; t < 100; ++t) {
    const SparseSpectrum f = randomFiniteValued(rng);
    const SpectralDecomposition d = idempotentDecompose(f);
    const IdempotentReport ir = checkIdempotents(f, d);
    if (!ir.idempotent || !ir.orthogonal || !ir.reconstructs) o.fail("idempotent checks failed on instance " + std::to_string(t));
    // Oracle: reconstruction recomputed coefficientwise.
    for (const auto& e : f.entries()) {
      Complex s(0.0, 0.0);
      for (int i = 0; i < d.k(); ++i) s += d.values[i] * d.idempotents[i].at(e.first);
      if (s != e.second.value) o.fail("sum lambda_i f_i differs at instance " + std::to_string(t));
    }
    const PowerBoundReport pr = convPowerBoundCheck(f, 6);
    if (!pr.allPass()) o.fail("power bound fails on instance " + std::to_string(t));
    for (const auto& r : pr.rows) minMargin = std::min(minMargin, r.margin);
    const AnnihilationReport ar = annihilatingPolynomialCheck(AffineSpectrum{Complex(0.0, 0.0), f}, valueSet(f));
    if (ar.residual == 0.0) ++annihilateExact;
  }
  if (annihilateExact != 100) o.fail("annihilating residual nonzero on " + std::to_string(100 - annihilateExact) + " inputs");
  o.note("100 instances, m <= 6, min bound margin " + fmt(minMargin));
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(8008);
  int sizeFail = 0, modFail = 0, countFail = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 200)(rng);
    std::set<long long> s;
    while (static_cast<int>(s.size()) < n) s.insert(std::uniform_int_distribution<long long>(-1000, 1000)(rng));
    std::vector<Frequency> supp(s.begin(), s.end());
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, supp.size())(rng);
    const Progression pg = progressionSplit(supp, d);
    if (!(d <= pg.count && pg.count < 2 * d)) ++sizeFail;
    std::size_t cnt = 0;
    for (const auto& x : supp) cnt += floorMod(x, pg.q) == pg.rho;
    if (cnt != pg.count) ++countFail;
    const int e = static_cast<int>(std::ceil(std::log2(static_cast<double>(supp.size()) / static_cast<double>(d)))) + 1;
    if (pg.q > (Frequency(1) << e)) ++modFail;
  }
  if (sizeFail) o.fail(std::to_string(sizeFail) + " supports violate d <= count < 2d");
  if (countFail) o.fail(std::to_string(countFail) + " reported counts disagree with a recount");
  if (modFail) o.fail(std::to_string(modFail) + " supports exceed the modulus bound");
  o.note("1000 supports");
  return o;
}

Outcome criterion9() {
  Outcome o;
  InterpolationProblem two{{0, 1}, {0, 1}, 0};
  const BpbResult a = bpbMinimize(two);
  const double fourOverPi = 4.0 / M_PI;
  if (std::abs(a.l1 - fourOverPi) > kBpbTol) o.fail("norm " + fmt(a.l1) + " not within 1e-3 of 4/pi");
  if (a.constraintResidual > kBpbResidual) o.fail("constraint residual " + fmt(a.constraintResidual));
  std::vector<long long> wide;
  for (long long v = -8; v <= 8; ++v) wide.push_back(v);
  const BpbResult b = bpbMinimize(InterpolationProblem{{0, 1}, wide, 0});
  if (!(b.l1 < a.l1)) o.fail("enlarged support did not reduce the norm");
  if (!(b.l1 + b.l1Error >= 1.0)) o.fail("norm below 1");
  if (b.constraintResidual > kBpbResidual) o.fail("constraint residual " + fmt(b.constraintResidual));
  o.note("{0,1}: " + fmt(a.l1) + ", {-8..8}: " + fmt(b.l1));
  return o;
}

Outcome criterion10() {
  Outcome o;
  double prev = INFINITY;
  std::ostringstream ratios;
  for (long long N = 256; N <= 16384; N *= 2) {
    const LittlewoodResult r = littlewoodRatio(dirichletKernel(N));
    // Oracle: trapezoid sum of |D_N| in closed form sin((2N+1)x/2)/sin(x/2).
    const std::size_t M = 64 * (2 * N + 1);
    double sum = 2.0 * N + 1.0;
    for (std::size_t j = 1; j < M; ++j) {
      const double x = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(M);
      sum += std::abs(std::sin((2.0 * N + 1.0) * x / 2.0) / std::sin(x / 2.0));
    }
    const double oracle = sum / static_cast<double>(M);
    if (std::abs(oracle - r.l1) > 1e-9 * oracle) o.fail("l1 of D_" + std::to_string(N) + " disagrees with the closed form");
    if (!(r.ratio >= kRatioLo && r.ratio <= kRatioHi)) o.fail("N=" + std::to_string(N) + " ratio " + fmt(r.ratio) + " outside [0.38, 0.55]");
    if (!(r.ratio < prev)) o.fail("ratios not decreasing at N=" + std::to_string(N));
    prev = r.ratio;
    ratios << N << ":" << fmt(r.ratio) << " ";
  }
  std::mt19937_64 rng(1010);
  int low = 0, instances = 0;
  auto check = [&](const SparseSpectrum& f) {
    ++instances;
    if (!(littlewoodRatio(f).ratio > kRatioFloor)) ++low;
  };
  check(SparseSpectrum::fromPairs({{0, 1.0}, {1, 1.0}}));
  for (int n = 1; n <= 12; ++n) check(rudinShapiroPair(n).P);
  for (int t = 0; t < 40; ++t) {
    std::map<long long, Complex> m;
    const int count = std::uniform_int_distribution<int>(2, 64)(rng);
    while (static_cast<int>(m.size()) < count) {
      const double mod = 1.0 + std::uniform_real_distribution<double>(0.0, 2.0)(rng);
      m[std::uniform_int_distribution<long long>(-500, 500)(rng)] =
          std::polar(mod, std::uniform_real_distribution<double>(0.0, 2 * M_PI)(rng));
    }
    check(SparseSpectrum::fromPairs(std::vector<std::pair<long long, Complex>>(m.begin(), m.end())));
  }
  if (low) o.fail(std::to_string(low) + " of " + std::to_string(instances) + " |c| >= 1 instances with ratio <= 0.1");
  o.note("ratios " + ratios.str());
  if (!o.pass) o.detail << "ratios " << ratios.str();
  return o;
}

Outcome criterion11() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  PsiParams p;
  p.consts = Constants::fromL(0.5);
  SetUSpec s;
  try {
    s = buildSetU(p, 3);
  } catch (const std::exception& e) {
    o.fail(std::string("build failed: ") + e.what());
    return o;
  }
  if (s.components.size() != 3) o.fail("expected 3 components");
  for (const auto& c : s.checks)
    if (!c.pass) o.fail("check failed: " + c.name);
  // Independent recheck where exponents are concrete integers.
  AtomTable T;
  T.atoms = s.atoms;
  for (std::size_t i = 0; i < s.components.size(); ++i)
    for (std::size_t j = i + 1; j < s.components.size(); ++j)
      if (!(T.sign(s.components[j].ys - s.components[i].ys) > 0)) o.fail("components not separated");
  for (const auto& c : s.components)
    for (const auto& a : s.annuli) {
      const bool below = T.sign(c.ys - a.W) > 0;
      const bool above = T.sign(a.k - c.ys) > 0;
      if (!(below || above)) o.fail("component meets annulus");
    }
  if (!(membershipU({1.0, 0.0}, s) == Membership::In && membershipU({-1.0, 0.0}, s) == Membership::In))
    o.fail("+-1 not in U");
  if (membershipU({0.0, 0.0}, s) != Membership::Unknown) o.fail("0 not reported unknown");
  int recursion = 0;
  for (int m = 1; m <= 5; ++m)
    for (std::uint64_t n = 0; n <= 4; ++n) {
      ++recursion;
      if (!bSetRecursionHolds(m, n)) o.fail("B-set recursion fails at m=" + std::to_string(m) + ", n=" + std::to_string(n));
    }
  // Rational oracle for the recursion with concrete eps_i = 1/(i+2).
  std::vector<Rational> eps;
  for (int i = 1; i <= 12; ++i) eps.push_back(Rational(1, i + 2));
  for (int m = 1; m <= 5; ++m)
    for (std::uint64_t n = 0; n <= 4; ++n) {
      auto points = [&](int mm, std::uint64_t nn) {
        std::set<Rational> out;
        const Rational base = sFromBinary(nn << mm, eps);
        for (std::uint64_t j = (nn << mm) + 1; j <= (nn << mm) + (std::uint64_t(1) << mm); ++j) {
          const Rational sc = sFromBinary(j - 1, eps) / base;
          out.insert(sc);
          out.insert(-sc);
        }
        return out;
      };
      std::set<Rational> rhs = points(m - 1, 2 * n);
      const Rational scale = sFromBinary((2 * n + 1) << (m - 1), eps) / sFromBinary(n << m, eps);
      for (const auto& x : points(m - 1, 2 * n + 1)) rhs.insert(scale * x);
      if (rhs != points(m, n)) o.fail("rational recursion check fails at m=" + std::to_string(m));
    }
  const double t = seconds(t0);
  if (t >= kRunTime11) o.fail("runtime " + fmt(t) + " s");
  o.note(std::to_string(s.checks.size()) + " construction checks, " + std::to_string(recursion) +
         " recursion identities, runtime " + fmt(t) + " s");
  return o;
}

Outcome criterion12() {
  Outcome o;
  const std::vector<Ball> balls = defaultCantorBalls(64);
  const CantorResult r = cantorFromBalls(balls, 4);
  if (r.points.size() != 16) o.fail("expected 16 points");
  if (!r.allInside()) o.fail(std::to_string(r.failures) + " differences outside the union");
  // Oracle: exhaustive recheck with direct rational distances.
  std::size_t pairs = 0, outside = 0;
  for (std::size_t a = 0; a < r.points.size(); ++a)
    for (std::size_t b = 0; b < r.points.size(); ++b) {
      if (a == b) continue;
      ++pairs;
      const Rational dr = r.points[a].re - r.points[b].re, di = r.points[a].im - r.points[b].im;
      bool in = dr == 0 && di == 0;
      for (const auto& bl : balls) {
        for (int sg : {1, -1}) {
          const Rational x = dr - sg * bl.center.re, y = di - sg * bl.center.im;
          if (x * x + y * y < bl.radius * bl.radius) in = true;
        }
      }
      if (!in) ++outside;
    }
  if (outside) o.fail(std::to_string(outside) + " ordered differences outside the union (oracle)");
  o.note(std::to_string(pairs) + " ordered differences inside; balls " + std::to_string(r.ballIndices[0]) + "," +
         std::to_string(r.ballIndices[1]) + "," + std::to_string(r.ballIndices[2]) + "," + std::to_string(r.ballIndices[3]));
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion13() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("wp_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream(dir / "poly.json") << R"([{"freq":0,"re":1},{"freq":3,"re":2},{"freq":-4,"re":1},{"freq":7,"re":-1}])";
    std::ofstream(dir / "constants.toml") << "[constants]\nL = 0.5\n\na = 0.5\nb = 3\nK = 1\nannuli = \"default\"\n";
  }
  const std::string cli = WPCLI_PATH;
  struct Pipe {
    std::string args;
    std::string out;
  };
  const std::vector<Pipe> pipes = {
      {"rudin-shapiro --level 6 --out rs.json", "rs.json"},
      {"riesz --levels 4 --out riesz.json", "riesz.json"},
      {"rrs build --levels 2 --out product.json", "product.json"},
      {"rrs witness --levels 5 --blocks 2 --report witness.csv", "witness.csv"},
      {"spectra check --input poly.json --mode power --out spectra.json", "spectra.json"},
      {"bpb --lambda 0,1,5 --support -16..16 --eps 0.5 --out bpb.json", "bpb.json"},
      {"littlewood --family dirichlet --max-n 2048 --csv ratios.csv", "ratios.csv"},
      {"set-u build --depth 3 --config constants.toml --out setu.json", "setu.json"},
      {"set-u member --z 1+0i --spec setu.json --out member.json", "member.json"},
      {"cantor --depth 4 --out cantor.json", "cantor.json"},
  };
  for (const auto& p : pipes) {
    const std::string cmd = "cd '" + dir.string() + "' && '" + cli + "' " + p.args + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      o.fail("run failed: " + p.args);
      continue;
    }
    const std::string first = slurp(dir / p.out);
    const std::string manifest = slurp(dir / (p.out + ".manifest.json"));
    fs::remove(dir / p.out);
    const std::string re = "cd '" + dir.string() + "' && '" + cli + "' rerun --manifest '" + p.out +
                           ".manifest.json' > /dev/null 2>&1";
    if (std::system(re.c_str()) != 0) {
      o.fail("rerun failed: " + p.args);
      continue;
    }
    if (slurp(dir / p.out) != first) o.fail("artifact differs after rerun: " + p.out);
    if (slurp(dir / (p.out + ".manifest.json")) != manifest) o.fail("manifest differs after rerun: " + p.out);
  }
  fs::remove_all(dir);
  o.note(std::to_string(pipes.size()) + " pipelines reproduced byte-identically");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> all = {criterion1, criterion2,  criterion3,  criterion4, criterion5,
                                                     criterion6, criterion7,  criterion8,  criterion9, criterion10,
                                                     criterion11, criterion12, criterion13};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) which.push_back(std::atoi(argv[++i]));
  }
  if (which.empty())
    for (int i = 1; i <= 13; ++i) which.push_back(i);
  int failures = 0;
  for (int c : which) {
    if (c < 1 || c > 13) {
      std::cerr << "unknown criterion " << c << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = all[c - 1]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::string d = o.detail.str();
    if (d.size() >= 2) d.resize(d.size() - 2);
    std::cout << "CRITERION " << c << ": " << (o.pass ? "PASS" : "FAIL") << " (" << d << ")\n";
    failures += !o.pass;
  }
  return failures ? 1 : 0;
}
