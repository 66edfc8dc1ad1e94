#include "wp/witness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wp/rudinshapiro.hpp"

namespace wp {

namespace {

void checkBlock(const BlockPlan& plan, int k) {
  if (k < 1 || k > plan.blocks()) throw std::out_of_range("block " + std::to_string(k) + " outside plan");
}

double mass(const RRSParams& p, int l) { return std::ldexp(p.eps[l - 1] * p.eps[l - 1], p.n[l - 1]); }

// Coefficients of f_N with a 64-bit fast path of the greedy decomposition.
class ProductLookup {
 public:
  ProductLookup(const RRSParams& p, int N) : p_(p), N_(N) {
    if (N < 0 || N > p.levels()) throw std::out_of_range("product level outside 0..levels");
    const Frequency limit = Frequency(1) << 61;
    fast_ = gapSum(p, N + 1) / 2 < limit;  // largest frequency of f_N
    if (!fast_) return;
    for (int k = 1; k <= N; ++k) {
      r_.push_back(static_cast<long long>(p.r[k - 1]));
      m_.push_back(static_cast<long long>(p.m[k - 1]));
      half_.push_back(static_cast<long long>(gapSum(p, k) / 2));
      jmax_.push_back((1ULL << p.n[k - 1]) - 1);
    }
  }

  bool fast() const { return fast_; }

  double at(long long s) const {
    double v = 1.0;
    for (int k = N_; k >= 1; --k) {
      const long long h = half_[k - 1];
      const long long a = s < 0 ? -s : s;
      if (a <= h) continue;
      const long long t = a - r_[k - 1];
      const long long m = m_[k - 1];
      unsigned long long j = t >= 0 ? static_cast<unsigned long long>((t + m / 2) / m) : 0ULL;
      if (j > jmax_[k - 1]) j = jmax_[k - 1];
      const long long c = r_[k - 1] + static_cast<long long>(j) * m;
      const long long d = a - c;
      if ((d < 0 ? -d : d) > h) return 0.0;
      v *= -rsSign(j) * p_.eps[k - 1];
      s += s > 0 ? -c : c;
    }
    return s == 0 ? v : 0.0;
  }

  double at(const Frequency& s) const {
    if (fast_) return at(static_cast<long long>(s));
    return coeffAt(s, p_, N_).value.real();
  }

 private:
  const RRSParams& p_;
  int N_;
  bool fast_ = false;
  std::vector<long long> r_, m_, half_;
  std::vector<unsigned long long> jmax_;
};

}  // namespace

bool FrequencyBlock::contains(const Frequency& s) const {
  if (s < r) return false;
  const Frequency t = s - r;
  if (t % m != 0) return false;
  return t / m < (Frequency(1) << n);
}

FrequencyBlock frequencyBlock(const RRSParams& p, int l) {
  if (l < 1 || l > p.levels()) throw std::out_of_range("level outside params");
  FrequencyBlock b;
  b.level = l;
  b.n = p.n[l - 1];
  b.r = p.r[l - 1];
  b.m = p.m[l - 1];
  return b;
}

BlockPlan buildBlockPlan(const RRSParams& p, int blocks) {
  if (blocks < 0) throw std::invalid_argument("block count must be >= 0");
  for (int l = 1; l <= p.levels(); ++l)
    if (!(mass(p, l) > 1.0 / 32.0))
      throw std::invalid_argument("2^{n_l} eps_l^2 > 1/32 violated at level " + std::to_string(l));
  BlockPlan plan;
  plan.cutoffs.push_back(0);
  int l = 0;
  double prev = 0.0;
  for (int k = 1; k <= blocks; ++k) {
    double T = 0.0;
    const int start = l;
    while (!(T >= k / 32.0 && T > prev)) {
      if (l == p.levels()) {
        // Estimate the shortfall with the mean mass of the levels used so far.
        double avg = 0.0;
        for (int i = 1; i <= p.levels(); ++i) avg += mass(p, i);
        avg /= std::max(1, p.levels());
        const double need = std::max(k / 32.0, prev) - T;
        const int more = static_cast<int>(std::ceil(need / avg)) + 1;
        throw std::invalid_argument("not enough levels for " + std::to_string(blocks) + " blocks: block " +
                                    std::to_string(k) + " needs about " + std::to_string(p.levels() + more) +
                                    " levels, have " + std::to_string(p.levels()));
      }
      ++l;
      T += mass(p, l);
    }
    for (int i = start + 1; i <= l; ++i) plan.weights.push_back(p.eps[i - 1] / T);
    plan.cutoffs.push_back(l);
    plan.blockMass.push_back(T);
    prev = T;
  }
  return plan;
}

double blockSumResidual(const BlockPlan& plan, int k, const RRSParams& p) {
  checkBlock(plan, k);
  double s = 0.0;
  for (int l = plan.firstLevel(k); l <= plan.lastLevel(k); ++l)
    s += plan.weights[l - 1] * std::ldexp(p.eps[l - 1], p.n[l - 1]);
  return std::abs(s - 1.0);
}

double blockL2Squared(const BlockPlan& plan, int k, const RRSParams& p) {
  checkBlock(plan, k);
  double s = 0.0;
  for (int l = plan.firstLevel(k); l <= plan.lastLevel(k); ++l)
    s += std::ldexp(plan.weights[l - 1] * plan.weights[l - 1], p.n[l - 1]);
  return s;
}

SparseSpectrum witnessPoly(const BlockPlan& plan, int k, const RRSParams& p) {
  checkBlock(plan, k);
  std::vector<SparseSpectrum::Entry> out;
  for (int l = plan.firstLevel(k); l <= plan.lastLevel(k); ++l) {
    const FrequencyBlock A = frequencyBlock(p, l);
    if (A.n > 24) throw std::length_error("witnessPoly: block too large to materialize");
    const ProductLookup look(p, l);
    for (std::uint64_t j = 0; j < A.size(); ++j) {
      const Frequency s = A.at(j);
      int sign = 0;
      if (look.fast()) {
        const double v = look.at(static_cast<long long>(s));
        sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
      } else {
        const Coefficient c = coeffAt(s, p, l);
        sign = c.exact ? c.exact->sign : 0;
      }
      if (sign == 0) throw std::logic_error("zero measure coefficient on A_" + std::to_string(l) + "; parameters corrupted");
      out.push_back({s, Coefficient{Complex(sign * plan.weights[l - 1], 0.0), std::nullopt}});
    }
  }
  return SparseSpectrum::fromEntries(std::move(out));
}

double l2MuClosedForm(const BlockPlan& plan, int k, const RRSParams& p) {
  checkBlock(plan, k);
  double s = 1.0;
  for (int l = plan.firstLevel(k); l <= plan.lastLevel(k); ++l) {
    const double c = plan.weights[l - 1];
    s += std::ldexp(c * c, p.n[l - 1]) * (1.0 - mass(p, l));
  }
  return s;
}

double l2MuBruteForce(const SparseSpectrum& f, const RRSParams& p, int N) {
  const ProductLookup look(p, N);
  const auto& e = f.entries();
  Complex total(0.0, 0.0);
  if (look.fast() && f.maxAbsFrequency() < (Frequency(1) << 60)) {
    std::vector<long long> freq;
    std::vector<Complex> val;
    for (const auto& x : e) {
      freq.push_back(static_cast<long long>(x.first));
      val.push_back(x.second.value);
    }
    for (std::size_t a = 0; a < freq.size(); ++a) {
      Complex row(0.0, 0.0);
      for (std::size_t b = 0; b < freq.size(); ++b) {
        const double c = look.at(freq[b] - freq[a]);
        if (c != 0.0) row += std::conj(val[b]) * c;
      }
      total += val[a] * row;
    }
  } else {
    for (const auto& x : e)
      for (const auto& y : e) total += x.second.value * std::conj(y.second.value) * look.at(Frequency(y.first - x.first));
  }
  return total.real();
}

double l2MuBruteForce(const BlockPlan& plan, int k, const RRSParams& p, int N) {
  return l2MuBruteForce(witnessPoly(plan, k, p), p, N);
}

Complex integralAgainstProduct(const SparseSpectrum& f, const RRSParams& p, int N) {
  const ProductLookup look(p, N);
  Complex s(0.0, 0.0);
  for (const auto& x : f.entries()) s += x.second.value * look.at(Frequency(-x.first));
  return s;
}

double l1MuDistanceToOne(const SparseSpectrum& f, const RRSParams& p, int N) {
  const double v = l2MuBruteForce(f, p, N) - 2.0 * integralAgainstProduct(f, p, N).real() + 1.0;
  return std::sqrt(std::max(0.0, v));
}

double l1MuDistanceToOne(const BlockPlan& plan, int k, const RRSParams& p, int N) {
  return l1MuDistanceToOne(witnessPoly(plan, k, p), p, N);
}

}  // namespace wp
