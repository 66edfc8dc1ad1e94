#include "wp/trigcore.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace wp {

ExactForm ExactForm::times(const ExactForm& o) const {
  ExactForm r;
  r.sign = sign * o.sign;
  r.epsIndices.reserve(epsIndices.size() + o.epsIndices.size());
  std::merge(epsIndices.begin(), epsIndices.end(), o.epsIndices.begin(), o.epsIndices.end(),
             std::back_inserter(r.epsIndices));
  return r;
}

double ExactForm::evaluate(const std::vector<double>& eps) const {
  double v = sign;
  for (int k : epsIndices) {
    if (k < 1 || static_cast<std::size_t>(k) > eps.size())
      throw std::out_of_range("exact form index beyond eps sequence");
    v *= eps[k - 1];
  }
  return v;
}

namespace {

bool lessByFreq(const SparseSpectrum::Entry& a, const SparseSpectrum::Entry& b) {
  return a.first < b.first;
}

// Sum of several coefficients at one frequency. Exact forms cancel only
// against an identical multiset of opposite sign.
std::optional<Coefficient> mergeGroup(std::vector<SparseSpectrum::Entry>::iterator lo,
                                      std::vector<SparseSpectrum::Entry>::iterator hi) {
  Complex sum(0.0, 0.0);
  bool allExact = true;
  for (auto it = lo; it != hi; ++it) {
    sum += it->second.value;
    allExact = allExact && it->second.exact.has_value();
  }
  if (!allExact) {
    if (sum == Complex(0.0, 0.0)) return std::nullopt;
    return Coefficient{sum, std::nullopt};
  }
  std::map<std::vector<int>, std::pair<int, Complex>> net;
  for (auto it = lo; it != hi; ++it) {
    auto& slot = net[it->second.exact->epsIndices];
    slot.first += it->second.exact->sign;
    slot.second += it->second.value;
  }
  std::vector<std::pair<const std::vector<int>*, std::pair<int, Complex>>> alive;
  for (auto& [key, v] : net)
    if (v.first != 0) alive.push_back({&key, v});
  if (alive.empty()) return std::nullopt;
  Complex value(0.0, 0.0);
  for (auto& a : alive) value += a.second.second;
  if (alive.size() == 1 && std::abs(alive[0].second.first) == 1)
    return Coefficient{value, ExactForm{alive[0].second.first, *alive[0].first}};
  if (value == Complex(0.0, 0.0)) return std::nullopt;
  return Coefficient{value, std::nullopt};
}

}  // namespace

SparseSpectrum SparseSpectrum::fromEntries(std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(), lessByFreq);
  SparseSpectrum s;
  s.entries_.reserve(entries.size());
  auto it = entries.begin();
  while (it != entries.end()) {
    auto hi = it + 1;
    while (hi != entries.end() && hi->first == it->first) ++hi;
    if (hi - it == 1) {
      if (it->second.value != Complex(0.0, 0.0) || it->second.exact)
        s.entries_.push_back(std::move(*it));
    } else if (auto c = mergeGroup(it, hi)) {
      s.entries_.push_back({std::move(it->first), std::move(*c)});
    }
    it = hi;
  }
  return s;
}

SparseSpectrum SparseSpectrum::constant(Complex c) { return monomial(0, c); }

SparseSpectrum SparseSpectrum::monomial(const Frequency& n, Complex c) {
  std::vector<Entry> e;
  e.push_back({n, Coefficient{c, std::nullopt}});
  return fromEntries(std::move(e));
}

SparseSpectrum SparseSpectrum::fromPairs(const std::vector<std::pair<long long, Complex>>& pairs) {
  std::vector<Entry> e;
  e.reserve(pairs.size());
  for (auto& [n, c] : pairs) e.push_back({Frequency(n), Coefficient{c, std::nullopt}});
  return fromEntries(std::move(e));
}

const Coefficient* SparseSpectrum::find(const Frequency& n) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                             [](const Entry& e, const Frequency& v) { return e.first < v; });
  if (it == entries_.end() || it->first != n) return nullptr;
  return &it->second;
}

Complex SparseSpectrum::at(const Frequency& n) const {
  const Coefficient* c = find(n);
  return c ? c->value : Complex(0.0, 0.0);
}

Frequency SparseSpectrum::maxAbsFrequency() const {
  if (entries_.empty()) return 0;
  Frequency a = abs(entries_.front().first);
  Frequency b = abs(entries_.back().first);
  return a > b ? a : b;
}

bool SparseSpectrum::allExact() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Entry& e) { return e.second.exact.has_value(); });
}

SparseSpectrum convolve(const SparseSpectrum& a, const SparseSpectrum& b) {
  std::vector<SparseSpectrum::Entry> out;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      Coefficient c{ia->second.value * ib->second.value, std::nullopt};
      if (ia->second.exact && ib->second.exact) c.exact = ia->second.exact->times(*ib->second.exact);
      out.push_back({ia->first, std::move(c)});
      ++ia;
      ++ib;
    }
  }
  return SparseSpectrum::fromEntries(std::move(out));
}

AffineSpectrum convolve(const AffineSpectrum& a, const AffineSpectrum& b) {
  AffineSpectrum r;
  r.unitScale = a.unitScale * b.unitScale;
  std::vector<SparseSpectrum::Entry> out;
  const auto& ea = a.sparsePart.entries();
  const auto& eb = b.sparsePart.entries();
  auto ia = ea.begin();
  auto ib = eb.begin();
  auto emit = [&](const Frequency& n, Complex va, Complex vb) {
    Complex v = va * vb - r.unitScale;
    out.push_back({n, Coefficient{v, std::nullopt}});
  };
  while (ia != ea.end() || ib != eb.end()) {
    if (ib == eb.end() || (ia != ea.end() && ia->first < ib->first)) {
      emit(ia->first, a.unitScale + ia->second.value, b.unitScale);
      ++ia;
    } else if (ia == ea.end() || ib->first < ia->first) {
      emit(ib->first, a.unitScale, b.unitScale + ib->second.value);
      ++ib;
    } else {
      emit(ia->first, a.unitScale + ia->second.value, b.unitScale + ib->second.value);
      ++ia;
      ++ib;
    }
  }
  r.sparsePart = SparseSpectrum::fromEntries(std::move(out));
  return r;
}

SparseSpectrum multiply(const SparseSpectrum& a, const SparseSpectrum& b) {
  std::vector<SparseSpectrum::Entry> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a.entries()) {
    for (const auto& y : b.entries()) {
      Coefficient c{x.second.value * y.second.value, std::nullopt};
      if (x.second.exact && y.second.exact) c.exact = x.second.exact->times(*y.second.exact);
      out.push_back({x.first + y.first, std::move(c)});
    }
  }
  return SparseSpectrum::fromEntries(std::move(out));
}

SparseSpectrum add(const SparseSpectrum& a, const SparseSpectrum& b) {
  std::vector<SparseSpectrum::Entry> out(a.entries());
  out.insert(out.end(), b.entries().begin(), b.entries().end());
  return SparseSpectrum::fromEntries(std::move(out));
}

SparseSpectrum scale(const SparseSpectrum& a, Complex c) {
  std::vector<SparseSpectrum::Entry> out;
  out.reserve(a.size());
  for (const auto& e : a.entries()) out.push_back({e.first, Coefficient{e.second.value * c, std::nullopt}});
  return SparseSpectrum::fromEntries(std::move(out));
}

double l2NormSquared(const SparseSpectrum& f) {
  // Neumaier summation; spectra with 10^6 equal terms lose ~1e-10 otherwise.
  double s = 0.0, comp = 0.0;
  for (const auto& e : f.entries()) {
    const double x = std::norm(e.second.value);
    const double t = s + x;
    comp += std::abs(s) >= x ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + comp;
}

double l2Norm(const SparseSpectrum& f) { return std::sqrt(l2NormSquared(f)); }

std::vector<Complex> evalOnGrid(const SparseSpectrum& f, std::size_t M) {
  if (M == 0) throw std::invalid_argument("evalOnGrid: M must be positive");
  if (M > kMaxGrid) throw std::length_error("evalOnGrid: grid too large");
  std::vector<Complex> buf(M, Complex(0.0, 0.0));
  const Frequency q(M);
  for (const auto& e : f.entries()) {
    auto idx = static_cast<std::size_t>(floorMod(e.first, q));
    buf[idx] += e.second.value;
  }
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(M), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return buf;
}

L1Estimate l1Norm(const SparseSpectrum& f, int oversample) {
  if (oversample < 2) throw std::invalid_argument("l1Norm: oversample must be >= 2");
  if (f.empty()) return {};
  const Frequency deg = f.maxAbsFrequency();
  const Frequency Mbig = Frequency(oversample) * (2 * deg + 1);
  if (Mbig > Frequency(kMaxGrid)) throw std::length_error("l1Norm: grid too large");
  const auto M = static_cast<std::size_t>(Mbig);
  const auto vals = evalOnGrid(f, M);
  double sum = 0.0, mx = 0.0;
  for (const auto& v : vals) {
    const double a = std::abs(v);
    sum += a;
    mx = std::max(mx, a);
  }
  L1Estimate r;
  r.value = sum / static_cast<double>(M);
  r.errorBound = std::numbers::pi * static_cast<double>(deg) / static_cast<double>(M) * mx;
  r.gridSize = M;
  return r;
}

double supCoeff(const SparseSpectrum& f) {
  double m = 0.0;
  for (const auto& e : f.entries()) m = std::max(m, std::abs(e.second.value));
  return m;
}

double minNonzeroCoeff(const SparseSpectrum& f) {
  if (f.empty()) throw std::domain_error("minNonzeroCoeff: empty support");
  double m = std::abs(f.entries().front().second.value);
  for (const auto& e : f.entries()) m = std::min(m, std::abs(e.second.value));
  return m;
}

std::size_t supportSize(const SparseSpectrum& f) { return f.size(); }

bool inClassF(const SparseSpectrum& f, double eps) { return supCoeff(f) < eps; }

bool inClassG(const SparseSpectrum& f, double a) { return f.empty() || minNonzeroCoeff(f) >= a; }

bool isConjugateSymmetric(const SparseSpectrum& f, double tol) {
  for (const auto& e : f.entries()) {
    const Complex mirror = f.at(-e.first);
    if (std::abs(mirror - std::conj(e.second.value)) > tol) return false;
  }
  return true;
}

Frequency floorMod(const Frequency& n, const Frequency& q) {
  Frequency r = n % q;
  if (r < 0) r += q;
  return r;
}

std::string toDecimal(const Frequency& n) { return n.str(); }

Frequency parseFrequency(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty frequency");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("bad frequency: " + s);
  for (std::size_t k = i; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9') throw std::invalid_argument("bad frequency: " + s);
  Frequency v(s.substr(i));
  return s[0] == '-' ? Frequency(-v) : v;
}

nlohmann::json toJson(const SparseSpectrum& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : f.entries()) {
    nlohmann::json j;
    j["freq"] = toDecimal(e.first);
    j["re"] = e.second.value.real();
    j["im"] = e.second.value.imag();
    if (e.second.exact) j["exact"] = {{"sign", e.second.exact->sign}, {"epsIndices", e.second.exact->epsIndices}};
    arr.push_back(std::move(j));
  }
  return arr;
}

SparseSpectrum spectrumFromJson(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("spectrum json must be an array");
  std::vector<SparseSpectrum::Entry> out;
  for (const auto& e : j) {
    Frequency n = e.at("freq").is_string() ? parseFrequency(e.at("freq").get<std::string>())
                                           : Frequency(e.at("freq").get<long long>());
    Coefficient c{Complex(e.value("re", 0.0), e.value("im", 0.0)), std::nullopt};
    if (e.contains("exact")) {
      ExactForm x;
      x.sign = e["exact"].at("sign").get<int>();
      x.epsIndices = e["exact"].at("epsIndices").get<std::vector<int>>();
      std::sort(x.epsIndices.begin(), x.epsIndices.end());
      c.exact = x;
    }
    out.push_back({std::move(n), std::move(c)});
  }
  return SparseSpectrum::fromEntries(std::move(out));
}

}  // namespace wp
