#include "wp/wpsets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wp/approx.hpp"

namespace wp {

namespace mp = boost::multiprecision;
using boost::multiprecision::cpp_int;

namespace {

const BigReal kLog2e = mp::log2(mp::exp(BigReal(1)));
const BigReal kRealCap = BigReal(1 << 20);

// A real of either sign, or a huge positive tower.
struct Num {
  bool isTower = false;
  BigReal r = 0;
  Tower t;
};

Tower towerPlus(const Tower& t, const BigReal& c) {
  if (c == 0) return t;
  if (t.h == 0) {
    const BigReal v = t.v + c;
    if (!(v > 0)) throw std::domain_error("tower: non-positive result");
    return Tower::of(v);
  }
  if (c > 0) return add(t, Tower::of(c));
  if (t.h >= 2) return t;
  const BigReal frac = -c * mp::exp2(-t.v);
  return normalize(Tower{1, t.v + mp::log2(BigReal(1) - frac)});
}

Num plusN(const Num& x, const BigReal& c) {
  if (!x.isTower) return Num{false, x.r + c, {}};
  return Num{true, 0, towerPlus(x.t, c)};
}

Num exp2N(const Num& x) {
  if (!x.isTower) {
    if (x.r <= kRealCap) return Num{false, mp::exp2(x.r), {}};
    return Num{true, 0, Tower::exp2Of(x.r)};
  }
  return Num{true, 0, x.t.exp2()};
}

int compareN(const Num& a, const Num& b) {
  if (a.isTower != b.isTower) return a.isTower ? 1 : -1;
  if (a.isTower) return compare(a.t, b.t);
  if (a.r == b.r) return 0;
  return a.r < b.r ? -1 : 1;
}

// Values below 1 are raised to 1; callers use these as lower bounds for exponents.
Tower atLeastOne(const Num& x) {
  if (x.isTower) return x.t;
  return Tower::of(x.r > 1 ? x.r : BigReal(1));
}

// -log2 delta(eps, x, K) for x = 2^{-X}.
Num negLog2Delta(const BigReal& eps, const Num& X, const BigReal& K, const Constants& c) {
  const BigReal lam = c.lambdaConst;
  if (!(lam > eps)) throw std::invalid_argument("delta: lambda must exceed eps");
  const BigReal pref = eps / (1 + eps) * K / 2;
  const Num log2u = plusN(X, mp::log2(BigReal(c.c) * K * kLog2e));  // u = c K / x * log2 e
  const Num u = exp2N(log2u);
  const Num log2term = plusN(u, mp::log2(mp::log2(lam / eps)));
  const Num term = exp2N(log2term);
  return plusN(term, -mp::log2(pref));
}

Num psiNum(int m, const Num& X, const PsiParams& p) {
  if (m < 1) throw std::invalid_argument("psi: index must be >= 1");
  const BigReal lb = mp::log2(BigReal(p.b));
  Num best{false, -mp::log2(BigReal(p.kappa(m))), {}};
  const Num d1 = plusN(negLog2Delta(BigReal(p.cMid(m) - 1.0), X, p.K, p.consts), lb);
  const Num d2 = plusN(negLog2Delta(BigReal(1), X, p.K, p.consts), lb);
  if (compareN(d1, best) > 0) best = d1;
  if (compareN(d2, best) > 0) best = d2;
  return best;
}

std::string idx(long long n) { return std::to_string(n); }

}  // namespace

Constants Constants::fromL(double L, double alpha, double lambdaConst) {
  Constants c;
  c.L = L;
  c.alpha = alpha;
  c.lambdaConst = lambdaConst;
  c.c = 4.0 / L;
  c.validate();
  return c;
}

void Constants::validate() const {
  if (!(L > 0 && alpha > 0 && lambdaConst > 0 && c > 0)) throw std::invalid_argument("constants must be positive");
  if (std::abs(c - 4.0 / L) > 1e-12 * (4.0 / L)) throw std::invalid_argument("constants: c must equal 4/L");
}

nlohmann::json Constants::toJson() const {
  return {{"L", L}, {"alpha", alpha}, {"lambda", lambdaConst}, {"c", c}};
}

EpsilonValue epsilonFromLemma(const BigReal& K, const BigReal& a, const Constants& c) {
  c.validate();
  if (!(K > 0 && a > 0)) throw std::invalid_argument("epsilon: K and a must be positive");
  EpsilonValue e;
  const BigReal lnd = 4 * K / (a * BigReal(c.L));
  e.log2d = lnd * kLog2e;
  if (e.log2d > BigReal(1 << 30))
    throw std::overflow_error("epsilon: d = exp(4K/(aL)) exceeds the exponent range; log2 log2 d = " +
                              bigStr(mp::log2(e.log2d)));
  e.d = mp::exp2(e.log2d);
  const BigReal la = mp::log2(BigReal(c.alpha));
  e.log2Eps = mp::log2(a * BigReal(c.L) * mp::log(e.d) / 4) - 2 * e.d * la;
  e.log2EpsSecond = mp::log2(K) - 2 * la * e.d;
  return e;
}

BigReal deltaFromLemmaLog2(const BigReal& eps, const BigReal& a, const BigReal& K, const Constants& c) {
  c.validate();
  if (!(eps > 0 && a > 0 && K > 0)) throw std::invalid_argument("delta: eps, a, K must be positive");
  if (!(BigReal(c.lambdaConst) > eps)) throw std::invalid_argument("delta: lambda must exceed eps");
  const BigReal ex = BigReal(c.c) * K / a * kLog2e;
  if (ex > BigReal(1 << 30))
    throw std::overflow_error("delta: exp(cK/a) exceeds the exponent range; log2 log2 = " + bigStr(mp::log2(ex)));
  const BigReal pref = eps / (1 + eps) * K;
  const BigReal half = BigReal(1) / 2;  // safety factor for the strict inequality
  return mp::log2(half * pref) - mp::log2(BigReal(c.lambdaConst) / eps) * mp::exp2(ex);
}

double PsiParams::Cm(int m) const { return C * (2.0 - std::ldexp(1.0, -m)); }
double PsiParams::cMid(int m) const { return (1.0 + Cm(m) / Cm(m - 1)) / 2.0; }
double PsiParams::kappa(int m) const {
  const double ratio = Cm(m) / Cm(m - 1);
  return (ratio - cMid(m)) / (1.0 + cMid(m));
}

Tower psiNegLog2(int m, const BigReal& X, const PsiParams& p) { return atLeastOne(psiNum(m, Num{false, X, {}}, p)); }

Tower psiNegLog2(int m, const Tower& X, const PsiParams& p) {
  if (X.h == 0) return psiNegLog2(m, X.v, p);
  return atLeastOne(psiNum(m, Num{true, 0, X}, p));
}

Tower psiBoundNegLog2(const BigReal& X, const PsiParams& p) {
  return atLeastOne(plusN(negLog2Delta(BigReal(1), Num{false, X, {}}, p.K, p.consts), mp::log2(BigReal(p.b))));
}

PsiTable psiSequence(const PsiParams& p, int depth, int gridPoints) {
  if (!(p.a > 0 && p.a < p.b && p.K > 0)) throw std::invalid_argument("psi: need 0 < a < b and K > 0");
  PsiTable t;
  const BigReal X0 = -mp::log2(BigReal(p.a));
  for (int i = 0; i < gridPoints; ++i) {
    t.X.push_back(X0 + i);
    t.boundNegLog2.push_back(psiBoundNegLog2(t.X.back(), p));
  }
  t.monotone = true;
  t.bounded = true;
  for (int m = 1; m <= depth; ++m) {
    std::vector<Tower> row;
    for (int i = 0; i < gridPoints; ++i) {
      row.push_back(psiNegLog2(m, t.X[i], p));
      if (compare(row.back(), t.boundNegLog2[i]) < 0) t.bounded = false;
      // x decreases with i, so -log2 psi must not decrease
      if (i > 0 && compare(row[i], row[i - 1]) < 0) t.monotone = false;
    }
    t.negLog2.push_back(std::move(row));
  }
  return t;
}

double sFromBinary(std::uint64_t n, const std::vector<double>& eps) {
  double s = 1.0;
  for (int i = 0; n >> i; ++i)
    if ((n >> i) & 1) {
      if (static_cast<std::size_t>(i) >= eps.size()) throw std::invalid_argument("sFromBinary: eps sequence too short");
      s *= eps[i];
    }
  return s;
}

Rational sFromBinary(std::uint64_t n, const std::vector<Rational>& eps) {
  Rational s = 1;
  for (int i = 0; n >> i; ++i)
    if ((n >> i) & 1) {
      if (static_cast<std::size_t>(i) >= eps.size()) throw std::invalid_argument("sFromBinary: eps sequence too short");
      s *= eps[i];
    }
  return s;
}

void AnnulusSeq::validate() const {
  if (log2t.size() != log2w.size()) throw std::invalid_argument("annuli: t and w lengths differ");
  BigReal prevG = 0;
  for (std::size_t k = 0; k < size(); ++k) {
    if (!(log2w[k] < log2t[k])) throw std::invalid_argument("annuli: w_k < t_k violated at k=" + idx(k + 1));
    if (k > 0 && !(log2t[k] < log2t[k - 1])) throw std::invalid_argument("annuli: t_k not decreasing at k=" + idx(k + 1));
    const BigReal g = log2t[k] + mp::log2(mp::log(BigReal(2)) * (log2t[k] - log2w[k])) / 2;
    if (k > 0 && !(g > prevG))
      throw std::invalid_argument("annuli: t_k sqrt(ln(t_k/w_k)) not increasing at k=" + idx(k + 1));
    prevG = g;
  }
}

AnnulusSeq AnnulusSeq::defaultFamily(int count) {
  AnnulusSeq a;
  for (int k = 1; k <= count; ++k) {
    a.log2t.push_back(BigReal(-k));
    a.log2w.push_back(BigReal(-k) - BigReal(k) * k * mp::pow(BigReal(4), k));
  }
  return a;
}

AnnulusReport annuliAvoidanceCheck(const SparseSpectrum& f, const AnnulusSeq& annuli) {
  AnnulusReport r;
  r.countAbove.assign(annuli.size(), 0);
  for (const auto& e : f.entries()) {
    const double mod = std::abs(e.second.value);
    if (mod == 0.0) continue;
    const BigReal lc = mp::log2(BigReal(mod));
    for (std::size_t k = 0; k < annuli.size(); ++k) {
      if (lc > annuli.log2w[k] && lc < annuli.log2t[k]) r.violations.push_back({e.first, mod, static_cast<int>(k + 1)});
      if (lc > annuli.log2t[k]) ++r.countAbove[k];
    }
  }
  return r;
}

QSetReport qSetDiagnostic(const SparseSpectrum& f, double r) {
  if (!(r >= 2.0)) throw std::invalid_argument("qSet: r must be >= 2");
  QSetReport q;
  const double floorV = std::exp(-r);
  for (const auto& e : f.entries()) {
    const double mod = std::abs(e.second.value);
    if (mod >= 1.0)
      q.Q.push_back(e.first);
    else if (mod > floorV)
      q.hypothesisViolations.push_back(e.first);
  }
  const BigReal rr = BigReal(r) * r;
  auto ok = [&](const cpp_int& N) {
    const BigReal n = BigReal(N);
    return mp::log(n / 4) * mp::log(mp::log(n)) >= rr;
  };
  cpp_int hi = 5;
  while (!ok(hi)) hi *= 2;
  cpp_int lo = hi / 2 < 5 ? cpp_int(4) : cpp_int(hi / 2);
  while (hi - lo > 1) {
    const cpp_int mid = (lo + hi) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  q.boundN = hi;
  q.countBelowN = cpp_int(q.Q.size()) < hi;
  if (!f.empty()) {
    const L1Estimate est = l1Norm(f);
    q.l1 = est.value;
    q.l1Error = est.errorBound;
  }
  q.normHypothesis = q.l1 + q.l1Error < std::sqrt(r) / 4.0;
  return q;
}

LinearForm LinearForm::of(long long c) {
  LinearForm f;
  f.constant = c;
  return f;
}

LinearForm LinearForm::atom(int id) {
  LinearForm f;
  f.coeff[id] = 1;
  return f;
}

LinearForm LinearForm::operator+(const LinearForm& o) const {
  LinearForm r = *this;
  r.constant += o.constant;
  for (const auto& [k, v] : o.coeff) {
    r.coeff[k] += v;
    if (r.coeff[k] == 0) r.coeff.erase(k);
  }
  return r;
}

LinearForm LinearForm::operator-(const LinearForm& o) const {
  LinearForm neg = o;
  neg.constant = -neg.constant;
  for (auto& [k, v] : neg.coeff) v = -v;
  return *this + neg;
}

LinearForm LinearForm::operator+(long long c) const { return *this + of(c); }

std::string LinearForm::str(const std::vector<Atom>& atoms) const {
  std::ostringstream os;
  bool first = true;
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) {
    const cpp_int& v = it->second;
    os << (first ? (v < 0 ? "-" : "") : (v < 0 ? " - " : " + "));
    if (abs(v) != 1) os << abs(v) << "*";
    os << atoms.at(it->first).label;
    first = false;
  }
  if (first)
    os << constant;
  else if (constant != 0)
    os << (constant < 0 ? " - " : " + ") << abs(constant);
  return os.str();
}

nlohmann::json LinearForm::toJson() const {
  nlohmann::json c = nlohmann::json::object();
  for (const auto& [k, v] : coeff) c[std::to_string(k)] = v.str();
  return {{"atoms", c}, {"constant", constant.str()}};
}

LinearForm LinearForm::fromJson(const nlohmann::json& j) {
  LinearForm f;
  f.constant = cpp_int(j.at("constant").get<std::string>());
  for (const auto& [k, v] : j.at("atoms").items()) f.coeff[std::stoi(k)] = cpp_int(v.get<std::string>());
  return f;
}

LinearForm AtomTable::ceilOf(const std::string& label, const Tower& estimate) {
  if (estimate.h == 0 && estimate.v < mp::exp2(BigReal(150))) {
    const BigReal fl = mp::floor(estimate.v);
    const BigReal frac = estimate.v - fl;
    const BigReal guard = mp::exp2(BigReal(-40));
    if (frac < guard || frac > 1 - guard) throw PrecisionExhausted("ceiling of " + label + " is not robust");
    LinearForm f;
    f.constant = fl.convert_to<cpp_int>() + 1;
    return f;
  }
  return fresh(label, estimate);
}

LinearForm AtomTable::fresh(const std::string& label, const Tower& estimate) {
  atoms.push_back({label, estimate});
  return LinearForm::atom(static_cast<int>(atoms.size()) - 1);
}

Tower AtomTable::estimate(const LinearForm& f) const {
  if (f.constant < 0) throw std::logic_error("estimate: negative constant");
  Tower s{0, BigReal(f.constant)};
  for (const auto& [k, v] : f.coeff) {
    if (v < 0) throw std::logic_error("estimate: negative coefficient");
    const Tower term = mulConst(atoms.at(k).estimate, BigReal(v));
    s = s.v == 0 && s.h == 0 ? term : add(s, term);
  }
  return s;
}

int AtomTable::sign(const LinearForm& f) const {
  if (f.coeff.empty()) return f.constant > 0 ? 1 : (f.constant < 0 ? -1 : 0);
  int top = f.coeff.begin()->first;
  for (const auto& [k, v] : f.coeff)
    if (compare(atoms.at(k).estimate, atoms.at(top).estimate) > 0) top = k;
  const cpp_int& ct = f.coeff.at(top);
  const Tower lead = mulConst(atoms.at(top).estimate, BigReal(abs(ct)));
  Tower rest = Tower::of(BigReal(abs(f.constant) + 1));
  for (const auto& [k, v] : f.coeff)
    if (k != top) rest = add(rest, mulConst(atoms.at(k).estimate, BigReal(abs(v))));
  if (!dominates(lead, rest, 1.0)) throw PrecisionExhausted("cannot certify the sign of a symbolic exponent");
  return ct > 0 ? 1 : -1;
}

bool SetUSpec::allChecksPass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SetUCheck& c) { return c.pass; });
}

namespace {

bool isPow2(std::uint64_t j) { return j && !(j & (j - 1)); }
int log2u(std::uint64_t j) { return 63 - __builtin_clzll(j); }

Tower towerFromJson(const nlohmann::json& j) {
  return Tower{j.at("h").get<int>(), BigReal(j.at("v").get<std::string>())};
}

nlohmann::json towerToJson(const Tower& t) { return {{"h", t.h}, {"v", bigStr(t.v, 55)}, {"display", t.str()}}; }

}  // namespace

nlohmann::json SetUSpec::toJson() const {
  nlohmann::json j;
  j["depth"] = depth;
  j["params"] = {{"a", params.a}, {"b", params.b}, {"K", params.K}, {"C", params.C}, {"constants", params.consts.toJson()}};
  j["annuliFamily"] = "t_k = 2^-k, w_k = t_k 2^(-k^2 4^k)";
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : atoms) j["atoms"].push_back({{"label", a.label}, {"estimate", towerToJson(a.estimate)}});
  j["eps"] = nlohmann::json::array();
  for (std::size_t n = 0; n < E.size(); ++n)
    j["eps"].push_back({{"n", n + 1}, {"negLog2", E[n].toJson()}, {"negLog2Text", E[n].str(atoms)}});
  j["annuli"] = nlohmann::json::array();
  for (const auto& a : annuli)
    j["annuli"].push_back({{"m", a.m},
                           {"k", a.k.toJson()},
                           {"negLog2w", a.W.toJson()},
                           {"kText", a.k.str(atoms)},
                           {"negLog2wText", a.W.str(atoms)}});
  j["components"] = nlohmann::json::array();
  for (const auto& c : components)
    j["components"].push_back({{"n", c.index},
                               {"A", c.A},
                               {"negLog2s", c.ys.toJson()},
                               {"negLog2r", c.yr.toJson()},
                               {"negLog2sText", c.ys.str(atoms)},
                               {"negLog2rText", c.yr.str(atoms)}});
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}});
  j["allChecksPass"] = allChecksPass();
  return j;
}

SetUSpec SetUSpec::fromJson(const nlohmann::json& j) {
  SetUSpec s;
  s.depth = j.at("depth").get<int>();
  const auto& p = j.at("params");
  s.params.a = p.at("a").get<double>();
  s.params.b = p.at("b").get<double>();
  s.params.K = p.at("K").get<double>();
  s.params.C = p.at("C").get<double>();
  const auto& c = p.at("constants");
  s.params.consts.L = c.at("L").get<double>();
  s.params.consts.alpha = c.at("alpha").get<double>();
  s.params.consts.lambdaConst = c.at("lambda").get<double>();
  s.params.consts.c = c.at("c").get<double>();
  for (const auto& a : j.at("atoms")) s.atoms.push_back({a.at("label").get<std::string>(), towerFromJson(a.at("estimate"))});
  for (const auto& e : j.at("eps")) s.E.push_back(LinearForm::fromJson(e.at("negLog2")));
  for (const auto& a : j.at("annuli"))
    s.annuli.push_back({a.at("m").get<int>(), LinearForm::fromJson(a.at("k")), LinearForm::fromJson(a.at("negLog2w"))});
  for (const auto& cc : j.at("components")) {
    SetUComponent comp;
    comp.index = cc.at("n").get<int>();
    comp.A = cc.at("A").get<std::vector<int>>();
    comp.ys = LinearForm::fromJson(cc.at("negLog2s"));
    comp.yr = LinearForm::fromJson(cc.at("negLog2r"));
    s.components.push_back(std::move(comp));
  }
  for (const auto& cc : j.at("checks")) s.checks.push_back({cc.at("name").get<std::string>(), cc.at("pass").get<bool>()});
  return s;
}

SetUSpec buildSetU(const PsiParams& p, int depth) {
  if (depth < 0) throw std::invalid_argument("set U: depth must be >= 0");
  if (!(p.a > 0 && p.a < p.b && p.K > 0 && p.C > 0)) throw std::invalid_argument("set U: need 0 < a < b, K > 0, C > 0");
  p.consts.validate();
  if (!(p.consts.lambdaConst > 1.0)) throw std::invalid_argument("set U: lambda must exceed 1");
  SetUSpec s;
  s.params = p;
  s.depth = depth;
  if (depth == 0) return s;
  const int J = log2u(static_cast<std::uint64_t>(depth)) + 1;

  AtomTable T;
  auto check = [&](const std::string& name, const LinearForm& positive) {
    s.checks.push_back({name, T.sign(positive) > 0});
  };
  auto wOf = [&](const LinearForm& k, int m) {
    if (k.isConstant() && k.constant <= 64) {
      const cpp_int kk = k.constant;
      return LinearForm{{}, kk + kk * kk * (cpp_int(1) << static_cast<unsigned>(2 * kk))};
    }
    const Tower kE = T.estimate(k);
    BigReal lk;
    if (kE.h == 0)
      lk = mp::log2(kE.v);
    else if (kE.h == 1)
      lk = kE.v;
    else
      lk = 0;  // below the precision of 2k
    const Tower log2W = lk > 0 ? add(mulConst(kE, 2), Tower::of(2 * lk)) : mulConst(kE, 2);
    return k + T.fresh("Wtop_" + idx(m), log2W.exp2());
  };

  const BigReal la = -mp::log2(BigReal(p.a));
  LinearForm P = LinearForm::of(0);
  std::vector<LinearForm> k{LinearForm::of(1)};
  std::vector<LinearForm> W{LinearForm::of(5)};
  for (int n = 0; n < J; ++n) {
    try {
      auto psiAt = [&](int m) {
        if (P.isConstant()) return psiNegLog2(m, la + BigReal(P.constant), p);
        return psiNegLog2(m, towerPlus(T.estimate(P), la), p);
      };
      Tower psi = psiAt(n == 0 ? 1 : n);
      if (n > 0) {
        const Tower next = psiAt(n + 1);
        if (compare(next, psi) > 0) psi = next;
      }
      const LinearForm cpsi = T.ceilOf("Psi_" + idx(n), psi);
      const LinearForm E = cpsi + W[n] + 2;
      s.E.push_back(E);
      check("eps_" + idx(n + 1) + " < psi(a eps_1...eps_" + idx(n) + ")", E - cpsi);
      check("eps_" + idx(n + 1) + " < w_{k_" + idx(n) + "}/2", E - W[n] - 1);
      P = P + E;
      k.push_back(P + 1);
      check("t_{k_" + idx(n + 1) + "} < eps_1...eps_" + idx(n + 1), k.back() - P);
      check("k_" + idx(n + 1) + " minimal", P - (k.back() - 1) + 1);
      W.push_back(wOf(k.back(), n + 1));
    } catch (const PrecisionExhausted& e) {
      throw PrecisionExhausted(std::string(e.what()) + " (while choosing eps_" + idx(n + 1) + ")");
    }
  }
  for (int m = 0; m <= J; ++m) s.annuli.push_back({m, k[m], W[m]});

  for (int j = 1; j <= depth; ++j) {
    try {
      SetUComponent c;
      c.index = j;
      LinearForm ys = LinearForm::of(0);
      const std::uint64_t bits = static_cast<std::uint64_t>(j - 1);
      for (int i = 0; bits >> i; ++i)
        if ((bits >> i) & 1) ys = ys + s.E.at(i);
      c.ys = ys;
      LinearForm yr = ys + 2;
      const std::uint64_t uj = static_cast<std::uint64_t>(j);
      if (isPow2(uj)) {
        const int m = log2u(uj);
        const LinearForm viaT = k.at(m + 1) + 1;   // r(2^{(m+1)-1}) < t_{k_{m+1}}
        const LinearForm viaW = W.at(m) + 2;       // r(2^m) < w_{k_m}/2
        if (T.sign(viaT - yr) > 0) yr = viaT;
        if (T.sign(viaW - yr) > 0) yr = viaW;
        c.yr = yr;
        check("r(" + idx(j) + ") < t_{k_" + idx(m + 1) + "}", yr - k.at(m + 1));
        check("r(" + idx(j) + ") < w_{k_" + idx(m) + "}/2", yr - W.at(m) - 1);
      } else {
        c.yr = yr;
      }
      check("r(" + idx(j) + ") <= s(" + idx(j) + ")/4", c.yr - c.ys - 1);
      s.components.push_back(std::move(c));
    } catch (const PrecisionExhausted& e) {
      throw PrecisionExhausted(std::string(e.what()) + " (at component " + idx(j) + ")");
    }
  }

  for (int j = 0; j < depth; ++j) {
    try {
      const auto& cj = s.components[j];
      if (j + 1 < depth) check("s(" + idx(j + 2) + ") < s(" + idx(j + 1) + ")", s.components[j + 1].ys - cj.ys);
      for (int i = 0; i < j; ++i)
        check("components " + idx(i + 1) + " and " + idx(j + 1) + " disjoint", cj.ys - s.components[i].ys);
      for (const auto& an : s.annuli) {
        // |z| in [3s/4, 5s/4]: below w if ys >= W + 1, above t if ys <= k - 1
        const bool below = T.sign(cj.ys - an.W) > 0;
        const bool above = !below && T.sign(an.k - cj.ys) > 0;
        s.checks.push_back({"component " + idx(j + 1) + " avoids annulus m=" + idx(an.m), below || above});
      }
    } catch (const PrecisionExhausted& e) {
      throw PrecisionExhausted(std::string(e.what()) + " (at component " + idx(j + 1) + ")");
    }
  }
  s.atoms = T.atoms;
  return s;
}

std::string toString(Membership m) {
  switch (m) {
    case Membership::In: return "in";
    case Membership::Out: return "out";
    case Membership::Unknown: return "unknown";
  }
  return "unknown";
}

Membership membershipU(std::complex<double> z, const SetUSpec& spec) {
  if (z == std::complex<double>(0.0, 0.0) || spec.components.empty()) return Membership::Unknown;
  AtomTable T;
  T.atoms = spec.atoms;
  const BigReal x = z.real(), y = z.imag();
  // exact scale when representable near double range
  auto small = [&](const LinearForm& f, long long cap) -> std::optional<long long> {
    if (!f.isConstant() || f.constant > cap) return std::nullopt;
    return static_cast<long long>(f.constant);
  };
  const LinearForm* deepest = &spec.components.front().ys;
  for (const auto& c : spec.components) {
    if (T.sign(c.ys - *deepest) > 0) deepest = &c.ys;
    const auto ys = small(c.ys, 1100);
    if (!ys) continue;  // s < 2^-1100 <= |z|
    const BigReal s = mp::exp2(BigReal(-*ys));
    const auto yr = small(c.yr, 1 << 20);
    for (int sign : c.A) {
      const BigReal dx = x - sign * s;
      const BigReal d2 = dx * dx + y * y;
      if (d2 == 0) return Membership::In;
      if (yr && d2 < mp::exp2(BigReal(-2 * *yr))) return Membership::In;
    }
  }
  if (const auto ysMin = small(*deepest, 1100)) {
    const BigReal sMin = mp::exp2(BigReal(-*ysMin));
    if (x * x + y * y < sMin * sMin * 9 / 16) return Membership::Unknown;
  }
  return Membership::Out;
}

namespace {

ScaledAtom makeAtom(std::vector<int> exps, std::uint64_t j) {
  while (!exps.empty() && exps.back() == 0) exps.pop_back();
  return ScaledAtom{std::move(exps), j};
}

std::vector<int> bitDiff(std::uint64_t num, std::uint64_t den) {
  std::vector<int> e(64, 0);
  for (int i = 0; i < 64; ++i) e[i] = static_cast<int>((num >> i) & 1) - static_cast<int>((den >> i) & 1);
  return e;
}

}  // namespace

BSet bSet(int m, std::uint64_t n) {
  if (m < 0 || m > 30) throw std::invalid_argument("bSet: m out of range");
  BSet out;
  const std::uint64_t base = n << m;
  for (std::uint64_t j = base + 1; j <= base + (std::uint64_t(1) << m); ++j)
    out.insert(makeAtom(bitDiff(j - 1, base), j));  // s(j)/s(base+1)
  return out;
}

BSet bSetRecursionRhs(int m, std::uint64_t n) {
  if (m < 1) throw std::invalid_argument("bSet recursion needs m >= 1");
  BSet out = bSet(m - 1, 2 * n);
  const std::vector<int> scale = bitDiff((2 * n + 1) << (m - 1), n << m);
  for (const auto& a : bSet(m - 1, 2 * n + 1)) {
    std::vector<int> e(64, 0);
    for (std::size_t i = 0; i < 64; ++i) e[i] = scale[i] + (i < a.exps.size() ? a.exps[i] : 0);
    out.insert(makeAtom(std::move(e), a.j));
  }
  return out;
}

bool bSetRecursionHolds(int m, std::uint64_t n) { return bSet(m, n) == bSetRecursionRhs(m, n); }

std::vector<Ball> defaultCantorBalls(int count) {
  std::vector<Ball> b;
  for (int k = 1; k <= count; ++k) {
    const Rational c = Rational(1, cpp_int(1) << k);
    b.push_back({RComplex{c, 0}, c * c});
  }
  return b;
}

namespace {

Rational absBound(const RComplex& z) { return abs(z.re) + abs(z.im); }

Rational dist2(const RComplex& a, const RComplex& b) {
  const Rational dx = a.re - b.re, dy = a.im - b.im;
  return dx * dx + dy * dy;
}

}  // namespace

bool inBallUnion(const RComplex& d, const std::vector<Ball>& balls) {
  if (d.re == 0 && d.im == 0) return true;
  const RComplex neg{-d.re, -d.im};
  for (const auto& b : balls) {
    const Rational r2 = b.radius * b.radius;
    if (dist2(d, b.center) < r2 || dist2(neg, b.center) < r2) return true;
  }
  return false;
}

CantorResult cantorFromBalls(const std::vector<Ball>& balls, int depth) {
  if (balls.empty()) throw std::invalid_argument("cantor: empty ball list");
  if (depth < 0) throw std::invalid_argument("cantor: depth must be >= 0");
  for (const auto& b : balls)
    if (!(b.radius > 0)) throw std::invalid_argument("cantor: radii must be positive");
  CantorResult r;
  std::vector<Rational> budget;  // rho_{k_i} - sum_{l>i} |p_l|
  std::size_t next = 0;
  for (int d = 0; d < depth; ++d) {
    std::optional<std::size_t> pick;
    for (std::size_t i = next; i < balls.size() && !pick; ++i) {
      const Rational a = absBound(balls[i].center);
      if (a == 0) continue;
      bool fits = true;
      for (const auto& B : budget) fits = fits && a < B / 2;
      if (fits) pick = i;
    }
    if (!pick) throw std::invalid_argument("cantor: cannot thread point " + idx(d + 1) + " after ball " + idx(next));
    const Rational a = absBound(balls[*pick].center);
    for (auto& B : budget) B -= a;
    budget.push_back(balls[*pick].radius);
    r.ballIndices.push_back(static_cast<int>(*pick) + 1);
    r.p.push_back(balls[*pick].center);
    next = *pick + 1;
  }
  const std::size_t count = std::size_t(1) << depth;
  for (std::size_t mask = 0; mask < count; ++mask) {
    RComplex s;
    for (int i = 0; i < depth; ++i)
      if ((mask >> i) & 1) {
        s.re += r.p[i].re;
        s.im += r.p[i].im;
      }
    r.points.push_back(s);
  }
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = a + 1; b < count; ++b) {
      ++r.pairsChecked;
      const RComplex d{r.points[a].re - r.points[b].re, r.points[a].im - r.points[b].im};
      if (!inBallUnion(d, balls)) ++r.failures;
    }
  return r;
}

Rational parseRational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty rational");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const Rational den = parseRational(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    return parseRational(s.substr(0, slash)) / den;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  cpp_int mant = 0;
  long long scale = 0;
  bool digits = false, dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (dot) throw std::invalid_argument("bad rational: " + text);
      dot = true;
      continue;
    }
    mant = mant * 10 + (s[i] - '0');
    digits = true;
    if (dot) --scale;
  }
  if (!digits) throw std::invalid_argument("bad rational: " + text);
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw std::invalid_argument("bad rational: " + text);
    const std::string ex = s.substr(i + 1);
    std::size_t used = 0;
    long long e = 0;
    try {
      e = std::stoll(ex, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad rational exponent: " + text);
    }
    if (used != ex.size()) throw std::invalid_argument("bad rational: " + text);
    scale += e;
  }
  Rational q = mant;
  const cpp_int ten = mp::pow(cpp_int(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  if (scale < 0)
    q /= ten;
  else
    q *= ten;
  return neg ? -q : q;
}

std::string rationalStr(const Rational& q) {
  if (mp::denominator(q) == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

}  // namespace wp
