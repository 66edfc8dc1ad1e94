#pragma once

// Quantitative lemmas, the binary scaling s(n), the open set U built from
// scaled copies of {-1, 1}, annulus diagnostics and Cantor sets from balls.
// Tiny scales are handled through base-2 exponents.

#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "wp/tower.hpp"
#include "wp/trigcore.hpp"

namespace wp {

using Rational = boost::multiprecision::cpp_rational;

struct Constants {
  double L = 0.5;
  double alpha = 2.0;
  double lambdaConst = 2.718281828459045;
  double c = 8.0;  // 4 / L

  static Constants fromL(double L, double alpha = 2.0, double lambdaConst = 2.718281828459045);
  void validate() const;  // positivity and c = 4/L
  nlohmann::json toJson() const;
};

struct EpsilonValue {
  BigReal d;
  BigReal log2d;
  BigReal log2Eps;        // first form  a L ln d / (4 alpha^{2d})
  BigReal log2EpsSecond;  // second form K exp(-2 ln(alpha) d)
};

// Throws std::overflow_error (message carries log2 log2 d) when d leaves the
// working exponent range.
EpsilonValue epsilonFromLemma(const BigReal& K, const BigReal& a, const Constants& c);

// log2 of (1/2) * eps/(1+eps) * K * exp(-ln(lambda/eps) exp(c K / a)).
// Throws std::invalid_argument if lambda <= eps.
BigReal deltaFromLemmaLog2(const BigReal& eps, const BigReal& a, const BigReal& K, const Constants& c);

// Parameters of the recursion: U(C, 2) constant for {-1, 1} and C_m = C (2 - 2^{-m}).
struct PsiParams {
  double a = 0.5;
  double b = 3.0;
  double K = 1.0;
  double C = 16.0;
  Constants consts;
  double Cm(int m) const;
  double cMid(int m) const;   // (1 + C_m / C_{m-1}) / 2
  double kappa(int m) const;  // (C_m / C_{m-1} - c_m) / (1 + c_m)
};

// -log2 psi_m(x) with x = 2^{-X}, and the bound -log2((1/b) delta(1, x, K)).
Tower psiNegLog2(int m, const BigReal& X, const PsiParams& p);
Tower psiNegLog2(int m, const Tower& X, const PsiParams& p);
Tower psiBoundNegLog2(const BigReal& X, const PsiParams& p);

struct PsiTable {
  std::vector<BigReal> X;                  // x = 2^{-X}
  std::vector<std::vector<Tower>> negLog2;  // [m-1][i]
  std::vector<Tower> boundNegLog2;          // [i]
  bool monotone = false;  // psi_m nondecreasing in x
  bool bounded = false;   // psi_m <= (1/b) delta(1, x, K)
};

// x = a 2^{-i}, i = 0..gridPoints-1.
PsiTable psiSequence(const PsiParams& p, int depth, int gridPoints = 16);

// s(n+1) = prod over set bits i of n of eps_{i+1}; eps[0] is eps_1.
double sFromBinary(std::uint64_t n, const std::vector<double>& eps);
Rational sFromBinary(std::uint64_t n, const std::vector<Rational>& eps);

// t_k = 2^{log2t[k-1]}, w_k = 2^{log2w[k-1]}, k = 1..size.
struct AnnulusSeq {
  std::vector<BigReal> log2t;
  std::vector<BigReal> log2w;
  std::size_t size() const { return log2t.size(); }
  void validate() const;  // throws std::invalid_argument
  // t_k = 2^{-k}, w_k = t_k 2^{-k^2 4^k}
  static AnnulusSeq defaultFamily(int count);
};

struct AnnulusViolation {
  Frequency n;
  double modulus = 0.0;
  int k = 0;
};

struct AnnulusReport {
  std::vector<AnnulusViolation> violations;
  std::vector<std::size_t> countAbove;  // #{n : |c_n| > t_k}
  bool pass() const { return violations.empty(); }
};

AnnulusReport annuliAvoidanceCheck(const SparseSpectrum& f, const AnnulusSeq& annuli);

struct QSetReport {
  std::vector<Frequency> Q;
  std::vector<Frequency> hypothesisViolations;  // n outside Q with |c| > e^{-r}
  Frequency boundN;                             // least N with r <= sqrt(ln(N/4) ln ln N)
  bool countBelowN = false;
  double l1 = 0.0;
  double l1Error = 0.0;
  bool normHypothesis = false;  // ||f||_1 < sqrt(r)/4
};

QSetReport qSetDiagnostic(const SparseSpectrum& f, double r);

// Symbolic integers: linear forms over atoms with verified size estimates.
struct Atom {
  std::string label;
  Tower estimate;
};

struct LinearForm {
  std::map<int, boost::multiprecision::cpp_int> coeff;
  boost::multiprecision::cpp_int constant = 0;

  static LinearForm of(long long c);
  static LinearForm atom(int id);
  LinearForm operator+(const LinearForm& o) const;
  LinearForm operator-(const LinearForm& o) const;
  LinearForm operator+(long long c) const;
  LinearForm operator-(long long c) const { return *this + (-c); }
  bool isConstant() const { return coeff.empty(); }
  std::string str(const std::vector<Atom>& atoms) const;
  nlohmann::json toJson() const;
  static LinearForm fromJson(const nlohmann::json& j);
};

class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AtomTable {
 public:
  std::vector<Atom> atoms;

  // Exact integer when the estimate is small, otherwise a new atom.
  LinearForm ceilOf(const std::string& label, const Tower& estimate);
  LinearForm fresh(const std::string& label, const Tower& estimate);
  // Estimate of a form with nonnegative value; throws PrecisionExhausted.
  Tower estimate(const LinearForm& f) const;
  // Sign decided by the leading atom when it dominates the rest by a
  // certified margin; throws PrecisionExhausted otherwise.
  int sign(const LinearForm& f) const;
};

struct SetUCheck {
  std::string name;
  bool pass = false;
};

struct SetUComponent {
  int index = 0;      // n, component s(n) A + B(0, r(n))
  LinearForm ys;      // s(n) = 2^{-ys}
  LinearForm yr;      // r(n) = 2^{-yr}
  std::vector<int> A{-1, 1};
};

struct SetUAnnulus {
  int m = 0;
  LinearForm k;  // k_m, t = 2^{-k}
  LinearForm W;  // w = 2^{-W}
};

struct SetUSpec {
  PsiParams params;
  int depth = 0;
  std::vector<Atom> atoms;
  std::vector<LinearForm> E;  // eps_n = 2^{-E[n-1]}
  std::vector<SetUAnnulus> annuli;
  std::vector<SetUComponent> components;
  std::vector<SetUCheck> checks;
  bool allChecksPass() const;
  nlohmann::json toJson() const;
  static SetUSpec fromJson(const nlohmann::json& j);
};

// Annuli are the default family; eps_{n+1} = 2^{-E_{n+1}} with
// E_{n+1} = ceil(-log2 min(psi_n, psi_{n+1})(a eps_1...eps_n)) + W_n + 2.
SetUSpec buildSetU(const PsiParams& p, int depth);

enum class Membership { In, Out, Unknown };
std::string toString(Membership m);
Membership membershipU(std::complex<double> z, const SetUSpec& spec);

// B_{m,n} as atoms (exponents of eps_1.., index j of A_j).
struct ScaledAtom {
  std::vector<int> exps;
  std::uint64_t j = 0;
  auto operator<=>(const ScaledAtom&) const = default;
};
using BSet = std::set<ScaledAtom>;

BSet bSet(int m, std::uint64_t n);
// B_{m-1,2n} union (s((2n+1)2^{m-1}+1)/s(n 2^m+1)) B_{m-1,2n+1}.
BSet bSetRecursionRhs(int m, std::uint64_t n);
bool bSetRecursionHolds(int m, std::uint64_t n);

struct RComplex {
  Rational re = 0;
  Rational im = 0;
};

struct Ball {
  RComplex center;
  Rational radius;
};

// B(2^{-k}, 4^{-k}), k = 1..count.
std::vector<Ball> defaultCantorBalls(int count = 64);

struct CantorResult {
  std::vector<int> ballIndices;  // 1-based
  std::vector<RComplex> p;
  std::vector<RComplex> points;  // all subset sums
  std::size_t pairsChecked = 0;
  std::size_t failures = 0;
  bool allInside() const { return failures == 0; }
};

// Picks p_j = center of a ball whose |center| (bounded by |re|+|im|) is below
// half of every remaining budget rho_{k_i} - sum_{l>i} |p_l|.
CantorResult cantorFromBalls(const std::vector<Ball>& balls, int depth);
// d = 0 or d lies in some open B_k or -B_k.
bool inBallUnion(const RComplex& d, const std::vector<Ball>& balls);

Rational parseRational(const std::string& s);
std::string rationalStr(const Rational& q);

}  // namespace wp
