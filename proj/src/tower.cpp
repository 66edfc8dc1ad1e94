#include "wp/tower.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace wp {

namespace {

const BigReal kSmallLimit = BigReal(1 << 20);              // 2^20
const BigReal kBigLimit = boost::multiprecision::exp2(kSmallLimit);  // 2^(2^20)
const BigReal kSlack = boost::multiprecision::exp2(BigReal(-180));

}  // namespace

Tower normalize(Tower t) {
  if (!(t.v > 0) && t.h == 0) throw std::domain_error("tower: value must be positive");
  for (;;) {
    if (t.v > kBigLimit) {
      t.v = boost::multiprecision::log2(t.v);
      ++t.h;
    } else if (t.h >= 1 && t.v <= kSmallLimit) {
      t.v = boost::multiprecision::exp2(t.v);
      --t.h;
    } else {
      return t;
    }
  }
}

Tower Tower::of(const BigReal& x) { return normalize(Tower{0, x}); }

Tower Tower::exp2Of(const BigReal& x) { return normalize(Tower{1, x}); }

Tower Tower::log2() const {
  if (h >= 1) return normalize(Tower{h - 1, v});
  return normalize(Tower{0, boost::multiprecision::log2(v)});
}

Tower Tower::exp2() const { return normalize(Tower{h + 1, v}); }

BigReal Tower::log2Real() const {
  if (h == 0) return boost::multiprecision::log2(v);
  if (h == 1) return v;
  throw std::domain_error("tower: log2 not representable at height " + std::to_string(h));
}

std::string Tower::str() const {
  std::string s = bigStr(v, 12);
  for (int i = 0; i < h; ++i) s = "2^(" + s + ")";
  return s;
}

int compare(const Tower& a, const Tower& b) {
  if (a.h != b.h) return a.h < b.h ? -1 : 1;
  if (a.v == b.v) return 0;
  return a.v < b.v ? -1 : 1;
}

bool operator<(const Tower& a, const Tower& b) { return compare(a, b) < 0; }

Tower add(const Tower& a, const Tower& b) {
  const Tower& hi = compare(a, b) >= 0 ? a : b;
  const Tower& lo = compare(a, b) >= 0 ? b : a;
  if (hi.h == 0) return Tower::of(hi.v + lo.v);
  if (hi.h >= 2) return hi;  // 1 + lo/hi is below precision of log2(hi)
  const BigReal L = hi.v;
  const BigReal r = lo.log2Real() - L;
  const BigReal inc = boost::multiprecision::log2(BigReal(1) + boost::multiprecision::exp2(r));
  return normalize(Tower{1, L + inc});
}

Tower mulConst(const Tower& a, const BigReal& c) {
  if (!(c > 0)) throw std::domain_error("tower: constant must be positive");
  if (a.h == 0) return Tower::of(a.v * c);
  if (a.h >= 2) return a;
  return normalize(Tower{1, a.v + boost::multiprecision::log2(c)});
}

bool dominates(const Tower& a, const Tower& b, double bits) {
  if (b.h == 0 && b.v <= 2) {
    if (a.h >= 2) return true;
    return a.log2Real() >= BigReal(bits + 1.0) + kSlack * abs(a.log2Real());
  }
  if (a.h < b.h) return false;
  if (a.h <= 1 && b.h <= 1) {
    const BigReal la = a.log2Real(), lb = b.log2Real();
    return la - lb >= BigReal(bits) + kSlack * abs(la);
  }
  // a >= 2^20 at the log level, so log2 a >= 2 log2 b gives the margin.
  return dominates(a.log2(), b.log2(), 1.0);
}

std::string bigStr(const BigReal& x, int digits) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace wp
