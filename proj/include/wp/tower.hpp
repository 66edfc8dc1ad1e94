#pragma once

// Estimates of huge positive reals as iterated powers of two:
// value = exp2^h(v). Normal form: h = 0 with v <= 2^(2^20), or h >= 1 with
// 2^20 < v <= 2^(2^20).

#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace wp {

using BigReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>>;

struct Tower {
  int h = 0;
  BigReal v = 0;

  static Tower of(const BigReal& x);  // x > 0
  static Tower exp2Of(const BigReal& x);

  bool exact() const { return h == 0; }
  // log2 of the value; h decreases by one.
  Tower log2() const;
  Tower exp2() const;
  // Defined only for h <= 1.
  BigReal log2Real() const;

  std::string str() const;
};

Tower normalize(Tower t);
int compare(const Tower& a, const Tower& b);
bool operator<(const Tower& a, const Tower& b);

// a + b and c * a for positive operands. When the relative contribution of
// the smaller term is below the working precision the larger is returned.
Tower add(const Tower& a, const Tower& b);
Tower mulConst(const Tower& a, const BigReal& c);

// Certified a >= 2^bits * b for values >= 1, allowing for the working
// precision. False when the margin cannot be established.
bool dominates(const Tower& a, const Tower& b, double bits);

std::string bigStr(const BigReal& x, int digits = 20);

}  // namespace wp
