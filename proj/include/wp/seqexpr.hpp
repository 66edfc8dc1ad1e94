#pragma once

#include <string>

#include "wp/trigcore.hpp"

namespace wp {

// Sequence k -> value, k = 1, 2, ...  Accepted forms (spaces ignored):
//   c            constant
//   [c*]k[^p]    c * k^p
//   c/k[^p]      c * k^-p
//   [c*]q^k      c * q^k
//   [c*]q^-k     c * q^-k
//   c/q^k        c * q^-k
struct SeqExpr {
  enum class Kind { Constant, Power, Geometric };
  Kind kind = Kind::Constant;
  double c = 1.0;
  double p = 1.0;  // exponent of k
  double q = 1.0;  // base
  int dir = 1;     // sign of k in q^{dir k}
  std::string text;

  double real(int k) const;
  // Exact when c, q (or p) are integers; throws if the value is not integral.
  Frequency integer(int k) const;
};

SeqExpr parseSeqExpr(const std::string& text);

}  // namespace wp
