#include "wp/seqexpr.hpp"

#include <cmath>
#include <regex>
#include <stdexcept>

namespace wp {

namespace {

const std::string kNum = R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))";

bool isInt(double x) { return std::isfinite(x) && std::floor(x) == x && std::abs(x) < 9.0e15; }

}  // namespace

SeqExpr parseSeqExpr(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  SeqExpr e;
  e.text = text;
  std::smatch m;
  static const std::regex rConst("^" + kNum + "$");
  static const std::regex rPow("^(?:" + kNum + R"(\*)?k(?:\^)" + kNum + ")?$");
  static const std::regex rPowDiv("^" + kNum + R"(/k(?:\^)" + kNum + ")?$");
  static const std::regex rGeo("^(?:" + kNum + R"(\*)?)" + kNum + R"(\^(-?)k$)");
  static const std::regex rGeoDiv("^" + kNum + "/" + kNum + R"(\^k$)");
  if (std::regex_match(s, m, rConst)) {
    e.kind = SeqExpr::Kind::Constant;
    e.c = std::stod(m[1]);
  } else if (std::regex_match(s, m, rPow)) {
    e.kind = SeqExpr::Kind::Power;
    e.c = m[1].matched ? std::stod(m[1]) : 1.0;
    e.p = m[2].matched ? std::stod(m[2]) : 1.0;
  } else if (std::regex_match(s, m, rPowDiv)) {
    e.kind = SeqExpr::Kind::Power;
    e.c = std::stod(m[1]);
    e.p = -(m[2].matched ? std::stod(m[2]) : 1.0);
  } else if (std::regex_match(s, m, rGeo)) {
    e.kind = SeqExpr::Kind::Geometric;
    e.c = m[1].matched ? std::stod(m[1]) : 1.0;
    e.q = std::stod(m[2]);
    e.dir = m[3].length() ? -1 : 1;
  } else if (std::regex_match(s, m, rGeoDiv)) {
    e.kind = SeqExpr::Kind::Geometric;
    e.c = std::stod(m[1]);
    e.q = std::stod(m[2]);
    e.dir = -1;
  } else {
    throw std::invalid_argument("unrecognized sequence expression: " + text);
  }
  if (e.kind == SeqExpr::Kind::Geometric && e.q <= 0.0)
    throw std::invalid_argument("geometric base must be positive: " + text);
  return e;
}

double SeqExpr::real(int k) const {
  switch (kind) {
    case Kind::Constant: return c;
    case Kind::Power: return c * std::pow(static_cast<double>(k), p);
    case Kind::Geometric: return c * std::pow(q, dir * static_cast<double>(k));
  }
  return 0.0;
}

Frequency SeqExpr::integer(int k) const {
  using boost::multiprecision::pow;
  if (kind == Kind::Power && isInt(c) && isInt(p) && p >= 0)
    return Frequency(static_cast<long long>(c)) * pow(Frequency(k), static_cast<unsigned>(p));
  if (kind == Kind::Geometric && isInt(c) && isInt(q) && dir > 0)
    return Frequency(static_cast<long long>(c)) * pow(Frequency(static_cast<long long>(q)), static_cast<unsigned>(k));
  const double v = real(k);
  if (!isInt(v)) throw std::invalid_argument("sequence '" + text + "' is not integral at k=" + std::to_string(k));
  return Frequency(static_cast<long long>(v));
}

}  // namespace wp
