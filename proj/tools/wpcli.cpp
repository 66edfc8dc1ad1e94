// Batch front-end. Every run writes its artifacts plus a manifest; `rerun`
// replays a manifest and compares artifact digests.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <locale>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/uuid/detail/sha1.hpp>

#include "CLI11.hpp"
#include "json.hpp"
#include "wp/approx.hpp"
#include "wp/riesz.hpp"
#include "wp/rrs.hpp"
#include "wp/rudinshapiro.hpp"
#include "wp/seqexpr.hpp"
#include "wp/spectra.hpp"
#include "wp/witness.hpp"
#include "wp/wpsets.hpp"

using nlohmann::json;
using namespace wp;

namespace {

const char* kVersion = "wpcli 1.0.0";
const char* kConfigEnv = "WP_CONFIG";

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void writeFile(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << data;
}

std::string sha1Hex(const std::string& data) {
  boost::uuids::detail::sha1 h;
  h.process_bytes(data.data(), data.size());
  unsigned int d[5];
  h.get_digest(d);
  std::ostringstream os;
  for (unsigned int w : d) os << std::hex << std::setw(8) << std::setfill('0') << w;
  return os.str();
}

json parseJsonText(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

// Flat TOML subset: [section] headers, key = number | "string" | true | false.
json parseFlatToml(const std::string& text) {
  json root = json::object();
  json* cur = &root;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineNo;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineNo);
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where + ": bad section header");
      cur = &root[trim(line.substr(1, line.size() - 2))];
      *cur = json::object();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) throw ValidationError(where + ": empty key or value");
    if (val.front() == '"') {
      if (val.size() < 2 || val.back() != '"') throw ValidationError(where + ": unterminated string");
      (*cur)[key] = val.substr(1, val.size() - 2);
    } else if (val == "true" || val == "false") {
      (*cur)[key] = val == "true";
    } else {
      double d = 0;
      const auto res = std::from_chars(val.data(), val.data() + val.size(), d);
      if (res.ec != std::errc() || res.ptr != val.data() + val.size())
        throw ValidationError(where + ": unsupported value " + val);
      (*cur)[key] = d;
    }
  }
  return root;
}

json loadConfig(const std::string& path) {
  const std::string text = readFile(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parseJsonText(text, path);
  return parseFlatToml(text);
}

// Looks in [constants] first, then at top level.
const json* cfgFind(const json& cfg, const std::string& key) {
  if (cfg.contains("constants") && cfg["constants"].is_object() && cfg["constants"].contains(key))
    return &cfg["constants"][key];
  if (cfg.contains(key)) return &cfg[key];
  return nullptr;
}

double cfgNumber(const json& cfg, const std::string& key, double fallback) {
  const json* v = cfgFind(cfg, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ValidationError("config: " + key + " must be a number");
  return v->get<double>();
}

Complex parseComplex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  static const std::regex re(
      R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij])?$)");
  static const std::regex pureIm(R"(^([+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij]$)");
  std::smatch m;
  auto toD = [&](std::string t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    double d = 0;
    const char* b = t.data();
    if (*b == '+') ++b;
    const auto r = std::from_chars(b, t.data() + t.size(), d);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw ValidationError("bad complex number: " + text);
    return d;
  };
  if (std::regex_match(s, m, pureIm)) return Complex(0.0, toD(m[1].str()));
  if (!s.empty() && std::regex_match(s, m, re) && m[1].matched)
    return Complex(toD(m[1].str()), m[2].matched ? toD(m[2].str()) : 0.0);
  throw ValidationError("bad complex number: " + text);
}

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

long long parseInt(const std::string& t) {
  long long v = 0;
  const char* b = t.data();
  if (*b == '+') ++b;
  const auto r = std::from_chars(b, t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size()) throw ValidationError("bad integer: " + t);
  return v;
}

// "a..b" or a comma list.
std::vector<long long> parseIntSet(const std::string& s) {
  std::vector<long long> out;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const long long lo = parseInt(s.substr(0, dots)), hi = parseInt(s.substr(dots + 2));
    if (lo > hi) throw ValidationError("empty range " + s);
    if (hi - lo > 1'000'000) throw ValidationError("range too large " + s);
    for (long long v = lo; v <= hi; ++v) out.push_back(v);
  } else {
    for (const auto& t : splitList(s)) out.push_back(parseInt(t));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> evalSeq(const std::string& spec, int levels) {
  const SeqExpr e = parseSeqExpr(spec);
  std::vector<double> v;
  for (int k = 1; k <= levels; ++k) v.push_back(e.real(k));
  return v;
}

json paramsJson(const RRSParams& p) {
  json j;
  j["eps"] = p.eps;
  j["n"] = p.n;
  j["m"] = json::array();
  j["r"] = json::array();
  for (int k = 0; k < p.levels(); ++k) {
    j["m"].push_back(toDecimal(p.m[k]));
    j["r"].push_back(toDecimal(p.r[k]));
  }
  return j;
}

double productTerms(const RRSParams& p) {
  double t = 1;
  for (int n : p.n) t *= std::ldexp(1.0, n + 1) + 1;
  return t;
}

double littlewoodDefaultL() {
  std::vector<SparseSpectrum> fam;
  for (long long N = 256; N <= 16384; N *= 2) fam.push_back(dirichletKernel(N));
  return littlewoodEmpiricalL(fam);
}

struct Run {
  std::string subcommand;
  json config = json::object();
  bool haveConfig = false;
  std::string configPath;
  std::string configDigest;
  json inputs = json::object();  // path -> digest
  std::vector<std::string> outputs;
  json summary = json::object();
  int status = 0;

  void input(const std::string& path) { inputs[path] = sha1Hex(readFile(path)); }
  void output(const std::string& path, const std::string& data) {
    writeFile(path, data);
    outputs.push_back(path);
  }
};

struct Options {
  int level = 0;
  std::string out;
  std::string aSpec = "1/k", nSpec = "3^k", bSpec;
  int zafranM = 0;
  int levels = 0;
  long long maxTerms = 1LL << 24;
  std::string epsSpec;
  int blocks = 1;
  long long bruteMaxTerms = 4096;
  std::string input, mode = "power", lambda, support, values;
  int mMax = 6, k = 4;
  double eps = 0.5, tol = 0.0, L = -1;
  long long grid = 0;
  int maxIter = 400;
  std::string family = "dirichlet";
  long long minN = 256, maxN = 16384;
  int oversample = 64;
  int depth = 0;
  std::string config, z, spec, balls;
  std::string manifest;
};

void cmdRudinShapiro(const Options& o, Run& run) {
  if (o.level < 0 || o.level > 30) throw ValidationError("--level must be in [0, 30]");
  const RSPair pr = rudinShapiroPair(o.level);
  json j;
  j["level"] = o.level;
  j["P"] = toJson(pr.P);
  j["Q"] = toJson(pr.Q);
  const std::string path = o.out.empty() ? "coeffs.json" : o.out;
  run.output(path, j.dump(1) + "\n");
  run.summary = {{"level", o.level}, {"entries", pr.P.size()}, {"out", path}};
}

void cmdRiesz(const Options& o, Run& run) {
  if (o.levels < 1) throw ValidationError("--levels must be >= 1");
  if (std::pow(3.0, o.levels) > static_cast<double>(o.maxTerms))
    throw ValidationError("3^levels exceeds --max-terms");
  const SeqExpr a = parseSeqExpr(o.aSpec), n = parseSeqExpr(o.nSpec);
  RieszParams p;
  for (int k = 1; k <= o.levels; ++k) {
    p.a.push_back(a.real(k));
    p.n.push_back(n.integer(k));
  }
  validateRiesz(p, o.levels);
  const SparseSpectrum f = rieszPartial(p, o.levels);
  json j;
  j["aSpec"] = o.aSpec;
  j["nSpec"] = o.nSpec;
  j["a"] = p.a;
  j["n"] = json::array();
  for (const auto& v : p.n) j["n"].push_back(toDecimal(v));
  const L1Estimate l1 = l1Norm(f);
  j["l1"] = l1.value;
  j["l1Error"] = l1.errorBound;
  if (!o.bSpec.empty()) {
    j["bSpec"] = o.bSpec;
    j["brownMoran"] = brownMoranDiagnostic(p.a, evalSeq(o.bSpec, o.levels), o.levels);
  }
  if (o.zafranM > 0) {
    j["zafranM"] = o.zafranM;
    j["zafran"] = zafranCriterionDiagnostic(p.a, o.zafranM, o.levels);
  }
  j["spectrum"] = toJson(f);
  const std::string path = o.out.empty() ? "riesz.json" : o.out;
  run.output(path, j.dump(1) + "\n");
  run.summary = {{"levels", o.levels}, {"terms", f.size()}, {"out", path}};
}

const char* kDefaultWitnessEps = "0.35355339059327373*0.495^k";

void cmdRrsBuild(const Options& o, Run& run) {
  if (o.levels < 1) throw ValidationError("--levels must be >= 1");
  const std::string es = o.epsSpec.empty() ? "8^-k" : o.epsSpec;
  const RRSParams p = deriveParams(evalSeq(es, o.levels));
  if (productTerms(p) > static_cast<double>(o.maxTerms))
    throw ValidationError("partial product would have about " + num(productTerms(p)) + " terms; exceeds --max-terms");
  const SparseSpectrum f = partialProduct(p, o.levels);
  json j;
  j["epsSpec"] = es;
  j["levels"] = o.levels;
  j["params"] = paramsJson(p);
  j["spectrum"] = toJson(f);
  const std::string path = o.out.empty() ? "product.json" : o.out;
  run.output(path, j.dump(1) + "\n");
  run.summary = {{"levels", o.levels}, {"terms", f.size()}, {"out", path}};
}

void cmdRrsWitness(const Options& o, Run& run) {
  if (o.levels < 1) throw ValidationError("--levels must be >= 1");
  if (o.blocks < 1) throw ValidationError("--blocks must be >= 1");
  const std::string es = o.epsSpec.empty() ? kDefaultWitnessEps : o.epsSpec;
  const RRSParams p = deriveParams(evalSeq(es, o.levels));
  const BlockPlan plan = buildBlockPlan(p, o.blocks);
  if (plan.lastLevel(o.blocks) > o.levels)
    throw ValidationError("block " + std::to_string(o.blocks) + " needs " + std::to_string(plan.lastLevel(o.blocks)) +
                          " levels");
  std::ostringstream csv;
  csv.imbue(std::locale::classic());
  csv << "k,firstLevel,lastLevel,N,l2Lebesgue,l2MuClosed,l2MuBrute,l1DistToOne,blockSumResidual\n";
  for (int k = 1; k <= o.blocks; ++k) {
    std::uint64_t terms = 0;
    for (int l = plan.firstLevel(k); l <= plan.lastLevel(k); ++l) terms += std::uint64_t(1) << p.n[l - 1];
    csv << k << ',' << plan.firstLevel(k) << ',' << plan.lastLevel(k) << ',' << o.levels << ','
        << num(blockL2Squared(plan, k, p)) << ',' << num(l2MuClosedForm(plan, k, p)) << ',';
    if (terms <= static_cast<std::uint64_t>(o.bruteMaxTerms))
      csv << num(l2MuBruteForce(plan, k, p, o.levels)) << ',' << num(l1MuDistanceToOne(plan, k, p, o.levels));
    else
      csv << ',';
    csv << ',' << num(blockSumResidual(plan, k, p)) << '\n';
  }
  const std::string path = o.out.empty() ? "witness.csv" : o.out;
  run.output(path, csv.str());
  run.summary = {{"epsSpec", es}, {"blocks", o.blocks}, {"params", paramsJson(p)}, {"out", path}};
}

std::vector<Complex> parseComplexList(const std::string& s) {
  std::vector<Complex> v;
  for (const auto& t : splitList(s)) v.push_back(parseComplex(t));
  return v;
}

json complexJson(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

void cmdSpectra(const Options& o, Run& run) {
  if (o.input.empty()) throw ValidationError("--input is required");
  run.input(o.input);
  const json in = parseJsonText(readFile(o.input), o.input);
  const SparseSpectrum f = spectrumFromJson(in.is_object() ? in.at("spectrum") : in);
  json j;
  j["mode"] = o.mode;
  if (o.mode == "power") {
    const SpectralDecomposition d = idempotentDecompose(f, o.tol);
    const IdempotentReport ir = checkIdempotents(f, d);
    const PowerBoundReport pr = convPowerBoundCheck(f, o.mMax);
    j["values"] = json::array();
    for (Complex v : d.values) j["values"].push_back(complexJson(v));
    j["delta"] = d.delta;
    j["lambdaMax"] = d.lambdaMax;
    j["idempotent"] = ir.idempotent;
    j["orthogonal"] = ir.orthogonal;
    j["reconstructs"] = ir.reconstructs;
    j["idempotentNormBound"] = ir.normBoundPass;
    j["rows"] = json::array();
    for (const auto& r : pr.rows)
      j["rows"].push_back({{"m", r.m}, {"l1", r.l1}, {"l1Error", r.l1Error}, {"bound", r.bound}, {"pass", r.pass}});
    j["allPass"] = pr.allPass() && ir.idempotent && ir.orthogonal && ir.reconstructs;
  } else if (o.mode == "perturbed") {
    if (o.lambda.empty()) throw ValidationError("--lambda is required in perturbed mode");
    const double L = o.L > 0 ? o.L : cfgNumber(run.config, "L", 0.4);
    const PerturbedReport r = perturbedPowerBoundCheck(f, parseComplexList(o.lambda), o.eps, o.k, L);
    j["m"] = r.m;
    j["eps"] = r.eps;
    j["delta"] = r.delta;
    j["C"] = r.C;
    j["gL2"] = r.gL2;
    j["gBound"] = r.gBound;
    j["gPass"] = r.gPass;
    j["k"] = r.k;
    j["l1f"] = r.l1f;
    j["l1fk"] = r.l1fk;
    j["l1Error"] = r.l1Error;
    j["bound"] = r.bound;
    j["boundPass"] = r.boundPass;
    j["L"] = L;
    j["gammaTimesNorm"] = r.gammaTimesNorm;
    j["LlnCount"] = r.LlnCount;
  } else if (o.mode == "annihilate") {
    const std::vector<Complex> vals = o.values.empty() ? valueSet(f, o.tol) : parseComplexList(o.values);
    const AnnihilationReport r = annihilatingPolynomialCheck(AffineSpectrum{Complex(0.0, 0.0), f}, vals);
    j["values"] = json::array();
    for (Complex v : r.values) j["values"].push_back(complexJson(v));
    j["residual"] = r.residual;
  } else {
    throw ValidationError("--mode must be power, perturbed or annihilate");
  }
  const std::string path = o.out.empty() ? "spectra.json" : o.out;
  run.output(path, j.dump(1) + "\n");
  run.summary = {{"mode", o.mode}, {"out", path}};
}

void cmdBpb(const Options& o, Run& run) {
  if (o.lambda.empty() || o.support.empty()) throw ValidationError("--lambda and --support are required");
  InterpolationProblem pb;
  pb.lambda = parseIntSet(o.lambda);
  pb.candidateSupport = parseIntSet(o.support);
  pb.gridSize = static_cast<std::size_t>(o.grid);
  BpbOptions opt;
  opt.maxIterations = o.maxIter;
  const BpbResult r = bpbMinimize(pb, o.eps, opt);
  json j;
  j["lambda"] = pb.lambda;
  j["support"] = pb.candidateSupport;
  j["grid"] = pb.effectiveGrid();
  j["gridL1"] = r.gridL1;
  j["l1"] = r.l1;
  j["l1Error"] = r.l1Error;
  j["constraintResidual"] = r.constraintResidual;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["withinTarget"] = r.withinTarget;
  j["history"] = r.history;
  j["spectrum"] = toJson(r.f);
  const std::string path = o.out.empty() ? "bpb.json" : o.out;
  run.output(path, j.dump(1) + "\n");
  run.summary = {{"l1", r.l1}, {"converged", r.converged}, {"out", path}};
}

void cmdLittlewood(const Options& o, Run& run) {
  if (o.minN < 1 || o.maxN < o.minN) throw ValidationError("need 1 <= --min-n <= --max-n");
  std::ostringstream csv;
  csv.imbue(std::locale::classic());
  csv << "N,count,l1,l1Error,ratio,lo,hi\n";
  double best = INFINITY;
  for (long long N = o.minN; N <= o.maxN; N *= 2) {
    SparseSpectrum f;
    if (o.family == "dirichlet") {
      f = dirichletKernel(N);
    } else if (o.family == "rudin-shapiro") {
      const int n = static_cast<int>(std::llround(std::log2(static_cast<double>(N))));
      if ((1LL << n) != N) throw ValidationError("rudin-shapiro family needs powers of two");
      f = rudinShapiroPair(n).P;
    } else {
      throw ValidationError("--family must be dirichlet or rudin-shapiro");
    }
    const LittlewoodResult r = littlewoodRatio(f, o.oversample);
    best = std::min(best, r.ratio);
    csv << N << ',' << r.count << ',' << num(r.l1) << ',' << num(r.l1Error) << ',' << num(r.ratio) << ','
        << num(r.lo) << ',' << num(r.hi) << '\n';
  }
  const std::string path = o.out.empty() ? "ratios.csv" : o.out;
  run.output(path, csv.str());
  run.summary = {{"family", o.family}, {"empiricalL", best}, {"out", path}};
}

PsiParams psiFromConfig(Run& run) {
  const json& cfg = run.config;
  if (const json* an = cfgFind(cfg, "annuli"))
    if (!an->is_string() || an->get<std::string>() != "default")
      throw ValidationError("config: only annuli = \"default\" is supported");
  PsiParams p;
  p.a = cfgNumber(cfg, "a", p.a);
  p.b = cfgNumber(cfg, "b", p.b);
  p.K = cfgNumber(cfg, "K", p.K);
  p.C = cfgNumber(cfg, "C", p.C);
  std::string source = "config";
  double L;
  if (cfgFind(cfg, "L")) {
    L = cfgNumber(cfg, "L", 0);
  } else {
    L = littlewoodDefaultL();
    source = "dirichlet-sweep";
  }
  if (!(L > 0)) throw ValidationError("config: L must be positive");
  p.consts = Constants::fromL(L, cfgNumber(cfg, "alpha", 2.0), cfgNumber(cfg, "lambda", std::exp(1.0)));
  if (cfgFind(cfg, "c") && std::abs(cfgNumber(cfg, "c", 0) - p.consts.c) > 1e-12 * p.consts.c)
    throw ValidationError("config: c must equal 4/L");
  run.summary["LSource"] = source;
  return p;
}

void cmdSetUBuild(const Options& o, Run& run) {
  if (o.depth < 0) throw ValidationError("--depth must be >= 0");
  const PsiParams p = psiFromConfig(run);
  const SetUSpec s = buildSetU(p, o.depth);
  json j = s.toJson();
  j["LSource"] = run.summary["LSource"];
  const std::string path = o.out.empty() ? "setu.json" : o.out;
  run.output(path, j.dump(1) + "\n");
  run.summary["depth"] = o.depth;
  run.summary["components"] = s.components.size();
  run.summary["allChecksPass"] = s.allChecksPass();
  run.summary["out"] = path;
  if (!s.allChecksPass()) {
    std::cerr << "set-u build: some construction checks failed; see " << path << "\n";
    run.status = 1;
  }
}

void cmdSetUMember(const Options& o, Run& run) {
  if (o.spec.empty() || o.z.empty()) throw ValidationError("--z and --spec are required");
  run.input(o.spec);
  const SetUSpec s = SetUSpec::fromJson(parseJsonText(readFile(o.spec), o.spec));
  const Complex z = parseComplex(o.z);
  const Membership m = membershipU(z, s);
  json j = {{"z", complexJson(z)}, {"membership", toString(m)}, {"depth", s.depth}};
  const std::string path = o.out.empty() ? "member.json" : o.out;
  run.output(path, j.dump(1) + "\n");
  run.summary = {{"membership", toString(m)}, {"out", path}};
}

json rcJson(const RComplex& c) { return {{"re", rationalStr(c.re)}, {"im", rationalStr(c.im)}}; }

void cmdCantor(const Options& o, Run& run) {
  if (o.depth < 0 || o.depth > 12) throw ValidationError("--depth must be in [0, 12]");
  std::vector<Ball> balls;
  if (o.balls.empty()) {
    balls = defaultCantorBalls(64);
  } else {
    run.input(o.balls);
    for (const auto& b : parseJsonText(readFile(o.balls), o.balls)) {
      auto str = [&](const char* key, const char* fallback) {
        if (!b.contains(key)) return std::string(fallback);
        return b[key].is_string() ? b[key].get<std::string>() : b[key].dump();
      };
      balls.push_back({RComplex{parseRational(str("re", "")), parseRational(str("im", "0"))},
                       parseRational(str("radius", ""))});
    }
  }
  const CantorResult r = cantorFromBalls(balls, o.depth);
  json j;
  j["depth"] = o.depth;
  j["ballIndices"] = r.ballIndices;
  j["p"] = json::array();
  for (const auto& c : r.p) j["p"].push_back(rcJson(c));
  j["points"] = json::array();
  for (const auto& c : r.points) j["points"].push_back(rcJson(c));
  j["pairsChecked"] = r.pairsChecked;
  j["failures"] = r.failures;
  j["allInside"] = r.allInside();
  const std::string path = o.out.empty() ? "cantor.json" : o.out;
  run.output(path, j.dump(1) + "\n");
  run.summary = {{"ballIndices", r.ballIndices}, {"allInside", r.allInside()}, {"out", path}};
  if (!r.allInside()) run.status = 1;
}

// Runs one command line (without the program name). A config snapshot, when
// given, replaces the config file and keeps the recorded digest.
int execute(const std::vector<std::string>& args, const json* configSnapshot, const std::string& snapshotDigest) {
  CLI::App app{"Sparse Fourier constructions on the circle", "wpcli"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--manifest", o.manifest, "Manifest path (default: <output>.manifest.json)");
  app.set_version_flag("--version", kVersion);

  auto* rs = app.add_subcommand("rudin-shapiro", "Rudin-Shapiro pair P_n, Q_n");
  rs->add_option("--level", o.level, "n")->required();
  rs->add_option("--out", o.out, "Output JSON");

  auto* rz = app.add_subcommand("riesz", "Riesz partial product");
  rz->add_option("--a-spec", o.aSpec, "Sequence a_k")->capture_default_str();
  rz->add_option("--n-spec", o.nSpec, "Sequence n_k")->capture_default_str();
  rz->add_option("--levels", o.levels, "N")->required();
  rz->add_option("--b-spec", o.bSpec, "Comparison sequence b_k for the (a_k - b_k)^2 trace");
  rz->add_option("--zafran-m", o.zafranM, "Exponent m for the sum |a_k|^m trace");
  rz->add_option("--max-terms", o.maxTerms, "Refuse larger expansions")->capture_default_str();
  rz->add_option("--out", o.out, "Output JSON");

  auto* rrs = app.add_subcommand("rrs", "Riesz-Rudin-Shapiro products");
  rrs->require_subcommand(1);
  auto* rb = rrs->add_subcommand("build", "Partial product f_N");
  rb->add_option("--eps-spec", o.epsSpec, "Sequence eps_k (default 8^-k)");
  rb->add_option("--levels", o.levels, "N")->required();
  rb->add_option("--max-terms", o.maxTerms, "Refuse larger expansions")->capture_default_str();
  rb->add_option("--out", o.out, "Output JSON");
  auto* rw = rrs->add_subcommand("witness", "Witness polynomial report");
  rw->add_option("--eps-spec", o.epsSpec, std::string("Sequence eps_k (default ") + kDefaultWitnessEps + ")");
  rw->add_option("--levels", o.levels, "N")->required();
  rw->add_option("--blocks", o.blocks, "Number of blocks")->required();
  rw->add_option("--brute-max-terms", o.bruteMaxTerms, "Skip brute-force columns above this support size")
      ->capture_default_str();
  rw->add_option("--report,--out", o.out, "Output CSV");

  auto* sp = app.add_subcommand("spectra", "Finite-valued spectra");
  sp->require_subcommand(1);
  auto* sc = sp->add_subcommand("check", "Idempotent and power bounds");
  sc->add_option("--input", o.input, "Spectrum JSON")->required();
  sc->add_option("--mode", o.mode, "power|perturbed|annihilate")->capture_default_str();
  sc->add_option("--m-max", o.mMax, "Largest power (power mode)")->capture_default_str();
  sc->add_option("--lambda", o.lambda, "Comma list of complex values (perturbed mode)");
  sc->add_option("--eps", o.eps, "Perturbation size (perturbed mode)")->capture_default_str();
  sc->add_option("--k", o.k, "Power k (perturbed mode)")->capture_default_str();
  sc->add_option("--L", o.L, "Littlewood constant (perturbed mode)");
  sc->add_option("--values", o.values, "Comma list of values (annihilate mode)");
  sc->add_option("--tol", o.tol, "Value clustering tolerance")->capture_default_str();
  sc->add_option("--config", o.config, "Config file");
  sc->add_option("--out", o.out, "Output JSON");

  auto* bp = app.add_subcommand("bpb", "L1-minimal interpolation");
  bp->add_option("--lambda", o.lambda, "Frequencies with coefficient 1")->required();
  bp->add_option("--support", o.support, "Candidate support: a..b or list")->required();
  bp->add_option("--eps", o.eps, "Target: norm <= 1 + eps")->capture_default_str();
  bp->add_option("--grid", o.grid, "Grid size (0: default)")->capture_default_str();
  bp->add_option("--max-iter", o.maxIter, "Iteration cap")->capture_default_str();
  bp->add_option("--out", o.out, "Output JSON");

  auto* lw = app.add_subcommand("littlewood", "L1 norm / ln #f sweep");
  lw->add_option("--family", o.family, "dirichlet|rudin-shapiro")->capture_default_str();
  lw->add_option("--min-n", o.minN, "Smallest N")->capture_default_str();
  lw->add_option("--max-n", o.maxN, "Largest N (doubling from --min-n)")->capture_default_str();
  lw->add_option("--oversample", o.oversample, "Quadrature oversampling")->capture_default_str();
  lw->add_option("--csv,--out", o.out, "Output CSV");

  auto* su = app.add_subcommand("set-u", "The set U");
  su->require_subcommand(1);
  auto* sb = su->add_subcommand("build", "Build components to a depth");
  sb->add_option("--depth", o.depth, "Number of components")->required();
  sb->add_option("--config", o.config, "Config (JSON or TOML)");
  sb->add_option("--out", o.out, "Output JSON");
  auto* sm = su->add_subcommand("member", "Membership of a point");
  sm->add_option("--z", o.z, "Complex point, e.g. 0.5+0i")->required();
  sm->add_option("--spec", o.spec, "Spec from set-u build")->required();
  sm->add_option("--out", o.out, "Output JSON");

  auto* ca = app.add_subcommand("cantor", "Cantor set from balls");
  ca->add_option("--depth", o.depth, "Number of points p_j")->required();
  ca->add_option("--balls", o.balls, "JSON list of {re, im, radius} rationals");
  ca->add_option("--out", o.out, "Output JSON");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  Run run;
  try {
    std::string path;
    for (const auto* s : {rs, rz, rb, rw, sc, bp, lw, sb, sm, ca})
      if (s->parsed()) {
        path = s->get_name();
        if (s->get_parent() != &app) path = s->get_parent()->get_name() + " " + path;
      }
    run.subcommand = path;
    if (configSnapshot) {
      run.config = *configSnapshot;
      run.haveConfig = !configSnapshot->empty();
      run.configDigest = snapshotDigest;
    } else {
      const char* env = std::getenv(kConfigEnv);
      const std::string cfgPath = env && *env ? std::string(env) : o.config;
      if (!cfgPath.empty()) {
        run.config = loadConfig(cfgPath);
        run.haveConfig = true;
        run.configPath = cfgPath;
        run.configDigest = sha1Hex(readFile(cfgPath));
      }
    }

    if (rs->parsed()) cmdRudinShapiro(o, run);
    else if (rz->parsed()) cmdRiesz(o, run);
    else if (rb->parsed()) cmdRrsBuild(o, run);
    else if (rw->parsed()) cmdRrsWitness(o, run);
    else if (sc->parsed()) cmdSpectra(o, run);
    else if (bp->parsed()) cmdBpb(o, run);
    else if (lw->parsed()) cmdLittlewood(o, run);
    else if (sb->parsed()) cmdSetUBuild(o, run);
    else if (sm->parsed()) cmdSetUMember(o, run);
    else if (ca->parsed()) cmdCantor(o, run);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }

  // Manifest: the command line minus --manifest, the config snapshot and digests.
  json m;
  m["version"] = kVersion;
  m["subcommand"] = run.subcommand;
  json argv = json::array();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--manifest") {
      ++i;
      continue;
    }
    if (args[i].rfind("--manifest=", 0) == 0) continue;
    argv.push_back(args[i]);
  }
  m["argv"] = argv;
  m["config"] = run.config;
  m["configEnv"] = kConfigEnv;
  if (!run.configDigest.empty()) m["configDigest"] = run.configDigest;
  m["inputs"] = run.inputs;
  m["outputs"] = json::object();
  for (const auto& p : run.outputs) m["outputs"][p] = sha1Hex(readFile(p));
  m["summary"] = run.summary;
  const std::string mpath = !o.manifest.empty() ? o.manifest
                            : run.outputs.empty() ? std::string("manifest.json")
                                                  : run.outputs.front() + ".manifest.json";
  try {
    writeFile(mpath, m.dump(1) + "\n");
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << run.summary.dump() << "\n";
  return run.status;
}

int rerun(const std::string& manifestPath) {
  json m;
  try {
    m = parseJsonText(readFile(manifestPath), manifestPath);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  for (const auto& [path, digest] : m.at("inputs").items()) {
    std::string now;
    try {
      now = sha1Hex(readFile(path));
    } catch (const ValidationError&) {
      now = "missing";
    }
    if (now != digest.get<std::string>()) {
      std::cerr << "error: input " << path << " changed since the manifest was written\n";
      return 1;
    }
  }
  std::vector<std::string> args = m.at("argv").get<std::vector<std::string>>();
  args.insert(args.begin(), {"--manifest", manifestPath});
  const json expected = m.at("outputs");
  const json cfg = m.at("config");
  const int rc = execute(args, &cfg, m.value("configDigest", std::string()));
  if (rc != 0) return rc;
  int mismatches = 0;
  for (const auto& [path, digest] : expected.items())
    if (sha1Hex(readFile(path)) != digest.get<std::string>()) {
      std::cerr << "artifact differs: " << path << "\n";
      ++mismatches;
    }
  if (mismatches) return 2;
  std::cout << "reproduced " << expected.size() << " artifact(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args[0] == "rerun") {
    if (args.size() == 3 && args[1] == "--manifest") return rerun(args[2]);
    if (args.size() == 2 && args[1].rfind("--manifest=", 0) == 0) return rerun(args[1].substr(11));
    std::cerr << "usage: wpcli rerun --manifest PATH\n";
    return 1;
  }
  return execute(args, nullptr, std::string());
}
