#include "cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <type_traits>

#include <CLI11.hpp>
#include <json.hpp>

#include "sosrate/certify.h"
#include "sosrate/certsearch.h"
#include "sosrate/oracle.h"
#include "sosrate/scenarios.h"

namespace sosrate::cli {
namespace {

using Json = nlohmann::ordered_json;

// parameter flags, in sweep grid order
const std::vector<std::string>& ParamNames() {
  static const std::vector<std::string> names = {"mu", "L", "kappa", "gamma", "eps",
                                                 "eta", "delta", "c1", "c2"};
  return names;
}

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct Settings {
  std::string verb;
  std::map<std::string, std::string> params;  // only the ones given
  std::string alg;
  std::string metric;
  std::string out;
  std::string format = "text";
  std::string route = "sos";
  std::string sdpa;
  std::string noise = "none";
  std::string arithmetic = "auto";
  std::string instance = "witness";
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int steps = 10;
  int dim = 2;
  int threads = 0;
};

// one resolved parameter point
struct Point {
  FunctionClass fc;
  AlgorithmSpec spec;
  MetricKind metric = MetricKind::kObjectiveAccuracy;
};

Point Resolve(const Settings& s, const std::map<std::string, Rational>& v) {
  if (s.alg.empty()) throw ConfigError("missing --alg (one of gd-constant, gd-els, gd-armijo, "
                                       "gd-goldstein, gd-wolfe, pgm-constant, pgm-els)");
  Point p;
  try {
    p.spec.kind = ParseAlgorithmKind(s.alg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto get = [&](const std::string& k, const Rational& fallback) -> Rational {
    auto it = v.find(k);
    return it == v.end() ? fallback : it->second;
  };
  p.fc.mu = get("mu", 1);
  if (v.count("L") && v.count("kappa")) throw ConfigError("give either L or kappa, not both");
  p.fc.L = v.count("kappa") ? Rational(v.at("kappa") * p.fc.mu) : get("L", 10);
  p.fc.composite = p.spec.IsProximal();
  p.spec.gamma = get("gamma", 0);
  p.spec.epsilon = get("eps", 0);
  p.spec.eta = get("eta", 0);
  p.spec.delta = get("delta", 0);
  p.spec.c1 = get("c1", 0);
  p.spec.c2 = get("c2", 0);
  try {
    p.metric = s.metric.empty() ? DefaultMetric(p.spec.kind) : ParseMetricKind(s.metric);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

std::map<std::string, Rational> SinglePoint(const Settings& s) {
  std::map<std::string, Rational> v;
  for (const auto& [k, text] : s.params) {
    const auto values = ParseRange(text);
    if (values.size() != 1) throw ConfigError("ranges are only accepted by sweep (--" + k + ")");
    v[k] = values.front();
  }
  return v;
}

std::vector<std::map<std::string, Rational>> Grid(const Settings& s) {
  std::vector<std::map<std::string, Rational>> grid(1);
  for (const auto& name : ParamNames()) {
    auto it = s.params.find(name);
    if (it == s.params.end()) continue;
    const auto values = ParseRange(it->second);
    std::vector<std::map<std::string, Rational>> next;
    next.reserve(grid.size() * values.size());
    for (const auto& row : grid) {
      for (const auto& value : values) {
        auto copy = row;
        copy[name] = value;
        next.push_back(std::move(copy));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

std::string Status(SolverStatus status) { return std::string(SolverStatusName(status)); }

int StatusExit(SolverStatus status) {
  switch (status) {
    case SolverStatus::kOptimal: return kExitOk;
    case SolverStatus::kInfeasible: return kExitInfeasible;
    case SolverStatus::kNumericalTrouble: return kExitNumerical;
  }
  return kExitNumerical;
}

// numbers go out as JSON numbers, everything else (names, nan) as strings
Json JsonValue(const std::string& text) {
  if (text == "nan" || text.empty()) return text;
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) return text;
  if (text.find_first_of(".eE") == std::string::npos) return std::stoll(text);
  return x;
}

void ParamFields(const Point& p, std::vector<std::pair<std::string, std::string>>& row) {
  row.emplace_back("alg", std::string(ScenarioKey(p.spec.kind)));
  row.emplace_back("mu", FormatFloat(ToDouble(p.fc.mu)));
  row.emplace_back("L", FormatFloat(ToDouble(p.fc.L)));
  row.emplace_back("gamma", FormatFloat(ToDouble(p.spec.gamma)));
  row.emplace_back("eps", FormatFloat(ToDouble(p.spec.epsilon)));
  row.emplace_back("eta", FormatFloat(ToDouble(p.spec.eta)));
  row.emplace_back("delta", FormatFloat(ToDouble(p.spec.delta)));
  row.emplace_back("c1", FormatFloat(ToDouble(p.spec.c1)));
  row.emplace_back("c2", FormatFloat(ToDouble(p.spec.c2)));
}

using Row = std::vector<std::pair<std::string, std::string>>;

// rows: text is "key value" per line, csv has a header, json-lines one object
void EmitRecord(const Row& row, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].first;
    out << "\n";
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].second;
    out << "\n";
  } else if (format == "json-lines") {
    Json j;
    for (const auto& [k, v] : row) j[k] = JsonValue(v);
    out << j.dump() << "\n";
  } else {
    for (const auto& [k, v] : row) out << k << " " << v << "\n";
  }
}

SdpProblem BuildSdp(const RateProblem& problem, const std::string& route) {
  return route == "pep" ? BuildPepDual(problem) : BuildSosSdp(problem);
}

int RunRate(const Settings& s, std::ostream& out) {
  const Point p = Resolve(s, SinglePoint(s));
  const RateProblem problem = BuildScenario(p.fc, p.spec, p.metric);
  const SdpProblem sdp = BuildSdp(problem, s.route);
  if (!s.sdpa.empty()) {
    std::ofstream f(s.sdpa);
    if (!f) throw ConfigError("cannot write " + s.sdpa);
    WriteSdpa(sdp, f);
  }
  const RateResult r = SolveRate(sdp, s.tol);
  const double formula = ToDouble(RateFormula(p.fc, p.spec));
  Row row;
  ParamFields(p, row);
  row.emplace_back("metric", std::string(MetricName(p.metric)));
  row.emplace_back("route", s.route);
  row.emplace_back("status", Status(r.status));
  const bool ok = r.status == SolverStatus::kOptimal;
  row.emplace_back("t_sdp", ok ? FormatFloat(r.t) : "nan");
  row.emplace_back("t_formula", FormatFloat(formula));
  row.emplace_back("gap", ok ? FormatFloat(std::abs(r.t - formula)) : "nan");
  row.emplace_back("iterations", std::to_string(r.iterations));
  EmitRecord(row, s.format, out);
  return StatusExit(r.status);
}

std::string PsdLine(const PsdVerdict& v) {
  std::ostringstream os;
  os << (v.is_psd ? "psd" : "not-psd");
  if (v.method == PsdMethod::kRationalLdl) {
    os << " pivots";
    for (const auto& [i, value] : v.pivots) os << " " << i << ":" << ToString(value);
  } else {
    os << " charpoly";
    for (const auto& c : v.charpoly) os << " " << ToString(c);
  }
  return os.str();
}

int RunVerify(const Settings& s, std::ostream& out) {
  const Point p = Resolve(s, SinglePoint(s));
  const RateProblem problem = BuildScenario(p.fc, p.spec);
  const CertificateInstance cert = Catalog(problem.key).Evaluate(p.fc, p.spec);
  const IdentityReport id = VerifyIdentity(cert, problem);
  const PsdVerdict ldl = VerifyPsd(cert.gram, PsdMethod::kRationalLdl);
  const PsdVerdict descartes = VerifyPsd(cert.gram, PsdMethod::kCharpolyDescartes);
  const bool pass = id.holds && id.multipliers_nonnegative && ldl.is_psd && descartes.is_psd;

  std::map<CoefficientKey, Rational> residual(id.discrepancies.begin(), id.discrepancies.end());
  std::vector<CoefficientKey> keys;
  for (const auto& name : problem.catalog->scalars()) keys.push_back(CoefficientKey::Scalar(name));
  const auto& vecs = problem.catalog->vectors();
  for (size_t i = 0; i < vecs.size(); ++i)
    for (size_t j = i; j < vecs.size(); ++j) keys.push_back(CoefficientKey::Pair(vecs[i], vecs[j]));
  for (const auto& [key, value] : residual)
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);

  auto residual_of = [&](const CoefficientKey& k) -> Rational {
    auto it = residual.find(k);
    return it == residual.end() ? Rational(0) : it->second;
  };

  if (s.format == "csv") {
    out << "coefficient,residual\n";
    for (const auto& k : keys) out << k.ToString() << "," << ToString(residual_of(k)) << "\n";
  } else if (s.format == "json-lines") {
    Json head;
    head["scenario"] = problem.key;
    head["mu"] = ToString(p.fc.mu);
    head["L"] = ToString(p.fc.L);
    head["t"] = ToString(cert.t);
    head["identity"] = id.holds;
    head["multipliers_nonnegative"] = id.multipliers_nonnegative;
    head["psd_ldl"] = ldl.is_psd;
    head["psd_descartes"] = descartes.is_psd;
    head["verdict"] = pass ? "PASS" : "FAIL";
    out << head.dump() << "\n";
    for (const auto& k : keys) {
      Json j;
      j["coefficient"] = k.ToString();
      j["residual"] = ToString(residual_of(k));
      out << j.dump() << "\n";
    }
  } else {
    out << "scenario " << problem.key << "\n";
    out << "mu " << ToString(p.fc.mu) << "\nL " << ToString(p.fc.L) << "\n";
    if (p.spec.kind == AlgorithmKind::kGdConstant || p.spec.kind == AlgorithmKind::kPgmConstant)
      out << "gamma " << ToString(p.spec.gamma) << "\n";
    out << "t " << ToString(cert.t) << "\n";
    out << "sigma";
    for (const auto& v : cert.sigma) out << " " << ToString(v);
    out << "\ntheta";
    for (const auto& v : cert.theta) out << " " << ToString(v);
    out << "\nresiduals\n";
    for (const auto& k : keys) out << "  " << k.ToString() << " " << ToString(residual_of(k)) << "\n";
    out << "identity " << (id.holds ? "exact" : "fails") << "\n";
    out << "multipliers " << (id.multipliers_nonnegative ? "nonnegative" : "negative") << "\n";
    out << "psd_ldl " << PsdLine(ldl) << "\n";
    out << "psd_descartes " << PsdLine(descartes) << "\n";
    out << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? kExitOk : kExitVerification;
}

struct SweepResult {
  RateResult rate;
  double formula = 0;
  std::optional<ArmijoComparison> armijo;
};

int RunSweep(const Settings& s, std::ostream& out) {
  const auto grid = Grid(s);
  std::vector<Point> points;
  std::vector<RateProblem> problems;
  for (const auto& values : grid) {
    points.push_back(Resolve(s, values));
    problems.push_back(BuildScenario(points.back().fc, points.back().spec, points.back().metric));
  }

  std::vector<SweepResult> results(points.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < points.size(); i = next++) {
      const Point& p = points[i];
      SweepResult& r = results[i];
      r.rate = SolveRate(BuildSdp(problems[i], s.route), s.tol);
      r.formula = ToDouble(RateFormula(p.fc, p.spec));
      if (p.spec.kind == AlgorithmKind::kGdArmijo)
        r.armijo = CompareArmijo(p.spec.epsilon, p.spec.eta, *p.fc.Kappa());
    }
  };
  unsigned n = s.threads > 0 ? static_cast<unsigned>(s.threads) : std::thread::hardware_concurrency();
  n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  static const std::vector<std::string> header = {
      "index", "alg", "mu", "L", "gamma", "eps", "eta", "delta", "c1", "c2", "metric",
      "status", "t_sdp", "t_formula", "gap", "t_new", "t_ly", "t_nemi"};
  if (s.format == "csv") {
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
  } else if (s.format == "text") {
    for (size_t i = 0; i < header.size(); ++i) out << (i ? " " : "") << header[i];
    out << "\n";
  }

  int exit = kExitOk;
  for (size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    const SweepResult& r = results[i];
    const bool ok = r.rate.status == SolverStatus::kOptimal;
    if (!ok && exit == kExitOk) exit = StatusExit(r.rate.status);
    Row row;
    row.emplace_back("index", std::to_string(i));
    ParamFields(p, row);
    row.emplace_back("metric", std::string(MetricName(p.metric)));
    row.emplace_back("status", Status(r.rate.status));
    row.emplace_back("t_sdp", ok ? FormatFloat(r.rate.t) : "nan");
    row.emplace_back("t_formula", FormatFloat(r.formula));
    row.emplace_back("gap", ok ? FormatFloat(std::abs(r.rate.t - r.formula)) : "nan");
    auto opt = [](const std::optional<Rational>& v) { return v ? FormatFloat(ToDouble(*v)) : ""; };
    row.emplace_back("t_new", r.armijo ? FormatFloat(ToDouble(r.armijo->t_new)) : "");
    row.emplace_back("t_ly", r.armijo ? opt(r.armijo->t_ly) : "");
    row.emplace_back("t_nemi", r.armijo ? opt(r.armijo->t_nemi) : "");
    if (s.format == "json-lines") {
      Json j;
      for (const auto& [k, v] : row)
        if (!v.empty()) j[k] = JsonValue(v);
      out << j.dump() << "\n";
    } else {
      const char* sep = s.format == "csv" ? "," : " ";
      for (size_t c = 0; c < row.size(); ++c) out << (c ? sep : "") << row[c].second;
      out << "\n";
    }
  }
  return exit;
}

NoiseModel ParseNoise(const std::string& name) {
  if (name == "none") return NoiseModel::kNone;
  if (name == "reflection") return NoiseModel::kReflection;
  if (name == "shrink") return NoiseModel::kShrink;
  if (name == "stretch") return NoiseModel::kStretch;
  throw ConfigError("unknown noise model '" + name + "' (none, reflection, shrink, stretch)");
}

template <class Scalar>
int Simulate(const Settings& s, const Point& p, const TestFunction& f, const std::vector<Rational>& x0,
             std::ostream& out) {
  RunOptions options;
  options.steps = s.steps;
  options.noise = ParseNoise(s.noise);
  options.seed = s.seed;
  const bool exact = std::is_same_v<Scalar, Rational>;
  const double check_tol = exact ? 0.0 : 1e-9;
  const auto trace = Run<Scalar>(p.spec, p.fc, f, x0, options);
  const Rational bound = RateFormula(p.fc, p.spec);
  const BoundReport report = CheckAgainstBound(trace, bound, p.metric, check_tol);
  const RateProblem problem = BuildScenario(p.fc, p.spec, p.metric);
  const AuditReport audit = ConstraintAudit(trace, problem, check_tol);

  if (s.format == "csv") {
    ExportCsv(trace, p.metric, out);
  } else {
    Row row;
    ParamFields(p, row);
    row.emplace_back("metric", std::string(MetricName(p.metric)));
    row.emplace_back("instance", s.instance);
    row.emplace_back("dim", std::to_string(f.dim()));
    row.emplace_back("lambda", FormatFloat(ToDouble(f.lambda)));
    row.emplace_back("arithmetic", exact ? "exact" : "float");
    row.emplace_back("noise", s.noise);
    row.emplace_back("steps", std::to_string(trace.size() - 1));
    row.emplace_back("t_bound", FormatFloat(ToDouble(bound)));
    row.emplace_back("max_ratio", FormatFloat(report.max_ratio));
    row.emplace_back("excluded_steps", std::to_string(report.excluded_steps.size()));
    row.emplace_back("bound", report.passes ? "holds" : "violated");
    row.emplace_back("audit_checked", std::to_string(audit.checked));
    row.emplace_back("audit_violations", std::to_string(audit.violations));
    EmitRecord(row, s.format == "json-lines" ? "json-lines" : "text", out);
    if (s.format == "text") {
      for (const auto& e : audit.entries)
        if (e.violated)
          out << "  violated step " << e.step << " " << e.name << " " << FormatFloat(e.value) << "\n";
    }
  }
  return report.passes ? kExitOk : kExitVerification;
}

int RunSimulate(const Settings& s, std::ostream& out) {
  const Point p = Resolve(s, SinglePoint(s));
  p.spec.Validate(p.fc);
  if (s.steps < 1) throw ConfigError("--steps must be positive");
  TestFunction f;
  std::vector<Rational> x0;
  if (s.instance == "witness") {
    Witness w = TightnessWitness(p.fc, p.spec);
    f = std::move(w.function);
    x0 = std::move(w.x0);
  } else if (s.instance == "random") {
    if (s.dim < 1) throw ConfigError("--dim must be positive");
    std::mt19937_64 rng(s.seed);
    f = RandomTestFunction(p.fc, s.dim, rng);
    x0 = RandomPoint(s.dim, rng);
  } else {
    throw ConfigError("unknown instance '" + s.instance + "' (witness, random)");
  }

  bool exact = false;
  if (s.arithmetic == "exact") {
    exact = true;
  } else if (s.arithmetic == "auto") {
    // line searches with inequality stopping rules run in floating point
    exact = !(p.spec.kind == AlgorithmKind::kGdArmijo || p.spec.kind == AlgorithmKind::kGdGoldstein ||
              p.spec.kind == AlgorithmKind::kGdWolfe);
  } else if (s.arithmetic != "float") {
    throw ConfigError("unknown arithmetic '" + s.arithmetic + "' (auto, exact, float)");
  }
  return exact ? Simulate<Rational>(s, p, f, x0, out) : Simulate<double>(s, p, f, x0, out);
}

// config keys map onto the flag names
void ApplyConfig(const std::map<std::string, std::string>& config, Settings& s,
                 const std::function<bool(const std::string&)>& flag_given) {
  static const std::map<std::string, std::string> param_keys = {
      {"class.mu", "mu"},       {"class.L", "L"},         {"class.kappa", "kappa"},
      {"alg.gamma", "gamma"},   {"alg.epsilon", "eps"},   {"alg.eps", "eps"},
      {"alg.eta", "eta"},       {"alg.delta", "delta"},   {"alg.c1", "c1"},
      {"alg.c2", "c2"}};
  for (const auto& [key, value] : config) {
    if (auto it = param_keys.find(key); it != param_keys.end()) {
      if (!flag_given(it->second)) s.params[it->second] = value;
      continue;
    }
    std::string flag = key;
    std::string* text = nullptr;
    if (key == "alg.kind") flag = "alg", text = &s.alg;
    else if (key == "metric") text = &s.metric;
    else if (key == "format") text = &s.format;
    else if (key == "route") text = &s.route;
    else if (key == "noise") text = &s.noise;
    else if (key == "arithmetic") text = &s.arithmetic;
    else if (key == "instance") text = &s.instance;
    if (text) {
      if (!flag_given(flag)) *text = value;
      continue;
    }
    if (flag_given(flag)) continue;
    try {
      if (key == "seed") s.seed = std::stoull(value);
      else if (key == "tol") s.tol = std::stod(value);
      else if (key == "steps") s.steps = std::stoi(value);
      else if (key == "dim") s.dim = std::stoi(value);
      else if (key == "threads") s.threads = std::stoi(value);
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ConfigError*>(&e)) throw;
      throw ConfigError("bad value for config key '" + key + "': " + value);
    }
  }
}

}  // namespace

std::vector<Rational> ParseRange(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(Trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(Trim(current));
  if (parts.size() == 1) return {ParseRational(parts[0])};
  if (parts.size() > 3) throw std::invalid_argument("range must be start:stop[:count]");
  const Rational start = ParseRational(parts[0]);
  const Rational stop = ParseRational(parts[1]);
  int count = 10;
  if (parts.size() == 3) {
    size_t used = 0;
    count = std::stoi(parts[2], &used);
    if (used != parts[2].size() || count < 1) throw std::invalid_argument("bad range count '" + parts[2] + "'");
  }
  if (count == 1) return {start};
  std::vector<Rational> values;
  for (int i = 0; i < count; ++i) values.push_back(Rational(start + (stop - start) * Fraction(i, count - 1)));
  return values;
}

std::map<std::string, std::string> ParseConfig(std::istream& in) {
  std::map<std::string, std::string> config;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = Trim(std::string_view(trimmed).substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(number) + ": empty key or value");
    config[key] = value;
  }
  return config;
}

std::string FormatFloat(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  std::string config_path;
  CLI::App app{"Contraction factors of first-order methods via degree-1 SOS certificates"};
  app.name("sosrate");
  app.require_subcommand(1);

  std::map<std::string, std::string> param_text;
  std::map<std::string, CLI::Option*> param_opts;
  static const std::map<std::string, std::string> param_help = {
      {"mu", "strong convexity modulus (default 1)"}, {"L", "smoothness constant (default 10)"},
      {"kappa", "condition number; sets L = kappa mu"}, {"gamma", "constant step size"},
      {"eps", "Armijo/Goldstein epsilon"}, {"eta", "Armijo backtracking factor"},
      {"delta", "relative direction noise"}, {"c1", "Wolfe c1"}, {"c2", "Wolfe c2"}};
  for (const auto& name : ParamNames())
    param_opts[name] = app.add_option("--" + name, param_text[name], param_help.at(name));

  std::map<std::string, CLI::Option*> opts;
  opts["alg"] = app.add_option("--alg", s.alg, "gd-constant gd-els gd-armijo gd-goldstein gd-wolfe pgm-constant pgm-els");
  opts["metric"] = app.add_option("--metric", s.metric, "objective, distance or gradient (default per algorithm)");
  opts["seed"] = app.add_option("--seed", s.seed, "RNG seed for simulate");
  opts["out"] = app.add_option("--out", s.out, "write output here instead of stdout");
  opts["format"] = app.add_option("--format", s.format, "text, csv or json-lines")
                       ->check(CLI::IsMember({"text", "csv", "json-lines"}));
  opts["tol"] = app.add_option("--tol", s.tol, "SDP solver tolerance");
  opts["route"] = app.add_option("--route", s.route, "sos or pep (dual formulation)")
                      ->check(CLI::IsMember({"sos", "pep"}));
  opts["sdpa"] = app.add_option("--sdpa", s.sdpa, "also dump the SDP in SDPA format (rate)");
  opts["threads"] = app.add_option("--threads", s.threads, "sweep worker threads (0: all cores)");
  opts["steps"] = app.add_option("--steps", s.steps, "simulate: iterations");
  opts["dim"] = app.add_option("--dim", s.dim, "simulate: dimension of random instances");
  opts["noise"] = app.add_option("--noise", s.noise, "simulate: none, reflection, shrink, stretch");
  opts["arithmetic"] = app.add_option("--arithmetic", s.arithmetic, "simulate: auto, exact, float");
  opts["instance"] = app.add_option("--instance", s.instance, "simulate: witness or random");
  app.add_option("--config", config_path, "key = value file; flags take precedence");

  app.add_subcommand("rate", "solve the SOS (or PEP-dual) SDP for the contraction factor")->fallthrough();
  app.add_subcommand("verify", "exact check of the closed-form certificate")->fallthrough();
  app.add_subcommand("sweep", "rate over a parameter grid; ranges as start:stop[:count]")->fallthrough();
  app.add_subcommand("simulate", "run the method on a test function and check the bound")->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  s.verb = app.get_subcommands().front()->get_name();
  for (const auto& name : ParamNames())
    if (param_opts[name]->count()) s.params[name] = param_text[name];

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read config " + config_path);
      auto given = [&](const std::string& flag) {
        if (auto it = param_opts.find(flag); it != param_opts.end()) return it->second->count() > 0;
        if (auto it = opts.find(flag); it != opts.end()) return it->second->count() > 0;
        return false;
      };
      ApplyConfig(ParseConfig(in), s, given);
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!s.out.empty()) {
      file.open(s.out);
      if (!file) throw ConfigError("cannot write " + s.out);
      sink = &file;
    }
    if (s.verb == "rate") return RunRate(s, *sink);
    if (s.verb == "verify") return RunVerify(s, *sink);
    if (s.verb == "sweep") return RunSweep(s, *sink);
    return RunSimulate(s, *sink);
  } catch (const std::invalid_argument& e) {
    // ConfigError, InadmissibleParameters and malformed numbers
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace sosrate::cli
