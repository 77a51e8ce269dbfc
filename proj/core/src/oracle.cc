#include "sosrate/oracle.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sosrate/polyform.h"

namespace sosrate {

namespace {

template <class S>
S From(const Rational& q) {
  if constexpr (std::is_same_v<S, double>) {
    return ToDouble(q);
  } else {
    return q;
  }
}

template <class S>
Rational ToExact(const S& v) {
  if constexpr (std::is_same_v<S, double>) {
    return Rational(v);  // exact binary value
  } else {
    return v;
  }
}

template <class S>
double ToFloat(const S& v) {
  if constexpr (std::is_same_v<S, double>) {
    return v;
  } else {
    return ToDouble(v);
  }
}

template <class S>
S AbsOf(const S& v) {
  return v < 0 ? S(-v) : v;
}

template <class S>
int SignOf(const S& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

template <class S>
using Vec = std::vector<S>;

template <class S>
S Dot(const Vec<S>& u, const Vec<S>& v) {
  S out = 0;
  for (size_t i = 0; i < u.size(); ++i) out += u[i] * v[i];
  return out;
}

template <class S>
Vec<S> Axpy(const Vec<S>& x, const S& alpha, const Vec<S>& d) {
  Vec<S> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + alpha * d[i];
  return out;
}

template <class S>
Vec<S> Scaled(const S& alpha, const Vec<S>& v) {
  Vec<S> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = alpha * v[i];
  return out;
}

template <class S>
Vec<S> Sub(const Vec<S>& u, const Vec<S>& v) {
  Vec<S> out(u.size());
  for (size_t i = 0; i < u.size(); ++i) out[i] = u[i] - v[i];
  return out;
}

template <class S>
S SoftThreshold(const S& z, const S& tau) {
  if (z > tau) return z - tau;
  if (z < -tau) return z + tau;
  return S(0);
}

template <class S>
struct Instance {
  Vec<S> h;
  Vec<S> c;
  S lambda = 0;

  explicit Instance(const TestFunction& f) : lambda(From<S>(f.lambda)) {
    for (const auto& v : f.spectrum) h.push_back(From<S>(v));
    for (const auto& v : f.shift) c.push_back(From<S>(v));
  }

  int dim() const { return static_cast<int>(h.size()); }

  S Smooth(const Vec<S>& x) const {
    S out = 0;
    for (int i = 0; i < dim(); ++i) {
      const S e = x[i] - c[i];
      out += h[i] * e * e;
    }
    return out / 2;
  }

  S Nonsmooth(const Vec<S>& x) const {
    S out = 0;
    for (const S& v : x) out += AbsOf(v);
    return lambda * out;
  }

  Vec<S> Gradient(const Vec<S>& x) const {
    Vec<S> g(dim());
    for (int i = 0; i < dim(); ++i) g[i] = h[i] * (x[i] - c[i]);
    return g;
  }

  Vec<S> Prox(const Vec<S>& z, const S& gamma) const {
    Vec<S> out(z.size());
    for (size_t i = 0; i < z.size(); ++i) out[i] = SoftThreshold(z[i], S(gamma * lambda));
    return out;
  }

  // Prox-gradient path x(gamma) = prox_{gamma b}(x - gamma r).
  Vec<S> Path(const Vec<S>& x, const Vec<S>& r, const S& gamma) const {
    return Prox(Axpy(x, S(-gamma), r), gamma);
  }
};

// The prox-gradient path of an l1 term is piecewise linear in gamma, so the
// objective along it is piecewise quadratic: minimize exactly piece by piece.
template <class S>
S ExactProxLineSearch(const Instance<S>& inst, const Vec<S>& x, const Vec<S>& r) {
  const int n = inst.dim();
  std::vector<S> breaks;
  for (int i = 0; i < n; ++i) {
    for (const S& q : {S(r[i] + inst.lambda), S(r[i] - inst.lambda)}) {
      if (q == 0) continue;
      const S g = x[i] / q;
      if (g > 0) breaks.push_back(g);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto objective = [&](const S& gamma) -> S {
    const Vec<S> y = inst.Path(x, r, gamma);
    return inst.Smooth(y) + inst.Nonsmooth(y);
  };

  S best_gamma = 0;
  S best_value = objective(S(0));
  for (size_t piece = 0; piece <= breaks.size(); ++piece) {
    const S lo = piece == 0 ? S(0) : breaks[piece - 1];
    const bool bounded = piece < breaks.size();
    const S hi = bounded ? breaks[piece] : S(0);
    const S probe = bounded ? S((lo + hi) / 2) : S(lo + 1);
    S quad = 0;
    S lin = 0;
    for (int i = 0; i < n; ++i) {
      const S z = x[i] - probe * r[i];
      const S tau = probe * inst.lambda;
      int regime = 0;
      if (z > tau) regime = 1;
      if (z < -tau) regime = -1;
      if (regime == 0) continue;
      // x_i(gamma) = x_i + beta gamma on this piece
      const S beta = -(r[i] + regime * inst.lambda);
      quad += inst.h[i] * beta * beta / 2;
      lin += inst.h[i] * beta * (x[i] - inst.c[i]) + inst.lambda * regime * beta;
    }
    S candidate = lo;
    if (quad > 0) {
      candidate = -lin / (2 * quad);
      if (candidate < lo) candidate = lo;
      if (bounded && candidate > hi) candidate = hi;
    } else if (lin < 0 && bounded) {
      candidate = hi;
    }
    const S value = objective(candidate);
    if (value < best_value) {
      best_value = value;
      best_gamma = candidate;
    }
  }
  return best_gamma;
}

template <class S>
class Runner {
 public:
  Runner(const AlgorithmSpec& spec, const FunctionClass& fc, const TestFunction& f, const RunOptions& options)
      : spec_(spec), fc_(fc), inst_(f), options_(options), rng_(options.seed) {}

  RunTrace<S> Execute(const std::vector<Rational>& x0) {
    RunTrace<S> trace;
    trace.key = std::string(ScenarioKey(spec_.kind));
    trace.composite = spec_.IsProximal();
    Vec<S> x;
    for (const auto& v : x0) x.push_back(From<S>(v));

    const auto star = MinimizerOf();
    trace.x_star = star;
    trace.a_star = inst_.Smooth(star);
    trace.b_star = inst_.Nonsmooth(star);
    trace.r_star = inst_.Gradient(star);
    trace.s_star = Scaled(S(-1), trace.r_star);

    Record(trace, x, InitialSubgradient(x));
    for (int k = 0; k < options_.steps; ++k) {
      const Vec<S>& xk = trace.x.back();
      const Vec<S>& gk = trace.gradient.back();
      if (trace.composite) {
        S gamma = spec_.kind == AlgorithmKind::kPgmConstant ? From<S>(spec_.gamma)
                                                            : ExactProxLineSearch(inst_, xk, gk);
        Vec<S> next = inst_.Path(xk, gk, gamma);
        Vec<S> sbar(xk.size());
        for (size_t i = 0; i < xk.size(); ++i) {
          sbar[i] = gamma > 0 ? S((xk[i] - next[i]) / gamma - gk[i]) : S(-gk[i]);
        }
        Vec<S> d(xk.size());
        for (size_t i = 0; i < xk.size(); ++i) d[i] = -(gk[i] + sbar[i]);
        trace.direction.push_back(d);
        trace.step.push_back(gamma);
        Record(trace, next, sbar);
      } else {
        const Vec<S> d = Direction(gk);
        const S gamma = StepSize(xk, gk, d);
        trace.direction.push_back(d);
        trace.step.push_back(gamma);
        Record(trace, Axpy(xk, gamma, d), Vec<S>(xk.size(), S(0)));
      }
    }
    return trace;
  }

 private:
  Vec<S> MinimizerOf() const {
    Vec<S> out(inst_.dim());
    for (int i = 0; i < inst_.dim(); ++i) out[i] = SoftThreshold(inst_.c[i], S(inst_.lambda / inst_.h[i]));
    return out;
  }

  Vec<S> InitialSubgradient(const Vec<S>& x) const {
    Vec<S> s(x.size(), S(0));
    if (!spec_.IsProximal()) return s;
    if (options_.initial_subgradient) {
      const auto& given = *options_.initial_subgradient;
      if (given.size() != x.size()) throw std::invalid_argument("initial subgradient has the wrong dimension");
      for (size_t i = 0; i < x.size(); ++i) {
        s[i] = From<S>(given[i]);
        const bool ok = x[i] == 0 ? AbsOf(s[i]) <= inst_.lambda : s[i] == SignOf(x[i]) * inst_.lambda;
        if (!ok) throw std::invalid_argument("initial subgradient is not in the subdifferential at x_0");
      }
      return s;
    }
    for (size_t i = 0; i < x.size(); ++i) s[i] = SignOf(x[i]) * inst_.lambda;
    return s;
  }

  void Record(RunTrace<S>& trace, Vec<S> x, Vec<S> sub) const {
    trace.a.push_back(inst_.Smooth(x));
    trace.b.push_back(inst_.Nonsmooth(x));
    trace.gradient.push_back(inst_.Gradient(x));
    trace.subgradient.push_back(std::move(sub));
    trace.x.push_back(std::move(x));
  }

  Vec<S> Direction(const Vec<S>& g) {
    const Vec<S> minus_g = Scaled(S(-1), g);
    if (!spec_.IsNoisy() || options_.noise == NoiseModel::kNone) return minus_g;
    const S delta = From<S>(spec_.delta);
    switch (options_.noise) {
      case NoiseModel::kShrink:
        return Scaled(S(delta - 1), g);
      case NoiseModel::kStretch:
        return Scaled(S(-1 - delta), g);
      case NoiseModel::kReflection: {
        // Householder reflection keeps |w| = |g|, so |d + g| = delta' |g|.
        std::uniform_int_distribution<int> entry(-8, 8);
        Vec<S> v(g.size());
        S vv = 0;
        while (vv == 0) {
          for (auto& e : v) e = S(entry(rng_));
          vv = Dot(v, v);
        }
        const S coef = 2 * Dot(v, g) / vv;
        const Vec<S> w = Axpy(g, S(-coef), v);
        const S scale = delta * S(std::uniform_int_distribution<int>(0, 64)(rng_)) / 64;
        return Axpy(minus_g, scale, w);
      }
      case NoiseModel::kNone:
        break;
    }
    return minus_g;
  }

  [[noreturn]] void LineSearchFailure(const char* rule, const S& gamma) const {
    std::ostringstream msg;
    msg << rule << " line search did not terminate within " << options_.max_line_search_iterations
        << " trials (last gamma " << ToFloat(gamma) << ")";
    throw std::runtime_error(msg.str());
  }

  S StepSize(const Vec<S>& x, const Vec<S>& g, const Vec<S>& d) {
    const S fx = inst_.Smooth(x);
    const S dd = Dot(d, d);
    auto phi = [&](const S& gamma) -> S { return inst_.Smooth(Axpy(x, gamma, d)) - fx; };
    const S L = From<S>(fc_.L);
    switch (spec_.kind) {
      case AlgorithmKind::kGdConstant:
        return From<S>(spec_.gamma);
      case AlgorithmKind::kGdExactLineSearch: {
        S curv = 0;
        for (int i = 0; i < inst_.dim(); ++i) curv += inst_.h[i] * g[i] * g[i];
        return curv > 0 ? S(Dot(g, g) / curv) : S(0);
      }
      case AlgorithmKind::kGdArmijo: {
        const S eps = From<S>(spec_.epsilon);
        const S eta = From<S>(spec_.eta);
        S gamma = S(10) / L;
        for (int it = 0; it < options_.max_line_search_iterations; ++it) {
          if (phi(gamma) <= -eps * gamma * dd) return gamma;
          gamma /= eta;
        }
        LineSearchFailure("Armijo", gamma);
      }
      case AlgorithmKind::kGdGoldstein: {
        const S eps = From<S>(spec_.epsilon);
        return Bracket("Goldstein", L, [&](const S& gamma) {
          const S p = phi(gamma);
          if (p > -eps * gamma * dd) return 1;             // too long
          if (p < -(1 - eps) * gamma * dd) return -1;      // too short
          return 0;
        });
      }
      case AlgorithmKind::kGdWolfe: {
        const S c1 = From<S>(spec_.c1);
        const S c2 = From<S>(spec_.c2);
        const S slope = Dot(d, g);
        return Bracket("Wolfe", L, [&](const S& gamma) {
          if (phi(gamma) > c1 * gamma * slope) return 1;
          if (Dot(inst_.Gradient(Axpy(x, gamma, d)), d) < c2 * slope) return -1;
          return 0;
        });
      }
      default:
        break;
    }
    throw std::logic_error("not a gradient-descent kind");
  }

  // verdict(gamma): 1 step too long, -1 too short, 0 acceptable.
  template <class Verdict>
  S Bracket(const char* rule, const S& L, Verdict verdict) const {
    S lo = 0;
    S hi = 0;
    bool have_hi = false;
    S gamma = S(1) / L;
    for (int it = 0; it < options_.max_line_search_iterations; ++it) {
      const int v = verdict(gamma);
      if (v == 0) return gamma;
      if (v > 0) {
        hi = gamma;
        have_hi = true;
      } else {
        lo = gamma;
      }
      gamma = have_hi ? S((lo + hi) / 2) : S(2 * gamma);
    }
    LineSearchFailure(rule, gamma);
  }

  const AlgorithmSpec& spec_;
  const FunctionClass& fc_;
  Instance<S> inst_;
  const RunOptions& options_;
  std::mt19937_64 rng_;
};

template <class S>
Assignment AssignmentAt(const RunTrace<S>& trace, int k) {
  Assignment asg;
  auto vec = [](const Vec<S>& v) {
    std::vector<Rational> out;
    for (const S& e : v) out.push_back(ToExact(e));
    return out;
  };
  asg.vectors["x_star"] = vec(trace.x_star);
  asg.vectors["x_k"] = vec(trace.x[k]);
  asg.vectors["x_k1"] = vec(trace.x[k + 1]);
  if (trace.composite) {
    asg.scalars["a_star"] = ToExact(trace.a_star);
    asg.scalars["a_k"] = ToExact(trace.a[k]);
    asg.scalars["a_k1"] = ToExact(trace.a[k + 1]);
    asg.scalars["b_star"] = ToExact(trace.b_star);
    asg.scalars["b_k"] = ToExact(trace.b[k]);
    asg.scalars["b_k1"] = ToExact(trace.b[k + 1]);
    asg.vectors["r_star"] = vec(trace.r_star);
    asg.vectors["r_k"] = vec(trace.gradient[k]);
    asg.vectors["r_k1"] = vec(trace.gradient[k + 1]);
    asg.vectors["s_star"] = vec(trace.s_star);
    asg.vectors["s_k"] = vec(trace.subgradient[k]);
    asg.vectors["sbar_k1"] = vec(trace.subgradient[k + 1]);
  } else {
    asg.scalars["f_star"] = ToExact(trace.a_star);
    asg.scalars["f_k"] = ToExact(trace.a[k]);
    asg.scalars["f_k1"] = ToExact(trace.a[k + 1]);
    asg.vectors["g_star"] = vec(trace.r_star);
    asg.vectors["g_k"] = vec(trace.gradient[k]);
    asg.vectors["g_k1"] = vec(trace.gradient[k + 1]);
  }
  return asg;
}

Rational InnerOf(const std::vector<Rational>& u, const std::vector<Rational>& v) {
  Rational out = 0;
  for (size_t i = 0; i < u.size(); ++i) out += u[i] * v[i];
  return out;
}

// Sum of absolute values of the individual terms of p at the assignment.
double Magnitude(const StructuredPolynomial& p, const Assignment& asg) {
  const auto& cat = *p.catalog();
  double out = std::abs(ToDouble(p.constant()));
  for (int i = 0; i < cat.num_scalars(); ++i) {
    out += std::abs(ToDouble(p.linear()[i] * asg.scalars.find(cat.scalars()[i])->second));
  }
  for (int i = 0; i < cat.num_vectors(); ++i) {
    const auto& u = asg.vectors.find(cat.vectors()[i])->second;
    for (int j = 0; j < cat.num_vectors(); ++j) {
      if (sgn(p.gram()(i, j)) == 0) continue;
      const auto& v = asg.vectors.find(cat.vectors()[j])->second;
      out += std::abs(ToDouble(p.gram()(i, j) * InnerOf(u, v)));
    }
  }
  return out;
}

}  // namespace

TestFunction TestFunction::Quadratic(std::vector<Rational> spectrum, std::vector<Rational> shift) {
  TestFunction f;
  f.kind = Kind::kQuadratic;
  f.spectrum = std::move(spectrum);
  f.shift = std::move(shift);
  return f;
}

TestFunction TestFunction::Composite(std::vector<Rational> spectrum, std::vector<Rational> shift,
                                     Rational lambda) {
  TestFunction f;
  f.kind = Kind::kComposite;
  f.spectrum = std::move(spectrum);
  f.shift = std::move(shift);
  f.lambda = std::move(lambda);
  return f;
}

TestFunction TestFunction::TwoEigenvalue(const FunctionClass& fc) {
  if (fc.composite) return Composite({fc.mu, fc.L}, {0, 0}, 0);
  return Quadratic({fc.mu, fc.L}, {0, 0});
}

void TestFunction::Validate(const FunctionClass& fc) const {
  fc.Validate();
  if (spectrum.empty()) throw InadmissibleParameters("test function needs at least one coordinate");
  if (shift.size() != spectrum.size()) throw InadmissibleParameters("shift and spectrum dimensions differ");
  for (const auto& h : spectrum) {
    if (h < fc.mu || h > fc.L) {
      throw InadmissibleParameters("curvature " + ToString(h) + " outside [mu, L] = [" + ToString(fc.mu) +
                                   ", " + ToString(fc.L) + "]");
    }
  }
  if (sgn(lambda) < 0) throw InadmissibleParameters("l1 weight lambda must be >= 0");
  if (kind == Kind::kQuadratic && sgn(lambda) != 0) {
    throw InadmissibleParameters("a plain quadratic has lambda = 0");
  }
  if ((kind == Kind::kComposite) != fc.composite) {
    throw InadmissibleParameters("test function kind does not match the function class");
  }
}

std::vector<Rational> TestFunction::Minimizer() const {
  std::vector<Rational> out;
  for (size_t i = 0; i < spectrum.size(); ++i) {
    out.push_back(SoftThreshold<Rational>(shift[i], lambda / spectrum[i]));
  }
  return out;
}

std::vector<Rational> WitnessStart(const FunctionClass& fc) { return {fc.L, fc.mu}; }

Witness TightnessWitness(const FunctionClass& fc, const AlgorithmSpec& spec) {
  spec.Validate(fc);
  if (spec.kind == AlgorithmKind::kGdConstant || spec.kind == AlgorithmKind::kPgmConstant) {
    const Rational h = Abs(1 - spec.gamma * fc.mu) >= Abs(1 - spec.gamma * fc.L) ? fc.mu : fc.L;
    TestFunction f = fc.composite ? TestFunction::Composite({h}, {0}, 0) : TestFunction::Quadratic({h}, {0});
    return {std::move(f), {1}};
  }
  return {TestFunction::TwoEigenvalue(fc), WitnessStart(fc)};
}

template <class Scalar>
RunTrace<Scalar> Run(const AlgorithmSpec& spec, const FunctionClass& fc, const TestFunction& f,
                     const std::vector<Rational>& x0, const RunOptions& options) {
  spec.Validate(fc);
  f.Validate(fc);
  if (static_cast<int>(x0.size()) != f.dim()) throw InadmissibleParameters("x0 dimension does not match f");
  if (options.steps < 1) throw InadmissibleParameters("steps must be >= 1");
  Runner<Scalar> runner(spec, fc, f, options);
  return runner.Execute(x0);
}

template <class Scalar>
Scalar MetricValue(const RunTrace<Scalar>& trace, MetricKind metric, int k) {
  switch (metric) {
    case MetricKind::kObjectiveAccuracy:
      return trace.f(k) - trace.f_star();
    case MetricKind::kDistanceSquared: {
      const auto e = Sub(trace.x[k], trace.x_star);
      return Dot(e, e);
    }
    case MetricKind::kGradientNormSquared: {
      Vec<Scalar> v(trace.gradient[k].size());
      for (size_t i = 0; i < v.size(); ++i) v[i] = trace.gradient[k][i] + trace.subgradient[k][i];
      return Dot(v, v);
    }
  }
  return Scalar(0);
}

template <class Scalar>
BoundReport CheckAgainstBound(const RunTrace<Scalar>& trace, const Rational& t_bound, MetricKind metric,
                              double tol) {
  BoundReport report;
  const Scalar limit = From<Scalar>(Rational(t_bound + Rational(tol)));
  for (int k = 0; k + 1 < trace.size(); ++k) {
    const Scalar m0 = MetricValue(trace, metric, k);
    const Scalar m1 = MetricValue(trace, metric, k + 1);
    if (m0 <= 0) {
      report.excluded_steps.push_back(k);
      report.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double ratio = ToFloat(Scalar(m1 / m0));
    report.ratios.push_back(ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (m1 > limit * m0) report.passes = false;
  }
  if (!report.excluded_steps.empty()) {
    report.note = std::to_string(report.excluded_steps.size()) + " step(s) at the optimum excluded";
  }
  return report;
}

template <class Scalar>
AuditReport ConstraintAudit(const RunTrace<Scalar>& trace, const RateProblem& problem, double tol) {
  if (trace.key != problem.key) {
    throw std::invalid_argument("trace of " + trace.key + " audited against scenario " + problem.key);
  }
  AuditReport report;
  for (int k = 0; k + 1 < trace.size(); ++k) {
    const Assignment asg = AssignmentAt(trace, k);
    auto check = [&](const NamedPolynomial& c, bool equality) {
      const Rational value = Evaluate(c.poly, asg);
      AuditEntry e;
      e.step = k;
      e.name = c.name;
      e.value = ToDouble(value);
      e.magnitude = Magnitude(c.poly, asg);
      const double slack = tol * (1 + e.magnitude);
      if (equality) {
        e.violated = tol == 0 ? sgn(value) != 0 : std::abs(e.value) > slack;
      } else {
        e.violated = tol == 0 ? sgn(value) < 0 : e.value < -slack;
      }
      ++report.checked;
      if (e.violated) ++report.violations;
      report.entries.push_back(std::move(e));
    };
    for (const auto& h : problem.inequalities) check(h, false);
    for (const auto& v : problem.equalities) check(v, true);
  }
  return report;
}

template <class Scalar>
void ExportCsv(const RunTrace<Scalar>& trace, MetricKind metric, std::ostream& out) {
  const auto old_precision = out.precision(9);
  out << "step,f,dist_sq,grad_sq,gamma,ratio\n";
  for (int k = 0; k < trace.size(); ++k) {
    out << k << ',' << ToFloat(trace.f(k)) << ','
        << ToFloat(MetricValue(trace, MetricKind::kDistanceSquared, k)) << ','
        << ToFloat(MetricValue(trace, MetricKind::kGradientNormSquared, k)) << ',';
    if (k < static_cast<int>(trace.step.size())) out << ToFloat(trace.step[k]);
    out << ',';
    if (k > 0) {
      const Scalar m0 = MetricValue(trace, metric, k - 1);
      if (m0 > 0) out << ToFloat(Scalar(MetricValue(trace, metric, k) / m0));
    }
    out << '\n';
  }
  out.precision(old_precision);
}

TestFunction RandomTestFunction(const FunctionClass& fc, int dim, std::mt19937_64& rng) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  std::uniform_int_distribution<int> frac(0, 16);
  std::vector<Rational> spectrum;
  for (int i = 0; i < dim; ++i) {
    Rational h = fc.mu + (fc.L - fc.mu) * Fraction(frac(rng), 16);
    if (dim >= 2 && i == 0) h = fc.mu;
    if (dim >= 2 && i == dim - 1) h = fc.L;
    h.canonicalize();
    spectrum.push_back(h);
  }
  std::uniform_int_distribution<int> shift_num(-8, 8);
  std::vector<Rational> shift;
  for (int i = 0; i < dim; ++i) {
    Rational s = Fraction(shift_num(rng), 4);
    s.canonicalize();
    shift.push_back(s);
  }
  if (!fc.composite) return TestFunction::Quadratic(std::move(spectrum), std::move(shift));
  static const Rational kLambdas[] = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)};
  const Rational lambda = kLambdas[std::uniform_int_distribution<int>(0, 3)(rng)];
  return TestFunction::Composite(std::move(spectrum), std::move(shift), lambda);
}

std::vector<Rational> RandomPoint(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-16, 16);
  std::vector<Rational> out;
  for (int i = 0; i < dim; ++i) {
    Rational v = Fraction(num(rng), 4);
    v.canonicalize();
    out.push_back(v);
  }
  return out;
}

#define SOSRATE_INSTANTIATE(S)                                                                          \
  template RunTrace<S> Run<S>(const AlgorithmSpec&, const FunctionClass&, const TestFunction&,          \
                              const std::vector<Rational>&, const RunOptions&);                         \
  template S MetricValue<S>(const RunTrace<S>&, MetricKind, int);                                       \
  template BoundReport CheckAgainstBound<S>(const RunTrace<S>&, const Rational&, MetricKind, double);   \
  template AuditReport ConstraintAudit<S>(const RunTrace<S>&, const RateProblem&, double);              \
  template void ExportCsv<S>(const RunTrace<S>&, MetricKind, std::ostream&);

SOSRATE_INSTANTIATE(double)
SOSRATE_INSTANTIATE(Rational)

#undef SOSRATE_INSTANTIATE

}  // namespace sosrate
