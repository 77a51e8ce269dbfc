#pragma once

// Runs the catalogued algorithms on concrete members of the function class
// and checks the traces against certified bounds and scenario constraints.
// Everything is templated on the arithmetic: Rational gives exact traces on
// quadratics (every step rule here has rational steps), double is the fast path.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sosrate/rational.h"
#include "sosrate/scenarios.h"

namespace sosrate {

/// f(x) = 1/2 sum_i h_i (x_i - c_i)^2 + lambda |x|_1, with spectrum h and
/// shift c. lambda = 0 is the plain quadratic.
struct TestFunction {
  enum class Kind { kQuadratic, kComposite };

  Kind kind = Kind::kQuadratic;
  std::vector<Rational> spectrum;
  std::vector<Rational> shift;
  Rational lambda = 0;

  static TestFunction Quadratic(std::vector<Rational> spectrum, std::vector<Rational> shift);
  static TestFunction Composite(std::vector<Rational> spectrum, std::vector<Rational> shift,
                                Rational lambda);
  /// 1/2 (mu x^2 + L y^2) centred at the origin.
  static TestFunction TwoEigenvalue(const FunctionClass& function_class);

  int dim() const { return static_cast<int>(spectrum.size()); }
  /// Throws InadmissibleParameters unless the spectrum lies in [mu, L], the
  /// shift matches, lambda >= 0, and kind agrees with the class.
  void Validate(const FunctionClass& function_class) const;
  /// Componentwise soft-threshold of the shift.
  std::vector<Rational> Minimizer() const;
};

/// Starting point for which steepest descent on TwoEigenvalue zig-zags at the
/// worst-case rate: (L, mu).
std::vector<Rational> WitnessStart(const FunctionClass& function_class);

struct Witness {
  TestFunction function;
  std::vector<Rational> x0;
};

/// Instance on which the catalogued bound is attained: constant steps use the
/// 1-d quadratic whose curvature maximizes |1 - gamma h| over {mu, L}; every
/// other kind uses TwoEigenvalue from WitnessStart (tight for exact line
/// search, merely representative for the inexact rules).
Witness TightnessWitness(const FunctionClass& function_class, const AlgorithmSpec& spec);

/// Direction noise for Armijo and Goldstein: d = -g + delta' w with w a
/// random reflection of g (same norm) and delta' in [0, delta], or the
/// axis-aligned extremes d = -(1 -/+ delta) g.
enum class NoiseModel { kNone, kReflection, kShrink, kStretch };

struct RunOptions {
  int steps = 10;
  NoiseModel noise = NoiseModel::kNone;
  std::uint64_t seed = 0;
  int max_line_search_iterations = 100000;
  /// Subgradient of b chosen at x_0 (defaults to lambda * sign(x_0)).
  std::optional<std::vector<Rational>> initial_subgradient;
};

template <class Scalar>
struct RunTrace {
  std::string key;
  bool composite = false;
  std::vector<std::vector<Scalar>> x;         // x_0 .. x_N
  std::vector<Scalar> a;                      // smooth part values
  std::vector<Scalar> b;                      // nonsmooth part values (0 for plain GD)
  std::vector<std::vector<Scalar>> gradient;  // gradient of the smooth part (g_k or r_k)
  std::vector<std::vector<Scalar>> subgradient;  // s_0 as chosen, then sbar_k
  std::vector<std::vector<Scalar>> direction;    // d_k, GD only
  std::vector<Scalar> step;                      // gamma_k, N entries

  std::vector<Scalar> x_star;
  Scalar a_star{};
  Scalar b_star{};
  std::vector<Scalar> r_star;  // gradient of the smooth part at x_star
  std::vector<Scalar> s_star;  // -r_star

  int size() const { return static_cast<int>(x.size()); }
  Scalar f(int k) const { return a[k] + b[k]; }
  Scalar f_star() const { return a_star + b_star; }
};

using ExactTrace = RunTrace<Rational>;
using FloatTrace = RunTrace<double>;

/// Runs `steps` iterations. Throws InadmissibleParameters for invalid
/// parameters or a function outside the class, and std::runtime_error when a
/// line search fails to terminate within the cap.
template <class Scalar>
RunTrace<Scalar> Run(const AlgorithmSpec& spec, const FunctionClass& function_class,
                     const TestFunction& f, const std::vector<Rational>& x0, const RunOptions& options);

/// Per-step metric value m_k under `metric` (f - f_*, |x - x_*|^2, or
/// |gradient + subgradient|^2).
template <class Scalar>
Scalar MetricValue(const RunTrace<Scalar>& trace, MetricKind metric, int k);

struct BoundReport {
  std::vector<double> ratios;      // one per step; NaN where excluded
  std::vector<int> excluded_steps;  // m_k == 0: optimum reached
  double max_ratio = 0;
  bool passes = true;
  std::string note;
};

/// Checks m_{k+1} <= (t_bound + tol) m_k for every step. The comparison is
/// done in the trace's arithmetic, so tol = 0 on exact traces is a strict
/// check.
template <class Scalar>
BoundReport CheckAgainstBound(const RunTrace<Scalar>& trace, const Rational& t_bound, MetricKind metric,
                              double tol = 1e-9);

struct AuditEntry {
  int step = 0;
  std::string name;
  double value = 0;
  double magnitude = 0;  // sum of absolute term values, the tolerance scale
  bool violated = false;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  int checked = 0;
  int violations = 0;
  bool clean() const { return violations == 0; }
};

/// Evaluates every h_i and v_j of `problem` on each consecutive pair of the
/// trace together with the optimizer data. Violation: h < -tol (1 + magnitude)
/// or |v| > tol (1 + magnitude); exact when tol = 0 on an exact trace.
template <class Scalar>
AuditReport ConstraintAudit(const RunTrace<Scalar>& trace, const RateProblem& problem, double tol = 1e-9);

/// Header: step,f,dist_sq,grad_sq,gamma,ratio. Ratio is for `metric`.
template <class Scalar>
void ExportCsv(const RunTrace<Scalar>& trace, MetricKind metric, std::ostream& out);

/// Random member of the class: spectrum in [mu, L] with both endpoints
/// present (dim >= 2), small dyadic shift, and for composite classes a
/// lambda in {0, 1/4, 1/2, 1}.
TestFunction RandomTestFunction(const FunctionClass& function_class, int dim, std::mt19937_64& rng);
std::vector<Rational> RandomPoint(int dim, std::mt19937_64& rng);

}  // namespace sosrate
