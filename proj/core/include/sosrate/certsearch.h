#pragma once

// Degree-1 SOS certificate search. A certificate for contraction factor t is
//
//   t * gain - loss = sum_i sigma_i h_i + sum_j theta_j v_j + <Q_G, Gram>,
//
// with sigma >= 0 and Q_G psd. Matching scalar-symbol coefficients gives one
// linear row per scalar; the Gram parts give the matrix inequality.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sosrate/scenarios.h"
#include "sosrate/sdp_solver.h"

namespace sosrate {

enum class SdpObjective { kMinimizeRate, kMinimizeMultiplierSum };

/// Whether the affine matrix map must be positive or negative semidefinite.
enum class PsdSense { kPositive, kNegative };

/// Variables are ordered (t, sigma_1..sigma_m, theta_1..theta_m').
struct SdpProblem {
  std::string key;
  std::vector<std::string> scalar_symbols;  // one matching row each
  std::vector<std::string> vector_symbols;  // Gram block indexing
  std::vector<std::string> sigma_names;
  std::vector<std::string> theta_names;

  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd psd_constant;
  std::vector<Eigen::MatrixXd> psd_coefficients;
  PsdSense sense = PsdSense::kPositive;
  SdpObjective objective = SdpObjective::kMinimizeRate;
  bool t_nonnegative = false;
  std::optional<double> t_fixed;

  int num_sigma() const { return static_cast<int>(sigma_names.size()); }
  int num_theta() const { return static_cast<int>(theta_names.size()); }
  int num_vars() const { return 1 + num_sigma() + num_theta(); }

  /// The affine matrix map at y, oriented as the SOS Gram block Q_G (so the
  /// negative-sense form is negated back).
  Eigen::MatrixXd GramAt(const Eigen::VectorXd& y) const;
  LmiProblem ToLmi() const;
};

enum class SolverStatus { kOptimal, kInfeasible, kNumericalTrouble };

std::string_view SolverStatusName(SolverStatus status);

struct RateResult {
  SolverStatus status = SolverStatus::kNumericalTrouble;
  double t = 0;
  std::vector<double> sigma;
  std::vector<double> theta;
  Eigen::MatrixXd gram_block;
  double max_equality_residual = 0;
  double min_gram_eigenvalue = 0;
  double pep_value = 0;  // value of the conic dual (the one-step performance estimation problem)
  int iterations = 0;
  std::string message;
};

/// Throws std::invalid_argument when a polynomial has a nonzero constant term.
SdpProblem BuildSosSdp(const RateProblem& problem);

/// The dual of the one-step performance estimation problem with the initial
/// metric normalized to 1: minimize t subject to t >= 0, sigma >= 0 and
/// C_loss - t C_gain + sum sigma_i C_i + sum theta_j D_j negative semidefinite.
SdpProblem BuildPepDual(const RateProblem& problem);

RateResult SolveRate(const SdpProblem& sdp, double tol = 1e-8);

/// Minimizes sum sigma_i with t pinned to t_fixed.
RateResult SparsifyMultipliers(const SdpProblem& sdp, double t_fixed, double tol = 1e-8);

/// Largest coefficient of t*gain - loss - sum sigma h - sum theta v - <Q_G, .>,
/// evaluated in floating point from the original polynomials.
double CertificateResidual(const RateProblem& problem, const RateResult& result);

void WriteSdpa(const SdpProblem& sdp, std::ostream& out);

}  // namespace sosrate
