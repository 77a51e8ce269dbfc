#pragma once

// Small dense semidefinite programs in linear-matrix-inequality form:
//
//   minimize    c'y
//   subject to  E y = e
//               F0 + sum_k y_k F_k  is positive semidefinite
//               y_i >= 0 for i in `nonnegative`
//
// Solved by an infeasible-start primal-dual path-following method (HKM
// direction, Mehrotra predictor-corrector). Before the iteration the problem
// is reduced: equalities are eliminated, directions that leave the objective
// unchanged while only growing the matrix are removed, and the common
// nullspace of the affine matrix map is projected out.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sosrate {

struct LmiProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_matrix;  // rows x num_vars; may have zero rows
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd f0;
  std::vector<Eigen::MatrixXd> f;  // one symmetric matrix per variable
  std::vector<int> nonnegative;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int block_dim() const { return static_cast<int>(f0.rows()); }
};

struct SdpOptions {
  double tol = 1e-8;
  int max_iterations = 150;
};

enum class SdpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalTrouble };

std::string_view StatusName(SdpStatus status);

struct SdpSolution {
  SdpStatus status = SdpStatus::kNumericalTrouble;
  Eigen::VectorXd y;
  double objective = 0;       // c'y
  double dual_objective = 0;  // lower bound from the conic dual
  /// Dual matrix over the combined block (the LMI block followed by one
  /// diagonal entry per nonnegative variable).
  Eigen::MatrixXd dual_matrix;
  int iterations = 0;
  double relative_gap = 0;
  double primal_infeasibility = 0;
  double dual_infeasibility = 0;
  std::string message;
};

SdpSolution SolveLmi(const LmiProblem& problem, const SdpOptions& options = {});

/// SDPA sparse format. Equalities are written as pairs of opposite
/// inequalities in a trailing LP block together with the sign constraints.
void WriteSdpa(const LmiProblem& problem, std::ostream& out);

}  // namespace sosrate
