#include "sosrate/certsearch.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sosrate {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd LinearPart(const StructuredPolynomial& p) {
  VectorXd v(p.linear().size());
  for (size_t i = 0; i < p.linear().size(); ++i) v(i) = ToDouble(p.linear()[i]);
  return v;
}

MatrixXd GramPart(const StructuredPolynomial& p) {
  const int n = p.gram().size();
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = ToDouble(p.gram()(i, j));
  }
  return m;
}

void RequireHomogeneous(const std::string& name, const StructuredPolynomial& p) {
  if (sgn(p.constant()) != 0) {
    throw std::invalid_argument("polynomial " + name + " has nonzero constant term " +
                                ToString(p.constant()));
  }
}

void RequireShape(const RateProblem& problem) {
  RequireHomogeneous("gain", problem.gain);
  RequireHomogeneous("loss", problem.loss);
  for (const auto& h : problem.inequalities) RequireHomogeneous(h.name, h.poly);
  for (const auto& v : problem.equalities) RequireHomogeneous(v.name, v.poly);
}

SdpProblem Skeleton(const RateProblem& problem) {
  RequireShape(problem);
  SdpProblem sdp;
  sdp.key = problem.key;
  sdp.scalar_symbols = problem.catalog->scalars();
  sdp.vector_symbols = problem.catalog->vectors();
  for (const auto& h : problem.inequalities) sdp.sigma_names.push_back(h.name);
  for (const auto& v : problem.equalities) sdp.theta_names.push_back(v.name);
  const int rows = static_cast<int>(sdp.scalar_symbols.size());
  sdp.eq_matrix = MatrixXd::Zero(rows, sdp.num_vars());
  sdp.eq_rhs = VectorXd::Zero(rows);
  return sdp;
}

SolverStatus MapStatus(SdpStatus status) {
  switch (status) {
    case SdpStatus::kOptimal:
      return SolverStatus::kOptimal;
    case SdpStatus::kInfeasible:
      return SolverStatus::kInfeasible;
    default:
      return SolverStatus::kNumericalTrouble;
  }
}

RateResult Solve(const SdpProblem& sdp, double tol) {
  SdpOptions options;
  options.tol = tol;
  const LmiProblem lmi = sdp.ToLmi();
  const SdpSolution sol = SolveLmi(lmi, options);

  RateResult res;
  res.status = MapStatus(sol.status);
  res.message = sol.message;
  if (sol.status == SdpStatus::kUnbounded && res.message.empty()) res.message = "unbounded";
  res.iterations = sol.iterations;
  res.pep_value = sol.dual_objective;
  const VectorXd& y = sol.y;
  res.t = y(0);
  for (int i = 0; i < sdp.num_sigma(); ++i) res.sigma.push_back(y(1 + i));
  for (int j = 0; j < sdp.num_theta(); ++j) res.theta.push_back(y(1 + sdp.num_sigma() + j));
  res.gram_block = sdp.GramAt(y);
  if (lmi.eq_matrix.rows() > 0) {
    res.max_equality_residual = (lmi.eq_matrix * y - lmi.eq_rhs).cwiseAbs().maxCoeff();
  }
  if (res.gram_block.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(res.gram_block, Eigen::EigenvaluesOnly);
    res.min_gram_eigenvalue = es.eigenvalues()(0);
  }
  if (res.status == SolverStatus::kOptimal) {
    const double scale = 1 + (res.gram_block.size() ? res.gram_block.cwiseAbs().maxCoeff() : 0.0);
    double worst_sigma = 0;
    for (double s : res.sigma) worst_sigma = std::min(worst_sigma, s);
    if (res.min_gram_eigenvalue < -100 * tol * scale || res.max_equality_residual > 100 * tol * scale ||
        worst_sigma < -100 * tol * scale) {
      res.status = SolverStatus::kNumericalTrouble;
      res.message = "certificate residuals exceed tolerance";
    }
  }
  return res;
}

}  // namespace

MatrixXd SdpProblem::GramAt(const VectorXd& y) const {
  MatrixXd m = psd_constant;
  for (int k = 0; k < num_vars(); ++k) m += y(k) * psd_coefficients[k];
  return sense == PsdSense::kPositive ? m : MatrixXd(-m);
}

LmiProblem SdpProblem::ToLmi() const {
  LmiProblem lmi;
  const int nv = num_vars();
  const double flip = sense == PsdSense::kPositive ? 1.0 : -1.0;
  lmi.objective = VectorXd::Zero(nv);
  if (objective == SdpObjective::kMinimizeRate) {
    lmi.objective(0) = 1;
  } else {
    for (int i = 0; i < num_sigma(); ++i) lmi.objective(1 + i) = 1;
  }
  const int rows = static_cast<int>(eq_matrix.rows()) + (t_fixed ? 1 : 0);
  lmi.eq_matrix = MatrixXd::Zero(rows, nv);
  lmi.eq_rhs = VectorXd::Zero(rows);
  lmi.eq_matrix.topRows(eq_matrix.rows()) = eq_matrix;
  lmi.eq_rhs.head(eq_rhs.size()) = eq_rhs;
  if (t_fixed) {
    lmi.eq_matrix(rows - 1, 0) = 1;
    lmi.eq_rhs(rows - 1) = *t_fixed;
  }
  lmi.f0 = flip * psd_constant;
  for (const MatrixXd& m : psd_coefficients) lmi.f.push_back(flip * m);
  if (t_nonnegative) lmi.nonnegative.push_back(0);
  for (int i = 0; i < num_sigma(); ++i) lmi.nonnegative.push_back(1 + i);
  return lmi;
}

std::string_view SolverStatusName(SolverStatus status) {
  switch (status) {
    case SolverStatus::kOptimal:
      return "optimal";
    case SolverStatus::kInfeasible:
      return "infeasible";
    case SolverStatus::kNumericalTrouble:
      return "numerical_trouble";
  }
  return "unknown";
}

SdpProblem BuildSosSdp(const RateProblem& problem) {
  SdpProblem sdp = Skeleton(problem);
  const int m = sdp.num_sigma();
  // t*lin(gain) - sum sigma lin(h) - sum theta lin(v) = lin(loss)
  sdp.eq_matrix.col(0) = LinearPart(problem.gain);
  for (int i = 0; i < m; ++i) sdp.eq_matrix.col(1 + i) = -LinearPart(problem.inequalities[i].poly);
  for (int j = 0; j < sdp.num_theta(); ++j) {
    sdp.eq_matrix.col(1 + m + j) = -LinearPart(problem.equalities[j].poly);
  }
  sdp.eq_rhs = LinearPart(problem.loss);

  sdp.psd_constant = -GramPart(problem.loss);
  sdp.psd_coefficients.push_back(GramPart(problem.gain));
  for (const auto& h : problem.inequalities) sdp.psd_coefficients.push_back(-GramPart(h.poly));
  for (const auto& v : problem.equalities) sdp.psd_coefficients.push_back(-GramPart(v.poly));
  sdp.sense = PsdSense::kPositive;
  return sdp;
}

SdpProblem BuildPepDual(const RateProblem& problem) {
  // Primal: maximize loss(f, G) s.t. gain(f, G) <= 1, h_i(f, G) >= 0,
  // v_j(f, G) = 0, G psd. Each constraint reads <c_i, f> + <C_i, G>.
  SdpProblem sdp = Skeleton(problem);
  const int m = sdp.num_sigma();
  // Stationarity in f: c_loss - t c_gain + sum sigma_i c_i + sum theta_j d_j = 0.
  sdp.eq_matrix.col(0) = -LinearPart(problem.gain);
  for (int i = 0; i < m; ++i) sdp.eq_matrix.col(1 + i) = LinearPart(problem.inequalities[i].poly);
  for (int j = 0; j < sdp.num_theta(); ++j) {
    sdp.eq_matrix.col(1 + m + j) = LinearPart(problem.equalities[j].poly);
  }
  sdp.eq_rhs = -LinearPart(problem.loss);

  sdp.psd_constant = GramPart(problem.loss);
  sdp.psd_coefficients.push_back(-GramPart(problem.gain));
  for (const auto& h : problem.inequalities) sdp.psd_coefficients.push_back(GramPart(h.poly));
  for (const auto& v : problem.equalities) sdp.psd_coefficients.push_back(GramPart(v.poly));
  sdp.sense = PsdSense::kNegative;
  sdp.t_nonnegative = true;
  return sdp;
}

RateResult SolveRate(const SdpProblem& sdp, double tol) {
  SdpProblem copy = sdp;
  copy.objective = SdpObjective::kMinimizeRate;
  copy.t_fixed.reset();
  return Solve(copy, tol);
}

RateResult SparsifyMultipliers(const SdpProblem& sdp, double t_fixed, double tol) {
  SdpProblem copy = sdp;
  copy.objective = SdpObjective::kMinimizeMultiplierSum;
  copy.t_fixed = t_fixed;
  return Solve(copy, tol);
}

double CertificateResidual(const RateProblem& problem, const RateResult& result) {
  VectorXd lin = result.t * LinearPart(problem.gain) - LinearPart(problem.loss);
  MatrixXd gram = result.t * GramPart(problem.gain) - GramPart(problem.loss);
  for (size_t i = 0; i < problem.inequalities.size(); ++i) {
    lin -= result.sigma[i] * LinearPart(problem.inequalities[i].poly);
    gram -= result.sigma[i] * GramPart(problem.inequalities[i].poly);
  }
  for (size_t j = 0; j < problem.equalities.size(); ++j) {
    lin -= result.theta[j] * LinearPart(problem.equalities[j].poly);
    gram -= result.theta[j] * GramPart(problem.equalities[j].poly);
  }
  gram -= result.gram_block;
  double worst = lin.size() ? lin.cwiseAbs().maxCoeff() : 0.0;
  if (gram.size()) worst = std::max(worst, gram.cwiseAbs().maxCoeff());
  return worst;
}

void WriteSdpa(const SdpProblem& sdp, std::ostream& out) { WriteSdpa(sdp.ToLmi(), out); }

}  // namespace sosrate
