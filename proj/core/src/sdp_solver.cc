#include "sosrate/sdp_solver.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace sosrate {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRankTol = 1e-10;

MatrixXd Sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double MaxAbs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double MinEigenvalue(const MatrixXd& m) {
  if (m.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Sym(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Largest alpha with X + alpha * d still positive semidefinite, given the
// Cholesky factor of a positive definite X.
double MaxStep(const Eigen::LLT<MatrixXd>& chol, const MatrixXd& d) {
  const MatrixXd half = chol.matrixL().solve(d);
  const MatrixXd scaled = chol.matrixL().solve(half.transpose());
  const double lmin = MinEigenvalue(scaled);
  return lmin >= 0 ? kInf : -1.0 / lmin;
}

// Orthonormal basis of the column space of `m` (columns with singular value
// above the relative rank tolerance).
MatrixXd RangeBasis(const MatrixXd& m) {
  if (m.cols() == 0) return MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullU);
  const VectorXd& sv = svd.singularValues();
  const double cutoff = kRankTol * std::max(sv.size() ? sv(0) : 0.0, 1e-300);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

// LMI c0 + sum_j u_j a_j >= 0, minimize cost'u (after every reduction).
struct ReducedLmi {
  MatrixXd c0;
  std::vector<MatrixXd> a;
  VectorXd cost;
};

struct Drop {
  VectorXd direction;  // in w-space, oriented so the matrix grows
  MatrixXd basis;      // face basis (full block) when the direction was removed
};

struct Reduction {
  VectorXd y0;
  MatrixXd null;  // y = y0 + null * w
  double constant = 0;
  MatrixXd g0;    // full combined block at y0
  std::vector<MatrixXd> g;  // full combined block per w coordinate
  MatrixXd basis;  // full block dim x reduced dim
  MatrixXd k;      // w = k * u
  std::vector<Drop> drops;
};

MatrixXd Restrict(const MatrixXd& m, const MatrixXd& basis) { return basis.transpose() * m * basis; }

MatrixXd CombinedAt(const Reduction& red, const VectorXd& w) {
  MatrixXd m = red.g0;
  for (int j = 0; j < w.size(); ++j) {
    if (w(j) != 0) m += w(j) * red.g[j];
  }
  return m;
}

MatrixXd MapW(const Reduction& red, const VectorXd& w) {
  MatrixXd m = MatrixXd::Zero(red.g0.rows(), red.g0.cols());
  for (int j = 0; j < w.size(); ++j) {
    if (w(j) != 0) m += w(j) * red.g[j];
  }
  return m;
}

ReducedLmi Current(const Reduction& red, const VectorXd& full_cost) {
  ReducedLmi out;
  out.c0 = Restrict(red.g0, red.basis);
  for (int j = 0; j < red.k.cols(); ++j) {
    out.a.push_back(Restrict(MapW(red, red.k.col(j)), red.basis));
  }
  out.cost = red.k.transpose() * full_cost;
  return out;
}

// Projects out the common nullspace of every matrix of the affine map.
bool RemoveCommonNullspace(Reduction& red, const VectorXd& full_cost) {
  const ReducedLmi cur = Current(red, full_cost);
  const int dim = static_cast<int>(cur.c0.rows());
  if (dim == 0) return false;
  MatrixXd stacked(dim, dim * (1 + static_cast<int>(cur.a.size())));
  stacked.leftCols(dim) = cur.c0;
  for (size_t j = 0; j < cur.a.size(); ++j) stacked.middleCols(dim * (j + 1), dim) = cur.a[j];
  const MatrixXd range = RangeBasis(stacked);
  if (range.cols() == dim) return false;
  red.basis = red.basis * range;
  return true;
}

// Removes one free direction with zero cost whose matrix is semidefinite: the
// dual matrix must vanish on its range, so the face shrinks to its kernel.
bool RemoveRecessionDirection(Reduction& red, const VectorXd& full_cost) {
  const ReducedLmi cur = Current(red, full_cost);
  const double cost_scale = 1 + (cur.cost.size() ? cur.cost.cwiseAbs().maxCoeff() : 0.0);
  for (int j = 0; j < static_cast<int>(cur.a.size()); ++j) {
    if (std::abs(cur.cost(j)) > 1e-12 * cost_scale) continue;
    const double scale = MaxAbs(cur.a[j]);
    if (scale == 0) continue;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Sym(cur.a[j]));
    const VectorXd& ev = es.eigenvalues();
    const double tol = kRankTol * std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    double sign = 0;
    if (ev(0) >= -tol) sign = 1;
    else if (ev(ev.size() - 1) <= tol) sign = -1;
    if (sign == 0) continue;
    std::vector<int> kernel;
    for (int i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i)) <= tol) kernel.push_back(i);
    }
    MatrixXd w(ev.size(), kernel.size());
    for (size_t i = 0; i < kernel.size(); ++i) w.col(i) = es.eigenvectors().col(kernel[i]);
    red.drops.push_back({sign * red.k.col(j), red.basis});
    red.basis = red.basis * w;
    MatrixXd k(red.k.rows(), red.k.cols() - 1);
    k << red.k.leftCols(j), red.k.rightCols(red.k.cols() - j - 1);
    red.k = k;
    return true;
  }
  return false;
}

struct IpmResult {
  SdpStatus status = SdpStatus::kNumericalTrouble;
  VectorXd u;
  MatrixXd x;
  double pobj = 0;
  double dobj = 0;
  int iterations = 0;
  double relgap = 0, pinf = 0, dinf = 0;
  std::string message;
};

// Standard pair: (P) min <C,X> s.t. <A_i,X> = b_i, X psd;
//                (D) max b'u  s.t. C - sum u_i A_i = S psd.
IpmResult Ipm(const MatrixXd& c, const std::vector<MatrixXd>& a, const VectorXd& b,
              const SdpOptions& options) {
  const int n = static_cast<int>(c.rows());
  const int m = static_cast<int>(a.size());
  const double norm_b = b.norm();
  const double norm_c = c.norm();

  auto apply_a = [&](const MatrixXd& x) {
    VectorXd out(m);
    for (int i = 0; i < m; ++i) out(i) = a[i].cwiseProduct(x).sum();
    return out;
  };
  auto apply_at = [&](const VectorXd& u) {
    MatrixXd out = MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i) out += u(i) * a[i];
    return out;
  };

  double max_a = 0;
  double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
  for (int i = 0; i < m; ++i) {
    const double na = a[i].norm();
    max_a = std::max(max_a, na);
    xi = std::max(xi, n * (1 + std::abs(b(i))) / (1 + na));
  }
  const double zeta = std::max({10.0, std::sqrt(static_cast<double>(n)), max_a, norm_c});

  MatrixXd x = xi * MatrixXd::Identity(n, n);
  MatrixXd s = zeta * MatrixXd::Identity(n, n);
  VectorXd u = VectorXd::Zero(m);

  IpmResult res;
  IpmResult best;
  double best_score = kInf;
  double anchor = kInf;
  int since_best = 0;  // iterations without halving the score
  int stalls = 0;
  // Ends the run with the best iterate seen; accepted when within 100 tol.
  auto finish = [&](const char* failure) {
    const double score = std::max({best.relgap, best.pinf, best.dinf});
    const bool near = score <= 100 * options.tol;
    best.status = near ? SdpStatus::kOptimal : SdpStatus::kNumericalTrouble;
    best.message = near ? "reduced accuracy" : failure;
    best.iterations = res.iterations;
    return best;
  };
  for (int it = 0;; ++it) {
    const VectorXd rp = b - apply_a(x);
    const MatrixXd rd = c - s - apply_at(u);
    res.pobj = c.cwiseProduct(x).sum();
    res.dobj = b.dot(u);
    const double denom = 1 + std::abs(res.pobj) + std::abs(res.dobj);
    res.relgap = std::max(std::abs(res.pobj - res.dobj), x.cwiseProduct(s).sum()) / denom;
    res.pinf = rp.norm() / (1 + norm_b);
    res.dinf = rd.norm() / (1 + norm_c);
    res.iterations = it;
    res.u = u;
    res.x = x;
    const double score = std::max({res.relgap, res.pinf, res.dinf});
    if (score < 0.5 * anchor) {
      anchor = score;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (score < best_score) {
      best = res;
      best_score = score;
    }

    if (score <= options.tol) {
      res.status = SdpStatus::kOptimal;
      return res;
    }
    if (res.pobj < 0) {
      const double ratio = apply_a(x).norm() / -res.pobj;
      if (ratio <= 1e-8 * std::max(1.0, norm_b) && x.trace() > 1e6) {
        res.status = SdpStatus::kInfeasible;
        res.message = "dual ray: matrix inequality has no solution";
        return res;
      }
    }
    if (res.dobj > 0) {
      const double ratio = (norm_c + rd.norm()) / res.dobj;
      if (ratio <= 1e-8 && u.norm() > 1e6) {
        res.status = SdpStatus::kUnbounded;
        res.message = "primal ray: objective unbounded below";
        return res;
      }
    }
    if (it >= options.max_iterations || stalls >= 3 || since_best >= 10) return finish("no convergence");

    Eigen::LLT<MatrixXd> chol_x(x), chol_s(s);
    if (chol_x.info() != Eigen::Success || chol_s.info() != Eigen::Success) {
      return finish("iterate lost definiteness");
    }
    const MatrixXd s_inv = chol_s.solve(MatrixXd::Identity(n, n));

    MatrixXd schur(m, m);
    for (int j = 0; j < m; ++j) {
      const MatrixXd p = x * a[j] * s_inv;
      for (int i = 0; i < m; ++i) schur(i, j) = a[i].cwiseProduct(p).sum();
    }
    schur = Sym(schur);
    Eigen::LDLT<MatrixXd> schur_fact(schur);
    if (schur_fact.info() != Eigen::Success) {
      return finish("singular Schur complement");
    }
    const VectorXd xrd = apply_a(x * rd * s_inv);
    const double mu = x.cwiseProduct(s).sum() / n;

    auto direction = [&](double sigma, const MatrixXd& corr, VectorXd& du, MatrixXd& dx,
                         MatrixXd& ds) {
      const MatrixXd target = sigma * mu * s_inv - x - corr;
      const VectorXd rhs = rp - apply_a(target) + xrd;
      du = schur_fact.solve(rhs);
      ds = rd - apply_at(du);
      dx = Sym(target) - Sym(x * ds * s_inv);
    };

    VectorXd du;
    MatrixXd dx, ds;
    direction(0.0, MatrixXd::Zero(n, n), du, dx, ds);
    double ap = std::min(1.0, MaxStep(chol_x, dx));
    double ad = std::min(1.0, MaxStep(chol_s, ds));
    const double mu_aff = (x + ap * dx).cwiseProduct(s + ad * ds).sum() / n;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3), 0.0, 1.0);
    const MatrixXd corr = dx * ds * s_inv;
    direction(sigma, corr, du, dx, ds);

    const double tau = 0.85;
    ap = std::min(1.0, tau * MaxStep(chol_x, dx));
    ad = std::min(1.0, tau * MaxStep(chol_s, ds));
    if (!std::isfinite(ap) || !std::isfinite(ad) || !du.allFinite()) {
      return finish("non-finite step");
    }
    stalls = (ap < 1e-9 && ad < 1e-9) ? stalls + 1 : 0;
    x = Sym(x + ap * dx);
    s = Sym(s + ad * ds);
    u += ad * du;
  }
}

// Largest minimum eigenvalue of basis' M(tau) basis is approached by a
// concave function of tau >= 0; returns the smallest tau that attains its
// best value (or makes the matrix psd).
double ChooseRecessionStep(const MatrixXd& base, const MatrixXd& dir) {
  auto lmin = [&](double tau) { return MinEigenvalue(base + tau * dir); };
  const double scale = std::max(1.0, MaxAbs(base));
  const double tol = 1e-12 * scale;
  const double at_zero = lmin(0);
  if (at_zero >= -tol) return 0;
  double hi = 1e-6;
  double best = at_zero;
  while (hi < 1e8) {
    const double v = lmin(hi);
    if (v >= -tol) break;
    if (v < best && hi > 1) break;
    best = std::max(best, v);
    hi *= 4;
  }
  double lo = 0;
  for (int i = 0; i < 100; ++i) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (lmin(m1) < lmin(m2)) lo = m1;
    else hi = m2;
  }
  const double peak = 0.5 * (lo + hi);
  const double target = std::min(lmin(peak), 0.0) - tol;
  double a = 0, b = peak;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (a + b);
    if (lmin(mid) >= target) b = mid;
    else a = mid;
  }
  return b;
}

}  // namespace

std::string_view StatusName(SdpStatus status) {
  switch (status) {
    case SdpStatus::kOptimal:
      return "optimal";
    case SdpStatus::kInfeasible:
      return "infeasible";
    case SdpStatus::kUnbounded:
      return "unbounded";
    case SdpStatus::kNumericalTrouble:
      return "numerical_trouble";
  }
  return "unknown";
}

SdpSolution SolveLmi(const LmiProblem& problem, const SdpOptions& options) {
  const int nv = problem.num_vars();
  const int n = problem.block_dim();
  if (static_cast<int>(problem.f.size()) != nv || problem.f0.cols() != n ||
      problem.eq_matrix.rows() != problem.eq_rhs.size() ||
      (problem.eq_matrix.rows() > 0 && problem.eq_matrix.cols() != nv)) {
    throw std::invalid_argument("LMI problem dimensions are inconsistent");
  }
  for (const MatrixXd& fk : problem.f) {
    if (fk.rows() != n || fk.cols() != n) throw std::invalid_argument("LMI coefficient has wrong size");
  }
  for (int idx : problem.nonnegative) {
    if (idx < 0 || idx >= nv) throw std::invalid_argument("nonnegative index out of range");
  }

  SdpSolution sol;
  Reduction red;

  // Equalities: y = y0 + null * w. Variables absent from every row keep
  // their own coordinate so that recession directions stay axis-aligned.
  const int rows = static_cast<int>(problem.eq_matrix.rows());
  std::vector<int> free_vars, tied_vars;
  for (int k = 0; k < nv; ++k) {
    const bool used = rows > 0 && problem.eq_matrix.col(k).cwiseAbs().maxCoeff() > 0;
    (used ? tied_vars : free_vars).push_back(k);
  }
  red.y0 = VectorXd::Zero(nv);
  MatrixXd tied_null(tied_vars.size(), 0);
  if (!tied_vars.empty()) {
    MatrixXd e(rows, tied_vars.size());
    for (size_t c = 0; c < tied_vars.size(); ++c) e.col(c) = problem.eq_matrix.col(tied_vars[c]);
    Eigen::JacobiSVD<MatrixXd> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    int rank = 0;
    while (rank < sv.size() && sv(rank) > kRankTol * sv(0)) ++rank;
    const VectorXd coeffs = svd.matrixU().leftCols(rank).transpose() * problem.eq_rhs;
    const VectorXd yt = svd.matrixV().leftCols(rank) * coeffs.cwiseQuotient(sv.head(rank));
    const double resid = (e * yt - problem.eq_rhs).norm();
    if (resid > 1e-9 * (1 + problem.eq_rhs.norm())) {
      sol.status = SdpStatus::kInfeasible;
      sol.message = "linear equalities are inconsistent";
      sol.y = VectorXd::Zero(nv);
      return sol;
    }
    for (size_t c = 0; c < tied_vars.size(); ++c) red.y0(tied_vars[c]) = yt(c);
    tied_null = svd.matrixV().rightCols(tied_vars.size() - rank);
  }
  red.null = MatrixXd::Zero(nv, free_vars.size() + tied_null.cols());
  for (size_t c = 0; c < free_vars.size(); ++c) red.null(free_vars[c], c) = 1;
  for (int c = 0; c < tied_null.cols(); ++c) {
    for (size_t r = 0; r < tied_vars.size(); ++r) {
      red.null(tied_vars[r], free_vars.size() + c) = tied_null(r, c);
    }
  }
  const int p = static_cast<int>(red.null.cols());

  // Combined block: LMI block followed by one diagonal entry per sign constraint.
  const int q = static_cast<int>(problem.nonnegative.size());
  const int dim = n + q;
  auto combined = [&](const VectorXd& y, bool with_constant) {
    MatrixXd m = MatrixXd::Zero(dim, dim);
    if (with_constant) m.topLeftCorner(n, n) = problem.f0;
    for (int k = 0; k < nv; ++k) {
      if (y(k) != 0) m.topLeftCorner(n, n) += y(k) * problem.f[k];
    }
    for (int i = 0; i < q; ++i) m(n + i, n + i) = y(problem.nonnegative[i]);
    return m;
  };
  red.g0 = combined(red.y0, true);
  for (int j = 0; j < p; ++j) red.g.push_back(combined(red.null.col(j), false));
  red.constant = problem.objective.dot(red.y0);
  const VectorXd full_cost = red.null.transpose() * problem.objective;
  red.basis = MatrixXd::Identity(dim, dim);
  red.k = MatrixXd::Identity(p, p);

  bool changed = true;
  while (changed) {
    changed = RemoveCommonNullspace(red, full_cost);
    changed = RemoveRecessionDirection(red, full_cost) || changed;
  }

  // Linearly dependent coefficient matrices: free combinations either leave
  // everything unchanged (dropped) or make the objective unbounded.
  ReducedLmi cur = Current(red, full_cost);
  const int rdim = static_cast<int>(cur.c0.rows());
  const double cost_scale = 1 + (full_cost.size() ? full_cost.cwiseAbs().maxCoeff() : 0.0);
  if (!cur.a.empty()) {
    MatrixXd vec(rdim * rdim, cur.a.size());
    for (size_t j = 0; j < cur.a.size(); ++j) {
      vec.col(j) = Eigen::Map<const VectorXd>(cur.a[j].data(), rdim * rdim);
    }
    Eigen::JacobiSVD<MatrixXd> svd(vec, Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    int rank = 0;
    const double top = sv.size() ? sv(0) : 0.0;
    while (rank < sv.size() && sv(rank) > kRankTol * top) ++rank;
    if (rank < static_cast<int>(cur.a.size())) {
      const MatrixXd zero_dirs = svd.matrixV().rightCols(cur.a.size() - rank);
      if ((zero_dirs.transpose() * cur.cost).cwiseAbs().maxCoeff() > 1e-10 * cost_scale) {
        sol.status = SdpStatus::kUnbounded;
        sol.message = "objective decreases along a direction that leaves the constraints unchanged";
        sol.y = red.y0;
        return sol;
      }
      red.k = red.k * svd.matrixV().leftCols(rank);
      cur = Current(red, full_cost);
    }
  }

  VectorXd u = VectorXd::Zero(red.k.cols());
  MatrixXd x_reduced = MatrixXd::Zero(rdim, rdim);
  if (rdim == 0) {
    if (cur.cost.size() > 0 && cur.cost.cwiseAbs().maxCoeff() > 1e-10 * cost_scale) {
      sol.status = SdpStatus::kUnbounded;
      sol.message = "no matrix constraint remains and the objective is not constant";
      sol.y = red.y0;
      return sol;
    }
    sol.status = SdpStatus::kOptimal;
  } else if (cur.a.empty()) {
    const double lmin = MinEigenvalue(cur.c0);
    sol.status = lmin >= -options.tol * (1 + MaxAbs(cur.c0)) ? SdpStatus::kOptimal : SdpStatus::kInfeasible;
    if (sol.status == SdpStatus::kInfeasible) sol.message = "the unique candidate violates the matrix inequality";
  } else {
    std::vector<MatrixXd> a;
    for (const MatrixXd& aj : cur.a) a.push_back(-aj);
    const IpmResult ipm = Ipm(cur.c0, a, -cur.cost, options);
    sol.status = ipm.status;
    sol.message = ipm.message;
    sol.iterations = ipm.iterations;
    sol.relative_gap = ipm.relgap;
    sol.primal_infeasibility = ipm.dinf;
    sol.dual_infeasibility = ipm.pinf;
    u = ipm.u;
    x_reduced = ipm.x;
    sol.dual_objective = red.constant - ipm.pobj;
  }

  VectorXd w = red.k * u;
  for (auto it = red.drops.rbegin(); it != red.drops.rend(); ++it) {
    const MatrixXd base = Restrict(CombinedAt(red, w), it->basis);
    const MatrixXd dir = Restrict(MapW(red, it->direction), it->basis);
    w += ChooseRecessionStep(base, dir) * it->direction;
  }
  sol.y = red.y0 + red.null * w;
  sol.objective = problem.objective.dot(sol.y);
  if (rdim == 0 || cur.a.empty()) sol.dual_objective = sol.objective;
  sol.dual_matrix = red.basis * x_reduced * red.basis.transpose();
  return sol;
}

void WriteSdpa(const LmiProblem& problem, std::ostream& out) {
  const int nv = problem.num_vars();
  const int n = problem.block_dim();
  const int rows = static_cast<int>(problem.eq_matrix.rows());
  const int lp = 2 * rows + static_cast<int>(problem.nonnegative.size());
  out << "* LMI in SDPA sparse format: block 1 is the matrix inequality, block 2 holds\n"
      << "* equalities (as opposite pairs) and sign constraints\n";
  out << nv << "\n" << (lp > 0 ? 2 : 1) << "\n" << n;
  if (lp > 0) out << " " << -lp;
  out << "\n";
  out << std::setprecision(17);
  for (int k = 0; k < nv; ++k) out << (k ? " " : "") << problem.objective(k);
  out << "\n";
  auto emit_block = [&](int mat, const MatrixXd& m) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        if (m(i, j) != 0) out << mat << " 1 " << i + 1 << " " << j + 1 << " " << m(i, j) << "\n";
      }
    }
  };
  emit_block(0, -problem.f0);
  for (int r = 0; r < rows; ++r) {
    if (problem.eq_rhs(r) != 0) {
      out << "0 2 " << 2 * r + 1 << " " << 2 * r + 1 << " " << problem.eq_rhs(r) << "\n";
      out << "0 2 " << 2 * r + 2 << " " << 2 * r + 2 << " " << -problem.eq_rhs(r) << "\n";
    }
  }
  for (int k = 0; k < nv; ++k) {
    emit_block(k + 1, problem.f[k]);
    for (int r = 0; r < rows; ++r) {
      const double v = problem.eq_matrix(r, k);
      if (v != 0) {
        out << k + 1 << " 2 " << 2 * r + 1 << " " << 2 * r + 1 << " " << v << "\n";
        out << k + 1 << " 2 " << 2 * r + 2 << " " << 2 * r + 2 << " " << -v << "\n";
      }
    }
  }
  for (size_t i = 0; i < problem.nonnegative.size(); ++i) {
    const int idx = 2 * rows + static_cast<int>(i) + 1;
    out << problem.nonnegative[i] + 1 << " 2 " << idx << " " << idx << " 1\n";
  }
}

}  // namespace sosrate
