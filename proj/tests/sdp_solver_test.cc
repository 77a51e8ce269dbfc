#include "sosrate/sdp_solver.h"

#include <sstream>

#include <gtest/gtest.h>

namespace sosrate {
namespace {

// minimize y subject to [[y, 1], [1, y]] psd: y = 1
LmiProblem TwoByTwo() {
  LmiProblem p;
  p.objective = Eigen::VectorXd::Ones(1);
  p.eq_matrix = Eigen::MatrixXd(0, 1);
  p.eq_rhs = Eigen::VectorXd(0);
  p.f0 = Eigen::MatrixXd(2, 2);
  p.f0 << 0, 1, 1, 0;
  p.f = {Eigen::MatrixXd::Identity(2, 2)};
  return p;
}

TEST(SolveLmi, TwoByTwo) {
  const auto s = SolveLmi(TwoByTwo());
  ASSERT_EQ(s.status, SdpStatus::kOptimal) << s.message;
  EXPECT_NEAR(s.y(0), 1.0, 1e-7);
  EXPECT_NEAR(s.objective, s.dual_objective, 1e-7);
}

TEST(SolveLmi, EqualityAndSign) {
  // minimize y0 + 2 y1 with y0 + y1 = 3, y >= 0, diag(y0, y1) psd: y = (3, 0)
  LmiProblem p;
  p.objective = Eigen::Vector2d(1, 2);
  p.eq_matrix = Eigen::MatrixXd(1, 2);
  p.eq_matrix << 1, 1;
  p.eq_rhs = Eigen::VectorXd::Constant(1, 3);
  p.f0 = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd e0 = Eigen::MatrixXd::Zero(2, 2), e1 = e0;
  e0(0, 0) = 1;
  e1(1, 1) = 1;
  p.f = {e0, e1};
  p.nonnegative = {0, 1};
  const auto s = SolveLmi(p);
  ASSERT_EQ(s.status, SdpStatus::kOptimal) << s.message;
  EXPECT_NEAR(s.y(0), 3, 1e-6);
  EXPECT_NEAR(s.y(1), 0, 1e-6);
}

TEST(SolveLmi, DetectsInfeasibility) {
  // diag(-1, y) can never be psd
  LmiProblem p;
  p.objective = Eigen::VectorXd::Ones(1);
  p.eq_matrix = Eigen::MatrixXd(0, 1);
  p.eq_rhs = Eigen::VectorXd(0);
  p.f0 = Eigen::MatrixXd::Zero(2, 2);
  p.f0(0, 0) = -1;
  Eigen::MatrixXd f1 = Eigen::MatrixXd::Zero(2, 2);
  f1(1, 1) = 1;
  p.f = {f1};
  EXPECT_EQ(SolveLmi(p).status, SdpStatus::kInfeasible);
}

TEST(SolveLmi, RankDeficientFeasibleSet) {
  // [[y, 0], [0, 0]] psd: the zero row is projected out
  LmiProblem p;
  p.objective = Eigen::VectorXd::Ones(1);
  p.eq_matrix = Eigen::MatrixXd(0, 1);
  p.eq_rhs = Eigen::VectorXd(0);
  p.f0 = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd f1 = Eigen::MatrixXd::Zero(2, 2);
  f1(0, 0) = 1;
  p.f = {f1};
  p.f0(0, 0) = -2;
  const auto s = SolveLmi(p);
  ASSERT_EQ(s.status, SdpStatus::kOptimal) << s.message;
  EXPECT_NEAR(s.y(0), 2, 1e-6);
}

TEST(WriteSdpa, Header) {
  std::ostringstream os;
  WriteSdpa(TwoByTwo(), os);
  const std::string text = os.str();
  EXPECT_NE(text.find("1"), std::string::npos);
  EXPECT_FALSE(text.empty());
}

}  // namespace
}  // namespace sosrate
