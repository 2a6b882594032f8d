#pragma once

#include <Eigen/Core>

namespace partgrasp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

// Dense two-phase simplex with Bland's rule:
//   maximize c.x  subject to  A x = b,  x >= 0.
LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

// True when `target` is a non-negative combination of the columns of `generators`.
bool in_conic_hull(const Eigen::MatrixXd& generators, const Eigen::VectorXd& target,
                   double tolerance = 1e-9);

// Largest s such that some lambda with sum(lambda) = 1, lambda_i >= s and
// generators * lambda = 0 exists. The columns positively span their ambient
// space iff they span it linearly and this margin is positive.
double positive_span_margin(const Eigen::MatrixXd& generators);

}  // namespace partgrasp
