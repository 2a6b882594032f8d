#include "partgrasp/linear_program.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace partgrasp {

namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  Eigen::MatrixXd t;           // rows 0..m-1 constraints, row m objective; last col rhs
  std::vector<int> basis;      // basic variable per row

  int rows() const { return static_cast<int>(t.rows()) - 1; }
  int cols() const { return static_cast<int>(t.cols()) - 1; }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[r] = c;
  }

  // Runs simplex iterations over columns [0, active_cols). Returns false when unbounded.
  bool optimize(int active_cols) {
    const int m = rows();
    const int rhs = cols();
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (int j = 0; j < active_cols; ++j) {
        if (t(m, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t(i, enter) > kPivotTol) {
          const double ratio = t(i, rhs) / t(i, enter);
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  LpResult result;
  result.x = Eigen::VectorXd::Zero(n);

  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  tab.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sign * A.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = sign * b[i];
    tab.basis[i] = n + i;
  }
  // phase 1: maximize -sum(artificials)
  for (int i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (int i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;
  tab.optimize(n + m);
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (tab.t(m, n + m) < -1e-9 * scale) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // drive remaining artificials out of the basis; drop redundant rows
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] >= n) {
      int col = -1;
      for (int j = 0; j < n; ++j) {
        if (std::abs(tab.t(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) tab.pivot(i, col);
    }
  }
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) keep.push_back(i);
  }

  Tableau p2;
  const int m2 = static_cast<int>(keep.size());
  p2.t = Eigen::MatrixXd::Zero(m2 + 1, n + 1);
  p2.basis.resize(m2);
  for (int r = 0; r < m2; ++r) {
    p2.t.row(r).head(n) = tab.t.row(keep[r]).head(n);
    p2.t(r, n) = tab.t(keep[r], n + m);
    p2.basis[r] = tab.basis[keep[r]];
  }
  p2.t.row(m2).head(n) = -c.transpose();
  for (int r = 0; r < m2; ++r) {
    const double cb = c[p2.basis[r]];
    if (cb != 0.0) p2.t.row(m2) += cb * p2.t.row(r);
  }
  if (!p2.optimize(n)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  for (int r = 0; r < m2; ++r) result.x[p2.basis[r]] = p2.t(r, n);
  result.objective = c.dot(result.x);
  result.status = LpStatus::Optimal;
  return result;
}

bool in_conic_hull(const Eigen::MatrixXd& generators, const Eigen::VectorXd& target,
                   double tolerance) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(generators.cols());
  const LpResult r = solve_lp(generators, target, zero);
  if (r.status != LpStatus::Optimal) return false;
  return (generators * r.x - target).norm() <= tolerance * (1.0 + target.norm());
}

double positive_span_margin(const Eigen::MatrixXd& generators) {
  // lambda = mu + s * 1 with mu >= 0, s >= 0; maximize s
  const int d = static_cast<int>(generators.rows());
  const int n = static_cast<int>(generators.cols());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d + 1, n + 1);
  A.topLeftCorner(d, n) = generators;
  A.col(n).head(d) = generators.rowwise().sum();
  A.row(d).head(n).setOnes();
  A(d, n) = static_cast<double>(n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  b[d] = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c[n] = 1.0;
  const LpResult r = solve_lp(A, b, c);
  if (r.status != LpStatus::Optimal) return 0.0;
  return r.x[n];
}

}  // namespace partgrasp
