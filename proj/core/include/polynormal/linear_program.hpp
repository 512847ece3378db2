#pragma once

#include <Eigen/Dense>

namespace polynormal::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

/// Dense two-phase simplex for small problems (a few hundred rows):
///
///   maximize  c.x   subject to   A x <= b,   x >= 0.
///
/// `b` may have negative entries; phase one finds a feasible basis. Pivoting
/// follows Bland's rule, so degenerate problems terminate. The returned
/// point is a basic solution, i.e. a vertex of the feasible region.
Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                double eps = 1e-11);

}  // namespace polynormal::lp
