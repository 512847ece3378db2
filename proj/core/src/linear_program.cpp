#include "polynormal/linear_program.hpp"

#include <limits>
#include <vector>

#include "polynormal/errors.hpp"

namespace polynormal::lp {
namespace {

// Tableau layout: rows [0, m) are constraints, row m is the objective, row
// m + 1 the phase-one objective. Column n is the artificial variable and
// column n + 1 the right-hand side. Nonbasic variable ids live in `nonbasic`
// (artificial = -1), basic ids in `basic` (slack of row i = n + i).
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c, double eps)
      : m_(static_cast<int>(A.rows())),
        n_(static_cast<int>(A.cols())),
        eps_(eps),
        d_(Eigen::MatrixXd::Zero(m_ + 2, n_ + 2)),
        basic_(m_),
        nonbasic_(n_ + 1) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) d_(i, j) = A(i, j);
      d_(i, n_) = -1.0;
      d_(i, n_ + 1) = b(i);
      basic_[i] = n_ + i;
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      d_(m_, j) = -c(j);
    }
    nonbasic_[n_] = -1;
    d_(m_ + 1, n_) = 1.0;
  }

  Result solve() {
    Result result;
    result.x = Eigen::VectorXd::Zero(n_);

    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
    if (m_ > 0 && d_(r, n_ + 1) < -eps_) {
      pivot(r, n_);
      if (!run(true) || d_(m_ + 1, n_ + 1) < -eps_) {
        result.status = Status::Infeasible;
        return result;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        int s = -1;
        for (int j = 0; j <= n_; ++j)
          if (s == -1 || d_(i, j) < d_(i, s) ||
              (d_(i, j) == d_(i, s) && nonbasic_[j] < nonbasic_[s]))
            s = j;
        pivot(i, s);
      }
    }
    if (!run(false)) {
      result.status = Status::Unbounded;
      result.objective = std::numeric_limits<double>::infinity();
      return result;
    }
    for (int i = 0; i < m_; ++i)
      if (basic_[i] >= 0 && basic_[i] < n_) result.x(basic_[i]) = d_(i, n_ + 1);
    result.objective = d_(m_, n_ + 1);
    result.status = Status::Optimal;
    return result;
  }

 private:
  void pivot(int r, int s) {
    const double inv = 1.0 / d_(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = d_(i, s) * inv;
      if (f == 0.0) continue;
      for (int j = 0; j < n_ + 2; ++j)
        if (j != s) d_(i, j) -= d_(r, j) * f;
      d_(i, s) = -f;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) d_(r, j) *= inv;
    d_(r, s) = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // Bland's rule on both the entering and the leaving variable.
  bool run(bool phase_one) {
    const int row = phase_one ? m_ + 1 : m_;
    const long cap = 5000L + 200L * (m_ + n_);
    for (long iter = 0; iter < cap; ++iter) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (!phase_one && nonbasic_[j] == -1) continue;
        if (d_(row, j) < -eps_ && (s == -1 || nonbasic_[j] < nonbasic_[s])) s = j;
      }
      if (s == -1) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_(i, s) <= eps_) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = d_(i, n_ + 1) / d_(i, s);
        const double rhs = d_(r, n_ + 1) / d_(r, s);
        if (lhs < rhs - eps_ || (lhs <= rhs + eps_ && basic_[i] < basic_[r])) r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
    throw InvariantViolation("simplex iteration cap exceeded");
  }

  int m_;
  int n_;
  double eps_;
  Eigen::MatrixXd d_;
  std::vector<int> basic_;
  std::vector<int> nonbasic_;
};

}  // namespace

Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                double eps) {
  if (A.rows() != b.size() || A.cols() != c.size())
    throw std::invalid_argument("lp::maximize: dimension mismatch");
  Tableau tableau(A, b, c, eps);
  return tableau.solve();
}

}  // namespace polynormal::lp
