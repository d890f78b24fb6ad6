#pragma once

#include <utility>
#include <vector>

#include "pivot/types.hpp"

namespace pivot {

/// min 0.5 u'Q u + r'u + s   subject to   lower <= G u <= upper.
/// Q must be symmetric positive definite; bounds may be +-infinity.
struct QpProblem {
  MatX Q;
  VecX r;
  Scalar s = 0;
  MatX G;      // m x n; m may be zero
  VecX lower;  // m
  VecX upper;  // m

  int num_vars() const { return static_cast<int>(Q.rows()); }
  int num_constraints() const { return static_cast<int>(G.rows()); }
};

enum class QpStatus { Optimal, MaxIterations, Infeasible };

inline const char* qp_status_label(QpStatus s) {
  switch (s) {
    case QpStatus::Optimal: return "optimal";
    case QpStatus::MaxIterations: return "max_iterations";
    case QpStatus::Infeasible: return "infeasible";
  }
  return "?";
}

/// A constraint held as an equality by the active-set method: row index plus
/// the side it is pinned at (-1 lower, +1 upper).
struct ActiveConstraint {
  int row = 0;
  int side = +1;
};

struct QpSolution {
  VecX u_star;
  Scalar objective = 0;      // 0.5 u'Qu + r'u + s at u_star
  Scalar kkt_residual = 0;   // max of stationarity, primal, complementarity
  int iterations = 0;
  QpStatus status = QpStatus::Optimal;
  std::vector<ActiveConstraint> active_set;  // for warm starts
};

/**
 * Dense primal active-set solver. A feasible start is found first by cyclic
 * projection onto the constraint slabs; an empty feasible set is reported as
 * Infeasible. Ties in blocking/dropping decisions break on the lowest
 * constraint index so the iteration cannot cycle. Every Optimal return is
 * re-certified against the KKT conditions.
 *
 * One solve per instance at a time; instances are independent.
 */
class QpSolver {
 public:
  struct Options {
    Scalar tol = 1e-8;
    int max_iter = 0;  // 0: use 50 * (n + m)
  };

  QpSolution solve(const QpProblem& problem, const Options& options = {},
                   const std::vector<ActiveConstraint>& warm_start = {});

 private:
  // Scratch, reused across solves from the same instance.
  MatX g_scaled_;
  VecX row_norm_, lo_, hi_;
};

}  // namespace pivot
