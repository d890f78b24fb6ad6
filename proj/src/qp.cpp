#include "pivot/qp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cassert>
#include <cmath>
#include <limits>

#include "pivot/errors.hpp"

namespace pivot {

namespace {

constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

Scalar objective_value(const QpProblem& p, const VecX& u) {
  return 0.5 * u.dot(p.Q * u) + p.r.dot(u) + p.s;
}

// Max violation of lo <= G u <= hi over normalized rows.
Scalar max_violation(const MatX& g, const VecX& lo, const VecX& hi, const VecX& u) {
  Scalar worst = 0;
  for (int i = 0; i < g.rows(); ++i) {
    const Scalar v = g.row(i).dot(u);
    if (std::isfinite(lo[i])) worst = std::max(worst, lo[i] - v);
    if (std::isfinite(hi[i])) worst = std::max(worst, v - hi[i]);
  }
  return worst;
}

}  // namespace

QpSolution QpSolver::solve(const QpProblem& problem, const Options& options,
                           const std::vector<ActiveConstraint>& warm_start) {
  const int n = problem.num_vars();
  const int m = problem.num_constraints();
  const Scalar tol = options.tol;
  const int max_iter = options.max_iter > 0 ? options.max_iter : 50 * (n + m);

  QpSolution sol;
  sol.u_star = VecX::Zero(n);

  // Normalize constraint rows so step-length and activity tests share a scale.
  g_scaled_.resize(m, n);
  row_norm_.resize(m);
  lo_.resize(m);
  hi_.resize(m);
  for (int i = 0; i < m; ++i) {
    const Scalar nrm = problem.G.row(i).norm();
    row_norm_[i] = nrm > 0 ? nrm : 1.0;
    g_scaled_.row(i) = problem.G.row(i) / row_norm_[i];
    lo_[i] = problem.lower[i] / row_norm_[i];
    hi_[i] = problem.upper[i] / row_norm_[i];
  }

  // Phase 1: cyclic projection onto the slabs from u = 0.
  VecX u = VecX::Zero(n);
  Scalar bound_scale = 1.0;
  for (int i = 0; i < m; ++i) {
    if (std::isfinite(lo_[i])) bound_scale = std::max(bound_scale, std::abs(lo_[i]));
    if (std::isfinite(hi_[i])) bound_scale = std::max(bound_scale, std::abs(hi_[i]));
  }
  const Scalar feas_tol = 1e-11 * bound_scale;
  {
    Scalar viol = max_violation(g_scaled_, lo_, hi_, u);
    int sweeps = 0;
    const int max_sweeps = 200 + 50 * m;
    while (viol > feas_tol && sweeps < max_sweeps) {
      for (int i = 0; i < m; ++i) {
        const Scalar v = g_scaled_.row(i).dot(u);
        if (std::isfinite(hi_[i]) && v > hi_[i])
          u -= (v - hi_[i]) * g_scaled_.row(i).transpose();
        else if (std::isfinite(lo_[i]) && v < lo_[i])
          u += (lo_[i] - v) * g_scaled_.row(i).transpose();
      }
      viol = max_violation(g_scaled_, lo_, hi_, u);
      ++sweeps;
    }
    if (viol > std::max(feas_tol, tol)) {
      sol.status = QpStatus::Infeasible;
      sol.u_star = u;
      sol.objective = objective_value(problem, u);
      sol.kkt_residual = viol;
      sol.iterations = sweeps;
      return sol;
    }
  }

  // Working set: rows held at a bound. Seeded from the warm-start hint where
  // the hint is actually active at the phase-1 point.
  std::vector<ActiveConstraint> ws;
  const Scalar act_tol = 1e-9;
  for (const ActiveConstraint& c : warm_start) {
    if (c.row < 0 || c.row >= m) continue;
    const Scalar v = g_scaled_.row(c.row).dot(u);
    const Scalar bound = c.side > 0 ? hi_[c.row] : lo_[c.row];
    if (std::isfinite(bound) && std::abs(v - bound) <= act_tol)
      ws.push_back({c.row, c.side});
  }

  auto in_ws = [&ws](int row) {
    for (const auto& c : ws)
      if (c.row == row) return true;
    return false;
  };

  VecX lambda;  // multipliers for the working set, sign-adjusted
  Scalar prev_obj = objective_value(problem, u);
  int iter = 0;
  bool optimal = false;

  while (iter < max_iter) {
    ++iter;
    const int a = static_cast<int>(ws.size());

    // Equality-constrained step via the null space of the working rows.
    MatX gw(a, n);
    for (int i = 0; i < a; ++i) gw.row(i) = g_scaled_.row(ws[i].row);
    const VecX grad = problem.Q * u + problem.r;

    VecX p = VecX::Zero(n);
    Eigen::ColPivHouseholderQR<MatX> qr;
    int rank = 0;
    if (a > 0) {
      qr.compute(gw.transpose());
      rank = static_cast<int>(qr.rank());
    }
    if (rank < n) {
      MatX z;
      if (a == 0) {
        z = MatX::Identity(n, n);
      } else {
        const MatX q_full = qr.householderQ() * MatX::Identity(n, n);
        z = q_full.rightCols(n - rank);
      }
      const MatX zqz = z.transpose() * problem.Q * z;
      const VecX v = zqz.llt().solve(-z.transpose() * grad);
      p = z * v;
    }

    if (p.lpNorm<Eigen::Infinity>() <= 1e-11 * (1.0 + u.lpNorm<Eigen::Infinity>())) {
      // Stationary on the working set: examine multipliers.
      if (a == 0) {
        optimal = true;
        break;
      }
      const VecX mu = gw.transpose()
                          .colPivHouseholderQr()
                          .solve(-(problem.Q * u + problem.r));
      lambda.resize(a);
      int drop = -1;
      for (int i = 0; i < a; ++i) {
        lambda[i] = ws[i].side > 0 ? mu[i] : -mu[i];
        if (lambda[i] < -tol && (drop == -1 || ws[i].row < ws[drop].row)) drop = i;
      }
      if (drop == -1) {
        optimal = true;
        break;
      }
      ws.erase(ws.begin() + drop);
      continue;
    }

    // Longest feasible step along p; the nearest blocking row joins the set.
    Scalar t = 1.0;
    int block_row = -1, block_side = 0;
    for (int i = 0; i < m; ++i) {
      if (in_ws(i)) continue;
      const Scalar d = g_scaled_.row(i).dot(p);
      const Scalar v = g_scaled_.row(i).dot(u);
      Scalar ti = kInf;
      int side = 0;
      if (d > 1e-13 && std::isfinite(hi_[i])) {
        ti = (hi_[i] - v) / d;
        side = +1;
      } else if (d < -1e-13 && std::isfinite(lo_[i])) {
        ti = (lo_[i] - v) / d;
        side = -1;
      }
      // Ascending scan keeps the lowest row index on ties.
      if (ti < t - 1e-14) {
        t = std::max(ti, 0.0);
        block_row = i;
        block_side = side;
      }
    }

    u += t * p;
    if (block_row >= 0) ws.push_back({block_row, block_side});

#ifndef NDEBUG
    const Scalar obj_now = objective_value(problem, u);
    assert(obj_now <= prev_obj + 1e-9 * (1.0 + std::abs(prev_obj)));
    prev_obj = obj_now;
#else
    (void)prev_obj;
#endif
  }

  sol.u_star = u;
  sol.objective = objective_value(problem, u);
  sol.iterations = iter;
  sol.active_set = ws;
  sol.status = optimal ? QpStatus::Optimal : QpStatus::MaxIterations;

  // KKT certificate: stationarity with nonnegative multipliers, primal
  // feasibility, complementary slackness.
  VecX lam_up = VecX::Zero(m), lam_lo = VecX::Zero(m);
  for (size_t i = 0; i < ws.size(); ++i) {
    const Scalar l = lambda.size() == static_cast<int>(ws.size())
                         ? std::max(lambda[static_cast<int>(i)], 0.0)
                         : 0.0;
    // Convert back to the unnormalized row scale.
    if (ws[i].side > 0)
      lam_up[ws[i].row] = l / row_norm_[ws[i].row];
    else
      lam_lo[ws[i].row] = l / row_norm_[ws[i].row];
  }
  VecX stat = problem.Q * u + problem.r;
  if (m > 0) stat += problem.G.transpose() * (lam_up - lam_lo);
  Scalar res = stat.lpNorm<Eigen::Infinity>();
  for (int i = 0; i < m; ++i) {
    const Scalar v = problem.G.row(i).dot(u);
    if (std::isfinite(problem.lower[i])) res = std::max(res, problem.lower[i] - v);
    if (std::isfinite(problem.upper[i])) res = std::max(res, v - problem.upper[i]);
    if (std::isfinite(problem.upper[i]))
      res = std::max(res, std::abs(lam_up[i] * (problem.upper[i] - v)));
    if (std::isfinite(problem.lower[i]))
      res = std::max(res, std::abs(lam_lo[i] * (v - problem.lower[i])));
  }
  sol.kkt_residual = res;
  return sol;
}

}  // namespace pivot
