#pragma once

#include <vector>

#include "sl/eigen.hpp"
#include "sl/piecewise.hpp"
#include "sl/problem.hpp"

namespace sl {

/// Eigenvalue derivative in direction h: int phi_n^2 h dx (exact per-piece
/// quadrature on the eigenfunction's segment representation).
double derivative_functional(const SLProblem& prob, int n, const PiecewiseFn& h,
                             double tol = 1e-10);
double derivative_functional(const Eigenpair& pair, const PiecewiseFn& h);

/// Central finite difference (lambda_n(q + eps h) - lambda_n(q - eps h)) / (2 eps).
double fd_derivative(const SLProblem& prob, int n, const PiecewiseFn& h, double eps,
                     double tol = 1e-12);

/// Per-index Lipschitz quotients between two potentials, together with the
/// empirical sup-norm certificate m_hat^2 from a sweep over the path q_t.
struct LipschitzReport {
    int n_max = 0;
    std::vector<double> lambda_q1;
    std::vector<double> lambda_q2;
    std::vector<double> ratios;  // |lambda_n(q1) - lambda_n(q2)| / ||q1-q2||_1
    double sup_ratio = 0.0;
    double m_hat = 0.0;
    double bound = 0.0;  // m_hat^2
    bool pass = false;   // sup_ratio <= bound * (1 + slack), slack = 5%
};

LipschitzReport lipschitz_ratio(const SLProblem& prob_template, const PiecewiseFn& q1,
                                const PiecewiseFn& q2, int N, double tol = 1e-9);

/// Numeric upper bound int_0^1 int phi_n^2(.;t) |dq| dx dt by trapezoid in t
/// over the given nodes (sorted, within [0,1], >= 2 of them).
double path_bound(const SLProblem& prob_template, const PiecewiseFn& q1, const PiecewiseFn& q2,
                  int n, const std::vector<double>& t_grid, double tol = 1e-9);

}  // namespace sl
