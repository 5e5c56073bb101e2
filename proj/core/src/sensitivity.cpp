#include "sl/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sl/lemma.hpp"

namespace sl {

namespace {

PiecewiseFn abs_values(const PiecewiseFn& f) {
    std::vector<double> v = f.values();
    for (double& x : v) x = std::abs(x);
    return PiecewiseFn(f.breakpoints(), std::move(v));
}

}  // namespace

double derivative_functional(const Eigenpair& pair, const PiecewiseFn& h) {
    return pair.sol.weighted_square_integral(h);
}

double derivative_functional(const SLProblem& prob, int n, const PiecewiseFn& h, double tol) {
    return derivative_functional(eigenfunction(prob, n, tol), h);
}

double fd_derivative(const SLProblem& prob, int n, const PiecewiseFn& h, double eps, double tol) {
    if (!(eps > 0.0)) throw std::invalid_argument("fd_derivative: eps must be positive");
    const double lp = eigenvalue(prob.with_potential(lin_comb(1.0, prob.q, eps, h)), n, tol);
    const double lm = eigenvalue(prob.with_potential(lin_comb(1.0, prob.q, -eps, h)), n, tol);
    return (lp - lm) / (2.0 * eps);
}

LipschitzReport lipschitz_ratio(const SLProblem& prob_template, const PiecewiseFn& q1,
                                const PiecewiseFn& q2, int N, double tol) {
    const double dist = l1_norm(lin_comb(1.0, q1, -1.0, q2));
    if (!(dist > 0.0))
        throw std::invalid_argument("lipschitz_ratio: potentials have zero L1 distance");
    if (N < 1) throw std::invalid_argument("lipschitz_ratio: N must be >= 1");

    LipschitzReport rep;
    rep.n_max = N;
    rep.lambda_q1 = eigenvalues_up_to(prob_template.with_potential(q1), N, tol);
    rep.lambda_q2 = eigenvalues_up_to(prob_template.with_potential(q2), N, tol);
    rep.ratios.resize(N);
    for (int i = 0; i < N; ++i)
        rep.ratios[i] = std::abs(rep.lambda_q1[i] - rep.lambda_q2[i]) / dist;
    rep.sup_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());

    std::vector<PiecewiseFn> path;
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) path.push_back(affine_combine(q1, q2, t));
    rep.m_hat = supnorm_sweep(prob_template, path, N, tol).m_hat;
    rep.bound = rep.m_hat * rep.m_hat;
    rep.pass = rep.sup_ratio <= rep.bound * 1.05;
    return rep;
}

double path_bound(const SLProblem& prob_template, const PiecewiseFn& q1, const PiecewiseFn& q2,
                  int n, const std::vector<double>& t_grid, double tol) {
    if (t_grid.size() < 2) throw std::invalid_argument("path_bound: need >= 2 t nodes");
    std::vector<double> ts = t_grid;
    std::sort(ts.begin(), ts.end());
    if (ts.front() < 0.0 || ts.back() > 1.0)
        throw std::invalid_argument("path_bound: t nodes must lie in [0,1]");

    const PiecewiseFn dq_abs = abs_values(lin_comb(1.0, q2, -1.0, q1));
    std::vector<double> vals(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        SLProblem pt = prob_template.with_potential(affine_combine(q1, q2, ts[i]));
        vals[i] = eigenfunction(pt, n, tol).sol.weighted_square_integral(dq_abs);
    }
    // trapezoid over the nodes, extended as constant to the ends of [0,1]
    double acc = vals.front() * (ts.front() - 0.0) + vals.back() * (1.0 - ts.back());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        acc += 0.5 * (vals[i] + vals[i + 1]) * (ts[i + 1] - ts[i]);
    return acc;
}

}  // namespace sl
