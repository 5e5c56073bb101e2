#pragma once

#include <vector>

#include "sl/piecewise.hpp"
#include "sl/problem.hpp"

namespace sl {

/// Initial Prufer angle: the unique theta0 in [0, pi) with
/// sin(theta0) cos(alpha) + sqrt(lambda) cos(theta0) sin(alpha) = 0,
/// i.e. the angle of the initial ray (y, y') ~ (sin(alpha), -cos(alpha)).
double initial_angle(double alpha, double lambda);

/// Terminal matching angle: the unique gamma in (0, pi] with
/// sin(gamma) cos(beta) + sqrt(lambda) cos(gamma) sin(beta) = 0.
double target_angle(double beta, double lambda);

/// Initial (y, y') ray for the alpha boundary condition, oriented so the
/// Prufer angle starts in [0, pi): (0, 1) for alpha = 0, otherwise
/// (sin(alpha), -cos(alpha)).
void boundary_ray(double alpha, double& y, double& yp);

/// Sampled Prufer path for a fixed lambda.
///
/// theta is the continuous unwrapped angle atan2(sqrt(lambda) y, y') with the
/// integer multiple of pi fixed by zero counting; populated only for
/// lambda > 0.  oscillation_count counts zeros of y in (a, b].
struct PruferTrajectory {
    double lambda = 0.0;
    std::vector<double> xs;
    std::vector<double> theta;
    std::vector<double> log_rho;
    std::vector<double> y;
    std::vector<double> yp;
    int oscillation_count = 0;

    double theta_end() const { return theta.back(); }
};

/// One interval on which k2 = lambda*w - q is constant; (y0, yp0) is the
/// solution data at the left end x0.  The solution on [x0, x0+dx] is the
/// exact trig/hyperbolic/linear evolution from that data.
struct Segment {
    double x0;
    double dx;
    double k2;
    double y0;
    double yp0;
};

/// Advance (y, y') across a constant-k2 interval of width dx (exact).
void segment_advance(double k2, double dx, double& y, double& yp);

/// Evaluate the segment solution at offset x in [0, dx].
void segment_eval(const Segment& s, double x, double& y, double& yp);

/// Exact integral of y^2 over the segment.
double segment_square_integral(const Segment& s);

/// Exact sup of |y| over the segment (checks interior critical points).
double segment_max_abs(const Segment& s);

/// Exact piecewise solution of -y'' + q y = lambda w y from initial data.
struct TransferSolution {
    double lambda = 0.0;
    std::vector<Segment> segments;
    double y_end = 0.0;
    double yp_end = 0.0;
    int zero_count = 0;  // zeros of y in (a, b]

    /// Zeros strictly inside (a, b); a terminal zero is detected with a
    /// relative guard since a converged eigenfunction only vanishes at b
    /// up to roundoff.
    int interior_zero_count() const;

    double eval(double x) const;
    double eval_derivative(double x) const;

    /// sup |y| over [a, b] (exact per segment).
    double sup_abs() const;

    /// Exact integral of f * y^2 for piecewise-constant f on the same interval.
    double weighted_square_integral(const PiecewiseFn& f) const;
};

/// Propagate (y, y') through the piecewise-constant problem with exact
/// per-piece transfer matrices.  Pieces are subdivided so |k| dx < pi/2
/// (at most one zero of y per segment) and into at least n_sub parts.
/// Requires a normal-form problem (p == 1); any real lambda is allowed.
TransferSolution propagate_ivp(const SLProblem& prob, double lambda, double y0, double yp0,
                               int n_sub = 1, double max_k_dx = 1.5533430342970306 /* 99% of pi/2 */);

/// Full trajectory from the alpha boundary data; theta/log_rho are populated
/// when lambda > 0, otherwise only (y, y') and the oscillation count.
PruferTrajectory propagate_transfer(const SLProblem& prob, double lambda, int n_sub = 1);

/// Unwrapped terminal angle theta(b; lambda) from the transfer backend,
/// starting at initial_angle(prob.alpha, lambda).  Requires lambda > 0.
double transfer_theta_end(const SLProblem& prob, double lambda);

/// Adaptive embedded Runge-Kutta integration of the scaled Prufer system
///   theta'   = sqrt(l) (cos^2 th + w sin^2 th) - (q / sqrt(l)) sin^2 th
///   logrho'  = (sqrt(l)/2) (1 - w + q/l) sin(2 th)
/// with mandatory nodes at coefficient breakpoints.  tol is the permitted
/// error per unit length.  Requires lambda > 0.
PruferTrajectory integrate_prufer(const SLProblem& prob, double lambda, double tol = 1e-10);
PruferTrajectory integrate_prufer(const SLProblem& prob, double lambda, double tol, double theta0);

/// Fundamental pair of -y'' = lambda w y:
///   phi(0) = 0, phi'(0) = 1  with polar data (r, nu),   nu(0) = 0;
///   psi(0) = 1, psi'(0) = 0  with polar data (mu, sigma), sigma(0) = pi/2.
/// phi = r sin(nu)/sqrt(l), phi' = r cos(nu); psi = mu sin(sigma),
/// psi' = sqrt(l) mu cos(sigma).  Wronskian psi phi' - psi' phi == 1.
struct FundamentalPair {
    double lambda = 0.0;
    std::vector<double> xs;
    std::vector<double> phi, phi_p, psi, psi_p;
    std::vector<double> r, nu, mu, sigma;
};
FundamentalPair fundamental_pair(const PiecewiseFn& omega, double lambda, int n_sub = 4);

}  // namespace sl
