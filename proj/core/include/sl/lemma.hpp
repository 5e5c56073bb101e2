#pragma once

#include <utility>
#include <vector>

#include "sl/eigen.hpp"
#include "sl/piecewise.hpp"
#include "sl/problem.hpp"

namespace sl {

/// Oscillatory integrals (int_0^c g sin(2 theta), int_0^c g cos(2 theta))
/// with theta the q == 0 Prufer angle for weight omega, initial angle theta0.
std::pair<double, double> oscillatory_integrals(const PiecewiseFn& omega, const PiecewiseFn& g,
                                                double lambda, double c, double theta0 = 0.0,
                                                double tol = 1e-10);

/// Certified ceilings for the scaled oscillatory integrals with decreasing
/// non-negative g and monotone omega with positive infimum:
///   first  = G0 / 2,  G0 = f(0) + pi g0 / min(w0, 1)
///   second = (|f(0)| + (5 pi / 4) g0 / min(w0, 1)) / 2
/// where f(0) = int_0^{pi/2} g0 sin(2u) / (cos^2 u + w0 sin^2 u) du, g0 is
/// the largest value of g and w0 the value of omega at its small end (a
/// decreasing weight is read through the reflection t = 1 - x).
///
/// The first ceiling bounds sqrt(lambda)/2 * |int g sin 2theta| for all c
/// and all large lambda.  The second is an envelope for the cosine integral
/// only when the weight is 1 (zero-mean integrand); for a general monotone
/// weight the cosine integral approaches a nonzero mean and carries no
/// 1/sqrt(lambda) decay, so no certificate is asserted for it.
std::pair<double, double> g0_bound(const PiecewiseFn& g, const PiecewiseFn& omega);

/// Sampled H(x; lambda) = (sqrt(l)/2) int_0^x (1 - w) sin(2 theta) dt and
/// its sup over the samples.
struct HField {
    std::vector<double> xs;
    std::vector<double> values;
    double sup = 0.0;
};
HField h_field(const PiecewiseFn& omega, double lambda, double theta0 = 0.0, double tol = 1e-10);

/// Raw/scaled oscillatory-integral values on an increasing lambda grid.
struct DecaySeries {
    std::vector<double> lambdas;
    std::vector<double> raw_values;
    std::vector<double> scaled_values;  // sqrt(lambda) * |raw|
    double fitted_slope = 0.0;          // log|raw| vs log(lambda) regression
};

/// Least-squares slope of log|raw| vs log(lambda); NaN for degenerate
/// (all-zero) series.
double decay_fit(const DecaySeries& series);

/// Build the series for int_0^c g sin(2 theta) (or the cosine integral).
DecaySeries oscillatory_decay_series(const PiecewiseFn& omega, const PiecewiseFn& g, double c,
                                     double theta0, const std::vector<double>& lambdas,
                                     bool cosine = false, double tol = 1e-10);

/// Empirical M(Omega): max eigenfunction sup-norm over the given potentials
/// and indices n <= N, with the per-n max profile.
struct SupnormSweep {
    double m_hat = 0.0;
    std::vector<double> per_n_max;
};
SupnormSweep supnorm_sweep(const SLProblem& prob_template,
                           const std::vector<PiecewiseFn>& potentials, int N, double tol = 1e-9);

/// sup_x |y(x; lambda) - C1 mu sin(sigma)| where y solves
/// -y'' + q y = lambda w y with (y, y')(0) = (C1, C2) and mu sin(sigma) is
/// the q == 0 comparison solution psi with psi(0) = 1, psi'(0) = 0.
double voc_residual(const PiecewiseFn& omega, const PiecewiseFn& q, double C1, double C2,
                    double lambda);

/// Adaptive Simpson quadrature (used for the G0 auxiliary integrals).
double adaptive_simpson(double (*f)(double, const void*), const void* ctx, double a, double b,
                        double abs_tol);

/// Spearman rank correlation; the no-upward-trend statistic of the lemma
/// certificates.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of y against x.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Geometric grid lo, ..., hi with the given number of points.
std::vector<double> geometric_grid(double lo, double hi, int points);

}  // namespace sl
