#pragma once

#include <vector>

#include "sl/prufer.hpp"
#include "sl/problem.hpp"

namespace sl {

enum class Backend { transfer, prufer_rk };

/// Indexed eigenpair of a normal-form problem.  phi is L2_w-normalized
/// (int w phi^2 = 1); sol carries the exact per-segment representation for
/// quadrature against piecewise-constant weights.
struct Eigenpair {
    int index = 0;
    double lambda = 0.0;
    std::vector<double> xs;
    std::vector<double> phi;
    std::vector<double> phi_prime;
    double normalization_beta = 0.0;
    double sup_norm = 0.0;
    int oscillations = 0;
    TransferSolution sol;
};

/// Shooting residual D(lambda) = theta(b; lambda) - gamma(beta; lambda)
/// - (n-1) pi, evaluated in a spectrally shifted frame when lambda <= 0.
/// D(lambda_n) = 0 characterizes the nth eigenvalue; the sign of D is
/// independent of the shift.
double miss_distance(const SLProblem& prob, int n, double lambda,
                     Backend backend = Backend::transfer, double rk_tol = 1e-10);

/// nth eigenvalue (n >= 1) by bracketing + safeguarded bisection/secant on
/// the miss distance; |error| <= tol * max(1, |lambda|).  The oscillation
/// count of the eigenfunction is verified to equal n-1.
double eigenvalue(const SLProblem& prob, int n, double tol = 1e-9,
                  Backend backend = Backend::transfer);

/// L2_w-normalized eigenfunction at the nth eigenvalue, sampled on a grid
/// with at least 8 points per half-oscillation.
Eigenpair eigenfunction(const SLProblem& prob, int n, double tol = 1e-9);

/// Eigenpair assembled at an externally computed eigenvalue.
Eigenpair eigenfunction_at(const SLProblem& prob, int n, double lambda_n);

/// First N eigenvalues, strictly increasing (asserted).
std::vector<double> eigenvalues_up_to(const SLProblem& prob, int N, double tol = 1e-9);

/// First N eigenpairs; eigenvalues share warm brackets, so this is the
/// preferred bulk entry point.
std::vector<Eigenpair> eigenpairs_up_to(const SLProblem& prob, int N, double tol = 1e-9);

}  // namespace sl
