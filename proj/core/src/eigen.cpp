#include "sl/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sl {

namespace {

constexpr double kPi = std::numbers::pi;

// The scaled Prufer angle needs lambda > 0.  For lambda < 1 we evaluate in
// the shifted frame (q - c w, lambda - c) with c = lambda - 1; the solution
// y is identical and the sign of the miss distance is frame-independent.
double theta_end_shifted(const SLProblem& prob, double lambda, Backend backend, double rk_tol,
                         double& lambda_shifted) {
    if (lambda >= 1.0) {
        lambda_shifted = lambda;
        if (backend == Backend::transfer) return transfer_theta_end(prob, lambda);
        return integrate_prufer(prob, lambda, rk_tol).theta_end();
    }
    const double c = lambda - 1.0;
    lambda_shifted = 1.0;
    SLProblem shifted = prob.with_potential(lin_comb(1.0, prob.q, -c, prob.omega));
    if (backend == Backend::transfer) return transfer_theta_end(shifted, 1.0);
    return integrate_prufer(shifted, 1.0, rk_tol).theta_end();
}

double miss_impl(const SLProblem& prob, int n, double lambda, Backend backend, double rk_tol) {
    double ls;
    const double th = theta_end_shifted(prob, lambda, backend, rk_tol, ls);
    return th - target_angle(prob.beta, ls) - (n - 1) * kPi;
}

// Zeros of the shooting solution strictly inside (a,b), read off the
// terminal unwrapped angle with a guard that tolerates the converged
// boundary angle landing exactly on a multiple of pi.
int interior_zeros_from_theta(double theta_end, double gamma) {
    const double guard = std::min(1e-6, 0.5 * gamma);
    return std::max(0, static_cast<int>(std::ceil((theta_end - guard) / kPi)) - 1);
}

struct Bracket {
    double lo, hi, flo, fhi;
};

Bracket find_bracket(const SLProblem& prob, int n, Backend backend, double rk_tol,
                     double lo_hint, bool have_hint) {
    auto D = [&](double lam) { return miss_impl(prob, n, lam, backend, rk_tol); };

    // q/w floor: below min(q/w) the equation has no oscillation left.
    double floor_guess = prob.q.values()[0] / prob.omega.values()[0];
    for (std::size_t i = 0; i < prob.q.values().size(); ++i) {
        // q and omega may have different partitions; evaluate on q's pieces.
        const double mid = 0.5 * (prob.q.breakpoints()[i] + prob.q.breakpoints()[i + 1]);
        floor_guess = std::min(floor_guess, prob.q.values()[i] / prob.omega(mid));
    }

    double lo = have_hint ? lo_hint : floor_guess;
    double flo = D(lo);
    double step = std::max(1.0, std::abs(lo));
    int guard = 0;
    while (flo >= 0.0) {
        if (++guard > 200) throw std::runtime_error("eigenvalue: bracket failure (lower end)");
        lo -= step;
        step *= 2.0;
        flo = D(lo);
    }
    double hi = lo + std::max(1.0, std::abs(lo));
    double fhi = D(hi);
    step = hi - lo;
    guard = 0;
    while (fhi <= 0.0) {
        if (++guard > 200) {
            std::ostringstream ss;
            ss << "eigenvalue: bracket failure (upper end), n=" << n << " lo=" << lo
               << " hi=" << hi << " D(hi)=" << fhi;
            throw std::runtime_error(ss.str());
        }
        step *= 2.0;
        hi += step;
        fhi = D(hi);
    }
    return Bracket{lo, hi, flo, fhi};
}

double solve_bracketed(const SLProblem& prob, int n, double tol, Backend backend, double rk_tol,
                       Bracket br) {
    auto D = [&](double lam) { return miss_impl(prob, n, lam, backend, rk_tol); };
    double lo = br.lo, hi = br.hi, flo = br.flo, fhi = br.fhi;
    int side = 0;
    for (int iter = 0; iter < 500; ++iter) {
        if (hi - lo <= tol * std::max(1.0, std::abs(hi))) break;
        double x;
        if (iter % 8 == 7) {
            x = 0.5 * (lo + hi);  // periodic bisection safeguard
        } else {
            x = (lo * fhi - hi * flo) / (fhi - flo);
            if (!std::isfinite(x) || x <= lo || x >= hi) x = 0.5 * (lo + hi);
        }
        const double fx = D(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            lo = x;
            flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
    }
    return (lo * fhi - hi * flo) / (fhi - flo);
}

void check_eigenvalue(const SLProblem& prob, int n, double root, Backend backend, double rk_tol) {
    double ls;
    const double th = theta_end_shifted(prob, root, backend, rk_tol, ls);
    const double gamma = target_angle(prob.beta, ls);
    const int interior = interior_zeros_from_theta(th, gamma);
    if (interior != n - 1) {
        std::ostringstream ss;
        ss.precision(17);
        ss << "eigenvalue: oscillation count " << interior << " != " << (n - 1)
           << " at lambda=" << root << ", theta=" << th << ", gamma=" << gamma
           << " (unwrapping fault)";
        throw std::runtime_error(ss.str());
    }
    if (root <= 0.0) {
        // native double-check in the unshifted frame: boundary residual and
        // interior zero count of the transfer solution
        double y0, yp0;
        boundary_ray(prob.alpha, y0, yp0);
        TransferSolution sol = propagate_ivp(prob, root, y0, yp0);
        const double scale = std::max(std::abs(sol.y_end), std::abs(sol.yp_end));
        const double resid = sol.y_end * std::cos(prob.beta) + sol.yp_end * std::sin(prob.beta);
        if (std::abs(resid) > 1e-6 * std::max(1.0, scale))
            throw std::runtime_error("eigenvalue: boundary residual check failed for lambda <= 0");
        if (sol.interior_zero_count() != n - 1)
            throw std::runtime_error("eigenvalue: native zero count check failed for lambda <= 0");
    }
}

}  // namespace

double miss_distance(const SLProblem& prob, int n, double lambda, Backend backend, double rk_tol) {
    if (!prob.normal_form())
        throw std::invalid_argument("miss_distance: problem must be in normal form");
    if (n < 1) throw std::invalid_argument("miss_distance: index n must be >= 1");
    return miss_impl(prob, n, lambda, backend, rk_tol);
}

double eigenvalue(const SLProblem& prob, int n, double tol, Backend backend) {
    if (!prob.normal_form())
        throw std::invalid_argument("eigenvalue: problem must be in normal form");
    if (n < 1) throw std::invalid_argument("eigenvalue: index n must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("eigenvalue: tol must be positive");
    const double rk_tol = std::min(1e-10, tol);
    Bracket br = find_bracket(prob, n, backend, rk_tol, 0.0, false);
    const double root = solve_bracketed(prob, n, tol, backend, rk_tol, br);
    check_eigenvalue(prob, n, root, backend, rk_tol);
    return root;
}

Eigenpair eigenfunction_at(const SLProblem& prob, int n, double lambda_n) {
    double y0, yp0;
    boundary_ray(prob.alpha, y0, yp0);
    // pi/8 phase per segment: at least 8 samples per half-oscillation
    TransferSolution sol = propagate_ivp(prob, lambda_n, y0, yp0, 2, kPi / 8.0);

    const double norm2 = sol.weighted_square_integral(prob.omega);
    if (!(norm2 > 0.0)) throw std::runtime_error("eigenfunction: degenerate normalization");
    const double beta_n = 1.0 / std::sqrt(norm2);

    Eigenpair ep;
    ep.index = n;
    ep.lambda = lambda_n;
    ep.normalization_beta = beta_n;
    for (Segment& s : sol.segments) {
        s.y0 *= beta_n;
        s.yp0 *= beta_n;
    }
    sol.y_end *= beta_n;
    sol.yp_end *= beta_n;

    ep.xs.reserve(sol.segments.size() + 1);
    ep.phi.reserve(sol.segments.size() + 1);
    ep.phi_prime.reserve(sol.segments.size() + 1);
    ep.xs.push_back(prob.a());
    ep.phi.push_back(sol.segments.front().y0);
    ep.phi_prime.push_back(sol.segments.front().yp0);
    for (const Segment& s : sol.segments) {
        double y, yp;
        segment_eval(s, s.dx, y, yp);
        ep.xs.push_back(s.x0 + s.dx);
        ep.phi.push_back(y);
        ep.phi_prime.push_back(yp);
    }
    ep.sup_norm = sol.sup_abs();
    ep.oscillations = sol.interior_zero_count();
    ep.sol = std::move(sol);
    return ep;
}

Eigenpair eigenfunction(const SLProblem& prob, int n, double tol) {
    return eigenfunction_at(prob, n, eigenvalue(prob, n, tol));
}

std::vector<double> eigenvalues_up_to(const SLProblem& prob, int N, double tol) {
    if (N < 1) throw std::invalid_argument("eigenvalues_up_to: N must be >= 1");
    std::vector<double> out;
    out.reserve(N);
    const double rk_tol = std::min(1e-10, tol);
    for (int n = 1; n <= N; ++n) {
        Bracket br = find_bracket(prob, n, Backend::transfer, rk_tol,
                                  out.empty() ? 0.0 : out.back(), !out.empty());
        const double root = solve_bracketed(prob, n, tol, Backend::transfer, rk_tol, br);
        check_eigenvalue(prob, n, root, Backend::transfer, rk_tol);
        if (!out.empty() && !(root > out.back()))
            throw std::runtime_error("eigenvalues_up_to: ordering violation");
        out.push_back(root);
    }
    return out;
}

std::vector<Eigenpair> eigenpairs_up_to(const SLProblem& prob, int N, double tol) {
    std::vector<double> lambdas = eigenvalues_up_to(prob, N, tol);
    std::vector<Eigenpair> out;
    out.reserve(lambdas.size());
    for (int n = 1; n <= N; ++n) out.push_back(eigenfunction_at(prob, n, lambdas[n - 1]));
    return out;
}

}  // namespace sl
