#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "sl/eigen.hpp"
#include "sl/piecewise.hpp"
#include "sl/problem.hpp"

using sl::PiecewiseFn;

namespace {
sl::SLProblem normal(PiecewiseFn q, PiecewiseFn w, double alpha = 0.0, double beta = 0.0) {
    double a = q.a(), b = q.b();
    return sl::SLProblem(PiecewiseFn::constant(a, b, 1.0), std::move(q), std::move(w), alpha, beta);
}
sl::SLProblem free_particle(double alpha = 0.0, double beta = 0.0) {
    return normal(PiecewiseFn::constant(0, 1, 0), PiecewiseFn::constant(0, 1, 1), alpha, beta);
}
}  // namespace

TEST_CASE("miss distance closed forms") {
    auto prob = free_particle();
    CHECK(sl::miss_distance(prob, 1, M_PI * M_PI) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(sl::miss_distance(prob, 1, 4 * M_PI * M_PI) == doctest::Approx(M_PI).epsilon(1e-10));
}

TEST_CASE("miss distance sign flips across an oracle eigenvalue") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 5; ++i) {
        auto q = oracle::random_potential(rng, 0, 1, 4, 5.0);
        auto w = oracle::random_piecewise(rng, 0, 1, 3, 0.5, 2.0);
        auto prob = normal(q, w, 0.4, 2.0);
        int n = 1 + static_cast<int>(rng() % 6);
        double lam = oracle::eigenvalue_general(prob, n, 1e-8, 2000);
        CHECK(sl::miss_distance(prob, n, lam - 0.05) < 0);
        CHECK(sl::miss_distance(prob, n, lam + 0.05) > 0);
    }
}

TEST_CASE("dirichlet spectrum") {
    auto prob = free_particle();
    for (int n = 1; n <= 50; ++n) {
        double lam = sl::eigenvalue(prob, n, 1e-10);
        double exact = n * n * M_PI * M_PI;
        CHECK(lam == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("neumann spectrum includes lambda = 0") {
    auto prob = free_particle(M_PI_2, M_PI_2);
    auto lams = sl::eigenvalues_up_to(prob, 3, 1e-10);
    CHECK(std::abs(lams[0]) < 1e-9);
    CHECK(lams[1] == doctest::Approx(M_PI * M_PI).epsilon(1e-9));
    CHECK(lams[2] == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-9));
}

TEST_CASE("negative eigenvalues with a deep well") {
    // q = -60 on [0,1]: lambda_1 = pi^2 - 60 < 0
    auto prob = normal(PiecewiseFn::constant(0, 1, -60), PiecewiseFn::constant(0, 1, 1));
    CHECK(sl::eigenvalue(prob, 1, 1e-10) == doctest::Approx(M_PI * M_PI - 60).epsilon(1e-9));
    CHECK(sl::eigenvalue(prob, 2, 1e-10) == doctest::Approx(4 * M_PI * M_PI - 60).epsilon(1e-9));
}

TEST_CASE("shift covariance is exact") {
    std::mt19937_64 rng(47);
    auto q = oracle::random_potential(rng, 0, 1, 5, 8.0);
    auto prob = normal(q, PiecewiseFn::constant(0, 1, 1), 1.0, 0.3);
    for (double c : {-40.0, -5.0, 3.0, 100.0}) {
        auto shifted = prob.with_potential(q.plus_scalar(c));
        for (int n : {1, 3, 7}) {
            double l0 = sl::eigenvalue(prob, n, 1e-10);
            double l1 = sl::eigenvalue(shifted, n, 1e-10);
            CHECK(l1 - l0 == doctest::Approx(c).epsilon(1e-8));
        }
    }
}

TEST_CASE("piecewise potential against independent shooting oracle") {
    auto prob = normal(PiecewiseFn({0, 0.5, 1}, {20.0, -5.0}), PiecewiseFn::constant(0, 1, 1));
    double lam = sl::eigenvalue(prob, 1, 1e-10);
    double ref = oracle::eigenvalue_general(prob, 1, 1e-9, 4000);
    CHECK(lam == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("eigenfunction normalization, boundary residuals, oscillation count") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 4; ++trial) {
        auto q = oracle::random_potential(rng, 0, 1, 4, 6.0);
        auto w = oracle::random_piecewise(rng, 0, 1, 3, 0.5, 2.5);
        double alpha = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
        double beta = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
        auto prob = normal(q, w, alpha, beta);
        for (int n : {1, 2, 5, 9}) {
            auto pair = sl::eigenfunction(prob, n, 1e-10);
            CHECK(pair.sol.weighted_square_integral(w) == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(pair.oscillations == n - 1);
            double ra = std::abs(pair.phi.front() * std::cos(alpha) + pair.phi_prime.front() * std::sin(alpha));
            double rb = std::abs(pair.phi.back() * std::cos(beta) + pair.phi_prime.back() * std::sin(beta));
            CHECK(ra <= 1e-7 * pair.sup_norm);
            CHECK(rb <= 1e-7 * pair.sup_norm);
        }
    }
}

TEST_CASE("dirichlet eigenfunctions are sqrt(2) sin(n pi x)") {
    auto prob = free_particle();
    for (int n : {1, 2, 5}) {
        auto pair = sl::eigenfunction(prob, n, 1e-10);
        CHECK(pair.sup_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
        double sign = pair.phi[1] > 0 ? 1.0 : -1.0;  // phi is defined up to sign
        for (std::size_t i = 0; i < pair.xs.size(); ++i) {
            double expect = std::sqrt(2.0) * std::sin(n * M_PI * pair.xs[i]);
            CHECK(sign * pair.phi[i] == doctest::Approx(expect).epsilon(5e-8));
        }
    }
}

TEST_CASE("eigenfunction pointwise value against refined oracle") {
    auto prob = normal(PiecewiseFn({0, 0.5, 1}, {10.0, 0.0}), PiecewiseFn({0, 0.25, 1}, {1.0, 2.0}));
    auto pair = sl::eigenfunction(prob, 3, 1e-11);
    // oracle: dense shooting at the converged eigenvalue, normalized by a
    // dense trapezoid of w y^2
    double y0, yp0;
    sl::boundary_ray(prob.alpha, y0, yp0);
    const int N = 200001;
    std::vector<double> xs(N), wy2(N);
    std::vector<double> yv(N);
    {
        // re-run the oracle integrator storing the path
        double y = y0, u = yp0;
        double h = 1.0 / (N - 1);
        for (int i = 0; i < N; ++i) {
            xs[i] = i * h;
            yv[i] = y;
            wy2[i] = prob.omega(xs[i]) * y * y;
            if (i + 1 < N) {
                double mid = xs[i] + 0.5 * h;
                double qv = prob.q(std::min(mid, 1.0)), wv = prob.omega(std::min(mid, 1.0));
                auto f = [&](double yy, double uu, double& dy, double& du) {
                    dy = uu;
                    du = (qv - pair.lambda * wv) * yy;
                };
                double k1y, k1u, k2y, k2u, k3y, k3u, k4y, k4u;
                f(y, u, k1y, k1u);
                f(y + 0.5 * h * k1y, u + 0.5 * h * k1u, k2y, k2u);
                f(y + 0.5 * h * k2y, u + 0.5 * h * k2u, k3y, k3u);
                f(y + h * k3y, u + h * k3u, k4y, k4u);
                y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
                u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
            }
        }
    }
    double nrm = std::sqrt(oracle::trapezoid(xs, wy2));
    double ref_at_037 = yv[static_cast<int>(0.37 * (N - 1) + 0.5)] / nrm;
    double got = pair.sol.eval(0.37);  // sol already carries the normalization
    CHECK(got == doctest::Approx(ref_at_037).epsilon(1e-6));
}

TEST_CASE("eigenvalues_up_to is strictly increasing with Weyl growth") {
    auto prob = free_particle();
    auto lams = sl::eigenvalues_up_to(prob, 30, 1e-10);
    for (std::size_t i = 0; i + 1 < lams.size(); ++i) CHECK(lams[i + 1] > lams[i]);
    CHECK(lams[29] > lams[0] + 0.9 * M_PI * M_PI * (30 * 30 - 1));
}

TEST_CASE("liouville invariance of eigenvalues") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 3; ++trial) {
        auto p = oracle::random_piecewise(rng, 0, 1, 4, 0.5, 4.0);
        auto q = oracle::random_potential(rng, 0, 1, 3, 4.0);
        auto w = oracle::random_piecewise(rng, 0, 1, 3, 0.5, 2.0);
        sl::SLProblem prob(p, q, w, 0.9, 0.0);
        auto t = sl::liouville_transform(prob);
        for (int n : {1, 2, 6}) {
            double lam = sl::eigenvalue(t, n, 1e-10);
            double direct = oracle::eigenvalue_general(prob, n, 1e-8, 3000);
            CHECK(lam == doctest::Approx(direct).epsilon(1e-6));
        }
    }
}

TEST_CASE("backend agreement on eigenvalues") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 3; ++trial) {
        auto q = oracle::random_potential(rng, 0, 1, 4, 5.0);
        auto w = oracle::random_piecewise(rng, 0, 1, 3, 0.5, 2.0);
        auto prob = normal(q, w, 0.0, 1.2);
        for (int n : {1, 4, 10}) {
            double l1 = sl::eigenvalue(prob, n, 1e-9, sl::Backend::transfer);
            double l2 = sl::eigenvalue(prob, n, 1e-9, sl::Backend::prufer_rk);
            CHECK(std::abs(l1 - l2) <= 100 * 1e-9 * std::max(1.0, std::abs(l1)));
        }
    }
}

TEST_CASE("invalid index is rejected") {
    auto prob = free_particle();
    CHECK_THROWS(sl::eigenvalue(prob, 0, 1e-9));
    CHECK_THROWS(sl::miss_distance(prob, -1, 10.0));
}
