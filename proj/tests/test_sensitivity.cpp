#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "sl/eigen.hpp"
#include "sl/piecewise.hpp"
#include "sl/problem.hpp"
#include "sl/sensitivity.hpp"

using sl::PiecewiseFn;

namespace {
sl::SLProblem normal(PiecewiseFn q, PiecewiseFn w, double alpha = 0.0, double beta = 0.0) {
    double a = q.a(), b = q.b();
    return sl::SLProblem(PiecewiseFn::constant(a, b, 1.0), std::move(q), std::move(w), alpha, beta);
}
}  // namespace

TEST_CASE("derivative functional closed forms") {
    SUBCASE("direction h = omega gives exactly 1") {
        std::mt19937_64 rng(67);
        for (int trial = 0; trial < 4; ++trial) {
            auto q = oracle::random_potential(rng, 0, 1, 4, 5.0);
            auto w = oracle::random_piecewise(rng, 0, 1, 3, 0.5, 2.5);
            auto prob = normal(q, w, 0.8, 0.0);
            for (int n : {1, 4}) {
                CHECK(sl::derivative_functional(prob, n, w) == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
    SUBCASE("unit weight, h == 1 gives 1") {
        auto prob = normal(PiecewiseFn({0, 0.3, 1}, {2.0, -1.0}), PiecewiseFn::constant(0, 1, 1));
        auto one = PiecewiseFn::constant(0, 1, 1);
        CHECK(sl::derivative_functional(prob, 2, one) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("half indicator on the ground state of the free problem") {
        // int_0^{1/2} 2 sin^2(pi x) dx = 1/2
        auto prob = normal(PiecewiseFn::constant(0, 1, 0), PiecewiseFn::constant(0, 1, 1));
        PiecewiseFn ind({0, 0.5, 1}, {1.0, 0.0});
        CHECK(sl::derivative_functional(prob, 1, ind) == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("zero direction gives 0") {
        auto prob = normal(PiecewiseFn::constant(0, 1, 0), PiecewiseFn::constant(0, 1, 1));
        CHECK(sl::derivative_functional(prob, 1, PiecewiseFn::constant(0, 1, 0)) == 0.0);
    }
}

TEST_CASE("fd derivative basics") {
    auto prob = normal(PiecewiseFn({0, 0.5, 1}, {3.0, -2.0}), PiecewiseFn::constant(0, 1, 1));
    auto one = PiecewiseFn::constant(0, 1, 1);
    // constant direction is an exact operator shift at any epsilon
    for (double eps : {1e-2, 1e-4}) {
        CHECK(sl::fd_derivative(prob, 2, one, eps) == doctest::Approx(1.0).epsilon(1e-7));
    }
    CHECK(sl::fd_derivative(prob, 1, PiecewiseFn::constant(0, 1, 0), 1e-3) == doctest::Approx(0.0));
}

TEST_CASE("fd matches the functional at second order") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 3; ++trial) {
        auto q = oracle::random_potential(rng, 0, 1, 4, 4.0);
        auto w = oracle::random_piecewise(rng, 0, 1, 3, 0.5, 2.0);
        auto prob = normal(q, w, 0.0, 0.6);
        // a localized direction with a healthy curvature response
        PiecewiseFn h({0, 0.2, 0.45, 1}, {4.0, -6.0, 1.5});
        int n = 1 + static_cast<int>(rng() % 5);
        double exact = sl::derivative_functional(prob, n, h);
        double e2 = std::abs(sl::fd_derivative(prob, n, h, 1e-2, 1e-13) - exact);
        double e3 = std::abs(sl::fd_derivative(prob, n, h, 1e-3, 1e-13) - exact);
        CHECK(e2 < 1e-2);
        // one decade of epsilon buys about two decades of error
        if (e3 > 1e-10)  // below that the solver tolerance dominates
            CHECK(e2 / e3 > 30.0);
    }
}

TEST_CASE("lipschitz report on a constant shift") {
    auto w = PiecewiseFn::constant(0, 1, 1);
    auto prob = normal(PiecewiseFn::constant(0, 1, 0), w);
    auto rep = sl::lipschitz_ratio(prob, PiecewiseFn::constant(0, 1, 0),
                                   PiecewiseFn::constant(0, 1, 2.5), 12);
    CHECK(rep.n_max == 12);
    for (double r : rep.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(rep.sup_ratio == doctest::Approx(1.0).epsilon(1e-7));
    // unit-weight Dirichlet problems have sup-norms near sqrt(2), so the
    // certificate m_hat^2 ~ 2 comfortably dominates the observed ratio 1
    CHECK(rep.m_hat >= 1.0);
    CHECK(rep.bound == doctest::Approx(rep.m_hat * rep.m_hat));
    CHECK(rep.pass);
}

TEST_CASE("lipschitz report is symmetric and rejects equal potentials") {
    std::mt19937_64 rng(73);
    auto w = oracle::random_monotone_weight(rng, 0, 1, 4, 0.6, 2.0);
    auto prob = normal(PiecewiseFn::constant(0, 1, 0), w);
    auto q1 = oracle::random_potential(rng, 0, 1, 4, 3.0);
    auto q2 = oracle::random_potential(rng, 0, 1, 5, 3.0);
    auto a = sl::lipschitz_ratio(prob, q1, q2, 8);
    auto b = sl::lipschitz_ratio(prob, q2, q1, 8);
    CHECK(a.sup_ratio == b.sup_ratio);
    for (int i = 0; i < 8; ++i) CHECK(a.ratios[i] == b.ratios[i]);
    CHECK_THROWS(sl::lipschitz_ratio(prob, q1, q1, 4));
}

TEST_CASE("path bound") {
    auto w = PiecewiseFn::constant(0, 1, 1);
    auto prob = normal(PiecewiseFn::constant(0, 1, 0), w);
    std::vector<double> tg{0.0, 0.25, 0.5, 0.75, 1.0};
    SUBCASE("constant difference: bound equals |c|") {
        auto q1 = PiecewiseFn::constant(0, 1, 1.0);
        auto q2 = PiecewiseFn::constant(0, 1, -1.5);
        for (int n : {1, 3}) {
            CHECK(sl::path_bound(prob, q1, q2, n, tg) == doctest::Approx(2.5).epsilon(1e-7));
        }
    }
    SUBCASE("zero difference gives 0") {
        auto q1 = PiecewiseFn::constant(0, 1, 1.0);
        CHECK(sl::path_bound(prob, q1, q1, 1, tg) == doctest::Approx(0.0));
    }
    SUBCASE("bump: the chain |dl| <= path_bound <= m_hat^2 ||dq||_1 holds") {
        auto q1 = PiecewiseFn::constant(0, 1, 0.0);
        PiecewiseFn q2({0, 0.45, 0.55, 1}, {0.0, 10.0, 0.0});  // mass 1 bump
        std::mt19937_64 rng(79);
        auto wmono = oracle::random_monotone_weight(rng, 0, 1, 3, 0.6, 1.8);
        auto probm = normal(PiecewiseFn::constant(0, 1, 0), wmono);
        for (int n : {1, 2, 6}) {
            double dl = std::abs(sl::eigenvalue(probm.with_potential(q2), n, 1e-10) -
                                 sl::eigenvalue(probm.with_potential(q1), n, 1e-10));
            double pb = sl::path_bound(probm, q1, q2, n, tg);
            CHECK(dl <= pb * 1.02);
            auto rep = sl::lipschitz_ratio(probm, q1, q2, n);
            CHECK(pb <= rep.m_hat * rep.m_hat * sl::l1_norm(sl::lin_comb(1, q2, -1, q1)) * 1.05);
        }
    }
}
