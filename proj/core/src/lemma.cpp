#include "sl/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "prufer_internal.hpp"

namespace sl {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_decreasing_nonneg(const PiecewiseFn& g) {
    const auto& v = g.values();
    if (v.back() < 0.0) return false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i + 1] > v[i]) return false;
    return true;
}

double simpson_rec(double (*f)(double, const void*), const void* ctx, double a, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm, ctx), frm = f(rm, ctx);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, ctx, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, ctx, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

struct AuxCtx {
    double g0, w0;
};

double aux_sin(double u, const void* ctx) {
    const auto* c = static_cast<const AuxCtx*>(ctx);
    const double cu = std::cos(u), su = std::sin(u);
    return c->g0 * std::sin(2.0 * u) / (cu * cu + c->w0 * su * su);
}

}  // namespace

double adaptive_simpson(double (*f)(double, const void*), const void* ctx, double a, double b,
                        double abs_tol) {
    const double fa = f(a, ctx), fb = f(b, ctx), fm = f(0.5 * (a + b), ctx);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, ctx, a, b, fa, fm, fb, whole, abs_tol, 48);
}

std::pair<double, double> oscillatory_integrals(const PiecewiseFn& omega, const PiecewiseFn& g,
                                                double lambda, double c, double theta0,
                                                double tol) {
    if (!(lambda > 0.0)) throw std::invalid_argument("oscillatory_integrals: lambda must be > 0");
    if (c < omega.a() || c > omega.b())
        throw std::invalid_argument("oscillatory_integrals: c outside the interval");
    if (c == omega.a()) return {0.0, 0.0};
    const PiecewiseFn q0 = PiecewiseFn::constant(omega.a(), omega.b(), 0.0);
    auto samples = detail::integrate_rk(omega, q0, &g, lambda, tol, theta0, {c});
    // c is a mandatory node; pick the accepted sample closest to it
    const auto* best = &samples.front();
    for (const auto& s : samples)
        if (std::abs(s.x - c) < std::abs(best->x - c)) best = &s;
    return {best->s.gsin, best->s.gcos};
}

std::pair<double, double> g0_bound(const PiecewiseFn& g, const PiecewiseFn& omega) {
    if (!is_decreasing_nonneg(g))
        throw std::invalid_argument("g0_bound: g must be decreasing and non-negative");
    const HypothesisReport rep = hypothesis_report(omega);
    if (rep.h1_monotone == Monotonicity::none)
        throw std::invalid_argument("g0_bound: omega must be monotone (H1)");
    if (!(rep.h2_essential_inf > 0.0))
        throw std::invalid_argument("g0_bound: omega must have positive infimum (H2)");

    // the bound reads g at its largest value and omega at its small end;
    // a decreasing weight is handled through the reflection t = 1 - x
    const double g0 = g.values().front();
    const double w0 = rep.h1_monotone == Monotonicity::increasing ? omega.values().front()
                                                                  : omega.values().back();
    if (g0 == 0.0) return {0.0, 0.0};

    const AuxCtx ctx{g0, w0};
    const double f0 = adaptive_simpson(aux_sin, &ctx, 0.0, kPi / 2.0, 1e-12);
    const double penalty = g0 / std::min(w0, 1.0);
    // The cosine ceiling |f(0)|/2 + (5 pi / 8) penalty is a valid envelope
    // only where the cosine integrand carries no secular mean, i.e. for a
    // unit weight; for general monotone weights the cosine integral settles
    // on a nonzero mean and only the sine ceiling is certified.
    return {0.5 * (f0 + kPi * penalty), 0.5 * (std::abs(f0) + 1.25 * kPi * penalty)};
}

HField h_field(const PiecewiseFn& omega, double lambda, double theta0, double tol) {
    if (!(lambda > 0.0)) throw std::invalid_argument("h_field: lambda must be positive");
    // with q == 0, H(x) = log rho(x) / rho(0) along the Prufer radius
    const PiecewiseFn q0 = PiecewiseFn::constant(omega.a(), omega.b(), 0.0);
    auto samples = detail::integrate_rk(omega, q0, nullptr, lambda, tol, theta0, {});
    HField out;
    out.xs.reserve(samples.size());
    out.values.reserve(samples.size());
    for (const auto& s : samples) {
        out.xs.push_back(s.x);
        out.values.push_back(s.s.log_rho);
        out.sup = std::max(out.sup, std::abs(s.s.log_rho));
    }
    return out;
}

double decay_fit(const DecaySeries& series) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < series.lambdas.size(); ++i) {
        if (std::abs(series.raw_values[i]) > 0.0) {
            lx.push_back(std::log(series.lambdas[i]));
            ly.push_back(std::log(std::abs(series.raw_values[i])));
        }
    }
    if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    return lsq_slope(lx, ly);
}

DecaySeries oscillatory_decay_series(const PiecewiseFn& omega, const PiecewiseFn& g, double c,
                                     double theta0, const std::vector<double>& lambdas,
                                     bool cosine, double tol) {
    DecaySeries ser;
    ser.lambdas = lambdas;
    for (double lam : lambdas) {
        auto [is, ic] = oscillatory_integrals(omega, g, lam, c, theta0, tol);
        const double raw = cosine ? ic : is;
        ser.raw_values.push_back(raw);
        ser.scaled_values.push_back(std::sqrt(lam) * std::abs(raw));
    }
    ser.fitted_slope = decay_fit(ser);
    return ser;
}

SupnormSweep supnorm_sweep(const SLProblem& prob_template,
                           const std::vector<PiecewiseFn>& potentials, int N, double tol) {
    if (potentials.empty()) throw std::invalid_argument("supnorm_sweep: no potentials");
    SupnormSweep out;
    out.per_n_max.assign(N, 0.0);
    for (const PiecewiseFn& q : potentials) {
        auto pairs = eigenpairs_up_to(prob_template.with_potential(q), N, tol);
        for (int i = 0; i < N; ++i)
            out.per_n_max[i] = std::max(out.per_n_max[i], pairs[i].sup_norm);
    }
    out.m_hat = *std::max_element(out.per_n_max.begin(), out.per_n_max.end());
    return out;
}

double voc_residual(const PiecewiseFn& omega, const PiecewiseFn& q, double C1, double C2,
                    double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("voc_residual: lambda must be positive");
    if (C1 == 0.0 && C2 == 0.0)
        throw std::invalid_argument("voc_residual: (C1, C2) must be non-zero");
    const double a = omega.a(), b = omega.b();
    const PiecewiseFn one = PiecewiseFn::constant(a, b, 1.0);
    const PiecewiseFn zero = PiecewiseFn::constant(a, b, 0.0);
    SLProblem full(one, q, omega, 0.0, 0.0);
    SLProblem free_prob(one, zero, omega, 0.0, 0.0);
    TransferSolution y = propagate_ivp(full, lambda, C1, C2);
    TransferSolution psi = propagate_ivp(free_prob, lambda, 1.0, 0.0);

    // dense comparison grid: ~16 points per half-oscillation
    const int npts =
        std::max(1024, static_cast<int>(std::ceil(16.0 * std::sqrt(lambda) * (b - a) / kPi)));
    double sup = 0.0;
    for (int i = 0; i <= npts; ++i) {
        const double x = a + (b - a) * i / npts;
        sup = std::max(sup, std::abs(y.eval(x) - C1 * psi.eval(x)));
    }
    return sup;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("spearman: bad input");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * (i + j) + 1.0;  // average rank for ties
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x), ry = ranks(y);
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("lsq_slope: bad input");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
    if (!(lo > 0.0 && hi > lo && points >= 2))
        throw std::invalid_argument("geometric_grid: bad parameters");
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    return out;
}

}  // namespace sl
