#include "sl/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "prufer_internal.hpp"

namespace sl {

namespace {

constexpr double kPi = std::numbers::pi;

// x - sin(x), stable for small x.
double x_minus_sin(double x) {
    if (std::abs(x) < 1e-3) {
        const double x2 = x * x;
        return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return x - std::sin(x);
}

// sinh(x) - x, stable for small x.
double sinh_minus_x(double x) {
    if (std::abs(x) < 1e-3) {
        const double x2 = x * x;
        return x * x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
    }
    return std::sinh(x) - x;
}

// Angle of (sqrt(lambda) y, y') reduced to [0, pi).
double mod_pi_angle(double sqrt_lambda, double y, double yp) {
    double a = std::atan2(sqrt_lambda * y, yp);
    if (a < 0.0) a += kPi;
    if (a >= kPi) {
        // atan2 lands on pi in two ways.  y == +-0 with yp < 0 is a genuine
        // zero: the crossing counter has registered it, so the reduced angle
        // restarts at 0.  Otherwise pi - eps rounded up for a tiny nonzero y
        // whose crossing has not been counted yet: stay just below pi rather
        // than wrap a whole half-turn down.
        a = (y == 0.0) ? 0.0 : std::nextafter(kPi, 0.0);
    }
    return a;
}

}  // namespace

void boundary_ray(double alpha, double& y, double& yp) {
    if (alpha == 0.0) {
        y = 0.0;
        yp = 1.0;
    } else {
        y = std::sin(alpha);
        yp = -std::cos(alpha);
    }
}

double initial_angle(double alpha, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("initial_angle: lambda must be positive");
    if (!(alpha >= 0.0 && alpha < kPi)) throw std::invalid_argument("initial_angle: alpha outside [0,pi)");
    if (alpha == 0.0) return 0.0;
    return std::atan2(std::sqrt(lambda) * std::sin(alpha), -std::cos(alpha));
}

double target_angle(double beta, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("target_angle: lambda must be positive");
    if (!(beta >= 0.0 && beta < kPi)) throw std::invalid_argument("target_angle: beta outside [0,pi)");
    if (beta == 0.0) return kPi;
    return std::atan2(std::sqrt(lambda) * std::sin(beta), -std::cos(beta));
}

void segment_advance(double k2, double dx, double& y, double& yp) {
    const double u2 = k2 * dx * dx;
    if (std::abs(u2) < 1e-12) {
        // k ~ 0: second-order series in k2 keeps relative error below 1e-24.
        const double y1 = y * (1.0 - u2 / 2.0) + yp * dx * (1.0 - u2 / 6.0);
        const double yp1 = -y * k2 * dx * (1.0 - u2 / 6.0) + yp * (1.0 - u2 / 2.0);
        y = y1;
        yp = yp1;
    } else if (k2 > 0.0) {
        const double k = std::sqrt(k2);
        const double c = std::cos(k * dx), s = std::sin(k * dx);
        const double y1 = y * c + yp * s / k;
        const double yp1 = -y * k * s + yp * c;
        y = y1;
        yp = yp1;
    } else {
        const double kk = std::sqrt(-k2);
        const double c = std::cosh(kk * dx), s = std::sinh(kk * dx);
        const double y1 = y * c + yp * s / kk;
        const double yp1 = y * kk * s + yp * c;
        y = y1;
        yp = yp1;
    }
}

void segment_eval(const Segment& s, double x, double& y, double& yp) {
    y = s.y0;
    yp = s.yp0;
    segment_advance(s.k2, x, y, yp);
}

double segment_square_integral(const Segment& s) {
    const double d = s.dx, y0 = s.y0, yp0 = s.yp0, k2 = s.k2;
    const double u2 = k2 * d * d;
    if (std::abs(u2) < 1e-12) {
        return y0 * y0 * d + y0 * yp0 * d * d + yp0 * yp0 * d * d * d / 3.0;
    }
    if (k2 > 0.0) {
        const double k = std::sqrt(k2);
        const double u = k * d;
        const double su = std::sin(u);
        const double icc = d / 2.0 + std::sin(2.0 * u) / (4.0 * k);
        const double iss = x_minus_sin(2.0 * u) / (4.0 * k);
        return y0 * y0 * icc + y0 * yp0 * su * su / k2 + yp0 * yp0 / k2 * iss;
    }
    const double kk = std::sqrt(-k2);
    const double u = kk * d;
    const double su = std::sinh(u);
    const double icc = d / 2.0 + std::sinh(2.0 * u) / (4.0 * kk);
    const double iss = sinh_minus_x(2.0 * u) / (4.0 * kk);
    return y0 * y0 * icc + y0 * yp0 * su * su / (kk * kk) + yp0 * yp0 / (kk * kk) * iss;
}

double segment_max_abs(const Segment& s) {
    double ya, yb;
    segment_eval(s, 0.0, ya, yb);
    double m = std::abs(s.y0);
    double ye, ype;
    segment_eval(s, s.dx, ye, ype);
    m = std::max(m, std::abs(ye));
    const double u2 = s.k2 * s.dx * s.dx;
    if (std::abs(u2) < 1e-12) return m;  // essentially linear
    if (s.k2 > 0.0) {
        const double k = std::sqrt(s.k2);
        // y = R cos(k x - delta); extrema where k x = delta + m pi
        const double delta = std::atan2(s.yp0 / k, s.y0);
        const double u = k * s.dx;
        const double R = std::hypot(s.y0, s.yp0 / k);
        const int m_lo = static_cast<int>(std::ceil(-delta / kPi));
        const int m_hi = static_cast<int>(std::floor((u - delta) / kPi));
        if (m_lo <= m_hi) m = std::max(m, R);
        return m;
    }
    const double kk = std::sqrt(-s.k2);
    // y' = kk (y0 sinh + yp0/kk cosh); critical point where tanh(kk x) = -yp0/(kk y0)
    if (s.y0 != 0.0) {
        const double t = -s.yp0 / (kk * s.y0);
        if (t > 0.0 && t < 1.0) {
            const double xc = std::atanh(t) / kk;
            if (xc > 0.0 && xc < s.dx) {
                double yc, ypc;
                segment_eval(s, xc, yc, ypc);
                m = std::max(m, std::abs(yc));
            }
        }
    }
    return m;
}

int TransferSolution::interior_zero_count() const {
    int count = 0;
    bool last_crossing = false;
    double yl = segments.front().y0;
    for (const Segment& s : segments) {
        double yr, ypr;
        segment_eval(s, s.dx, yr, ypr);
        bool crossed = false;
        if (yr == 0.0)
            crossed = true;
        else if (yl != 0.0 && yl * yr < 0.0)
            crossed = true;
        if (crossed) ++count;
        last_crossing = crossed;
        yl = yr;
    }
    // a terminal zero (up to roundoff) is a boundary zero, not interior
    if (last_crossing && std::abs(y_end) <= 1e-7 * sup_abs()) --count;
    return count;
}

double TransferSolution::eval(double x) const {
    double y, yp;
    const Segment& s = segments[std::min(
        segments.size() - 1,
        static_cast<std::size_t>(
            std::upper_bound(segments.begin(), segments.end(), x,
                             [](double v, const Segment& seg) { return v < seg.x0; }) -
            segments.begin()) -
            1)];
    segment_eval(s, std::clamp(x - s.x0, 0.0, s.dx), y, yp);
    return y;
}

double TransferSolution::eval_derivative(double x) const {
    double y, yp;
    const Segment& s = segments[std::min(
        segments.size() - 1,
        static_cast<std::size_t>(
            std::upper_bound(segments.begin(), segments.end(), x,
                             [](double v, const Segment& seg) { return v < seg.x0; }) -
            segments.begin()) -
            1)];
    segment_eval(s, std::clamp(x - s.x0, 0.0, s.dx), y, yp);
    return yp;
}

double TransferSolution::sup_abs() const {
    double m = 0.0;
    for (const Segment& s : segments) m = std::max(m, segment_max_abs(s));
    return m;
}

double TransferSolution::weighted_square_integral(const PiecewiseFn& f) const {
    const auto& fb = f.breakpoints();
    double total = 0.0;
    for (const Segment& s : segments) {
        const double xl = s.x0, xr = s.x0 + s.dx;
        // split the segment at f breakpoints falling strictly inside
        auto lo = std::upper_bound(fb.begin(), fb.end(), xl);
        double y = s.y0, yp = s.yp0, x = xl;
        auto flush = [&](double xnext) {
            if (xnext <= x) return;
            const double fv = f(std::clamp(0.5 * (x + xnext), f.a(), f.b()));
            total += fv * segment_square_integral(Segment{x, xnext - x, s.k2, y, yp});
            segment_advance(s.k2, xnext - x, y, yp);
            x = xnext;
        };
        for (auto it = lo; it != fb.end() && *it < xr; ++it) flush(*it);
        flush(xr);
    }
    return total;
}

TransferSolution propagate_ivp(const SLProblem& prob, double lambda, double y0, double yp0,
                               int n_sub, double max_k_dx) {
    if (!prob.normal_form())
        throw std::invalid_argument("propagate_ivp: problem must be in normal form (p == 1)");
    if (n_sub < 1) throw std::invalid_argument("propagate_ivp: n_sub must be >= 1");
    const auto bps = merged_breakpoints(prob.q, prob.omega);
    const PiecewiseFn qr = resample(prob.q, bps);
    const PiecewiseFn wr = resample(prob.omega, bps);

    TransferSolution out;
    out.lambda = lambda;
    double y = y0, yp = yp0;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double piece_dx = bps[i + 1] - bps[i];
        const double k2 = lambda * wr.values()[i] - qr.values()[i];
        const double kabs = std::sqrt(std::abs(k2));
        int n = n_sub;
        if (kabs * piece_dx > max_k_dx * n)
            n = static_cast<int>(std::ceil(kabs * piece_dx / max_k_dx));
        const double dx = piece_dx / n;
        for (int j = 0; j < n; ++j) {
            const double xl = bps[i] + j * dx;
            out.segments.push_back(Segment{xl, dx, k2, y, yp});
            const double yl = y;
            segment_advance(k2, dx, y, yp);
            if (y == 0.0)
                ++out.zero_count;
            else if (yl != 0.0 && yl * y < 0.0)
                ++out.zero_count;
        }
    }
    out.y_end = y;
    out.yp_end = yp;
    return out;
}

PruferTrajectory propagate_transfer(const SLProblem& prob, double lambda, int n_sub) {
    double y0, yp0;
    boundary_ray(prob.alpha, y0, yp0);
    TransferSolution sol = propagate_ivp(prob, lambda, y0, yp0, n_sub);

    PruferTrajectory traj;
    traj.lambda = lambda;
    traj.oscillation_count = sol.zero_count;
    const bool have_theta = lambda > 0.0;
    const double sl_ = have_theta ? std::sqrt(lambda) : 0.0;

    traj.xs.reserve(sol.segments.size() + 1);
    traj.y.reserve(sol.segments.size() + 1);
    traj.yp.reserve(sol.segments.size() + 1);
    int z = 0;
    double yl = y0;
    auto push = [&](double x, double y, double yp) {
        traj.xs.push_back(x);
        traj.y.push_back(y);
        traj.yp.push_back(yp);
        if (have_theta) {
            traj.theta.push_back(z * kPi + mod_pi_angle(sl_, y, yp));
            traj.log_rho.push_back(0.5 * std::log(lambda * y * y + yp * yp));
        }
    };
    push(prob.a(), y0, yp0);
    for (const Segment& s : sol.segments) {
        double y, yp;
        segment_eval(s, s.dx, y, yp);
        if (y == 0.0)
            ++z;
        else if (yl != 0.0 && yl * y < 0.0)
            ++z;
        yl = y;
        push(s.x0 + s.dx, y, yp);
    }
    if (have_theta) {
        // log_rho relative to the left endpoint
        const double lr0 = traj.log_rho.front();
        for (double& v : traj.log_rho) v -= lr0;
    }
    return traj;
}

double transfer_theta_end(const SLProblem& prob, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("transfer_theta_end: lambda must be positive");
    double y0, yp0;
    boundary_ray(prob.alpha, y0, yp0);
    TransferSolution sol = propagate_ivp(prob, lambda, y0, yp0);
    return sol.zero_count * kPi + mod_pi_angle(std::sqrt(lambda), sol.y_end, sol.yp_end);
}

// ---------------------------------------------------------------------------
// Adaptive Dormand-Prince 5(4) for the Prufer system (plus optional
// oscillatory-integral states used by the lemma experiments).
// ---------------------------------------------------------------------------

namespace detail {

std::vector<RKSample> integrate_rk(const PiecewiseFn& omega, const PiecewiseFn& q,
                                   const PiecewiseFn* g, double lambda, double tol, double theta0,
                                   const std::vector<double>& extra_nodes) {
    if (!(lambda > 0.0)) throw std::invalid_argument("integrate_prufer: lambda must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_prufer: tol must be positive");

    const double sl_ = std::sqrt(lambda);
    std::vector<double> nodes = omega.breakpoints();
    nodes.insert(nodes.end(), q.breakpoints().begin(), q.breakpoints().end());
    if (g) nodes.insert(nodes.end(), g->breakpoints().begin(), g->breakpoints().end());
    nodes.insert(nodes.end(), extra_nodes.begin(), extra_nodes.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [&](double u, double v) { return v - u < 1e-15; }),
                nodes.end());

    std::vector<RKSample> out;
    RKState st;
    st.theta = theta0;
    out.push_back({nodes.front(), st});

    const int ns = g ? 4 : 2;
    double h = std::min(0.1 / sl_, nodes[1] - nodes[0]);

    for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg) {
        const double xl = nodes[seg], xr = nodes[seg + 1];
        const double wv = omega(std::clamp(0.5 * (xl + xr), omega.a(), omega.b()));
        const double qv = q(std::clamp(0.5 * (xl + xr), q.a(), q.b()));
        const double gv = g ? (*g)(std::clamp(0.5 * (xl + xr), g->a(), g->b())) : 0.0;

        auto rhs = [&](const double* v, double* d) {
            const double c = std::cos(v[0]), s = std::sin(v[0]);
            const double s2 = std::sin(2.0 * v[0]);
            d[0] = sl_ * (c * c + wv * s * s) - (qv / sl_) * s * s;
            d[1] = 0.5 * sl_ * (1.0 - wv + qv / lambda) * s2;
            if (ns == 4) {
                d[2] = gv * s2;
                d[3] = gv * std::cos(2.0 * v[0]);
            }
        };

        double x = xl;
        double v[4] = {st.theta, st.log_rho, st.gsin, st.gcos};
        while (x < xr) {
            // snap to the node once the gap is below resolution; otherwise
            // x += h can stall when h underflows against x's ulp
            if (xr - x <= 1e-14 * std::max(1.0, std::abs(xr))) {
                x = xr;
                out.push_back({x, st});
                break;
            }
            h = std::min(h, xr - x);
            // Dormand-Prince 5(4) tableau
            static const double a21 = 1.0 / 5;
            static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
            static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
            static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
            static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
            static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
            static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                                e4 = 125.0 / 192 - 393.0 / 640,
                                e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                                e7 = -1.0 / 40;

            double k1[4], k2[4], k3[4], k4[4], k5[4], k6[4], k7[4], tmp[4], y5[4];
            rhs(v, k1);
            for (int i = 0; i < ns; ++i) tmp[i] = v[i] + h * a21 * k1[i];
            rhs(tmp, k2);
            for (int i = 0; i < ns; ++i) tmp[i] = v[i] + h * (a31 * k1[i] + a32 * k2[i]);
            rhs(tmp, k3);
            for (int i = 0; i < ns; ++i)
                tmp[i] = v[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            rhs(tmp, k4);
            for (int i = 0; i < ns; ++i)
                tmp[i] = v[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            rhs(tmp, k5);
            for (int i = 0; i < ns; ++i)
                tmp[i] = v[i] +
                         h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            rhs(tmp, k6);
            for (int i = 0; i < ns; ++i)
                y5[i] = v[i] +
                        h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            rhs(y5, k7);

            double err = 0.0;
            for (int i = 0; i < ns; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
                err = std::max(err, std::abs(e));
            }
            const double budget = tol * h;
            if (err <= budget || h <= 1e-14 * std::max(1.0, std::abs(x))) {
                x += h;
                for (int i = 0; i < ns; ++i) v[i] = y5[i];
                st.theta = v[0];
                st.log_rho = v[1];
                st.gsin = v[2];
                st.gcos = v[3];
                out.push_back({x, st});
            }
            const double factor =
                err > 0.0 ? 0.9 * std::pow(budget / err, 0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        }
        st.theta = v[0];
        st.log_rho = v[1];
        st.gsin = v[2];
        st.gcos = v[3];
    }
    return out;
}

}  // namespace detail

PruferTrajectory integrate_prufer(const SLProblem& prob, double lambda, double tol) {
    return integrate_prufer(prob, lambda, tol, initial_angle(prob.alpha, lambda));
}

PruferTrajectory integrate_prufer(const SLProblem& prob, double lambda, double tol, double theta0) {
    if (!prob.normal_form())
        throw std::invalid_argument("integrate_prufer: problem must be in normal form (p == 1)");
    auto samples = detail::integrate_rk(prob.omega, prob.q, nullptr, lambda, tol, theta0, {});
    PruferTrajectory traj;
    traj.lambda = lambda;
    traj.xs.reserve(samples.size());
    traj.theta.reserve(samples.size());
    traj.log_rho.reserve(samples.size());
    for (const auto& s : samples) {
        traj.xs.push_back(s.x);
        traj.theta.push_back(s.s.theta);
        traj.log_rho.push_back(s.s.log_rho);
    }
    // zeros of y in (a,b]: multiples of pi crossed by theta
    const double th0 = traj.theta.front(), th1 = traj.theta.back();
    traj.oscillation_count = std::max(
        0, static_cast<int>(std::floor(th1 / kPi)) - static_cast<int>(std::floor(th0 / kPi)));
    return traj;
}

FundamentalPair fundamental_pair(const PiecewiseFn& omega, double lambda, int n_sub) {
    if (!(lambda > 0.0)) throw std::invalid_argument("fundamental_pair: lambda must be positive");
    const double a = omega.a(), b = omega.b();
    SLProblem prob(PiecewiseFn::constant(a, b, 1.0), PiecewiseFn::constant(a, b, 0.0), omega, 0.0,
                   0.0);
    if (std::abs(a) > 1e-14)
        throw std::invalid_argument("fundamental_pair: omega must live on [0, c]");
    TransferSolution sphi = propagate_ivp(prob, lambda, 0.0, 1.0, n_sub);
    TransferSolution spsi = propagate_ivp(prob, lambda, 1.0, 0.0, n_sub);

    const double sl_ = std::sqrt(lambda);
    FundamentalPair fp;
    fp.lambda = lambda;
    const std::size_t m = sphi.segments.size();
    fp.xs.reserve(m + 1);
    int zphi = 0, zpsi = 0;
    double phil = 0.0, psil = 1.0;
    auto push = [&](double x, double phi, double phip, double psi, double psip) {
        fp.xs.push_back(x);
        fp.phi.push_back(phi);
        fp.phi_p.push_back(phip);
        fp.psi.push_back(psi);
        fp.psi_p.push_back(psip);
        fp.r.push_back(std::hypot(sl_ * phi, phip));
        fp.nu.push_back(zphi * kPi + mod_pi_angle(sl_, phi, phip));
        fp.mu.push_back(std::hypot(sl_ * psi, psip) / sl_);
        fp.sigma.push_back(zpsi * kPi + mod_pi_angle(sl_, psi, psip));
    };
    push(a, 0.0, 1.0, 1.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double phi, phip, psi, psip;
        segment_eval(sphi.segments[i], sphi.segments[i].dx, phi, phip);
        segment_eval(spsi.segments[i], spsi.segments[i].dx, psi, psip);
        if (phi == 0.0 || (phil != 0.0 && phil * phi < 0.0)) ++zphi;
        if (psi == 0.0 || (psil != 0.0 && psil * psi < 0.0)) ++zpsi;
        phil = phi;
        psil = psi;
        push(sphi.segments[i].x0 + sphi.segments[i].dx, phi, phip, psi, psip);
    }
    return fp;
}

}  // namespace sl
