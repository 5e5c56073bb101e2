#include "sl/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sl {

PiecewiseFn::PiecewiseFn(std::vector<double> breakpoints, std::vector<double> values)
    : bps_(std::move(breakpoints)), vals_(std::move(values)) {
    if (bps_.size() < 2)
        throw std::invalid_argument("PiecewiseFn: need at least two breakpoints");
    if (vals_.size() + 1 != bps_.size())
        throw std::invalid_argument("PiecewiseFn: values length must be breakpoints length - 1");
    for (std::size_t i = 0; i + 1 < bps_.size(); ++i) {
        if (!(bps_[i] < bps_[i + 1]))
            throw std::invalid_argument("PiecewiseFn: breakpoints must be strictly increasing");
    }
    for (double x : bps_)
        if (!std::isfinite(x)) throw std::invalid_argument("PiecewiseFn: non-finite breakpoint");
    for (double v : vals_)
        if (!std::isfinite(v)) throw std::invalid_argument("PiecewiseFn: non-finite value");
}

PiecewiseFn PiecewiseFn::constant(double a, double b, double value) {
    return PiecewiseFn({a, b}, {value});
}

std::size_t PiecewiseFn::piece_index(double x) const {
    if (x < bps_.front() || x > bps_.back())
        throw std::out_of_range("PiecewiseFn: evaluation outside [a,b]");
    if (x >= bps_[bps_.size() - 2]) return vals_.size() - 1;  // right-closed at b
    auto it = std::upper_bound(bps_.begin(), bps_.end(), x);
    return static_cast<std::size_t>(it - bps_.begin()) - 1;
}

double PiecewiseFn::operator()(double x) const { return vals_[piece_index(x)]; }

double PiecewiseFn::min_value() const { return *std::min_element(vals_.begin(), vals_.end()); }

double PiecewiseFn::max_value() const { return *std::max_element(vals_.begin(), vals_.end()); }

bool PiecewiseFn::strictly_positive() const { return min_value() > 0.0; }

PiecewiseFn PiecewiseFn::plus_scalar(double c) const {
    std::vector<double> v = vals_;
    for (double& x : v) x += c;
    return PiecewiseFn(bps_, std::move(v));
}

PiecewiseFn PiecewiseFn::scaled(double s) const {
    std::vector<double> v = vals_;
    for (double& x : v) x *= s;
    return PiecewiseFn(bps_, std::move(v));
}

double l1_norm(const PiecewiseFn& f) {
    const auto& bp = f.breakpoints();
    const auto& v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::abs(v[i]) * (bp[i + 1] - bp[i]);
    return s;
}

double integral(const PiecewiseFn& f) {
    const auto& bp = f.breakpoints();
    const auto& v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * (bp[i + 1] - bp[i]);
    return s;
}

double total_variation(const PiecewiseFn& f) {
    const auto& v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) s += std::abs(v[i + 1] - v[i]);
    return s;
}

HypothesisReport hypothesis_report(const PiecewiseFn& omega) {
    const auto& v = omega.values();
    bool nondec = true, noninc = true;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (v[i + 1] < v[i]) nondec = false;
        if (v[i + 1] > v[i]) noninc = false;
    }
    Monotonicity mono = Monotonicity::none;
    if (nondec)
        mono = Monotonicity::increasing;  // constants count as non-decreasing
    else if (noninc)
        mono = Monotonicity::decreasing;
    return HypothesisReport{mono, omega.min_value(), total_variation(omega), l1_norm(omega)};
}

std::vector<double> merged_breakpoints(const PiecewiseFn& f, const PiecewiseFn& g) {
    const double span = f.b() - f.a();
    const double fuse = 1e-14 * span;
    if (std::abs(f.a() - g.a()) > fuse || std::abs(f.b() - g.b()) > fuse)
        throw std::invalid_argument("merged_breakpoints: mismatched intervals");
    std::vector<double> all;
    all.reserve(f.breakpoints().size() + g.breakpoints().size());
    all.insert(all.end(), f.breakpoints().begin(), f.breakpoints().end());
    all.insert(all.end(), g.breakpoints().begin(), g.breakpoints().end());
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    out.push_back(f.a());
    for (double x : all) {
        if (x - out.back() > fuse) out.push_back(x);
    }
    out.back() = f.b();  // pin the right endpoint exactly
    return out;
}

PiecewiseFn resample(const PiecewiseFn& f, const std::vector<double>& breakpoints) {
    std::vector<double> vals;
    vals.reserve(breakpoints.size() - 1);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double mid = 0.5 * (breakpoints[i] + breakpoints[i + 1]);
        vals.push_back(f(std::clamp(mid, f.a(), f.b())));
    }
    return PiecewiseFn(breakpoints, std::move(vals));
}

PiecewiseFn lin_comb(double ca, const PiecewiseFn& f, double cb, const PiecewiseFn& g) {
    auto bps = merged_breakpoints(f, g);
    PiecewiseFn fr = resample(f, bps);
    PiecewiseFn gr = resample(g, bps);
    std::vector<double> vals(bps.size() - 1);
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = ca * fr.values()[i] + cb * gr.values()[i];
    return PiecewiseFn(std::move(bps), std::move(vals));
}

PiecewiseFn affine_combine(const PiecewiseFn& q1, const PiecewiseFn& q2, double t) {
    return lin_comb(1.0 - t, q1, t, q2);
}

}  // namespace sl
