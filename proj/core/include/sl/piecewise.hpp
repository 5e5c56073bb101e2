#pragma once

#include <cstddef>
#include <vector>

namespace sl {

/// Real-valued piecewise-constant function on a closed interval.
///
/// Stored as strictly increasing breakpoints x0 < x1 < ... < xm and piece
/// values v_i taken on [x_{i-1}, x_i); the last piece is right-closed at xm.
class PiecewiseFn {
public:
    PiecewiseFn(std::vector<double> breakpoints, std::vector<double> values);

    static PiecewiseFn constant(double a, double b, double value);

    double a() const { return bps_.front(); }
    double b() const { return bps_.back(); }
    std::size_t piece_count() const { return vals_.size(); }

    const std::vector<double>& breakpoints() const { return bps_; }
    const std::vector<double>& values() const { return vals_; }

    /// Evaluate at x in [a, b]; throws outside the interval.
    double operator()(double x) const;

    /// Index of the piece containing x (the last piece owns x = b).
    std::size_t piece_index(double x) const;

    double min_value() const;
    double max_value() const;
    bool strictly_positive() const;

    PiecewiseFn plus_scalar(double c) const;
    PiecewiseFn scaled(double s) const;

private:
    std::vector<double> bps_;
    std::vector<double> vals_;
};

/// Exact L1 norm: sum |v_i| (x_i - x_{i-1}).
double l1_norm(const PiecewiseFn& f);

/// Exact integral over [a, b].
double integral(const PiecewiseFn& f);

/// Total variation of the stored piece values: sum |v_{i+1} - v_i|.
double total_variation(const PiecewiseFn& f);

enum class Monotonicity { increasing, decreasing, none };

struct HypothesisReport {
    Monotonicity h1_monotone;
    double h2_essential_inf;
    double total_variation;
    double l1_norm;
};

/// Monotonicity / positivity / BV report for a weight function.
/// A constant function reports "increasing" (monotone non-decreasing).
HypothesisReport hypothesis_report(const PiecewiseFn& omega);

/// Merged breakpoint sequence of f and g; requires matching intervals.
/// Breakpoints closer than 1e-14*(b-a) are fused to avoid zero-width pieces.
std::vector<double> merged_breakpoints(const PiecewiseFn& f, const PiecewiseFn& g);

/// Same function re-expressed on a finer partition containing its breakpoints.
PiecewiseFn resample(const PiecewiseFn& f, const std::vector<double>& breakpoints);

/// ca*f + cb*g on the common refinement of breakpoints.
PiecewiseFn lin_comb(double ca, const PiecewiseFn& f, double cb, const PiecewiseFn& g);

/// q1 + t*(q2 - q1) on the common refinement; the potential path q_t.
PiecewiseFn affine_combine(const PiecewiseFn& q1, const PiecewiseFn& q2, double t);

}  // namespace sl
