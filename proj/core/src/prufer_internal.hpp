#pragma once

#include <vector>

#include "sl/piecewise.hpp"

namespace sl::detail {

struct RKState {
    double theta = 0.0;
    double log_rho = 0.0;
    double gsin = 0.0;
    double gcos = 0.0;
};

struct RKSample {
    double x;
    RKState s;
};

// Adaptive Dormand-Prince 5(4) for the scaled Prufer system; when g is
// non-null the quadrature states gsin = int g sin(2 theta) and
// gcos = int g cos(2 theta) are carried along.  Mandatory step breaks at
// all coefficient breakpoints and at extra_nodes.  Returns the state at
// every accepted step (first entry is the initial state).
std::vector<RKSample> integrate_rk(const PiecewiseFn& omega, const PiecewiseFn& q,
                                   const PiecewiseFn* g, double lambda, double tol, double theta0,
                                   const std::vector<double>& extra_nodes);

}  // namespace sl::detail
