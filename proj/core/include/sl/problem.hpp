#pragma once

#include <string>

#include "sl/piecewise.hpp"

namespace sl {

/// Regular Sturm-Liouville problem -(p y')' + q y = lambda w y on [a,b]
/// with separated boundary conditions
///   y(a) cos(alpha) + (p y')(a) sin(alpha) = 0,
///   y(b) cos(beta)  + (p y')(b) sin(beta)  = 0,
/// alpha, beta in [0, pi).
struct SLProblem {
    PiecewiseFn p;
    PiecewiseFn q;
    PiecewiseFn omega;
    double alpha;
    double beta;

    SLProblem(PiecewiseFn p_, PiecewiseFn q_, PiecewiseFn omega_, double alpha_, double beta_);

    double a() const { return p.a(); }
    double b() const { return p.b(); }

    /// p identically 1 (all piece values) and left endpoint at 0.
    bool normal_form() const;

    /// Same interval/angles/p/omega with the potential replaced.
    SLProblem with_potential(PiecewiseFn new_q) const;
};

/// Liouville change of variable s = int_a^x 1/p: maps the problem to normal
/// form on [0, c], c = int_a^b 1/p, with p~ = 1, q~ = p q, w~ = p w and the
/// same boundary angles. Eigenvalues are preserved.
SLProblem liouville_transform(const SLProblem& prob);

/// JSON (de)serialization of the problem file schema:
/// { "interval": [a,b], "alpha": .., "beta": ..,
///   "p"|"q"|"omega": { "breakpoints": [...], "values": [...] } }
/// binary64 values round-trip exactly.
SLProblem problem_from_json(const std::string& text);
std::string problem_to_json(const SLProblem& prob);

SLProblem load_problem(const std::string& path);
void save_problem(const SLProblem& prob, const std::string& path);

/// Standalone piecewise-function files: { "breakpoints": [...], "values": [...] }.
PiecewiseFn piecewise_from_json(const std::string& text);
std::string piecewise_to_json(const PiecewiseFn& f);
PiecewiseFn load_piecewise(const std::string& path);

}  // namespace sl
