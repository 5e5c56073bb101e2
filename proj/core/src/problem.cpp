#include "sl/problem.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sl {

namespace {
constexpr double kPi = std::numbers::pi;
}

SLProblem::SLProblem(PiecewiseFn p_, PiecewiseFn q_, PiecewiseFn omega_, double alpha_, double beta_)
    : p(std::move(p_)), q(std::move(q_)), omega(std::move(omega_)), alpha(alpha_), beta(beta_) {
    const double span = p.b() - p.a();
    const double fuse = 1e-12 * std::max(1.0, std::abs(span));
    if (std::abs(q.a() - p.a()) > fuse || std::abs(q.b() - p.b()) > fuse ||
        std::abs(omega.a() - p.a()) > fuse || std::abs(omega.b() - p.b()) > fuse)
        throw std::invalid_argument("SLProblem: p, q, omega must share the interval");
    if (!p.strictly_positive()) throw std::invalid_argument("SLProblem: p must be positive");
    if (!omega.strictly_positive()) throw std::invalid_argument("SLProblem: omega must be positive");
    if (!(alpha >= 0.0 && alpha < kPi)) throw std::invalid_argument("SLProblem: alpha outside [0,pi)");
    if (!(beta >= 0.0 && beta < kPi)) throw std::invalid_argument("SLProblem: beta outside [0,pi)");
}

bool SLProblem::normal_form() const {
    if (std::abs(a()) > 1e-14) return false;
    for (double v : p.values())
        if (std::abs(v - 1.0) > 1e-12) return false;
    return true;
}

SLProblem SLProblem::with_potential(PiecewiseFn new_q) const {
    return SLProblem(p, std::move(new_q), omega, alpha, beta);
}

SLProblem liouville_transform(const SLProblem& prob) {
    // Work on the common refinement of p, q, omega breakpoints.
    auto bps = merged_breakpoints(prob.p, prob.q);
    PiecewiseFn pr = resample(prob.p, bps);
    {
        PiecewiseFn tmp(bps, std::vector<double>(bps.size() - 1, 0.0));
        bps = merged_breakpoints(tmp, prob.omega);
    }
    pr = resample(prob.p, bps);
    PiecewiseFn qr = resample(prob.q, bps);
    PiecewiseFn wr = resample(prob.omega, bps);

    const std::size_t m = pr.piece_count();
    std::vector<double> s(m + 1), qt(m), wt(m);
    s[0] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double pv = pr.values()[i];
        if (!(pv > 0.0)) throw std::invalid_argument("liouville_transform: non-positive p piece");
        const double dx = bps[i + 1] - bps[i];
        s[i + 1] = s[i] + dx / pv;
        qt[i] = pv * qr.values()[i];
        wt[i] = pv * wr.values()[i];
    }
    const double c = s[m];
    PiecewiseFn pt = PiecewiseFn::constant(0.0, c, 1.0);
    return SLProblem(std::move(pt), PiecewiseFn(s, std::move(qt)), PiecewiseFn(s, std::move(wt)),
                     prob.alpha, prob.beta);
}

namespace {

nlohmann::json pw_to_json_obj(const PiecewiseFn& f) {
    return nlohmann::json{{"breakpoints", f.breakpoints()}, {"values", f.values()}};
}

PiecewiseFn pw_from_json_obj(const nlohmann::json& j, const char* name) {
    if (!j.contains("breakpoints") || !j.contains("values"))
        throw std::invalid_argument(std::string("problem file: field '") + name +
                                    "' needs breakpoints and values");
    return PiecewiseFn(j.at("breakpoints").get<std::vector<double>>(),
                       j.at("values").get<std::vector<double>>());
}

}  // namespace

SLProblem problem_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("problem file: ") + e.what());
    }
    for (const char* key : {"interval", "alpha", "beta", "p", "q", "omega"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("problem file: missing field '") + key + "'");
    auto iv = j.at("interval").get<std::vector<double>>();
    if (iv.size() != 2 || !(iv[0] < iv[1]))
        throw std::invalid_argument("problem file: interval must be [a,b] with a<b");
    PiecewiseFn p = pw_from_json_obj(j.at("p"), "p");
    PiecewiseFn q = pw_from_json_obj(j.at("q"), "q");
    PiecewiseFn w = pw_from_json_obj(j.at("omega"), "omega");
    if (std::abs(p.a() - iv[0]) > 0 || std::abs(p.b() - iv[1]) > 0)
        throw std::invalid_argument("problem file: p breakpoints do not span the interval");
    return SLProblem(std::move(p), std::move(q), std::move(w), j.at("alpha").get<double>(),
                     j.at("beta").get<double>());
}

std::string problem_to_json(const SLProblem& prob) {
    nlohmann::json j{{"interval", {prob.a(), prob.b()}},
                     {"alpha", prob.alpha},
                     {"beta", prob.beta},
                     {"p", pw_to_json_obj(prob.p)},
                     {"q", pw_to_json_obj(prob.q)},
                     {"omega", pw_to_json_obj(prob.omega)}};
    return j.dump(2);
}

SLProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open problem file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return problem_from_json(ss.str());
}

void save_problem(const SLProblem& prob, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write problem file: " + path);
    out << problem_to_json(prob) << "\n";
}

PiecewiseFn piecewise_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("piecewise file: ") + e.what());
    }
    return pw_from_json_obj(j, "function");
}

std::string piecewise_to_json(const PiecewiseFn& f) { return pw_to_json_obj(f).dump(2); }

PiecewiseFn load_piecewise(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open piecewise file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return piecewise_from_json(ss.str());
}

}  // namespace sl
