#include "debtrun/model.hpp"

#include "debtrun/errors.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace debtrun {

void ModelParams::validate() const {
    std::vector<std::string> issues;
    auto finite = [](double v) { return std::isfinite(v); };
    for (double v : {r, r_short, r_long, r_asset, sigma, alpha, beta, psi, s0, l0, horizon}) {
        if (!finite(v)) {
            issues.emplace_back("all parameters must be finite");
            break;
        }
    }
    if (!(r_long > r_short && r_short > r)) issues.emplace_back("rates must satisfy r_long > r_short > r");
    if (!(sigma > 0.0)) issues.emplace_back("sigma must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) issues.emplace_back("alpha must lie in (0,1)");
    if (!(psi > 0.0 && psi < 1.0)) issues.emplace_back("psi must lie in (0,1)");
    if (!(beta > 0.0)) issues.emplace_back("beta must be > 0");
    if (!(horizon > 0.0)) issues.emplace_back("horizon must be > 0");
    if (!(s0 > 0.0)) issues.emplace_back("s0 must be > 0");
    if (!(l0 > 0.0)) issues.emplace_back("l0 must be > 0");
    if (issues.empty()) {
        // l_t is monotone, so the covenant bound beta <= 1/l_t + 1 is
        // tightest at one of the endpoints.
        const double l_start = l0 / s0;
        const double l_end = l_start * std::exp((r_long - r_short) * horizon);
        const double bound = std::min(1.0 / l_start, 1.0 / l_end) + 1.0;
        if (beta > bound) {
            std::ostringstream os;
            os << "beta = " << beta << " exceeds covenant bound 1/l_t + 1 = " << bound;
            issues.push_back(os.str());
        }
    }
    if (!issues.empty()) {
        std::string msg = "invalid model parameters:";
        for (const auto& s : issues) msg += "\n  - " + s;
        throw DomainError(msg);
    }
}

namespace {

void check_time(const ModelParams& p, double t) {
    if (!(t >= 0.0 && t <= p.horizon)) {
        std::ostringstream os;
        os << "time " << t << " outside [0, " << p.horizon << "]";
        throw DomainError(os.str());
    }
}

}  // namespace

double debt_ratio(const ModelParams& p, double t) {
    check_time(p, t);
    return (p.l0 / p.s0) * std::exp((p.r_long - p.r_short) * t);
}

double short_debt(const ModelParams& p, double t) {
    check_time(p, t);
    return p.s0 * std::exp(p.r_short * t);
}

double long_debt(const ModelParams& p, double t) {
    check_time(p, t);
    return p.l0 * std::exp(p.r_long * t);
}

DebtState debt_state(const ModelParams& p, double t) {
    return {t, short_debt(p, t), long_debt(p, t), debt_ratio(p, t)};
}

double recovery_rate(const ModelParams& p, double t, double x) {
    if (!(x > 0.0)) throw DomainError("recovery_rate: ratio must be > 0");
    const double l = debt_ratio(p, t);
    const double retained = (t >= p.horizon) ? 1.0 : p.alpha;
    return std::min(1.0, retained * x / (1.0 + l));
}

double insolvency_barrier(const ModelParams& p, double t) {
    if (!(p.beta > 0.0)) throw DomainError("insolvency_barrier: beta must be > 0");
    check_time(p, t);
    return p.beta * p.l0 * std::exp(p.r_long * t);
}

double insolvency_ratio(const ModelParams& p, double t) {
    return p.beta * debt_ratio(p, t);
}

double firesale_cap(const ModelParams& p, double t) {
    return (short_debt(p, t) + long_debt(p, t)) / p.psi;
}

}  // namespace debtrun
