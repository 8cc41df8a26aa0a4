#include "debtrun/montecarlo.hpp"

#include "debtrun/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace debtrun {

void McOptions::validate(std::size_t min_paths) const {
    std::ostringstream os;
    if (n_paths < min_paths) os << "mc.n_paths = " << n_paths << " is below the minimum " << min_paths << "; ";
    if (!(dt > 0.0) || !std::isfinite(dt)) os << "mc.dt must be positive; ";
    const std::string msg = os.str();
    if (!msg.empty()) throw ConfigError(msg.substr(0, msg.size() - 2));
}

PathEngine::PathEngine(const ModelParams& p, const IntensitySpec& intensity, double x0, double dt, PathRng& rng)
    : p_(p), intensity_(&intensity), rng_(rng), dt_(dt) {
    start(x0);
    threshold_ = rng_.exponential();
}

PathEngine::PathEngine(const ModelParams& p, std::span<const double> dates, double x0, double dt, PathRng& rng)
    : p_(p), dates_(dates.begin(), dates.end()), rng_(rng), dt_(dt) {
    start(x0);
}

void PathEngine::start(double x0) {
    if (!(x0 > 0.0)) throw DomainError("initial ratio must be positive");
    if (!(dt_ > 0.0)) throw ConfigError("path mesh width must be positive");
    lx_ = std::log(x0);
    log_barrier0_ = std::log(p_.beta * p_.l0 / p_.s0);
    drift_barrier_ = p_.r_long - p_.r_short;
    if (lx_ - log_barrier(0.0) <= 0.0) {
        insolvent_ = true;
        pending_.push_back({EventKind::insolvency, 0.0, std::exp(log_barrier(0.0)), 0.0});
    }
}

bool PathEngine::next(PathEvent& event) {
    while (head_ == pending_.size()) {
        if (done_) return false;
        pending_.clear();
        head_ = 0;
        advance();
    }
    event = pending_[head_++];
    return true;
}

void PathEngine::check_insolvency(double ta, double la, double tb, double lb) {
    if (insolvent_ || !(tb > ta)) return;
    const double ya = la - log_barrier(ta);
    const double yb = lb - log_barrier(tb);
    double tc = 0.0;
    if (yb <= 0.0) {
        tc = ta + (tb - ta) * ya / (ya - yb);
    } else {
        const double prob = std::exp(-2.0 * ya * yb / (p_.sigma * p_.sigma * (tb - ta)));
        if (rng_.uniform() >= prob) return;
        tc = 0.5 * (ta + tb);
    }
    insolvent_ = true;
    pending_.push_back({EventKind::insolvency, tc, std::exp(log_barrier(tc)), gamma_});
}

void PathEngine::advance() {
    const double horizon = p_.horizon;
    double t_end = std::min(horizon, (std::floor(t_ / dt_ + 1e-9) + 1.0) * dt_);
    bool at_date = false;
    if (next_date_ < dates_.size() && dates_[next_date_] <= t_end + 1e-9) {
        t_end = dates_[next_date_];
        at_date = true;
    }
    if (horizon - t_end < 1e-9) t_end = horizon;
    const double h = t_end - t_;
    const double sigma = p_.sigma;
    const double lx_end = lx_ + (p_.r_asset - p_.r_short - 0.5 * sigma * sigma) * h + sigma * std::sqrt(h) * rng_.normal();

    if (intensity_ != nullptr) {
        const double g0 = (*intensity_)(std::exp(lx_));
        const double g1 = (*intensity_)(std::exp(lx_end));
        const double gamma_end = gamma_ + 0.5 * (g0 + g1) * h;
        double tc = t_;
        double lc = lx_;
        while (gamma_end > gamma_ && gamma_end >= threshold_) {
            const double ta = t_ + h * (threshold_ - gamma_) / (gamma_end - gamma_);
            double la = lx_end;
            if (t_end - tc > 0.0) {
                const double w = (ta - tc) / (t_end - tc);
                const double var = sigma * sigma * (ta - tc) * (t_end - ta) / (t_end - tc);
                la = lc + w * (lx_end - lc) + std::sqrt(std::max(0.0, var)) * rng_.normal();
            }
            check_insolvency(tc, lc, ta, la);
            pending_.push_back({EventKind::arrival, ta, std::exp(la), threshold_});
            tc = ta;
            lc = la;
            threshold_ += rng_.exponential();
        }
        check_insolvency(tc, lc, t_end, lx_end);
        gamma_ = gamma_end;
    } else {
        check_insolvency(t_, lx_, t_end, lx_end);
        if (at_date) {
            pending_.push_back({EventKind::arrival, t_end, std::exp(lx_end), gamma_});
            ++next_date_;
        }
    }
    t_ = t_end;
    lx_ = lx_end;
    if (t_end >= horizon) {
        done_ = true;
        pending_.push_back({EventKind::horizon, t_end, std::exp(lx_end), gamma_});
    } else {
        pending_.push_back({EventKind::mesh, t_end, std::exp(lx_end), gamma_});
    }
}

namespace {

SimPath record_path(PathEngine& engine, double x0) {
    SimPath path;
    path.times.push_back(0.0);
    path.x_values.push_back(x0);
    path.cumulative_intensity.push_back(0.0);
    bool crossed = false;
    PathEvent e;
    while (engine.next(e)) {
        switch (e.kind) {
        case EventKind::insolvency:
            path.tau_ins = e.t;
            crossed = true;
            break;
        case EventKind::arrival:
            path.arrivals.push_back(e.t);
            path.arrival_x.push_back(e.x);
            if (e.t <= path.times.back()) break;  // fixed date already on the mesh
            [[fallthrough]];
        case EventKind::mesh:
        case EventKind::horizon:
            if (e.t <= path.times.back()) break;
            path.times.push_back(e.t);
            path.x_values.push_back(e.x);
            path.cumulative_intensity.push_back(e.gamma);
            path.crossed.push_back(crossed ? 1 : 0);
            crossed = false;
            break;
        }
    }
    // A crossing at t = 0 has no interval of its own.
    if (crossed && !path.crossed.empty()) path.crossed.front() = 1;
    return path;
}

double initial_ratio(const ModelParams& p, double v0) {
    if (!(v0 > 0.0)) throw DomainError("V0 must be positive");
    return v0 / p.s0;
}

}  // namespace

SimPath simulate_path(const ModelParams& p, const IntensitySpec& intensity, double v0, double dt, PathRng& rng) {
    p.validate();
    const double x0 = initial_ratio(p, v0);
    PathEngine engine(p, intensity, x0, dt, rng);
    return record_path(engine, x0);
}

SimPath simulate_path(const ModelParams& p, const DiscreteTenor& tenor, double v0, double dt, PathRng& rng) {
    p.validate();
    const double x0 = initial_ratio(p, v0);
    PathEngine engine(p, tenor.dates(), x0, dt, rng);
    return record_path(engine, x0);
}

RunBarrier::RunBarrier(const BarrierCurve& curve) : curve_(&curve), params_(curve.params()) {}

RunBarrier::RunBarrier(const DiscreteBarrierSet& set, const ModelParams& p) : set_(&set), params_(p) {}

double RunBarrier::x_star(double t) const {
    if (curve_ != nullptr) return curve_->x_star_at(t);
    const DiscreteBarrier* b = set_->at(t);
    if (b == nullptr) {
        std::ostringstream os;
        os << "no rollover barrier at t = " << t;
        throw DependencyError(os.str());
    }
    return b->x_star;
}

double RunBarrier::x_ill(double t) const {
    const double cap = (1.0 + debt_ratio(params_, std::clamp(t, 0.0, params_.horizon))) / params_.psi;
    return std::min(x_star(t), cap);
}

const char* to_string(Outcome o) {
    switch (o) {
    case Outcome::insolvency_default: return "insolvency_default";
    case Outcome::illiquidity_default: return "illiquidity_default";
    case Outcome::unsuccessful_run: return "unsuccessful_run";
    case Outcome::survival: return "survival";
    }
    return "unknown";
}

ScenarioRecord classify_scenario(const SimPath& path, const RunBarrier& barrier, const ModelParams& p) {
    const double c = p.carry();
    const double horizon = p.horizon;
    ScenarioRecord rec;
    bool paid = false;  // the barrier-following creditor has already withdrawn
    auto settle = [&](double t, double value) {
        if (!paid) rec.payoff = std::exp(c * t) * value;
        paid = true;
    };
    const double tau = path.tau_ins.value_or(std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < path.arrivals.size(); ++i) {
        const double t = path.arrivals[i];
        if (tau <= t) break;
        const double x = path.arrival_x[i];
        if (x > barrier.x_star(t)) continue;
        if (x <= barrier.x_ill(t)) {
            rec.outcome = Outcome::illiquidity_default;
            rec.event_time = t;
            settle(t, recovery_rate(p, t, x));
            return rec;
        }
        rec.unsuccessful_runs.push_back(t);
        settle(t, 1.0);
    }
    if (tau <= horizon) {
        rec.outcome = Outcome::insolvency_default;
        rec.event_time = tau;
        settle(tau, recovery_rate(p, tau, insolvency_ratio(p, tau)));
        return rec;
    }
    rec.outcome = rec.unsuccessful_runs.empty() ? Outcome::survival : Outcome::unsuccessful_run;
    rec.event_time = horizon;
    settle(horizon, recovery_rate(p, horizon, path.x_values.back()));
    return rec;
}

namespace {

/// Payoff of one creditor path; `engine` supplies the events and `x_star`
/// the creditor's threshold at an arrival.
template <class Threshold>
double creditor_payoff(PathEngine& engine, PathRng& rng, const ModelParams& p, const BeliefSpec& beliefs,
                       const Threshold& x_star) {
    const double c = p.carry();
    PathEvent e;
    while (engine.next(e)) {
        switch (e.kind) {
        case EventKind::insolvency:
            return std::exp(c * e.t) * recovery_rate(p, e.t, e.x);
        case EventKind::arrival: {
            const double survive = theta(p, beliefs, e.x);
            if (rng.uniform() >= survive) return std::exp(c * e.t) * recovery_rate(p, e.t, e.x);
            if (e.x <= x_star(e.t)) return std::exp(c * e.t);
            break;
        }
        case EventKind::horizon:
            return std::exp(c * e.t) * recovery_rate(p, e.t, e.x);
        case EventKind::mesh:
            break;
        }
    }
    return 0.0;
}

PayoffEstimate summarize(const std::vector<detail::Moments>& parts) {
    detail::Moments m;
    for (const auto& part : parts) m.merge(part);
    PayoffEstimate est;
    est.n_paths = m.n;
    if (m.n == 0) return est;
    const double n = static_cast<double>(m.n);
    est.mean = m.sum / n;
    const double var = m.n > 1 ? std::max(0.0, (m.sum_sq - n * est.mean * est.mean) / (n - 1.0)) : 0.0;
    est.std_error = std::sqrt(var / n);
    est.ci_halfwidth = 1.96 * est.std_error;
    return est;
}

}  // namespace

PayoffEstimate strategy_payoff(const ModelParams& p, const BeliefSpec& beliefs, const IntensitySpec& intensity,
                               const BarrierCurve& strategy, double v0, const McOptions& options) {
    p.validate();
    options.validate();
    const double x0 = initial_ratio(p, v0);
    auto threshold = [&](double t) { return strategy.x_star_at(std::min(t, p.horizon)); };
    const auto parts = detail::run_chunks<detail::Moments>(options.n_paths, [&](std::size_t b, std::size_t e) {
        detail::Moments m;
        for (std::size_t i = b; i < e; ++i) {
            PathRng rng(options.seed, i);
            PathEngine engine(p, intensity, x0, options.dt, rng);
            m.add(creditor_payoff(engine, rng, p, beliefs, threshold));
        }
        return m;
    });
    return summarize(parts);
}

PayoffEstimate strategy_payoff(const ModelParams& p, const BeliefSpec& beliefs, const DiscreteTenor& tenor,
                               const DiscreteBarrierSet& strategy, double v0, const McOptions& options) {
    p.validate();
    options.validate();
    const double x0 = initial_ratio(p, v0);
    const RunBarrier barrier(strategy, p);
    for (double d : tenor.dates()) (void)barrier.x_star(d);  // coverage check up front
    auto threshold = [&](double t) { return barrier.x_star(t); };
    const auto parts = detail::run_chunks<detail::Moments>(options.n_paths, [&](std::size_t b, std::size_t e) {
        detail::Moments m;
        for (std::size_t i = b; i < e; ++i) {
            PathRng rng(options.seed, i);
            PathEngine engine(p, tenor.dates(), x0, options.dt, rng);
            m.add(creditor_payoff(engine, rng, p, beliefs, threshold));
        }
        return m;
    });
    return summarize(parts);
}

SeedMatch find_scenario_seed(const ModelParams& p, const IntensitySpec& intensity, const BarrierCurve& barrier,
                             double v0, double dt, std::uint64_t first, std::uint64_t tries,
                             const std::function<bool(const SimPath&, const ScenarioRecord&)>& accept) {
    const RunBarrier run(barrier);
    for (std::uint64_t s = first; s < first + tries; ++s) {
        PathRng rng(s, 0);
        SimPath path = simulate_path(p, intensity, v0, dt, rng);
        ScenarioRecord rec = classify_scenario(path, run, p);
        if (accept(path, rec)) return {true, s, std::move(path), std::move(rec)};
    }
    return {};
}

double ks_statistic_exponential(std::vector<double> samples, double rate) {
    if (samples.empty()) throw DomainError("KS statistic needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = -std::expm1(-rate * std::max(0.0, samples[i]));
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

}  // namespace debtrun
