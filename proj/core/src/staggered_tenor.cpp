#include "debtrun/staggered_tenor.hpp"

#include "debtrun/crossing.hpp"
#include "debtrun/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace debtrun {

ValueSurface solve_staggered_value(const ModelParams& p, const BeliefSpec& beliefs,
                                   const IntensitySpec& intensity, const Grid& grid,
                                   const StaggeredOptions& options, SolveStats* stats) {
    p.validate();
    grid.validate();
    ValueSurface surface(p, grid, TimeMesh::build(p.horizon, grid.n_tau), options.farfield);
    const TimeMesh& mesh = surface.mesh();

    const double l_end = debt_ratio(p, p.horizon);
    auto first = surface.slice(0);
    for (int j = 0; j <= grid.n_y; ++j) {
        first[static_cast<std::size_t>(j)] = std::min(1.0, p.beta * l_end * std::exp(grid.y(j)) / (1.0 + l_end));
    }

    if (stats) {
        stats->newton_iterations.clear();
        stats->max_iterations = 0;
    }
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double tau_next = mesh.tau(k + 1);
        const double dtau = tau_next - mesh.tau(k);
        StepCoefficients coeffs = build_step(p, beliefs, intensity, grid, tau_next, dtau, options.farfield);
        coeffs.farfield_value = farfield_step(options.farfield, p.carry(), dtau, surface.slice(k).back());
        NewtonResult step;
        try {
            step = newton_semilinear_step(coeffs, surface.slice(k), options.newton);
        } catch (const NonconvergenceError& e) {
            std::ostringstream os;
            os << e.what() << " at time slice " << (k + 1) << " (t = " << p.horizon - tau_next << ")";
            throw NonconvergenceError(os.str(), e.last_increment(), static_cast<long>(k + 1));
        }
        std::copy(step.values.begin(), step.values.end(), surface.slice(k + 1).begin());
        if (stats) {
            stats->newton_iterations.push_back(step.iterations);
            stats->max_iterations = std::max(stats->max_iterations, step.iterations);
        }
    }
    return surface;
}

BarrierSample make_barrier_sample(const ModelParams& p, double t, double x_star) {
    const DebtState debt = debt_state(p, t);
    BarrierSample s;
    s.t = t;
    s.x_star = x_star;
    s.d_ins = insolvency_barrier(p, t);
    s.d_run = x_star * debt.short_debt;
    s.d_ill = std::min(s.d_run, (debt.short_debt + debt.long_debt) / p.psi);
    s.always_run = std::isinf(x_star);
    return s;
}

BarrierCurve::BarrierCurve(ModelParams p, std::vector<BarrierSample> samples)
    : params_(p), samples_(std::move(samples)) {
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (!(samples_[i].t > samples_[i - 1].t)) throw DomainError("barrier samples must be increasing in t");
    }
}

BarrierCurve BarrierCurve::constant_ratio(const ModelParams& p, double x_star, std::vector<double> times) {
    std::vector<BarrierSample> samples;
    samples.reserve(times.size());
    for (double t : times) samples.push_back(make_barrier_sample(p, t, x_star));
    return BarrierCurve(p, std::move(samples));
}

bool BarrierCurve::covers(double t) const noexcept {
    return !samples_.empty() && t >= samples_.front().t - 1e-9 && t <= samples_.back().t + 1e-9;
}

double BarrierCurve::x_star_at(double t) const {
    if (!covers(t)) {
        std::ostringstream os;
        os << "barrier curve does not cover t = " << t;
        throw DependencyError(os.str());
    }
    const auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                                     [](const BarrierSample& s, double v) { return s.t < v; });
    if (it == samples_.end()) return samples_.back().x_star;
    if (it == samples_.begin() || it->t == t) return it->x_star;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (std::isinf(lo.x_star) || std::isinf(hi.x_star)) return std::numeric_limits<double>::infinity();
    const double w = (t - lo.t) / (hi.t - lo.t);
    return (1.0 - w) * lo.x_star + w * hi.x_star;
}

double BarrierCurve::x_ill_at(double t) const {
    const double cap = (1.0 + debt_ratio(params_, std::clamp(t, 0.0, params_.horizon))) / params_.psi;
    return std::min(x_star_at(t), cap);
}

BarrierCurve BarrierCurve::scaled(double factor) const {
    std::vector<BarrierSample> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) {
        BarrierSample b = make_barrier_sample(params_, s.t, s.x_star * factor);
        b.terminal_dominated = s.terminal_dominated;
        out.push_back(b);
    }
    return BarrierCurve(params_, std::move(out));
}

BarrierCurve BarrierCurve::time_shifted(double shift) const {
    std::vector<BarrierSample> out;
    out.reserve(samples_.size());
    const double lo = samples_.front().t;
    const double hi = samples_.back().t;
    for (const auto& s : samples_) {
        out.push_back(make_barrier_sample(params_, s.t, x_star_at(std::clamp(s.t + shift, lo, hi))));
    }
    return BarrierCurve(params_, std::move(out));
}

namespace {

double pasting_gap(const ValueSurface& surface, std::size_t k, int segment) {
    const auto u = surface.slice(k);
    const int n_y = surface.grid().n_y;
    if (segment < 1 || segment + 2 > n_y) return std::numeric_limits<double>::quiet_NaN();
    const auto j = static_cast<std::size_t>(segment);
    const double left = (u[j] - u[j - 1]) / (surface.x(k, segment) - surface.x(k, segment - 1));
    const double right = (u[j + 2] - u[j + 1]) / (surface.x(k, segment + 2) - surface.x(k, segment + 1));
    return std::abs(right - left);
}

}  // namespace

BarrierCurve extract_free_boundary(const ValueSurface& surface, const ModelParams& p) {
    const std::size_t nodes = surface.node_count();
    if (nodes < 2) throw DependencyError("surface has no solved time steps");
    std::vector<BarrierSample> samples;
    samples.reserve(nodes);
    for (std::size_t k = nodes; k-- > 1;) {
        const double t = surface.t(k);
        const UnitCrossing c = find_unit_crossing(surface.slice(k), surface.grid().dy());
        double x_star = std::numeric_limits<double>::infinity();
        if (c.status != CrossingStatus::always_below) x_star = insolvency_ratio(p, t) * std::exp(c.y);
        BarrierSample s = make_barrier_sample(p, t, x_star);
        s.at_boundary = c.status == CrossingStatus::at_boundary;
        s.crossings = c.crossings;
        s.pasting_gap = c.status == CrossingStatus::found ? pasting_gap(surface, k, c.segment)
                                                          : std::numeric_limits<double>::quiet_NaN();
        samples.push_back(s);
    }
    // The terminal slice is min{1, x/(1+l_T)} <= 1; carry the last solved
    // threshold forward to t = T instead of rooting the payoff itself.
    BarrierSample last = make_barrier_sample(p, p.horizon, samples.back().x_star);
    last.terminal_dominated = true;
    last.pasting_gap = std::numeric_limits<double>::quiet_NaN();
    samples.push_back(last);
    return BarrierCurve(p, std::move(samples));
}

double run_stopping_time(const SimPath& path, const BarrierCurve& barrier) {
    const double horizon = barrier.params().horizon;
    for (std::size_t i = 0; i < path.arrivals.size(); ++i) {
        const double t = path.arrivals[i];
        if (t >= horizon) break;
        if (path.arrival_x[i] <= barrier.x_star_at(t)) return t;
    }
    return horizon;
}

}  // namespace debtrun
