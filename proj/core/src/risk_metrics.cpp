#include "debtrun/risk_metrics.hpp"

#include "debtrun/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace debtrun {

double blackcox_pd(const ModelParams& p, double v0, double horizon) {
    if (!(horizon >= 0.0)) throw DomainError("blackcox_pd: horizon must be >= 0");
    const double y0 = std::log(v0 / (p.beta * p.l0));
    if (!(y0 > 0.0)) return 1.0;
    if (horizon == 0.0) return 0.0;
    const double nu = p.log_drift();
    const double s = p.sigma * std::sqrt(horizon);
    const double direct = normal_cdf((-y0 - nu * horizon) / s);
    const double reflected = normal_cdf((-y0 + nu * horizon) / s);
    if (reflected == 0.0) return direct;
    // e^{-2 nu y0 / sigma^2} may overflow on its own when nu < 0.
    const double log_weight = -2.0 * nu * y0 / (p.sigma * p.sigma);
    return std::min(1.0, direct + std::exp(log_weight + std::log(reflected)));
}

const char* to_string(SurvivalVariant v) {
    return v == SurvivalVariant::paper_literal ? "paper_literal" : "corrected";
}

double SurvivalSurface::pd(double v0) const {
    const ModelParams& p = surface.params();
    return 1.0 - survival_at(0.0, v0 / p.s0);
}

SurvivalSurface solve_survival_staggered(const ModelParams& p, const IntensitySpec& intensity,
                                         const BarrierCurve& illiquidity, const Grid& grid,
                                         SurvivalVariant variant) {
    p.validate();
    grid.validate();
    if (illiquidity.empty()) throw DependencyError("survival solve needs an illiquidity curve");
    if (!illiquidity.covers(0.0) || !illiquidity.covers(p.horizon)) {
        throw DependencyError("illiquidity curve does not cover [0, T]");
    }
    const bool literal = variant == SurvivalVariant::paper_literal;
    ValueSurface surface(p, grid, TimeMesh::build(p.horizon, grid.n_tau), FarField::asymptotic);
    const TimeMesh& mesh = surface.mesh();

    auto first = surface.slice(0);
    std::fill(first.begin(), first.end(), 1.0);
    first[0] = 0.0;

    const double carry = literal ? p.carry() : 0.0;
    const std::size_t n = static_cast<std::size_t>(grid.n_y) - 1;
    std::vector<double> rate(n);
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double tau_next = mesh.tau(k + 1);
        const double t_next = p.horizon - tau_next;
        const double x_ill = illiquidity.x_ill_at(t_next);
        const double base = insolvency_ratio(p, t_next);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = base * std::exp(grid.y(static_cast<int>(i) + 1));
            const double g = intensity(x);
            rate[i] = carry - (x >= x_ill ? 0.0 : g);
        }
        const double dtau = tau_next - mesh.tau(k);
        const double far = farfield_step(FarField::asymptotic, carry, dtau, surface.slice(k).back());
        const StepCoefficients coeffs = build_linear_step(p, grid, dtau, rate, 0.0, far);
        const NewtonResult step = newton_semilinear_step(coeffs, surface.slice(k));
        std::copy(step.values.begin(), step.values.end(), surface.slice(k + 1).begin());
    }
    return SurvivalSurface{std::move(surface), variant};
}

namespace {

struct Counts {
    std::size_t survive = 0;
    std::size_t insolvency = 0;
    std::size_t illiquidity = 0;
};

enum class Label { survive, insolvency, illiquidity };

Label label_path(PathEngine& engine, const RunBarrier& barrier) {
    PathEvent e;
    while (engine.next(e)) {
        switch (e.kind) {
        case EventKind::insolvency:
            return Label::insolvency;
        case EventKind::arrival:
            if (e.x <= barrier.x_ill(e.t)) return Label::illiquidity;
            break;
        case EventKind::horizon:
            return Label::survive;
        case EventKind::mesh:
            break;
        }
    }
    return Label::survive;
}

template <class MakeEngine>
DefaultDecomposition decompose(const ModelParams& p, const RunBarrier& barrier, double v0,
                               const McOptions& options, MakeEngine&& make_engine) {
    const auto parts = detail::run_chunks<Counts>(options.n_paths, [&](std::size_t b, std::size_t e) {
        Counts c;
        for (std::size_t i = b; i < e; ++i) {
            PathRng rng(options.seed, i);
            PathEngine engine = make_engine(rng);
            switch (label_path(engine, barrier)) {
            case Label::survive: ++c.survive; break;
            case Label::insolvency: ++c.insolvency; break;
            case Label::illiquidity: ++c.illiquidity; break;
            }
        }
        return c;
    });
    Counts total;
    for (const auto& c : parts) {
        total.survive += c.survive;
        total.insolvency += c.insolvency;
        total.illiquidity += c.illiquidity;
    }
    DefaultDecomposition d;
    d.n_paths = options.n_paths;
    d.n_survive = total.survive;
    d.n_insolvency = total.insolvency;
    d.n_illiquidity = total.illiquidity;
    const double n = static_cast<double>(options.n_paths);
    d.pd_insolvency = static_cast<double>(total.insolvency) / n;
    d.pd_illiquidity = static_cast<double>(total.illiquidity) / n;
    d.pd_total = static_cast<double>(total.insolvency + total.illiquidity) / n;
    d.std_error = std::sqrt(d.pd_total * (1.0 - d.pd_total) / n);
    d.mc_halfwidth = 1.96 * d.std_error;
    d.pd_baseline_blackcox = blackcox_pd(p, v0, p.horizon);
    return d;
}

}  // namespace

DefaultDecomposition mc_default_discrete(const ModelParams& p, const DiscreteBarrierSet& barriers,
                                         const DiscreteTenor& tenor, double v0, const McOptions& options) {
    p.validate();
    options.validate();
    if (!(v0 > 0.0)) throw DomainError("V0 must be positive");
    const RunBarrier barrier(barriers, p);
    for (double d : tenor.dates()) (void)barrier.x_star(d);
    const double x0 = v0 / p.s0;
    return decompose(p, barrier, v0, options,
                     [&](PathRng& rng) { return PathEngine(p, tenor.dates(), x0, options.dt, rng); });
}

DefaultDecomposition mc_default_staggered(const ModelParams& p, const IntensitySpec& intensity,
                                          const BarrierCurve& curve, double v0, const McOptions& options) {
    p.validate();
    options.validate();
    if (!(v0 > 0.0)) throw DomainError("V0 must be positive");
    if (!curve.covers(0.0) || !curve.covers(p.horizon)) throw DependencyError("barrier curve does not cover [0, T]");
    const RunBarrier barrier(curve);
    const double x0 = v0 / p.s0;
    return decompose(p, barrier, v0, options,
                     [&](PathRng& rng) { return PathEngine(p, intensity, x0, options.dt, rng); });
}

ProbabilityEstimate mc_first_passage_pd(const ModelParams& p, double v0, double horizon, const McOptions& options) {
    options.validate();
    if (!(v0 > 0.0)) throw DomainError("V0 must be positive");
    ModelParams q = p;
    q.horizon = horizon;
    const double x0 = v0 / q.s0;
    const std::vector<double> no_dates;
    const auto parts = detail::run_chunks<std::size_t>(options.n_paths, [&](std::size_t b, std::size_t e) {
        std::size_t hits = 0;
        for (std::size_t i = b; i < e; ++i) {
            PathRng rng(options.seed, i);
            PathEngine engine(q, no_dates, x0, options.dt, rng);
            PathEvent ev;
            while (engine.next(ev)) {
                if (ev.kind == EventKind::insolvency) {
                    ++hits;
                    break;
                }
            }
        }
        return hits;
    });
    std::size_t hits = 0;
    for (auto h : parts) hits += h;
    ProbabilityEstimate est;
    est.n_paths = options.n_paths;
    const double n = static_cast<double>(options.n_paths);
    est.p = static_cast<double>(hits) / n;
    est.std_error = std::sqrt(est.p * (1.0 - est.p) / n);
    return est;
}

}  // namespace debtrun
