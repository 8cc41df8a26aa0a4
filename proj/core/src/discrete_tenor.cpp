#include "debtrun/discrete_tenor.hpp"

#include "debtrun/crossing.hpp"
#include "debtrun/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace debtrun {

DiscreteTenor::DiscreteTenor(std::vector<double> dates, double horizon)
    : dates_(std::move(dates)), horizon_(horizon) {
    if (!(horizon_ > 0.0)) throw DomainError("tenor horizon must be > 0");
    for (std::size_t i = 0; i < dates_.size(); ++i) {
        if (!(dates_[i] > 0.0 && dates_[i] <= horizon_)) {
            throw DomainError("rollover dates must lie in (0, T]");
        }
        if (i > 0 && !(dates_[i] > dates_[i - 1])) {
            throw DomainError("rollover dates must be strictly increasing");
        }
    }
}

DiscreteTenor DiscreteTenor::equally_spaced(int n, double horizon) {
    if (n < 0) throw DomainError("number of rollover dates must be >= 0");
    std::vector<double> dates;
    dates.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) dates.push_back(horizon * i / (n + 1.0));
    return DiscreteTenor(std::move(dates), horizon);
}

bool DiscreteTenor::contains(double t, double tol) const {
    return std::any_of(dates_.begin(), dates_.end(), [&](double d) { return std::abs(d - t) <= tol; });
}

std::vector<double> apply_rollover_jump(const ModelParams& p, const BeliefSpec& beliefs,
                                        const Grid& grid, double t, std::span<const double> u) {
    std::vector<double> out(u.begin(), u.end());
    const double boundary = insolvency_ratio(p, t);
    for (std::size_t j = 1; j + 1 < out.size(); ++j) {
        const double x = boundary * std::exp(grid.y(static_cast<int>(j)));
        const double th = theta(p, beliefs, x);
        out[j] = th * std::max(1.0, u[j]) + (1.0 - th) * recovery_rate(p, t, x);
    }
    return out;
}

namespace {

std::vector<double> terminal_slice(const ModelParams& p, const Grid& grid) {
    const double l = debt_ratio(p, p.horizon);
    const double boundary = p.beta * l;
    std::vector<double> u(static_cast<std::size_t>(grid.n_y) + 1);
    for (int j = 0; j <= grid.n_y; ++j) {
        u[static_cast<std::size_t>(j)] = std::min(1.0, boundary * std::exp(grid.y(j)) / (1.0 + l));
    }
    return u;
}

}  // namespace

ValueSurface solve_discrete_value(const ModelParams& p, const BeliefSpec& beliefs,
                                  const DiscreteTenor& tenor, const Grid& grid, FarField farfield) {
    p.validate();
    grid.validate();
    if (std::abs(tenor.horizon() - p.horizon) > 1e-12) {
        throw DomainError("tenor horizon does not match the model horizon");
    }
    std::vector<double> breaks;
    for (double d : tenor.dates()) breaks.push_back(p.horizon - d);
    ValueSurface surface(p, grid, TimeMesh::build(p.horizon, grid.n_tau, breaks), farfield);
    const TimeMesh& mesh = surface.mesh();

    std::vector<double> current = terminal_slice(p, grid);
    std::copy(current.begin(), current.end(), surface.slice(0).begin());
    if (tenor.contains(p.horizon)) {
        current = apply_rollover_jump(p, beliefs, grid, p.horizon, current);
        surface.set_jump_slice(0, current);
    }

    const std::size_t n = static_cast<std::size_t>(grid.n_y) - 1;
    const std::vector<double> rate(n, p.carry());
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double tau_next = mesh.tau(k + 1);
        const double t_next = std::max(0.0, p.horizon - tau_next);
        const double l = debt_ratio(p, t_next);
        const StepCoefficients coeffs = build_linear_step(
            p, grid, tau_next - mesh.tau(k), rate, p.alpha * p.beta * l / (1.0 + l),
            farfield_step(farfield, p.carry(), tau_next - mesh.tau(k), current.back()));
        NewtonResult step = newton_semilinear_step(coeffs, current);
        std::copy(step.values.begin(), step.values.end(), surface.slice(k + 1).begin());
        current = std::move(step.values);
        if (t_next > 0.0 && tenor.contains(t_next)) {
            current = apply_rollover_jump(p, beliefs, grid, t_next, current);
            surface.set_jump_slice(k + 1, current);
        }
    }
    return surface;
}

const DiscreteBarrier* DiscreteBarrierSet::at(double t, double tol) const {
    for (const auto& e : entries) {
        if (std::abs(e.date - t) <= tol) return &e;
    }
    return nullptr;
}

DiscreteBarrierSet extract_discrete_barriers(const ValueSurface& surface, const ModelParams& p,
                                             const DiscreteTenor& tenor) {
    DiscreteBarrierSet out;
    std::vector<double> dates{0.0};
    dates.insert(dates.end(), tenor.dates().begin(), tenor.dates().end());
    for (double date : dates) {
        const std::size_t k = surface.node_at_time(date);
        const UnitCrossing c = find_unit_crossing(surface.slice(k), surface.grid().dy());
        const DebtState debt = debt_state(p, date);

        DiscreteBarrier b;
        b.date = date;
        b.inception = date == 0.0;
        b.crossings = c.crossings;
        b.d_ins = insolvency_barrier(p, date);
        const double cap = (debt.short_debt + debt.long_debt) / p.psi;
        if (c.status == CrossingStatus::always_below) {
            b.always_run = true;
            b.x_star = std::numeric_limits<double>::infinity();
            b.d_run = std::numeric_limits<double>::infinity();
            std::ostringstream os;
            os << "t = " << date << ": value below 1 on the whole grid, creditor always runs";
            out.diagnostics.push_back(os.str());
        } else {
            b.at_boundary = c.status == CrossingStatus::at_boundary;
            b.x_star = p.beta * debt.ratio * std::exp(c.y);
            b.d_run = b.x_star * debt.short_debt;
        }
        b.d_ill = std::min(b.d_run, cap);
        if (c.crossings > 1) {
            std::ostringstream os;
            os << "t = " << date << ": " << c.crossings << " crossings of U = 1, largest taken";
            out.diagnostics.push_back(os.str());
        }
        out.entries.push_back(b);
    }
    if (tenor.size() == 0) out.diagnostics.emplace_back("no rollover dates: only the insolvency barrier applies");
    return out;
}

}  // namespace debtrun
