#include "debtrun/fd_engine.hpp"

#include "debtrun/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace debtrun {

void Grid::validate() const {
    std::ostringstream os;
    if (!(y_max > 0.0) || !std::isfinite(y_max)) os << " y_max must be > 0;";
    if (n_y < 8) os << " n_y must be >= 8;";
    if (n_tau < 1) os << " n_tau must be >= 1;";
    if (!os.str().empty()) throw ConfigError("invalid grid:" + os.str());
}

TimeMesh TimeMesh::build(double horizon, int n_tau, std::vector<double> breakpoints) {
    if (!(horizon > 0.0)) throw ConfigError("time mesh needs a positive horizon");
    if (n_tau < 1) throw ConfigError("time mesh needs n_tau >= 1");
    const double nominal = horizon / n_tau;
    std::vector<double> cuts;
    cuts.reserve(breakpoints.size() + 2);
    cuts.push_back(0.0);
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double b : breakpoints) {
        if (b <= 1e-12 || b >= horizon - 1e-12) continue;
        if (b - cuts.back() <= 1e-12) continue;
        cuts.push_back(b);
    }
    cuts.push_back(horizon);

    TimeMesh mesh;
    mesh.tau_.push_back(0.0);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s];
        const double b = cuts[s + 1];
        const long steps = std::max(1L, std::lround((b - a) / nominal));
        const double h = (b - a) / static_cast<double>(steps);
        for (long i = 1; i < steps; ++i) mesh.tau_.push_back(a + h * static_cast<double>(i));
        mesh.tau_.push_back(b);
    }
    return mesh;
}

TimeMesh TimeMesh::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 2 || nodes.front() != 0.0) throw ConfigError("time mesh must start at tau = 0");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) throw ConfigError("time mesh nodes must increase");
    }
    TimeMesh mesh;
    mesh.tau_ = std::move(nodes);
    return mesh;
}

std::size_t TimeMesh::find(double tau, double tol) const {
    const auto it = std::lower_bound(tau_.begin(), tau_.end(), tau - tol);
    if (it != tau_.end() && std::abs(*it - tau) <= tol) return static_cast<std::size_t>(it - tau_.begin());
    return tau_.size();
}

double farfield_value(const ModelParams& p, FarField farfield, double tau) {
    return farfield == FarField::asymptotic ? std::exp(p.carry() * tau) : 0.0;
}

double farfield_step(FarField farfield, double rate, double dtau, double previous) {
    return farfield == FarField::asymptotic ? previous / (1.0 - rate * dtau) : 0.0;
}

ValueSurface::ValueSurface(ModelParams params, Grid grid, TimeMesh mesh, FarField farfield)
    : params_(params), grid_(grid), mesh_(std::move(mesh)), farfield_(farfield),
      values_(mesh_.size() * (static_cast<std::size_t>(grid.n_y) + 1), 0.0) {}

std::span<double> ValueSurface::slice(std::size_t k) {
    return std::span<double>(values_).subspan(k * width(), width());
}

std::span<const double> ValueSurface::slice(std::size_t k) const {
    return std::span<const double>(values_).subspan(k * width(), width());
}

double ValueSurface::x(std::size_t k, int j) const {
    return insolvency_ratio(params_, t(k)) * std::exp(grid_.y(j));
}

std::size_t ValueSurface::node_at_time(double t) const {
    const std::size_t k = mesh_.find(params_.horizon - t);
    if (k == mesh_.size()) {
        std::ostringstream os;
        os << "time " << t << " is not a node of the surface mesh";
        throw DomainError(os.str());
    }
    return k;
}

double ValueSurface::interpolate_row(std::span<const double> row, double t, double x) const {
    const double boundary = insolvency_ratio(params_, t);
    if (x <= boundary) return row.front();
    const double y = std::log(x / boundary);
    if (y >= grid_.y_max) return row.back();
    const double pos = y / grid_.dy();
    const auto j = std::min(static_cast<std::size_t>(pos), row.size() - 2);
    const double w = pos - static_cast<double>(j);
    return (1.0 - w) * row[j] + w * row[j + 1];
}

double ValueSurface::interpolate(std::size_t k, double x) const {
    return interpolate_row(slice(k), t(k), x);
}

void ValueSurface::set_jump_slice(std::size_t k, std::vector<double> values) {
    jumps_[k] = std::move(values);
}

const std::vector<double>* ValueSurface::jump_slice(std::size_t k) const {
    const auto it = jumps_.find(k);
    return it == jumps_.end() ? nullptr : &it->second;
}

double ValueSurface::value_at(double t, double x) const {
    if (!(t >= 0.0 && t <= params_.horizon)) throw DomainError("value_at: time outside [0, T]");
    const double tau = params_.horizon - t;
    const auto& nodes = mesh_.nodes();
    const std::size_t exact = mesh_.find(tau);
    if (exact != nodes.size()) return interpolate(exact, x);
    // nodes[k] < tau < nodes[k+1]; node k lies later in calendar time.
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), tau);
    const std::size_t k1 = static_cast<std::size_t>(it - nodes.begin());
    const std::size_t k0 = k1 - 1;
    const auto* jumped = jump_slice(k0);
    const std::span<const double> later = jumped ? std::span<const double>(*jumped) : slice(k0);
    const double u0 = interpolate_row(later, this->t(k0), x);
    const double u1 = interpolate(k1, x);
    const double w = (tau - nodes[k0]) / (nodes[k1] - nodes[k0]);
    return (1.0 - w) * u0 + w * u1;
}

namespace {

void check_dominance(const StepCoefficients& c, double horizon) {
    const double off = std::abs(c.upper) + std::abs(c.lower);
    double worst = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < c.diag.size(); ++i) {
        const double active = c.diag[i] - std::max(0.0, c.eta[i]);
        const double margin = active - off;
        if (!(margin > 0.0)) {
            ok = false;
            // 1/dtau must exceed the remaining deficit.
            worst = std::max(worst, off - (active - 1.0 / c.dtau));
        }
    }
    if (ok) return;
    const double dtau_max = worst > 0.0 ? 1.0 / worst : 0.0;
    std::ostringstream os;
    os << "step matrix loses diagonal dominance for dtau = " << c.dtau << ", dy = " << c.dy;
    if (dtau_max > 0.0) {
        os << "; need dtau < " << dtau_max << " (n_tau >= "
           << static_cast<long>(std::ceil(horizon / dtau_max)) + 1 << ")";
    } else {
        os << "; refine dy so that |drift| dy <= sigma^2";
    }
    throw ConfigError(os.str());
}

}  // namespace

StepCoefficients build_linear_step(const ModelParams& p, const Grid& grid, double dtau,
                                   std::span<const double> rate, double boundary_value,
                                   double farfield_value) {
    if (!(dtau > 0.0)) throw DomainError("build_linear_step: dtau must be > 0");
    const std::size_t n = static_cast<std::size_t>(grid.n_y) - 1;
    if (rate.size() != n) throw DomainError("build_linear_step: rate has wrong length");
    const double dy = grid.dy();
    const double s2 = p.sigma * p.sigma;
    const double nu = p.log_drift();

    StepCoefficients c;
    c.dtau = dtau;
    c.dy = dy;
    c.upper = -0.5 * s2 / (dy * dy) - nu / (2.0 * dy);
    c.lower = -0.5 * s2 / (dy * dy) + nu / (2.0 * dy);
    c.diag.resize(n);
    c.zeta.assign(n, 0.0);
    c.eta.assign(n, 0.0);
    c.kappa.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) c.diag[i] = 1.0 / dtau + s2 / (dy * dy) - rate[i];
    c.boundary_value = boundary_value;
    c.farfield_value = farfield_value;
    check_dominance(c, p.horizon);
    return c;
}

StepCoefficients build_step(const ModelParams& p, const BeliefSpec& beliefs,
                            const IntensitySpec& intensity, const Grid& grid, double tau_next,
                            double dtau, FarField farfield) {
    if (!(tau_next >= 0.0 && tau_next <= p.horizon + 1e-12)) {
        throw DomainError("build_step: tau outside [0, T]");
    }
    const double t = std::max(0.0, p.horizon - tau_next);
    const double l = debt_ratio(p, t);
    const double boundary = p.beta * l;
    const double dy = grid.dy();
    const std::size_t n = static_cast<std::size_t>(grid.n_y) - 1;

    std::vector<double> rate(n);
    std::vector<double> zeta(n), eta(n), kappa(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = boundary * std::exp(static_cast<double>(i + 1) * dy);
        const double g = intensity(x);
        const double th = theta(p, beliefs, x);
        zeta[i] = g;
        eta[i] = g * th;
        kappa[i] = g * (1.0 - th) * recovery_rate(p, t, x);
        rate[i] = p.carry() - g;
    }
    const double lower_value = p.alpha * boundary / (1.0 + l);
    StepCoefficients c = build_linear_step(p, grid, dtau, rate, lower_value,
                                           farfield_value(p, farfield, tau_next));
    c.zeta = std::move(zeta);
    c.eta = std::move(eta);
    c.kappa = std::move(kappa);
    check_dominance(c, p.horizon);
    return c;
}

void thomas_solve(double lower, std::span<const double> diag, double upper,
                  std::span<const double> rhs, std::span<double> out, std::span<double> scratch) {
    const std::size_t n = diag.size();
    if (rhs.size() != n || out.size() != n || scratch.size() < n) {
        throw DomainError("thomas_solve: size mismatch");
    }
    const double off = std::abs(lower) + std::abs(upper);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::abs(diag[i]) > off)) {
            std::ostringstream os;
            os << "tridiagonal system is not diagonally dominant at row " << i << " (|a| = "
               << std::abs(diag[i]) << ", |b| + |c| = " << off << ")";
            throw ConfigError(os.str());
        }
    }
    // Forward sweep: scratch holds the modified super-diagonal.
    double denom = diag[0];
    scratch[0] = upper / denom;
    out[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower * scratch[i - 1];
        scratch[i] = upper / denom;
        out[i] = (rhs[i] - lower * out[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) out[i] -= scratch[i] * out[i + 1];
}

std::vector<double> solve_tridiagonal(const StepCoefficients& coeffs, std::span<const double> rhs) {
    std::vector<double> out(coeffs.diag.size());
    std::vector<double> scratch(coeffs.diag.size());
    thomas_solve(coeffs.lower, coeffs.diag, coeffs.upper, rhs, out, scratch);
    return out;
}

NewtonResult newton_semilinear_step(const StepCoefficients& coeffs, std::span<const double> u_prev,
                                    const NewtonOptions& options) {
    const std::size_t n = coeffs.diag.size();
    if (u_prev.size() != n + 2) throw DomainError("newton_semilinear_step: slice has wrong length");
    if (!(options.tol > 0.0) || options.max_iter < 1) throw DomainError("newton_semilinear_step: bad options");

    std::vector<double> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = u_prev[i + 1] / coeffs.dtau + coeffs.kappa[i];
    base.front() -= coeffs.lower * coeffs.boundary_value;
    base.back() -= coeffs.upper * coeffs.farfield_value;

    NewtonResult result;
    result.values.assign(u_prev.begin(), u_prev.end());
    result.values.front() = coeffs.boundary_value;
    result.values.back() = coeffs.farfield_value;
    std::span<double> v(result.values.data() + 1, n);

    std::vector<double> scratch(n);
    const bool linear = std::all_of(coeffs.eta.begin(), coeffs.eta.end(), [](double e) { return e == 0.0; });
    if (linear) {
        thomas_solve(coeffs.lower, coeffs.diag, coeffs.upper, base, v, scratch);
        result.iterations = 1;
        result.last_increment = 0.0;
        return result;
    }

    // Each Newton update solves B_m v^{m+1} = kappa_bar + eta 1{v^m <= 1},
    // with B_m = A - diag(eta 1{v^m > 1}).
    std::vector<double> diag(n), rhs(n), next(n);
    double increment = 0.0;
    for (int m = 1; m <= options.max_iter; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            const bool above = v[i] > 1.0;
            diag[i] = coeffs.diag[i] - (above ? coeffs.eta[i] : 0.0);
            rhs[i] = base[i] + (above ? 0.0 : coeffs.eta[i]);
        }
        thomas_solve(coeffs.lower, diag, coeffs.upper, rhs, next, scratch);
        increment = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            increment = std::max(increment, std::abs(next[i] - v[i]));
            v[i] = next[i];
        }
        if (!std::isfinite(increment)) break;
        if (increment < options.tol) {
            result.iterations = m;
            result.last_increment = increment;
            return result;
        }
    }
    std::ostringstream os;
    os << "Newton iteration did not converge in " << options.max_iter
       << " iterations (last increment " << increment << ")";
    throw NonconvergenceError(os.str(), increment);
}

}  // namespace debtrun
