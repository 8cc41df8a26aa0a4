#include "debtrun/greens.hpp"

#include "debtrun/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace debtrun {

namespace {

// exp(-k^2 / 2) < 1e-15 beyond this many standard deviations.
constexpr double kTailSd = 8.3;

struct Quad {
    double value = 0.0;
    double error = 0.0;
};

template <class F>
Quad integrate(F&& f, double a, double b, double tol) {
    Quad q;
    if (!(b > a)) return q;
    double err = 0.0;
    q.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, tol, &err);
    // Boost reports the Gauss/Kronrod difference on the reference interval.
    q.error = err * 0.5 * (b - a);
    return q;
}

}  // namespace

double greens_kernel(const ModelParams& p, double t, double x_bar, double t_end, double xi) {
    if (!(x_bar >= 1.0) || !(xi >= 1.0) || !(t < t_end)) {
        throw DomainError("greens_kernel: need x_bar >= 1, xi >= 1 and t < t_end");
    }
    const double s = t_end - t;
    const double s2 = p.sigma * p.sigma;
    const double z0 = std::log(x_bar);
    const double z = std::log(xi);
    const double shift = z0 - z + p.log_drift() * s;
    const double gauss = std::exp(-shift * shift / (2.0 * s2 * s));
    const double image = -std::expm1(-2.0 * z * z0 / (s2 * s));
    return std::exp(p.carry() * s) / (xi * p.sigma * std::sqrt(2.0 * std::numbers::pi * s)) * gauss * image;
}

double greens_boundary_flux(const ModelParams& p, double t, double x_bar, double eta) {
    if (!(x_bar >= 1.0) || !(eta >= t)) throw DomainError("greens_boundary_flux: need x_bar >= 1, eta >= t");
    const double s = eta - t;
    const double z0 = std::log(x_bar);
    if (z0 == 0.0 || s == 0.0) return 0.0;
    const double s2 = p.sigma * p.sigma;
    const double m = z0 + p.log_drift() * s;
    return std::exp(p.carry() * s) * z0 / (p.sigma * std::sqrt(2.0 * std::numbers::pi) * s * std::sqrt(s)) *
           std::exp(-m * m / (2.0 * s2 * s));
}

double greens_value(const ModelParams& p, const std::function<double(double)>& boundary,
                    const std::function<double(double)>& terminal, double t_start, double t_end,
                    double t, double x, std::span<const double> terminal_kinks,
                    const GreensOptions& options) {
    if (!(t >= t_start && t < t_end)) throw DomainError("greens_value: t outside [t_start, t_end)");
    const double edge = insolvency_ratio(p, t);
    if (!(x >= edge * (1.0 - 1e-14))) throw DomainError("greens_value: x below the insolvency boundary");
    const double x_bar = std::max(1.0, x / edge);
    if (x_bar == 1.0) return boundary(t);

    const double s = t_end - t;
    const double sd = p.sigma * std::sqrt(s);
    const double z0 = std::log(x_bar);
    const double centre = z0 + p.log_drift() * s;

    // Terminal part in z = log(xi): the Jacobian xi cancels the kernel's 1/xi.
    double total = 0.0;
    double error = 0.0;
    {
        const double lo = std::max(0.0, centre - kTailSd * sd);
        const double hi = std::max(lo, centre + kTailSd * sd);
        std::vector<double> cuts{lo};
        for (double k : terminal_kinks) {
            if (k > 1.0) {
                const double zk = std::log(k);
                if (zk > lo && zk < hi) cuts.push_back(zk);
            }
        }
        cuts.push_back(centre > lo && centre < hi ? centre : lo);
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        auto f = [&](double z) {
            const double xi = std::exp(z);
            return terminal(xi) * greens_kernel(p, t, x_bar, t_end, xi) * xi;
        };
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const Quad q = integrate(f, cuts[i], cuts[i + 1], options.tol);
            total += q.value;
            error += q.error;
        }
    }

    // Boundary part over eta in (t, t_end], refined geometrically towards
    // eta = t where the first-passage density is sharply peaked.
    {
        auto f = [&](double eta) { return boundary(eta) * greens_boundary_flux(p, t, x_bar, eta); };
        std::vector<double> cuts{s};
        for (int k = 1; k <= 48; ++k) cuts.push_back(s * std::ldexp(1.0, -k));
        cuts.push_back(0.0);
        std::reverse(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const Quad q = integrate(f, t + cuts[i], t + cuts[i + 1], options.tol);
            total += q.value;
            error += q.error;
        }
    }

    if (!(error <= options.max_error) || !std::isfinite(total)) {
        std::ostringstream os;
        os << "Green's quadrature did not reach tolerance (achieved " << error << ")";
        throw NonconvergenceError(os.str(), error);
    }
    return total;
}

double greens_final_interval_value(const ModelParams& p, double t_last, double t, double x,
                                   const GreensOptions& options) {
    const double l_end = debt_ratio(p, p.horizon);
    const double scale = p.beta * l_end / (1.0 + l_end);
    auto boundary = [&p](double eta) {
        const double l = debt_ratio(p, std::min(eta, p.horizon));
        return p.alpha * p.beta * l / (1.0 + l);
    };
    auto terminal = [scale](double xi) { return std::min(1.0, xi * scale); };
    const double kink = 1.0 / scale;
    return greens_value(p, boundary, terminal, t_last, p.horizon, t, x, std::span<const double>(&kink, 1),
                        options);
}

}  // namespace debtrun
