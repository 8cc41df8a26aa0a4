#pragma once

#include "debtrun/model.hpp"

#include <functional>
#include <span>

namespace debtrun {

/// Image-method Green's function of the killed log-normal ratio in
/// normalized coordinates x_bar = x / (beta l_t), from (t, x_bar) to
/// (t_end, xi), including the carry factor e^{(r_S - r)(t_end - t)}.
double greens_kernel(const ModelParams& p, double t, double x_bar, double t_end, double xi);

/// Boundary flux (1/2) sigma^2 d/dxi {xi^2 G(t, x_bar; eta, xi)} at xi = 1,
/// from the analytic derivative. Equals the carried first-passage density of
/// log(x_bar) to 0 at time eta.
double greens_boundary_flux(const ModelParams& p, double t, double x_bar, double eta);

struct GreensOptions {
    double tol = 1e-10;       ///< relative tolerance per quadrature piece
    double max_error = 1e-8;  ///< achieved error above this raises NonconvergenceError
};

/// Analytic value on one interval [t_start, t_end) of the linear Dirichlet
/// problem: terminal data `terminal(xi)` on xi >= 1 at t_end and boundary
/// data `boundary(eta)` on x_bar = 1. `terminal_kinks` lists xi values where
/// the terminal data is not smooth; they split the quadrature.
double greens_value(const ModelParams& p, const std::function<double(double)>& boundary,
                    const std::function<double(double)>& terminal, double t_start, double t_end,
                    double t, double x, std::span<const double> terminal_kinks = {},
                    const GreensOptions& options = {});

/// Value on the last interval [t_last, T] with the model's own data: boundary
/// alpha beta l / (1 + l) and terminal payoff min{1, x / (1 + l_T)}.
double greens_final_interval_value(const ModelParams& p, double t_last, double t, double x,
                                   const GreensOptions& options = {});

}  // namespace debtrun
