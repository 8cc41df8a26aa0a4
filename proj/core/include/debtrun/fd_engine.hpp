#pragma once

#include "debtrun/beliefs.hpp"
#include "debtrun/intensity.hpp"
#include "debtrun/model.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace debtrun {

/// Dirichlet rule at the upper truncation y = y_max.
enum class FarField {
    asymptotic,  ///< u = e^{(r_S - r) tau}: a creditor who is never at risk
    paper_zero,  ///< u = 0, the literal truncation condition
};

/// Spatial grid on y = log(x / (beta l_t)) in [0, y_max] plus the nominal
/// number of time steps over [0, T].
struct Grid {
    double y_max = 6.0;
    int n_y = 600;
    int n_tau = 2000;

    void validate() const;
    double dy() const noexcept { return y_max / n_y; }
    double y(int j) const noexcept { return j * dy(); }
};

/// Nodes in time-to-maturity tau = T - t, from 0 to T. Breakpoints are
/// inserted exactly; each segment between breakpoints is split uniformly
/// with a step close to T / n_tau.
class TimeMesh {
public:
    static TimeMesh build(double horizon, int n_tau, std::vector<double> breakpoints = {});
    /// Mesh from explicit nodes; they must start at 0 and increase.
    static TimeMesh from_nodes(std::vector<double> nodes);

    std::size_t size() const noexcept { return tau_.size(); }
    double tau(std::size_t k) const { return tau_[k]; }
    double horizon() const noexcept { return tau_.back(); }
    const std::vector<double>& nodes() const noexcept { return tau_; }

    /// Index of the node within `tol` of `tau`, or size() if none.
    std::size_t find(double tau, double tol = 1e-9) const;

private:
    std::vector<double> tau_;
};

/// Discretized value u(tau_k, y_j) = U(T - tau_k, beta l_t e^{y_j}).
class ValueSurface {
public:
    ValueSurface(ModelParams params, Grid grid, TimeMesh mesh, FarField farfield);

    const ModelParams& params() const noexcept { return params_; }
    const Grid& grid() const noexcept { return grid_; }
    const TimeMesh& mesh() const noexcept { return mesh_; }
    FarField farfield() const noexcept { return farfield_; }

    std::size_t node_count() const noexcept { return mesh_.size(); }
    std::size_t width() const noexcept { return static_cast<std::size_t>(grid_.n_y) + 1; }

    std::span<double> slice(std::size_t k);
    std::span<const double> slice(std::size_t k) const;

    double t(std::size_t k) const { return params_.horizon - mesh_.tau(k); }
    double x(std::size_t k, int j) const;

    /// Node whose calendar time equals t (within 1e-9); DomainError if none.
    std::size_t node_at_time(double t) const;

    /// Linear interpolation in y of slice k at ratio x. Below the moving
    /// boundary the boundary value is returned; above y_max the far value.
    double interpolate(std::size_t k, double x) const;
    /// Interpolated U(t, x), linear in tau between nodes.
    double value_at(double t, double x) const;

    /// Slices taken just before a rollover date going backward in time,
    /// i.e. after the run/rollover jump has been applied.
    void set_jump_slice(std::size_t k, std::vector<double> values);
    const std::vector<double>* jump_slice(std::size_t k) const;
    const std::map<std::size_t, std::vector<double>>& jump_slices() const noexcept { return jumps_; }

    const std::vector<double>& raw() const noexcept { return values_; }
    std::vector<double>& raw() noexcept { return values_; }

private:
    double interpolate_row(std::span<const double> row, double t, double x) const;

    ModelParams params_;
    Grid grid_;
    TimeMesh mesh_;
    FarField farfield_;
    std::vector<double> values_;
    std::map<std::size_t, std::vector<double>> jumps_;
};

/// Tridiagonal implicit step A u^{n+1} - eta max{1, u^{n+1}} = rhs on the
/// interior nodes j = 1 .. n_y - 1 (vectors are indexed j - 1).
struct StepCoefficients {
    double dtau = 0.0;
    double dy = 0.0;
    double upper = 0.0;  ///< b, coefficient of u_{j+1}
    double lower = 0.0;  ///< c, coefficient of u_{j-1}
    std::vector<double> diag;
    std::vector<double> zeta;
    std::vector<double> eta;
    std::vector<double> kappa;
    double boundary_value = 0.0;  ///< u at j = 0 for the new time level
    double farfield_value = 0.0;  ///< u at j = n_y for the new time level
};

/// Coefficients of the value-function PDE for the step ending at `tau_next`
/// with length `dtau`. Throws ConfigError if the resulting Newton matrices
/// are not strictly diagonally dominant.
StepCoefficients build_step(const ModelParams& p, const BeliefSpec& beliefs,
                            const IntensitySpec& intensity, const Grid& grid, double tau_next,
                            double dtau, FarField farfield = FarField::asymptotic);

/// Linear step with a per-node zero-order rate: the equation
/// u_tau = 1/2 sigma^2 u_yy + nu u_y + rate_j u with explicit Dirichlet data.
StepCoefficients build_linear_step(const ModelParams& p, const Grid& grid, double dtau,
                                   std::span<const double> rate, double boundary_value,
                                   double farfield_value);

/// Thomas algorithm for constant off-diagonals. `scratch` needs diag.size()
/// entries. Throws ConfigError on loss of strict diagonal dominance.
void thomas_solve(double lower, std::span<const double> diag, double upper,
                  std::span<const double> rhs, std::span<double> out, std::span<double> scratch);

std::vector<double> solve_tridiagonal(const StepCoefficients& coeffs, std::span<const double> rhs);

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 50;
};

struct NewtonResult {
    std::vector<double> values;  ///< full slice j = 0 .. n_y
    int iterations = 0;
    double last_increment = 0.0;
};

/// One implicit step of the semilinear scheme, solved by Newton's method
/// starting from the previous slice. Throws NonconvergenceError.
NewtonResult newton_semilinear_step(const StepCoefficients& coeffs, std::span<const double> u_prev,
                                    const NewtonOptions& options = {});

/// Value of the far-field Dirichlet condition at tau.
double farfield_value(const ModelParams& p, FarField farfield, double tau);

/// Far-field value one implicit step after `previous` when the solution
/// grows at `rate` far out: previous / (1 - rate dtau). This is what the
/// interior scheme produces for a flat profile, so the boundary carries no
/// O(dtau) mismatch into the top rows. Zero for FarField::paper_zero.
double farfield_step(FarField farfield, double rate, double dtau, double previous);

}  // namespace debtrun
