#pragma once

#include <cmath>

namespace debtrun {

/// Market and contract constants of the firm. Rates are per year, `sigma`
/// per square-root year, debt amounts in currency units.
struct ModelParams {
    double r = 0.01;         ///< market rate
    double r_short = 0.03;   ///< short-term debt rate r_S
    double r_long = 0.05;    ///< long-term debt rate r_L
    double r_asset = -0.02;  ///< expected asset return r_V
    double sigma = 0.4;      ///< asset volatility
    double alpha = 0.6;      ///< fraction of asset value left after bankruptcy costs
    double beta = 0.4;       ///< safety-covenant coefficient
    double psi = 0.6;        ///< firesale rate
    double s0 = 2.0;         ///< initial short-term debt
    double l0 = 2.0;         ///< initial long-term debt
    double horizon = 10.0;   ///< maturity T of long-term debt

    /// Throws DomainError listing every violated constraint.
    void validate() const;

    /// Drift of y = log(x / (beta l_t)).
    double log_drift() const noexcept { return r_asset - r_long - 0.5 * sigma * sigma; }
    /// Net carry r_S - r earned by a short-term creditor.
    double carry() const noexcept { return r_short - r; }
};

/// Deterministic debt levels at time t.
struct DebtState {
    double t;
    double short_debt;
    double long_debt;
    double ratio;  ///< l_t = L_t / S_t
};

DebtState debt_state(const ModelParams& p, double t);

/// l_t = (L0/S0) e^{(r_L - r_S) t}; throws DomainError outside [0, T].
double debt_ratio(const ModelParams& p, double t);

double short_debt(const ModelParams& p, double t);
double long_debt(const ModelParams& p, double t);

/// R_t = min{1, alpha x / (1 + l_t)} for t < T, and min{1, x / (1 + l_T)} at T.
double recovery_rate(const ModelParams& p, double t, double x);

/// Firm-value insolvency barrier D^Ins_t = S_t beta l_t = beta L0 e^{r_L t}.
double insolvency_barrier(const ModelParams& p, double t);

/// Insolvency barrier in ratio space, beta l_t.
double insolvency_ratio(const ModelParams& p, double t);

/// Firm value (S_t + L_t) / psi that firesales can just cover.
double firesale_cap(const ModelParams& p, double t);

}  // namespace debtrun
