#pragma once

#include "debtrun/discrete_tenor.hpp"
#include "debtrun/fd_engine.hpp"
#include "debtrun/montecarlo.hpp"
#include "debtrun/risk_metrics.hpp"
#include "debtrun/staggered_tenor.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace debtrun::io {

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for the rest.
std::string num(double v);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& file, std::string_view content);

/// Columns tau, y, u; one row per node.
std::string surface_csv(const ValueSurface& surface);
/// Columns T_n, x_star, D_run, D_ill, D_ins.
std::string discrete_barriers_csv(const DiscreteBarrierSet& set);
/// Columns t, x_star, D_run, D_ill, D_ins.
std::string barrier_curve_csv(const BarrierCurve& curve);

struct PdRow {
    double v0 = 0.0;
    double pd_total = 0.0;
    double pd_ins = 0.0;
    double pd_ill = 0.0;
    double pd_blackcox = 0.0;
    double ci = 0.0;
};

PdRow pd_row(double v0, const DefaultDecomposition& d);
/// Columns V0, pd_total, pd_ins, pd_ill, pd_blackcox, ci.
std::string pd_sweep_csv(const std::vector<PdRow>& rows);

inline constexpr std::string_view kPathHeader = "path,t,V,D_ins,event\n";
/// Appends the rows of one path: mesh points, then one row per arrival and
/// the insolvency time, with V = X S_t.
void append_path_rows(std::string& out, std::size_t path_id, const SimPath& path, const ModelParams& p);

/// Reads a (t, x_star, D_run, D_ill, D_ins) file back into a curve; the
/// barriers are recomputed from x_star. DependencyError if it is missing.
BarrierCurve read_barrier_curve_csv(const std::filesystem::path& file, const ModelParams& p);

/// Compact binary dump of a surface, including its rollover jump slices.
std::string surface_binary(const ValueSurface& surface);
void write_surface_binary(const std::filesystem::path& file, const ValueSurface& surface);
ValueSurface read_surface_binary(const std::filesystem::path& file);

}  // namespace debtrun::io
