#pragma once

#include "debtrun/beliefs.hpp"
#include "debtrun/fd_engine.hpp"
#include "debtrun/intensity.hpp"
#include "debtrun/model.hpp"
#include "debtrun/montecarlo.hpp"
#include "debtrun/risk_metrics.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace debtrun::cli {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct TenorConfig {
    enum class Kind { discrete, staggered };

    Kind kind = Kind::staggered;
    std::string label;
    // discrete: either a count of equally spaced dates or explicit dates
    std::optional<int> count;
    std::vector<double> dates;
    // staggered: constant rate or a tabulated profile in x
    std::optional<double> rate;
    std::vector<double> knots;
    std::vector<double> rates;

    bool discrete() const noexcept { return kind == Kind::discrete; }
    std::vector<double> resolved_dates(double horizon) const;
    IntensitySpec intensity() const;
};

struct BeliefConfig {
    BeliefSpec spec = BeliefSpec::uniform();
    std::string label;
};

struct ComparePair {
    int n = 0;
    double g = 0.0;
};

/// Fully resolved settings of one run. Every field has a default, so a
/// config file only lists what differs.
struct RunConfig {
    ModelParams model;
    std::vector<BeliefConfig> beliefs{BeliefConfig{BeliefSpec::uniform(), "uniform"}};
    std::vector<TenorConfig> tenors;
    Grid grid;
    McOptions mc;
    FarField farfield = FarField::asymptotic;
    SurvivalVariant variant = SurvivalVariant::corrected;
    NewtonOptions newton;

    std::vector<double> v0_sweep;
    std::vector<double> psi_sweep;
    double v0 = 8.0;
    std::size_t n_scenarios = 0;
    double scenario_dt = 0.005;
    bool write_surface = false;
    std::optional<std::string> barrier_file;

    std::vector<ComparePair> pairs;
    double x_min = 1.0;
    double x_max = 6.0;
    int x_points = 101;
};

/// Parses a config object, or the "config" member of a run manifest. All
/// problems are collected and thrown as one ConfigError, one line per
/// field path.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);

/// Canonical JSON form; parse_config(to_json(c)) reproduces c.
Json to_json(const RunConfig& c);

/// 64-bit FNV-1a over bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace debtrun::cli
