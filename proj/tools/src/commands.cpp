#include "debtrun_cli/commands.hpp"

#include "debtrun/discrete_tenor.hpp"
#include "debtrun/errors.hpp"
#include "debtrun/io.hpp"
#include "debtrun/staggered_tenor.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <map>
#include <sstream>

#ifndef DEBTRUN_VERSION
#define DEBTRUN_VERSION "0.0.0"
#endif

namespace debtrun::cli {

namespace {

std::string safe(std::string s) {
    for (char& ch : s) {
        const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                          ch == '.' || ch == '-' || ch == '_';
        if (!keep) ch = '_';
    }
    return s;
}

std::string psi_tag(double psi) {
    return "psi" + io::num(psi);
}

void require_tenors(const RunConfig& c) {
    if (c.tenors.empty()) throw ConfigError("invalid configuration:\n  tenor: at least one tenor is required");
}

ValueSurface solve_value(const RunConfig& c, const ModelParams& p, const BeliefSpec& b, const TenorConfig& t,
                         SolveStats* stats = nullptr) {
    if (t.discrete()) {
        return solve_discrete_value(p, b, DiscreteTenor(t.resolved_dates(p.horizon), p.horizon), c.grid,
                                    c.farfield);
    }
    StaggeredOptions opts;
    opts.farfield = c.farfield;
    opts.newton = c.newton;
    return solve_staggered_value(p, b, t.intensity(), c.grid, opts, stats);
}

constexpr double kOrderTol = 1e-12;

template <class Rows>
int ordering_violations(const Rows& rows) {
    int bad = 0;
    for (const auto& r : rows) {
        const double scale = std::max(1.0, std::abs(r.d_ins));
        if (r.d_ins > r.d_ill + kOrderTol * scale || r.d_ill > r.d_run + kOrderTol * scale) ++bad;
    }
    return bad;
}

/// Largest amount by which a lower-variance belief's run threshold exceeds
/// a higher-variance one's, over the common time mesh.
Json belief_ordering(const std::vector<std::pair<double, BarrierCurve>>& by_variance) {
    double worst = 0.0;
    int violations = 0;
    for (std::size_t i = 0; i + 1 < by_variance.size(); ++i) {
        const auto& hi = by_variance[i].second;
        const auto& lo = by_variance[i + 1].second;
        for (std::size_t k = 0; k < hi.samples().size() && k < lo.samples().size(); ++k) {
            const double gap = lo.samples()[k].x_star - hi.samples()[k].x_star;
            if (gap > 1e-9) ++violations;
            worst = std::max(worst, gap);
        }
    }
    return {{"violations", violations}, {"max_excess", worst}};
}

double belief_variance(const BeliefSpec& b) {
    return b.truncated_moments().variance;
}

}  // namespace

CommandOutput cmd_barriers(const RunConfig& c) {
    require_tenors(c);
    CommandOutput out;
    out.summary["runs"] = Json::array();
    for (const auto& t : c.tenors) {
        std::vector<std::pair<double, BarrierCurve>> staggered_curves;
        for (const auto& b : c.beliefs) {
            const std::string label = safe(c.beliefs.size() > 1 ? t.label + "_" + b.label : t.label);
            SolveStats stats;
            const ValueSurface surface = solve_value(c, c.model, b.spec, t, &stats);
            Json run = {{"tenor", t.label}, {"belief", b.label}, {"file", "barriers_" + label + ".csv"}};
            if (t.discrete()) {
                const DiscreteTenor tenor(t.resolved_dates(c.model.horizon), c.model.horizon);
                const DiscreteBarrierSet set = extract_discrete_barriers(surface, c.model, tenor);
                for (const auto& d : set.diagnostics) out.warnings.push_back(label + ": " + d);
                out.files.emplace_back("barriers_" + label + ".csv", io::discrete_barriers_csv(set));
                run["rows"] = set.entries.size();
                run["ordering_violations"] = ordering_violations(set.entries);
            } else {
                const BarrierCurve curve = extract_free_boundary(surface, c.model);
                out.files.emplace_back("barriers_" + label + ".csv", io::barrier_curve_csv(curve));
                double gap = 0.0;
                for (const auto& s : curve.samples()) {
                    if (std::isfinite(s.pasting_gap)) gap = std::max(gap, s.pasting_gap);
                }
                run["rows"] = curve.samples().size();
                run["ordering_violations"] = ordering_violations(curve.samples());
                run["max_pasting_gap"] = gap;
                run["max_newton_iterations"] = stats.max_iterations;
                run["x_star_t0"] = curve.x_star_at(0.0);
                staggered_curves.emplace_back(belief_variance(b.spec), curve);
            }
            if (c.write_surface) {
                out.files.emplace_back("surface_" + label + ".csv", io::surface_csv(surface));
                out.files.emplace_back("surface_" + label + ".bin", io::surface_binary(surface));
            }
            out.summary["runs"].push_back(run);
        }
        if (staggered_curves.size() > 1) {
            std::stable_sort(staggered_curves.begin(), staggered_curves.end(),
                             [](const auto& a, const auto& b) { return a.first > b.first; });
            out.summary["belief_ordering"][t.label] = belief_ordering(staggered_curves);
        }
    }
    return out;
}

CommandOutput cmd_default_prob(const RunConfig& c) {
    require_tenors(c);
    c.mc.validate(1000);
    CommandOutput out;
    std::vector<double> v0s = c.v0_sweep;
    if (v0s.empty()) {
        for (int i = 1; i <= 10; ++i) v0s.push_back(i);
    }
    std::vector<double> psis = c.psi_sweep;
    const bool psi_sweep = !psis.empty();
    if (!psi_sweep) psis.push_back(c.model.psi);
    const BeliefSpec& belief = c.beliefs.front().spec;

    out.summary["runs"] = Json::array();
    for (double psi : psis) {
        ModelParams p = c.model;
        p.psi = psi;
        p.validate();
        for (const auto& t : c.tenors) {
            const std::string label = safe(psi_sweep ? t.label + "_" + psi_tag(psi) : t.label);
            std::vector<io::PdRow> rows;
            Json records = Json::array();
            auto record = [&](double v0, const DefaultDecomposition& d) {
                rows.push_back(io::pd_row(v0, d));
                records.push_back({{"V0", v0},
                                   {"pd_total", d.pd_total},
                                   {"pd_insolvency", d.pd_insolvency},
                                   {"pd_illiquidity", d.pd_illiquidity},
                                   {"pd_baseline_blackcox", d.pd_baseline_blackcox},
                                   {"mc_halfwidth", d.mc_halfwidth},
                                   {"std_error", d.std_error},
                                   {"n_paths", d.n_paths},
                                   {"n_survive", d.n_survive},
                                   {"n_insolvency", d.n_insolvency},
                                   {"n_illiquidity", d.n_illiquidity}});
            };
            if (t.discrete()) {
                const DiscreteTenor tenor(t.resolved_dates(p.horizon), p.horizon);
                const ValueSurface surface = solve_value(c, p, belief, t);
                const DiscreteBarrierSet set = extract_discrete_barriers(surface, p, tenor);
                for (double v0 : v0s) record(v0, mc_default_discrete(p, set, tenor, v0, c.mc));
            } else {
                const IntensitySpec intensity = t.intensity();
                BarrierCurve curve;
                if (c.barrier_file) {
                    curve = io::read_barrier_curve_csv(*c.barrier_file, p);
                } else {
                    curve = extract_free_boundary(solve_value(c, p, belief, t), p);
                }
                const SurvivalSurface survival = solve_survival_staggered(p, intensity, curve, c.grid, c.variant);
                std::string pde = "V0,pd_pde\n";
                for (double v0 : v0s) {
                    record(v0, mc_default_staggered(p, intensity, curve, v0, c.mc));
                    const double pd = survival.pd(v0);
                    pde += io::num(v0) + "," + io::num(pd) + "\n";
                    records.back()["pd_pde"] = pd;
                }
                out.files.emplace_back("pd_pde_" + label + ".csv", pde);
            }
            out.files.emplace_back("pd_" + label + ".csv", io::pd_sweep_csv(rows));
            out.summary["runs"].push_back(
                {{"tenor", t.label}, {"psi", psi}, {"file", "pd_" + label + ".csv"}, {"records", records}});
        }
    }
    return out;
}

CommandOutput cmd_simulate(const RunConfig& c) {
    require_tenors(c);
    CommandOutput out;
    const BeliefSpec& belief = c.beliefs.front().spec;
    out.summary["runs"] = Json::array();
    for (const auto& t : c.tenors) {
        const std::string label = safe(t.label);
        std::string csv(io::kPathHeader);
        std::map<std::string, std::size_t> freq{{"insolvency_default", 0},
                                                {"illiquidity_default", 0},
                                                {"unsuccessful_run", 0},
                                                {"survival", 0}};
        Json records = Json::array();
        if (c.n_scenarios > 0) {
            const ValueSurface surface = solve_value(c, c.model, belief, t);
            std::optional<DiscreteTenor> tenor;
            std::optional<DiscreteBarrierSet> set;
            std::optional<BarrierCurve> curve;
            std::optional<IntensitySpec> intensity;
            if (t.discrete()) {
                tenor.emplace(t.resolved_dates(c.model.horizon), c.model.horizon);
                set = extract_discrete_barriers(surface, c.model, *tenor);
            } else {
                curve = extract_free_boundary(surface, c.model);
                intensity = t.intensity();
            }
            const RunBarrier barrier = t.discrete() ? RunBarrier(*set, c.model) : RunBarrier(*curve);
            for (std::size_t i = 0; i < c.n_scenarios; ++i) {
                PathRng rng(c.mc.seed, i);
                const SimPath path = t.discrete() ? simulate_path(c.model, *tenor, c.v0, c.scenario_dt, rng)
                                                  : simulate_path(c.model, *intensity, c.v0, c.scenario_dt, rng);
                const ScenarioRecord rec = classify_scenario(path, barrier, c.model);
                io::append_path_rows(csv, i, path, c.model);
                ++freq[to_string(rec.outcome)];
                records.push_back({{"path", i},
                                   {"outcome", to_string(rec.outcome)},
                                   {"event_time", rec.event_time},
                                   {"payoff", rec.payoff},
                                   {"unsuccessful_runs", rec.unsuccessful_runs},
                                   {"arrivals", path.arrivals.size()}});
            }
        }
        Json frequencies = Json::object();
        for (const auto& [k, n] : freq) {
            frequencies[k] = c.n_scenarios ? static_cast<double>(n) / static_cast<double>(c.n_scenarios) : 0.0;
        }
        Json summary = {{"tenor", t.label},
                        {"v0", c.v0},
                        {"n_scenarios", c.n_scenarios},
                        {"counts", freq},
                        {"frequencies", frequencies},
                        {"records", records}};
        out.files.emplace_back("paths_" + label + ".csv", csv);
        out.files.emplace_back("scenarios_" + label + ".json", summary.dump(2) + "\n");
        summary.erase("records");
        out.summary["runs"].push_back(summary);
    }
    return out;
}

CommandOutput cmd_compare_tenor(const RunConfig& c) {
    if (c.pairs.empty()) throw ConfigError("invalid configuration:\n  compare.pairs: at least one (n, g) pair is required");
    CommandOutput out;
    const BeliefSpec& belief = c.beliefs.front().spec;
    const ModelParams& p = c.model;

    std::vector<double> xs;
    for (int i = 0; i < c.x_points; ++i) {
        xs.push_back(c.x_min + (c.x_max - c.x_min) * i / (c.x_points - 1));
    }

    std::vector<std::string> columns;
    std::map<std::string, std::vector<double>> curves;
    auto add_curve = [&](const std::string& name, const ValueSurface& s) {
        if (curves.count(name)) return;
        std::vector<double> u;
        u.reserve(xs.size());
        for (double x : xs) u.push_back(s.value_at(0.0, x));
        columns.push_back(name);
        curves.emplace(name, std::move(u));
    };

    std::string table = "N,g,sup_abs,sup_rel\n";
    Json distances = Json::array();
    for (const auto& pair : c.pairs) {
        const std::string dn = "N" + std::to_string(pair.n);
        const std::string sg = "g" + io::num(pair.g);
        if (!curves.count(dn)) {
            const DiscreteTenor tenor = DiscreteTenor::equally_spaced(pair.n, p.horizon);
            const ValueSurface s = solve_discrete_value(p, belief, tenor, c.grid, c.farfield);
            add_curve(dn, s);
            const DiscreteBarrierSet set = extract_discrete_barriers(s, p, tenor);
            for (const auto& d : set.diagnostics) out.warnings.push_back(dn + ": " + d);
            out.files.emplace_back("barriers_" + safe(dn) + ".csv", io::discrete_barriers_csv(set));
        }
        if (!curves.count(sg)) {
            StaggeredOptions opts;
            opts.farfield = c.farfield;
            opts.newton = c.newton;
            const ValueSurface s = solve_staggered_value(p, belief, IntensitySpec::constant(pair.g), c.grid, opts);
            add_curve(sg, s);
            out.files.emplace_back("barriers_" + safe(sg) + ".csv", io::barrier_curve_csv(extract_free_boundary(s, p)));
        }
        const auto& a = curves.at(dn);
        const auto& b = curves.at(sg);
        double sup_abs = 0.0;
        double sup_rel = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double d = std::abs(a[i] - b[i]);
            sup_abs = std::max(sup_abs, d);
            sup_rel = std::max(sup_rel, d / std::max(std::abs(b[i]), 1e-300));
        }
        table += std::to_string(pair.n) + "," + io::num(pair.g) + "," + io::num(sup_abs) + "," + io::num(sup_rel) + "\n";
        distances.push_back({{"N", pair.n}, {"g", pair.g}, {"sup_abs", sup_abs}, {"sup_rel", sup_rel}});
    }

    std::string u0 = "x";
    for (const auto& name : columns) u0 += "," + name;
    u0 += "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        u0 += io::num(xs[i]);
        for (const auto& name : columns) u0 += "," + io::num(curves.at(name)[i]);
        u0 += "\n";
    }
    out.files.emplace_back("u0_curves.csv", u0);
    out.files.emplace_back("compare.csv", table);
    out.summary["distances"] = distances;
    return out;
}

CommandOutput run_command(const std::string& command, const RunConfig& config) {
    if (command == "barriers") return cmd_barriers(config);
    if (command == "default-prob") return cmd_default_prob(config);
    if (command == "simulate") return cmd_simulate(config);
    if (command == "compare-tenor") return cmd_compare_tenor(config);
    throw ConfigError("unknown command '" + command + "'");
}

std::string manifest_json(const std::string& command, const RunConfig& config, const CommandOutput& out) {
    const Json cfg = to_json(config);
    Json m;
    m["schema_version"] = kSchemaVersion;
    m["tool"] = "debtrun";
    m["version"] = DEBTRUN_VERSION;
    m["command"] = command;
    m["config"] = cfg;
    m["config_hash"] = fnv1a_hex(cfg.dump());
    m["grid"] = cfg["grid"];
    m["seed"] = config.mc.seed;
    m["outputs"] = Json::array();
    for (const auto& [name, content] : out.files) {
        m["outputs"].push_back({{"file", name}, {"bytes", content.size()}, {"fnv1a", fnv1a_hex(content)}});
    }
    m["warnings"] = out.warnings;
    m["summary"] = out.summary;
    return m.dump(2) + "\n";
}

std::string gnuplot_script(const CommandOutput& out) {
    std::string s = "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 1000,700\n";
    for (const auto& [name, content] : out.files) {
        if (name.size() < 4 || name.compare(name.size() - 4, 4, ".csv") != 0) continue;
        if (name.rfind("surface_", 0) == 0 || name.rfind("paths_", 0) == 0) continue;
        const std::string header = content.substr(0, content.find('\n'));
        const auto cols = static_cast<int>(std::count(header.begin(), header.end(), ',')) + 1;
        s += "set output '" + name.substr(0, name.size() - 4) + ".png'\nplot ";
        for (int k = 2; k <= cols; ++k) {
            if (k > 2) s += ", ";
            s += "'" + name + "' using 1:" + std::to_string(k) + " with lines";
        }
        s += "\n";
    }
    return s;
}

void write_run(const std::filesystem::path& dir, const std::string& command, const RunConfig& config,
               CommandOutput& out, bool gnuplot) {
    if (gnuplot) out.files.emplace_back("plot.gp", gnuplot_script(out));
    for (const auto& [name, content] : out.files) io::write_atomic(dir / name, content);
    io::write_atomic(dir / "manifest.json", manifest_json(command, config, out));
}

namespace {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 2;
    if (dynamic_cast<const NonconvergenceError*>(&e)) return 3;
    if (dynamic_cast<const DependencyError*>(&e)) return 4;
    return 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Debt-run barriers, default probabilities and scenario simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", DEBTRUN_VERSION);

    std::string config_path;
    std::string out_dir = "out";
    bool gnuplot = false;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"barriers", "Solve the value function and write run/illiquidity/insolvency barriers"},
        {"default-prob", "Default probabilities over a V0 sweep, with the insolvency/illiquidity split"},
        {"simulate", "Simulate and classify scenario paths"},
        {"compare-tenor", "Compare U(0, x) between discrete and staggered tenors"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "JSON config or run manifest")->required();
        sub->add_option("-o,--out", out_dir, "Output directory");
        sub->add_flag("--gnuplot", gnuplot, "Also write a gnuplot script");
    }
    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "Re-run a manifest");
    replay->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();
    replay->add_option("-o,--out", out_dir, "Output directory");
    replay->add_flag("--gnuplot", gnuplot, "Also write a gnuplot script");
    auto* validate = app.add_subcommand("validate", "Check a config and print its resolved form");
    validate->add_option("-c,--config", config_path, "JSON config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "validate") {
            std::cout << to_json(load_config(config_path)).dump(2) << "\n";
            return 0;
        }
        std::string command = name;
        RunConfig config;
        if (name == "replay") {
            std::ifstream is(manifest_path);
            if (!is) throw DependencyError("cannot open manifest " + manifest_path);
            Json m;
            try {
                m = Json::parse(is);
            } catch (const Json::parse_error& e) {
                throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
            }
            if (!m.contains("command") || !m["command"].is_string()) throw ConfigError("manifest has no command");
            command = m["command"].get<std::string>();
            config = parse_config(m);
        } else {
            config = load_config(config_path);
        }
        CommandOutput out = run_command(command, config);
        for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
        write_run(out_dir, command, config, out, gnuplot);
        std::cout << "wrote " << out.files.size() + 1 << " files to " << out_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace debtrun::cli
