#include "debtrun_cli/config.hpp"

#include "debtrun/discrete_tenor.hpp"
#include "debtrun/errors.hpp"

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

namespace debtrun::cli {

namespace {

class Reader {
public:
    Reader(const Json& j, std::string path, std::vector<std::string>& errors)
        : j_(j), path_(std::move(path)), errors_(errors) {
        if (!j_.is_object()) fail("", "expected an object");
    }

    bool ok() const { return j_.is_object(); }

    void fail(const std::string& key, const std::string& msg) const {
        std::string where = path_;
        if (!key.empty()) where += where.empty() ? key : "." + key;
        errors_.push_back((where.empty() ? "<root>" : where) + ": " + msg);
    }

    const Json* find(const char* key) {
        seen_.insert(key);
        if (!ok()) return nullptr;
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void get(const char* key, double& out) {
        if (const Json* v = find(key)) {
            if (v->is_number()) out = v->get<double>();
            else fail(key, "expected a number");
        }
    }
    void get(const char* key, int& out) {
        if (const Json* v = find(key)) {
            if (v->is_number_integer()) out = v->get<int>();
            else fail(key, "expected an integer");
        }
    }
    void get(const char* key, std::size_t& out) {
        if (const Json* v = find(key)) {
            if (v->is_number_integer() && v->get<long long>() >= 0) out = v->get<std::size_t>();
            else fail(key, "expected a non-negative integer");
        }
    }
    void get(const char* key, std::uint64_t& out, int /*tag*/) {
        if (const Json* v = find(key)) {
            if (v->is_number_unsigned()) out = v->get<std::uint64_t>();
            else if (v->is_number_integer() && v->get<long long>() >= 0) out = static_cast<std::uint64_t>(v->get<long long>());
            else fail(key, "expected a non-negative integer");
        }
    }
    void get(const char* key, bool& out) {
        if (const Json* v = find(key)) {
            if (v->is_boolean()) out = v->get<bool>();
            else fail(key, "expected true or false");
        }
    }
    void get(const char* key, std::string& out) {
        if (const Json* v = find(key)) {
            if (v->is_string()) out = v->get<std::string>();
            else fail(key, "expected a string");
        }
    }
    void get(const char* key, std::vector<double>& out) {
        if (const Json* v = find(key)) {
            if (!v->is_array()) {
                fail(key, "expected an array of numbers");
                return;
            }
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) {
                    fail(key, "expected an array of numbers");
                    return;
                }
                out.push_back(e.get<double>());
            }
        }
    }

    /// Reports keys that were never asked for.
    void finish() const {
        if (!ok()) return;
        for (const auto& [k, v] : j_.items()) {
            if (!seen_.count(k)) fail(k, "unknown key");
        }
    }

    const std::string& path() const { return path_; }
    std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    const Json& j_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
};

/// Accepts a single object or an array of objects.
std::vector<const Json*> object_list(const Json& v) {
    std::vector<const Json*> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(&e);
    } else {
        out.push_back(&v);
    }
    return out;
}

std::string fmt_label(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void parse_model(Reader r, ModelParams& m) {
    r.get("r", m.r);
    r.get("r_short", m.r_short);
    r.get("r_long", m.r_long);
    r.get("r_asset", m.r_asset);
    r.get("sigma", m.sigma);
    r.get("alpha", m.alpha);
    r.get("beta", m.beta);
    r.get("psi", m.psi);
    r.get("s0", m.s0);
    r.get("l0", m.l0);
    r.get("horizon", m.horizon);
    r.finish();
}

BeliefConfig parse_belief(Reader r, std::vector<std::string>& errors) {
    BeliefConfig b;
    std::string kind = "uniform";
    double mean = 0.5;
    double variance = -1.0;
    double truncated_variance = -1.0;
    r.get("kind", kind);
    r.get("label", b.label);
    r.get("mean", mean);
    r.get("variance", variance);
    r.get("truncated_variance", truncated_variance);
    r.finish();
    try {
        if (kind == "uniform") {
            b.spec = BeliefSpec::uniform();
            if (b.label.empty()) b.label = "uniform";
        } else if (kind == "truncated_normal") {
            if (truncated_variance > 0.0) variance = untruncated_variance_for(mean, truncated_variance);
            if (!(variance > 0.0)) {
                r.fail("variance", "truncated_normal needs variance > 0 or truncated_variance in (0, 1/12)");
                return b;
            }
            b.spec = BeliefSpec::truncated_normal(mean, variance);
            if (b.label.empty()) b.label = "normal_var" + fmt_label(variance);
        } else {
            r.fail("kind", "expected \"uniform\" or \"truncated_normal\"");
        }
    } catch (const Error& e) {
        errors.push_back(r.path() + ": " + e.what());
    }
    return b;
}

TenorConfig parse_tenor(Reader r, std::vector<std::string>& errors) {
    TenorConfig t;
    std::string type;
    r.get("type", type);
    r.get("label", t.label);
    if (type == "discrete") {
        t.kind = TenorConfig::Kind::discrete;
        if (const Json* n = r.find("n")) {
            if (n->is_number_integer() && n->get<int>() >= 0) t.count = n->get<int>();
            else r.fail("n", "expected a non-negative integer");
        }
        r.get("dates", t.dates);
        if (t.count && !t.dates.empty()) r.fail("dates", "give either n or dates, not both");
        if (t.label.empty()) t.label = t.count ? "N" + std::to_string(*t.count) : "discrete";
    } else if (type == "staggered") {
        t.kind = TenorConfig::Kind::staggered;
        if (const Json* g = r.find("g")) {
            if (g->is_number()) t.rate = g->get<double>();
            else r.fail("g", "expected a number");
        }
        r.get("knots", t.knots);
        r.get("rates", t.rates);
        if (!t.rate && t.knots.empty()) r.fail("g", "staggered tenor needs g or knots/rates");
        if (t.rate && !t.knots.empty()) r.fail("knots", "give either g or knots/rates, not both");
        if (t.label.empty()) t.label = t.rate ? "g" + fmt_label(*t.rate) : "staggered";
        try {
            (void)t.intensity();
        } catch (const Error& e) {
            errors.push_back(r.path() + ": " + e.what());
        }
    } else {
        r.fail("type", "expected \"discrete\" or \"staggered\"");
    }
    r.finish();
    return t;
}

}  // namespace

std::vector<double> TenorConfig::resolved_dates(double horizon) const {
    if (count) return DiscreteTenor::equally_spaced(*count, horizon).dates();
    return dates;
}

IntensitySpec TenorConfig::intensity() const {
    if (rate) return IntensitySpec::constant(*rate);
    return IntensitySpec::tabulated(knots, rates);
}

RunConfig parse_config(const Json& input) {
    const Json& j = (input.is_object() && input.contains("config") && input.contains("schema_version"))
                        ? input.at("config")
                        : input;
    std::vector<std::string> errors;
    RunConfig c;
    Reader root(j, "", errors);

    int schema = kSchemaVersion;
    root.get("schema_version", schema);
    if (schema != kSchemaVersion) root.fail("schema_version", "unsupported version " + std::to_string(schema));
    std::string note;
    root.get("description", note);

    if (const Json* m = root.find("model")) parse_model(Reader(*m, "model", errors), c.model);

    if (const Json* b = root.find("beliefs")) {
        c.beliefs.clear();
        const auto items = object_list(*b);
        for (std::size_t i = 0; i < items.size(); ++i) {
            const std::string path = b->is_array() ? "beliefs[" + std::to_string(i) + "]" : "beliefs";
            c.beliefs.push_back(parse_belief(Reader(*items[i], path, errors), errors));
        }
        if (c.beliefs.empty()) root.fail("beliefs", "at least one belief is required");
    }

    if (const Json* t = root.find("tenor")) {
        const auto items = object_list(*t);
        for (std::size_t i = 0; i < items.size(); ++i) {
            const std::string path = t->is_array() ? "tenor[" + std::to_string(i) + "]" : "tenor";
            c.tenors.push_back(parse_tenor(Reader(*items[i], path, errors), errors));
        }
    }

    if (const Json* g = root.find("grid")) {
        Reader r(*g, "grid", errors);
        r.get("y_max", c.grid.y_max);
        r.get("n_y", c.grid.n_y);
        r.get("n_tau", c.grid.n_tau);
        r.finish();
    }

    if (const Json* m = root.find("mc")) {
        Reader r(*m, "mc", errors);
        r.get("n_paths", c.mc.n_paths);
        r.get("seed", c.mc.seed, 0);
        r.get("dt", c.mc.dt);
        r.finish();
        if (!(c.mc.dt > 0.0)) r.fail("dt", "must be > 0");
    }

    if (const Json* s = root.find("solver")) {
        Reader r(*s, "solver", errors);
        std::string farfield = "asymptotic";
        std::string variant = "corrected";
        r.get("farfield", farfield);
        r.get("variant", variant);
        r.get("newton_tol", c.newton.tol);
        r.get("newton_max_iter", c.newton.max_iter);
        r.finish();
        if (farfield == "asymptotic") c.farfield = FarField::asymptotic;
        else if (farfield == "paper_zero") c.farfield = FarField::paper_zero;
        else r.fail("farfield", "expected \"asymptotic\" or \"paper_zero\"");
        if (variant == "corrected") c.variant = SurvivalVariant::corrected;
        else if (variant == "paper_literal") c.variant = SurvivalVariant::paper_literal;
        else r.fail("variant", "expected \"corrected\" or \"paper_literal\"");
        if (!(c.newton.tol > 0.0)) r.fail("newton_tol", "must be > 0");
        if (c.newton.max_iter < 1) r.fail("newton_max_iter", "must be >= 1");
    }

    if (const Json* s = root.find("sweep")) {
        Reader r(*s, "sweep", errors);
        r.get("v0", c.v0_sweep);
        r.get("psi", c.psi_sweep);
        r.finish();
        for (double v : c.v0_sweep) {
            if (!(v > 0.0)) r.fail("v0", "values must be > 0");
        }
        for (double v : c.psi_sweep) {
            if (!(v > 0.0 && v < 1.0)) r.fail("psi", "values must lie in (0, 1)");
        }
    }

    if (const Json* s = root.find("simulate")) {
        Reader r(*s, "simulate", errors);
        r.get("v0", c.v0);
        r.get("n_scenarios", c.n_scenarios);
        r.get("dt", c.scenario_dt);
        r.finish();
        if (!(c.v0 > 0.0)) r.fail("v0", "must be > 0");
        if (!(c.scenario_dt > 0.0)) r.fail("dt", "must be > 0");
    }

    if (const Json* s = root.find("compare")) {
        Reader r(*s, "compare", errors);
        if (const Json* p = r.find("pairs")) {
            if (!p->is_array()) r.fail("pairs", "expected an array of {n, g}");
            for (std::size_t i = 0; p->is_array() && i < p->size(); ++i) {
                Reader pr((*p)[i], r.sub("pairs[" + std::to_string(i) + "]"), errors);
                ComparePair cp;
                pr.get("n", cp.n);
                pr.get("g", cp.g);
                pr.finish();
                if (cp.n < 0) pr.fail("n", "must be >= 0");
                if (!(cp.g >= 0.0)) pr.fail("g", "must be >= 0");
                c.pairs.push_back(cp);
            }
        }
        r.get("x_min", c.x_min);
        r.get("x_max", c.x_max);
        r.get("x_points", c.x_points);
        r.finish();
        if (!(c.x_min > 0.0 && c.x_max > c.x_min)) r.fail("x_min", "need 0 < x_min < x_max");
        if (c.x_points < 2) r.fail("x_points", "must be >= 2");
    }

    if (const Json* s = root.find("output")) {
        Reader r(*s, "output", errors);
        r.get("surface", c.write_surface);
        r.finish();
    }

    if (const Json* s = root.find("barrier_file")) {
        if (s->is_string()) c.barrier_file = s->get<std::string>();
        else root.fail("barrier_file", "expected a path string");
    }

    root.finish();

    try {
        c.model.validate();
    } catch (const Error& e) {
        errors.push_back(std::string("model: ") + e.what());
    }
    try {
        c.grid.validate();
    } catch (const Error& e) {
        errors.push_back(std::string("grid: ") + e.what());
    }
    for (std::size_t i = 0; i < c.tenors.size(); ++i) {
        const auto& t = c.tenors[i];
        if (!t.discrete()) continue;
        try {
            (void)DiscreteTenor(t.resolved_dates(c.model.horizon), c.model.horizon);
        } catch (const Error& e) {
            errors.push_back("tenor[" + std::to_string(i) + "]: " + e.what());
        }
    }

    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    Json j;
    try {
        j = Json::parse(is);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

namespace {

Json belief_json(const BeliefConfig& b) {
    Json j;
    j["label"] = b.label;
    if (b.spec.kind() == BeliefKind::uniform) {
        j["kind"] = "uniform";
    } else {
        j["kind"] = "truncated_normal";
        j["mean"] = b.spec.mean();
        j["variance"] = b.spec.variance();
    }
    return j;
}

Json tenor_json(const TenorConfig& t) {
    Json j;
    j["label"] = t.label;
    if (t.discrete()) {
        j["type"] = "discrete";
        if (t.count) j["n"] = *t.count;
        else j["dates"] = t.dates;
    } else {
        j["type"] = "staggered";
        if (t.rate) {
            j["g"] = *t.rate;
        } else {
            j["knots"] = t.knots;
            j["rates"] = t.rates;
        }
    }
    return j;
}

}  // namespace

Json to_json(const RunConfig& c) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    const ModelParams& m = c.model;
    j["model"] = {{"r", m.r},         {"r_short", m.r_short}, {"r_long", m.r_long}, {"r_asset", m.r_asset},
                  {"sigma", m.sigma}, {"alpha", m.alpha},     {"beta", m.beta},     {"psi", m.psi},
                  {"s0", m.s0},       {"l0", m.l0},           {"horizon", m.horizon}};
    j["beliefs"] = Json::array();
    for (const auto& b : c.beliefs) j["beliefs"].push_back(belief_json(b));
    j["tenor"] = Json::array();
    for (const auto& t : c.tenors) j["tenor"].push_back(tenor_json(t));
    j["grid"] = {{"y_max", c.grid.y_max}, {"n_y", c.grid.n_y}, {"n_tau", c.grid.n_tau}};
    j["mc"] = {{"n_paths", c.mc.n_paths}, {"seed", c.mc.seed}, {"dt", c.mc.dt}};
    j["solver"] = {{"farfield", c.farfield == FarField::asymptotic ? "asymptotic" : "paper_zero"},
                   {"variant", to_string(c.variant)},
                   {"newton_tol", c.newton.tol},
                   {"newton_max_iter", c.newton.max_iter}};
    j["sweep"] = {{"v0", c.v0_sweep}, {"psi", c.psi_sweep}};
    j["simulate"] = {{"v0", c.v0}, {"n_scenarios", c.n_scenarios}, {"dt", c.scenario_dt}};
    Json pairs = Json::array();
    for (const auto& p : c.pairs) pairs.push_back({{"n", p.n}, {"g", p.g}});
    j["compare"] = {{"pairs", pairs}, {"x_min", c.x_min}, {"x_max", c.x_max}, {"x_points", c.x_points}};
    j["output"] = {{"surface", c.write_surface}};
    if (c.barrier_file) j["barrier_file"] = *c.barrier_file;
    return j;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace debtrun::cli
