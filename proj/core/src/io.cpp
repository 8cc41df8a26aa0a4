#include "debtrun/io.hpp"

#include "debtrun/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace debtrun::io {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_atomic(const std::filesystem::path& file, std::string_view content) {
    const auto parent = file.parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

std::string surface_csv(const ValueSurface& surface) {
    std::string out = "tau,y,u\n";
    const Grid& g = surface.grid();
    for (std::size_t k = 0; k < surface.node_count(); ++k) {
        const auto row = surface.slice(k);
        const std::string tau = num(surface.mesh().tau(k));
        for (int j = 0; j <= g.n_y; ++j) {
            out += tau;
            out += ',';
            out += num(g.y(j));
            out += ',';
            out += num(row[static_cast<std::size_t>(j)]);
            out += '\n';
        }
    }
    return out;
}

namespace {

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += num(v);
        first = false;
    }
    out += '\n';
}

}  // namespace

std::string discrete_barriers_csv(const DiscreteBarrierSet& set) {
    std::string out = "T_n,x_star,D_run,D_ill,D_ins\n";
    for (const auto& b : set.entries) append_row(out, {b.date, b.x_star, b.d_run, b.d_ill, b.d_ins});
    return out;
}

std::string barrier_curve_csv(const BarrierCurve& curve) {
    std::string out = "t,x_star,D_run,D_ill,D_ins\n";
    for (const auto& s : curve.samples()) append_row(out, {s.t, s.x_star, s.d_run, s.d_ill, s.d_ins});
    return out;
}

PdRow pd_row(double v0, const DefaultDecomposition& d) {
    return {v0, d.pd_total, d.pd_insolvency, d.pd_illiquidity, d.pd_baseline_blackcox, d.mc_halfwidth};
}

std::string pd_sweep_csv(const std::vector<PdRow>& rows) {
    std::string out = "V0,pd_total,pd_ins,pd_ill,pd_blackcox,ci\n";
    for (const auto& r : rows) append_row(out, {r.v0, r.pd_total, r.pd_ins, r.pd_ill, r.pd_blackcox, r.ci});
    return out;
}

void append_path_rows(std::string& out, std::size_t path_id, const SimPath& path, const ModelParams& p) {
    const std::string id = std::to_string(path_id);
    auto row = [&](double t, double x, const char* event) {
        const double s = short_debt(p, t);
        out += id;
        out += ',';
        out += num(t);
        out += ',';
        out += num(x * s);
        out += ',';
        out += num(insolvency_barrier(p, t));
        out += ',';
        out += event;
        out += '\n';
    };
    for (std::size_t i = 0; i < path.times.size(); ++i) row(path.times[i], path.x_values[i], "");
    for (std::size_t i = 0; i < path.arrivals.size(); ++i) row(path.arrivals[i], path.arrival_x[i], "arrival");
    if (path.tau_ins) row(*path.tau_ins, insolvency_ratio(p, *path.tau_ins), "insolvency");
}

namespace {

double parse_num(const std::string& field, const std::filesystem::path& file) {
    if (field == "inf") return std::numeric_limits<double>::infinity();
    if (field == "-inf") return -std::numeric_limits<double>::infinity();
    if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw Error("bad number '" + field + "' in " + file.string());
    }
    return v;
}

}  // namespace

BarrierCurve read_barrier_curve_csv(const std::filesystem::path& file, const ModelParams& p) {
    std::ifstream is(file);
    if (!is) throw DependencyError("barrier file not found: " + file.string());
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,x_star", 0) != 0) {
        throw DependencyError("not a barrier curve file: " + file.string());
    }
    std::vector<BarrierSample> samples;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string t_field;
        std::string x_field;
        std::getline(row, t_field, ',');
        std::getline(row, x_field, ',');
        samples.push_back(make_barrier_sample(p, parse_num(t_field, file), parse_num(x_field, file)));
    }
    if (samples.empty()) throw DependencyError("barrier file has no rows: " + file.string());
    return BarrierCurve(p, std::move(samples));
}

namespace {

constexpr std::array<char, 8> kMagic = {'D', 'R', 'S', 'U', 'R', 'F', '0', '1'};

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("truncated surface file");
    return v;
}

void put_doubles(std::ostream& os, const std::vector<double>& v) {
    put<std::uint64_t>(os, v.size());
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::istream& is) {
    const auto n = get<std::uint64_t>(is);
    if (n > (std::uint64_t{1} << 32)) throw Error("corrupt surface file");
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw Error("truncated surface file");
    return v;
}

}  // namespace

std::string surface_binary(const ValueSurface& s) {
    std::ostringstream os(std::ios::binary);
    os.write(kMagic.data(), kMagic.size());
    const ModelParams& p = s.params();
    for (double v : {p.r, p.r_short, p.r_long, p.r_asset, p.sigma, p.alpha, p.beta, p.psi, p.s0, p.l0, p.horizon}) {
        put(os, v);
    }
    put(os, s.grid().y_max);
    put<std::int32_t>(os, s.grid().n_y);
    put<std::int32_t>(os, s.grid().n_tau);
    put<std::uint8_t>(os, s.farfield() == FarField::asymptotic ? 0 : 1);
    put_doubles(os, s.mesh().nodes());
    put_doubles(os, s.raw());
    put<std::uint64_t>(os, s.jump_slices().size());
    for (const auto& [k, values] : s.jump_slices()) {
        put<std::uint64_t>(os, k);
        put_doubles(os, values);
    }
    return os.str();
}

void write_surface_binary(const std::filesystem::path& file, const ValueSurface& s) {
    write_atomic(file, surface_binary(s));
}

ValueSurface read_surface_binary(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw DependencyError("cannot open surface file " + file.string());
    std::array<char, 8> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kMagic) throw Error("not a surface file: " + file.string());
    ModelParams p;
    for (double* f : {&p.r, &p.r_short, &p.r_long, &p.r_asset, &p.sigma, &p.alpha, &p.beta, &p.psi, &p.s0, &p.l0,
                      &p.horizon}) {
        *f = get<double>(is);
    }
    Grid g;
    g.y_max = get<double>(is);
    g.n_y = get<std::int32_t>(is);
    g.n_tau = get<std::int32_t>(is);
    const FarField ff = get<std::uint8_t>(is) == 0 ? FarField::asymptotic : FarField::paper_zero;
    ValueSurface s(p, g, TimeMesh::from_nodes(get_doubles(is)), ff);
    auto values = get_doubles(is);
    if (values.size() != s.raw().size()) throw Error("surface file size mismatch");
    s.raw() = std::move(values);
    const auto jumps = get<std::uint64_t>(is);
    for (std::uint64_t i = 0; i < jumps; ++i) {
        const auto k = get<std::uint64_t>(is);
        s.set_jump_slice(static_cast<std::size_t>(k), get_doubles(is));
    }
    return s;
}

}  // namespace debtrun::io
