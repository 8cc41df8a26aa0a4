#include "debtrun/discrete_tenor.hpp"
#include "debtrun/errors.hpp"
#include "debtrun/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace debtrun;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("debtrun_io_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& file) {
    std::ifstream is(file, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST(Num, ShortestRoundTrip) {
    EXPECT_EQ(io::num(0.1), "0.1");
    EXPECT_EQ(io::num(0.0), "0");
    EXPECT_EQ(io::num(2.0), "2");
    EXPECT_EQ(io::num(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(io::num(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(io::num(std::nan("")), "nan");
    const double v = 1.0 / 3.0;
    EXPECT_EQ(std::stod(io::num(v)), v);
}

TEST(WriteAtomic, CreatesDirectoriesAndLeavesNoTemp) {
    const fs::path dir = scratch_dir("atomic");
    const fs::path file = dir / "a" / "b.txt";
    io::write_atomic(file, "hello\n");
    EXPECT_EQ(slurp(file), "hello\n");
    io::write_atomic(file, "again\n");
    EXPECT_EQ(slurp(file), "again\n");
    EXPECT_FALSE(fs::exists(dir / "a" / "b.txt.tmp"));
    fs::remove_all(dir);
}

TEST(Csv, DiscreteBarrierFormat) {
    DiscreteBarrierSet set;
    set.entries.push_back({2.0, 3.5, 7.0, 6.0, 0.9, false, false, false, 1});
    EXPECT_EQ(io::discrete_barriers_csv(set), "T_n,x_star,D_run,D_ill,D_ins\n2,3.5,7,6,0.9\n");
}

TEST(Csv, PdSweepFormat) {
    DefaultDecomposition d;
    d.pd_total = 0.25;
    d.pd_insolvency = 0.125;
    d.pd_illiquidity = 0.125;
    d.pd_baseline_blackcox = 0.1;
    d.mc_halfwidth = 0.01;
    EXPECT_EQ(io::pd_sweep_csv({io::pd_row(4.0, d)}), "V0,pd_total,pd_ins,pd_ill,pd_blackcox,ci\n4,0.25,0.125,0.125,0.1,0.01\n");
}

TEST(Csv, SurfaceFormat) {
    ModelParams p;
    const Grid grid{6.0, 8, 2};
    ValueSurface s(p, grid, TimeMesh::build(p.horizon, 2), FarField::asymptotic);
    const std::string csv = io::surface_csv(s);
    EXPECT_EQ(csv.substr(0, 8), "tau,y,u\n");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 9);
}

TEST(Csv, PathRows) {
    ModelParams p;
    SimPath path;
    path.times = {0.0, 1.0};
    path.x_values = {4.0, 3.0};
    path.arrivals = {0.5};
    path.arrival_x = {3.5};
    std::string out(io::kPathHeader);
    io::append_path_rows(out, 7, path, p);
    std::istringstream is(out);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "path,t,V,D_ins,event");
    std::getline(is, line);
    EXPECT_EQ(line, "7,0,8,0.8,");
    std::getline(is, line);
    std::getline(is, line);
    EXPECT_EQ(line.substr(0, 6), "7,0.5,");
    EXPECT_EQ(line.substr(line.size() - 8), ",arrival");
}

TEST(BarrierFile, RoundTrip) {
    ModelParams p;
    const BarrierCurve c(p, {make_barrier_sample(p, 0.0, 2.5), make_barrier_sample(p, 5.0, 3.25),
                             make_barrier_sample(p, 10.0, std::numeric_limits<double>::infinity())});
    const fs::path dir = scratch_dir("curve");
    io::write_atomic(dir / "b.csv", io::barrier_curve_csv(c));
    const BarrierCurve back = io::read_barrier_curve_csv(dir / "b.csv", p);
    ASSERT_EQ(back.samples().size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(back.samples()[i].t, c.samples()[i].t);
        EXPECT_EQ(back.samples()[i].x_star, c.samples()[i].x_star);
        EXPECT_EQ(back.samples()[i].d_ill, c.samples()[i].d_ill);
    }
    fs::remove_all(dir);
}

TEST(BarrierFile, MissingOrForeignIsDependencyError) {
    ModelParams p;
    const fs::path dir = scratch_dir("missing");
    EXPECT_THROW(io::read_barrier_curve_csv(dir / "none.csv", p), DependencyError);
    io::write_atomic(dir / "other.csv", "V0,pd_total\n1,0.5\n");
    EXPECT_THROW(io::read_barrier_curve_csv(dir / "other.csv", p), DependencyError);
    fs::remove_all(dir);
}

TEST(SurfaceBinary, RoundTripIncludesJumps) {
    ModelParams p;
    const DiscreteTenor tenor = DiscreteTenor::equally_spaced(2, p.horizon);
    const ValueSurface s = solve_discrete_value(p, BeliefSpec::uniform(), tenor, Grid{6.0, 60, 90});
    const fs::path dir = scratch_dir("bin");
    io::write_surface_binary(dir / "s.bin", s);
    const ValueSurface back = io::read_surface_binary(dir / "s.bin");
    EXPECT_EQ(back.raw(), s.raw());
    EXPECT_EQ(back.mesh().nodes(), s.mesh().nodes());
    EXPECT_EQ(back.jump_slices(), s.jump_slices());
    EXPECT_EQ(back.params().sigma, p.sigma);
    EXPECT_EQ(io::surface_binary(back), io::surface_binary(s));
    EXPECT_THROW(io::read_surface_binary(dir / "absent.bin"), DependencyError);
    io::write_atomic(dir / "junk.bin", "not a surface");
    EXPECT_THROW(io::read_surface_binary(dir / "junk.bin"), Error);
    fs::remove_all(dir);
}
