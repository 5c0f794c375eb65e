#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "oobleck/pipeline/sweep.hpp"

namespace {

using namespace oobleck::pipeline;

SweepGrid small_grid() {
    SweepGrid g;
    g.sw_cycles = {30000, 60000};
    g.stages = {6};
    g.speedups = {100};
    g.transmissions = {2160};
    g.fault_counts = {0, 1, 2};
    return g;
}

TEST(Sweep, RowsFollowGridOrder) {
    const auto rows = sweep(small_grid());
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].sw_cycles, 30000u);
    EXPECT_EQ(rows[0].fault_count, 0u);
    EXPECT_EQ(rows[2].fault_count, 2u);
    EXPECT_EQ(rows[3].sw_cycles, 60000u);
    EXPECT_EQ(rows[2].fault_stages, (std::vector<std::size_t>{1, 4}));
    for (const SweepRow& r : rows) {
        const PipelineSpec p = PipelineSpec::uniform(r.sw_cycles, r.stages, r.hw_speedup);
        const double s = speedup(p, FaultScenario::with(r.fault_stages), {.transmission = r.transmission});
        EXPECT_DOUBLE_EQ(r.speedup, s);
    }
}

TEST(Sweep, SkipsPointsWithMoreFaultsThanStages) {
    SweepGrid g = small_grid();
    g.stages = {2, 6};
    g.fault_counts = {3};
    EXPECT_EQ(g.point_count(), 4u);
    const auto rows = sweep(g);
    ASSERT_EQ(rows.size(), 2u);
    for (const SweepRow& r : rows) EXPECT_EQ(r.stages, 6u);
}

TEST(Sweep, CsvIsStable) {
    std::ostringstream out;
    write_csv(out, sweep(small_grid()));
    const std::string csv = out.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kSweepCsvHeader);
    EXPECT_NE(csv.find("\n30000,6,100,2160,3,spread,sw,35,through-sw,250,5000,8640,13890,2.159827\n"),
              std::string::npos)
        << csv;
    EXPECT_NE(csv.find("\n30000,6,100,2160,1 4,spread,sw,35,through-sw,200,10000,12960,23160,1.295337\n"),
              std::string::npos)
        << csv;
}

TEST(Sweep, OutputDoesNotDependOnThreadCount) {
    SweepGrid g = small_grid();
    g.sw_cycles = {30000, 60000, 120000, 240000};
    g.stages = {3, 6, 12};
    g.transmissions = {0, 1000, 2160};
    g.placements = {Placement::Spread, Placement::Worst};
    std::ostringstream one, many;
    ::setenv("OOBLECK_THREADS", "1", 1);
    write_csv(one, sweep(g));
    ::setenv("OOBLECK_THREADS", "4", 1);
    write_csv(many, sweep(g));
    ::unsetenv("OOBLECK_THREADS");
    EXPECT_EQ(one.str(), many.str());
}

TEST(GridSpec, ParsesListsAndRanges) {
    const SweepGrid g = parse_grid_spec("C=30000,60000;n=4:12:4;S=100;T=2160;faults=1;placement=worst,head;"
                                        "fallback=sw,fpga;s=35,200;routing=direct;hw=100");
    EXPECT_EQ(g.sw_cycles, (std::vector<Cycles>{30000, 60000}));
    EXPECT_EQ(g.stages, (std::vector<std::size_t>{4, 8, 12}));
    EXPECT_EQ(g.placements, (std::vector<Placement>{Placement::Worst, Placement::Head}));
    EXPECT_EQ(g.fallbacks, (std::vector<Fallback>{Fallback::Software, Fallback::Fpga}));
    EXPECT_EQ(g.fpga_speedups, (std::vector<double>{35, 200}));
    EXPECT_EQ(g.routings, (std::vector<FpgaRouting>{FpgaRouting::Direct}));
    EXPECT_EQ(g.hw_per_stage, std::optional<Cycles>(100));
    EXPECT_EQ(g.point_count(), 2u * 3u * 2u * 2u * 2u);
}

TEST(GridSpec, KeepsUnnamedAxesOfTheBase) {
    SweepGrid base = small_grid();
    const SweepGrid g = parse_grid_spec("faults=2", base);
    EXPECT_EQ(g.sw_cycles, base.sw_cycles);
    EXPECT_EQ(g.fault_counts, (std::vector<std::size_t>{2}));
}

TEST(GridSpec, RejectsMalformedSpecs) {
    for (const char* bad : {"C=", "Q=1", "n=1:0:1", "n=1:5:0", "placement=random", "C=abc", "fallback=gpu", "n"}) {
        EXPECT_THROW(parse_grid_spec(bad), std::invalid_argument) << bad;
    }
}

TEST(FormatNumber, TrimsTrailingZeros) {
    EXPECT_EQ(format_number(100), "100");
    EXPECT_EQ(format_number(2.5), "2.5");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333");
    EXPECT_EQ(format_number(35.0), "35");
}

}  // namespace
