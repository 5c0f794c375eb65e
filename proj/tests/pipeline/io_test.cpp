#include <gtest/gtest.h>

#include "oobleck/pipeline/io.hpp"
#include "support/corpus.hpp"

namespace {

using namespace oobleck::pipeline;

TEST(ScenarioJson, UniformWithMixedFaults) {
    const ScenarioFile s = parse_scenario_json(R"({
        "sw_cycles": 60000, "stages": 6, "speedup": 100, "transmission": 2160,
        "faults": [1, {"stage": 4, "fallback": "fpga"}],
        "fallback": "sw", "fpga_speedup": 50, "fpga_routing": "direct"})");
    EXPECT_EQ(s.pipeline.size(), 6u);
    EXPECT_EQ(s.pipeline.stages[0].hw_cycles, 100u);
    EXPECT_EQ(s.faults.faults.at(1), Fallback::Software);
    EXPECT_EQ(s.faults.faults.at(4), Fallback::Fpga);
    EXPECT_EQ(s.latency.transmission, 2160u);
    EXPECT_EQ(s.latency.fpga_speedup, 50);
    EXPECT_EQ(s.latency.routing, FpgaRouting::Direct);
}

TEST(ScenarioJson, ExplicitStageCycles) {
    const ScenarioFile s = parse_scenario_json(
        R"({"stage_cycles": [{"hw": 5, "sw": 50}, {"hw": 7, "sw": 700}], "transmission": 10, "faults": []})");
    ASSERT_EQ(s.pipeline.size(), 2u);
    EXPECT_EQ(s.pipeline.stages[1].hw_cycles, 7u);
    EXPECT_EQ(s.pipeline.stages[1].sw_cycles, 700u);
    EXPECT_TRUE(s.faults.faults.empty());
}

TEST(ScenarioJson, DocumentFallbackAppliesToPlainIndices) {
    const ScenarioFile s = parse_scenario_json(
        R"({"sw_cycles": 600, "stages": 3, "speedup": 10, "transmission": 1, "faults": [0, 2], "fallback": "fpga"})");
    EXPECT_EQ(s.faults.faults.at(0), Fallback::Fpga);
    EXPECT_EQ(s.faults.faults.at(2), Fallback::Fpga);
}

TEST(ScenarioJson, RejectsBadDocuments) {
    for (const char* bad : {
             "not json",
             "[]",
             R"({"stages": 6, "speedup": 100, "transmission": 1})",
             R"({"sw_cycles": 600, "stages": 3, "speedup": 10, "transmission": -1})",
             R"({"sw_cycles": 600, "stages": 3, "speedup": 10, "transmission": 1, "faults": [7]})",
             R"({"sw_cycles": 600, "stages": 3, "speedup": 10, "transmission": 1, "fallback": "gpu"})",
             R"({"sw_cycles": 600, "stages": 3, "speedup": 10, "transmission": 1, "faults": ["x"]})",
             R"({"stage_cycles": [{"hw": 9, "sw": 5}], "transmission": 1})",
         }) {
        EXPECT_ANY_THROW(parse_scenario_json(bad)) << bad;
    }
}

TEST(ObservationsJson, ShippedCalibrationPoints) {
    const auto points =
        parse_observations_json(oobleck::testing::read_file(std::string(OOBLECK_DATA_DIR) + "/calibration_points.json"));
    ASSERT_EQ(points.size(), 4u);
    EXPECT_EQ(points[0].pipeline.sw_total_cycles(), 30000u);
    EXPECT_EQ(points[0].scenario.mask(), (std::set<std::size_t>{3}));
    EXPECT_EQ(points[1].scenario.mask(), (std::set<std::size_t>{1, 4}));
    EXPECT_DOUBLE_EQ(points[2].target_speedup, 4.30);
    EXPECT_EQ(points[3].pipeline.size(), 10u);
    EXPECT_EQ(points[0].label, "30k/6 one fault");
}

TEST(ObservationsJson, ExplicitFaultLists) {
    const auto points = parse_observations_json(
        R"({"points": [{"sw_cycles": 600, "stages": 3, "speedup": 10, "faults": [0, 2], "target": 1.5}]})");
    ASSERT_EQ(points.size(), 1u);
    EXPECT_EQ(points[0].scenario.mask(), (std::set<std::size_t>{0, 2}));
}

TEST(ObservationsJson, RejectsBadDocuments) {
    EXPECT_THROW(parse_observations_json("{}"), std::invalid_argument);
    EXPECT_THROW(parse_observations_json(R"({"points": [{"sw_cycles": 600}]})"), std::invalid_argument);
    EXPECT_THROW(parse_observations_json(
                     R"({"points": [{"sw_cycles": 600, "stages": 3, "speedup": 10, "faults": 4, "target": 1}]})"),
                 std::invalid_argument);
}

}  // namespace
