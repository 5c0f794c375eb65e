#pragma once

#include <string>
#include <vector>

#include "oobleck/pipeline/pipeline.hpp"

namespace oobleck::pipeline {

struct ScenarioFile {
    PipelineSpec pipeline;
    FaultScenario faults;
    LatencyParams latency;
};

/// Reads a scenario document:
///
///   { "sw_cycles": 30000, "stages": 6, "speedup": 100,
///     "hw_cycles_per_stage": 100,                  (optional)
///     "stage_cycles": [{"hw": 50, "sw": 5000}],    (instead of the above)
///     "transmission": 2145,
///     "faults": [2, {"stage": 4, "fallback": "fpga"}],
///     "fallback": "sw", "fpga_speedup": 35, "fpga_routing": "through-sw" }
///
/// Plain indices in "faults" use the document-level "fallback". Throws
/// std::invalid_argument on malformed input.
ScenarioFile parse_scenario_json(const std::string& text);

/// Reads calibration observations:
///
///   { "points": [ { "sw_cycles": 30000, "stages": 6, "speedup": 100,
///                   "faults": 1, "placement": "spread", "target": 2.17,
///                   "label": "..." } ] }
///
/// "faults" is either a count placed by "placement" (default spread) or an
/// explicit list of stage indices.
std::vector<Observation> parse_observations_json(const std::string& text);

}  // namespace oobleck::pipeline
