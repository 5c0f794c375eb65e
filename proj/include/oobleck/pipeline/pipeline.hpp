#pragma once
//
// Latency model for an accelerator split into a chain of sub-accelerators.
//
// Each stage has a hardware cost and a software cost. When a stage faults,
// its work is routed to a fallback (a software thread, or a hot-spare FPGA)
// and the neighbouring healthy stages exchange data with software through
// queue endpoints. Every maximal run of healthy stages therefore pays one
// crossing in and one crossing out, each costing T cycles.
//

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "oobleck/visc/visc.hpp"

namespace oobleck::pipeline {

using Cycles = std::uint64_t;

enum class ErrorKind {
    InvalidSpec,
    StageIsFaulted,
    NoFeasibleT,
    InterfaceMismatch,
    NeverValid,
};

std::string_view to_string(ErrorKind kind);

class PipelineError : public std::runtime_error {
public:
    PipelineError(ErrorKind kind, const std::string& message, std::optional<std::size_t> stage = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    /// Stage the error refers to, when there is one.
    std::optional<std::size_t> stage() const noexcept { return stage_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> stage_;
};

struct StageSpec {
    Cycles hw_cycles = 1;
    Cycles sw_cycles = 1;
    /// Set for module-backed stages; null for synthetic ones.
    std::shared_ptr<const visc::CompiledModule> module;

    static StageSpec synthetic(Cycles hw, Cycles sw);
    static StageSpec module_backed(std::shared_ptr<const visc::CompiledModule> m, Cycles hw, Cycles sw);

    bool is_module_backed() const { return module != nullptr; }
};

struct PipelineSpec {
    std::vector<StageSpec> stages;

    std::size_t size() const { return stages.size(); }
    /// Cumulative software cycles, the cost of running everything in software.
    Cycles sw_total_cycles() const;

    /// n equal stages: sw = ceil(C / n) each, hw = ceil(C / (n * S)) each
    /// unless hw_per_stage overrides it.
    static PipelineSpec uniform(Cycles sw_total, std::size_t n, double speedup,
                                std::optional<Cycles> hw_per_stage = std::nullopt);

    /// Throws PipelineError(InvalidSpec) unless n >= 1 and every stage has
    /// 1 <= hw_cycles <= sw_cycles.
    void validate() const;
};

enum class Fallback { Software, Fpga };
enum class FpgaRouting { ThroughSoftware, Direct };

std::string_view to_string(Fallback f);
std::string_view to_string(FpgaRouting r);

struct LatencyParams {
    Cycles transmission = 0;  // T, cycles per software/hardware crossing
    double fpga_speedup = 35.0;
    FpgaRouting routing = FpgaRouting::ThroughSoftware;
    double min_fpga_speedup = 35.0;
    double max_fpga_speedup = 200.0;

    /// Throws PipelineError(InvalidSpec) if fpga_speedup lies outside
    /// [min_fpga_speedup, max_fpga_speedup].
    void validate() const;
};

/// Faulted stages and the fallback chosen for each. An empty map is a
/// healthy run.
struct FaultScenario {
    std::map<std::size_t, Fallback> faults;

    static FaultScenario healthy() { return {}; }
    static FaultScenario with(const std::vector<std::size_t>& stages, Fallback fallback = Fallback::Software);

    bool is_faulted(std::size_t stage) const { return faults.contains(stage); }
    std::set<std::size_t> mask() const;

    /// Throws PipelineError(InvalidSpec) if any index is >= n.
    void validate(std::size_t n) const;
};

struct CycleBreakdown {
    Cycles hw_cycles = 0;
    Cycles fallback_cycles = 0;
    Cycles crossing_cycles = 0;
    Cycles total_cycles = 0;
    std::size_t healthy_segments = 0;
};

/// Two-bit queue configuration of a healthy stage. The high bit makes the
/// stage pull its input from the software-facing consumer queue; the low bit
/// makes it push its output to the producer queue. Throws
/// PipelineError(StageIsFaulted) for a faulted stage, which is bypassed.
std::uint8_t config_bits(const FaultScenario& scenario, const PipelineSpec& pipeline, std::size_t stage);

/// Number of maximal runs of consecutive stages in [0, n) not in mask.
std::size_t healthy_segments(const std::set<std::size_t>& mask, std::size_t n);

/// total = healthy hw + fallback cost + 2 T per healthy segment.
///
/// Software fallback costs sw_cycles. FPGA fallback costs ceil(sw / s);
/// routed through software it adds two crossings for the FPGA's own queue
/// pair, routed directly it adds none and the stage counts as healthy when
/// forming segments.
CycleBreakdown total_cycles(const PipelineSpec& p, const FaultScenario& f, const LatencyParams& l);

/// sw_total_cycles / total_cycles.
double speedup(const PipelineSpec& p, const FaultScenario& f, const LatencyParams& l);

// Calibration of T ----------------------------------------------------------

struct Observation {
    PipelineSpec pipeline;
    FaultScenario scenario;
    double target_speedup = 1.0;
    std::string label;
};

struct CalibrationOptions {
    /// Largest tolerated |predicted / target - 1| at the fitted T.
    double max_relative_residual = 0.10;
    Cycles max_transmission = 1'000'000;
    /// FPGA settings used for observations that contain FPGA fallbacks.
    LatencyParams base;
};

struct CalibrationResult {
    Cycles transmission = 0;
    std::vector<double> predicted;
    std::vector<double> residuals;  // predicted / target - 1
    double max_abs_residual = 0.0;
    double sum_squared_residuals = 0.0;
};

/// Integer T in [0, max_transmission] minimizing the sum of squared
/// relative speedup errors. Throws PipelineError(NoFeasibleT) if some
/// residual at the optimum exceeds the configured bound, and
/// std::invalid_argument for an empty observation list.
CalibrationResult calibrate_transmission(const std::vector<Observation>& observations,
                                         const CalibrationOptions& options = {});

/// Inclusive range of T over which every observation stays within the
/// residual bound. Empty if there is no such T.
std::optional<std::pair<Cycles, Cycles>> feasible_transmission_band(const std::vector<Observation>& observations,
                                                                    const CalibrationOptions& options = {});

// Fault placement -----------------------------------------------------------

enum class Placement {
    Spread,      // evenly spaced interior positions
    Head,        // the first k stages
    Tail,        // the last k stages
    Contiguous,  // one block centred in the chain
    Worst,       // the placement maximizing total cycles
};

std::string_view to_string(Placement p);
std::optional<Placement> parse_placement(std::string_view text);

/// k distinct stage indices in ascending order. Worst is found by exhaustive
/// search and throws std::invalid_argument when C(n, k) exceeds 2,000,000.
std::vector<std::size_t> place_faults(const PipelineSpec& p, std::size_t k, Placement placement,
                                      const LatencyParams& l = {}, Fallback fallback = Fallback::Software);

}  // namespace oobleck::pipeline
