#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oobleck/pipeline/pipeline.hpp"

namespace oobleck::pipeline {

/// Cartesian grid of uniform pipelines. Axes are nested in declaration
/// order with the last axis varying fastest.
struct SweepGrid {
    std::vector<Cycles> sw_cycles;
    std::vector<std::size_t> stages;
    std::vector<double> speedups;
    std::vector<Cycles> transmissions;
    std::vector<std::size_t> fault_counts;
    std::vector<Placement> placements{Placement::Spread};
    std::vector<Fallback> fallbacks{Fallback::Software};
    std::vector<double> fpga_speedups{35.0};
    std::vector<FpgaRouting> routings{FpgaRouting::ThroughSoftware};
    std::optional<Cycles> hw_per_stage;

    /// Number of grid points, counting those skipped as infeasible.
    std::size_t point_count() const;
};

struct SweepRow {
    Cycles sw_cycles = 0;
    std::size_t stages = 0;
    double hw_speedup = 0;
    Cycles transmission = 0;
    std::size_t fault_count = 0;
    Placement placement = Placement::Spread;
    Fallback fallback = Fallback::Software;
    double fpga_speedup = 0;
    FpgaRouting routing = FpgaRouting::ThroughSoftware;
    std::vector<std::size_t> fault_stages;
    CycleBreakdown breakdown;
    double speedup = 0;
};

/// One row per grid point in grid order. Points with more faults than
/// stages are skipped. Points are evaluated in parallel; the output order
/// does not depend on scheduling.
std::vector<SweepRow> sweep(const SweepGrid& grid);

/// Parses `key=v1,v2;key=lo:hi:step;...`. Keys: C, n, S, T, faults,
/// placement, fallback (sw|fpga), s, routing (through-sw|direct), hw.
/// Axes named in the grid spec replace those of `base`; the rest are kept.
/// Throws std::invalid_argument with a description of the bad field.
SweepGrid parse_grid_spec(const std::string& spec, SweepGrid base = {});

extern const char* const kSweepCsvHeader;

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string csv_line(const SweepRow& row);

/// Compact decimal rendering used in CSV cells: integers without a
/// fractional part, everything else with up to 6 significant decimals.
std::string format_number(double v);

}  // namespace oobleck::pipeline
