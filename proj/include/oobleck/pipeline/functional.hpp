#pragma once

#include <cstdint>
#include <vector>

#include "oobleck/pipeline/pipeline.hpp"

namespace oobleck::pipeline {

enum class ExecutedOn { Hardware, Software, Fpga };

std::string_view to_string(ExecutedOn e);

struct StageTrace {
    std::size_t stage = 0;
    ExecutedOn executed_on = ExecutedOn::Hardware;
    std::uint64_t cycles_to_valid = 0;
    visc::ValueMap outputs;
};

struct FunctionalResult {
    visc::ValueMap outputs;
    std::vector<StageTrace> trace;
};

/// Checks that `input` supplies exactly the first stage's inputs, with their
/// types, and that every stage's outputs match the next stage's inputs by
/// name and type.
/// Throws PipelineError(InterfaceMismatch) naming the offending stage.
void check_interfaces(const PipelineSpec& stages, const visc::ValueMap* input = nullptr);

/// Runs the module-backed stages in order, feeding each stage's outputs to
/// the next. Faulted stages go through the same interpreter and are only
/// labelled differently in the trace, so the result does not depend on the
/// fault mask. A stage that never signals valid raises
/// PipelineError(NeverValid) carrying its index.
FunctionalResult run_functional(const PipelineSpec& stages, const FaultScenario& faults, const visc::ValueMap& input,
                                std::uint64_t max_cycles = 1000);

}  // namespace oobleck::pipeline
