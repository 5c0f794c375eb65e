#pragma once

#include <cstdint>
#include <vector>

#include "oobleck/visc/ir.hpp"
#include "oobleck/visc/value.hpp"

namespace oobleck::visc {

using StateVector = std::vector<Value>;

/// Declared initial values, one entry per state slot.
StateVector initial_state(const CycleIR& ir);

struct StepResult {
    StateVector next_state;
    ValueMap outputs;
    bool valid = false;
    bool ready = false;
};

/// Executes one clock cycle. State reads see `state`; `@` writes land in
/// next_state, and slots without a write carry over unchanged. Throws
/// RuntimeError on a missing or ill-typed input, or an out-of-range dynamic
/// array index.
StepResult step(const CycleIR& ir, const StateVector& state, const ValueMap& inputs);

struct RunResult {
    ValueMap outputs;
    std::uint64_t cycles = 0;
};

/// Steps from the initial state with `inputs` held constant and returns the
/// outputs of the first cycle whose valid signal is set. Throws
/// RuntimeError(NeverValid) after `max_cycles` invalid cycles.
RunResult run_until_valid(const CycleIR& ir, const ValueMap& inputs, std::uint64_t max_cycles);

}  // namespace oobleck::visc
