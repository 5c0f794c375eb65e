#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "oobleck/visc/ir.hpp"
#include "oobleck/visc/value.hpp"

namespace oobleck::testing {

struct GenOptions {
    bool state = true;
    bool arrays = true;
    /// Non-constant indices, always masked into range.
    bool dynamic_index = true;
    int max_depth = 3;
};

/// Source text of a random module that passes the type checker and never
/// faults at run time.
std::string random_module(std::mt19937_64& rng, const GenOptions& options, const std::string& name);

/// Random values for every input port of `ir`, biased towards edge cases.
visc::ValueMap random_inputs(const visc::CycleIR& ir, std::mt19937_64& rng);

/// A word drawn from a mix of small, boundary, and uniform values.
std::uint64_t random_word(std::mt19937_64& rng);

}  // namespace oobleck::testing
