#pragma once
//
// Reference models that share no code with the library's lowering or
// interpreter. They are deliberately naive.
//

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oobleck/visc/sema.hpp"
#include "oobleck/visc/value.hpp"

namespace oobleck::testing {

/// Counts set bits one at a time.
std::uint64_t popcount_loop(std::uint64_t x);

/// Walks the typed syntax tree of one module, one cycle per call.
class AstEvaluator {
public:
    explicit AstEvaluator(const visc::TypedModule& tm);

    struct Cycle {
        visc::ValueMap outputs;
        bool valid = false;
        bool ready = false;
    };

    void reset();
    Cycle step(const visc::ValueMap& inputs);

    /// Steps with constant inputs until valid; returns the cycle count, or 0
    /// if valid never rose within max_cycles.
    std::uint64_t run_until_valid(const visc::ValueMap& inputs, std::uint64_t max_cycles, visc::ValueMap& outputs);

private:
    visc::Value eval(const visc::Expr& e, const std::map<std::string, visc::Value>& env) const;

    const visc::TypedModule& tm_;
    std::map<std::string, visc::Value> state_;
};

}  // namespace oobleck::testing
