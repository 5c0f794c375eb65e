#pragma once

#include <string_view>

#include "oobleck/visc/emit.hpp"
#include "oobleck/visc/interpreter.hpp"
#include "oobleck/visc/ir.hpp"
#include "oobleck/visc/parser.hpp"
#include "oobleck/visc/sema.hpp"
#include "oobleck/visc/value.hpp"

namespace oobleck::visc {

/// A module taken through the whole front end.
struct CompiledModule {
    TypedModule typed;
    CycleIR ir;
};

/// parse_module, typecheck, and lower_to_ir in one call.
inline CompiledModule compile(std::string_view source) {
    CompiledModule out{typecheck(parse_module(source)), {}};
    out.ir = lower_to_ir(out.typed);
    return out;
}

}  // namespace oobleck::visc
