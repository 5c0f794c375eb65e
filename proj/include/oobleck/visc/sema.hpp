#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oobleck/visc/ast.hpp"

namespace oobleck::visc {

enum class SymbolKind { State, Input, Output, Local };

struct Symbol {
    SymbolKind kind;
    VType type;
    SourceLoc loc;
};

/// A module whose every expression carries its resolved type.
///
/// Invariants established by typecheck():
///  - every output is assigned exactly once;
///  - every `@` target is a declared state register;
///  - arithmetic and bitwise operands are `int`, logical operands are `bool`,
///    equality compares like scalar types, indices are `int`;
///  - constant array indices are in range.
struct TypedModule {
    ModuleAst ast;
    std::map<std::string, Symbol> symbols;
    bool is_sequential = false;
    /// Order in which statements execute; the body is straight-line, so this
    /// is the source order.
    std::vector<std::size_t> schedule;
};

TypedModule typecheck(ModuleAst ast);

/// Value of an `int` expression built only from literals, if it is one.
std::optional<std::uint64_t> fold_constant(const Expr& expr);

}  // namespace oobleck::visc
