#pragma once

#include <string>
#include <string_view>

#include "oobleck/visc/ast.hpp"

namespace oobleck::visc {

/// Parses exactly one module from `.visc` source text.
///
/// Grammar (statements are `;`-terminated, lists are comma separated):
///
///     module [ state_decls ] NAME ( params ) -> ( params ) { stmts } < expr ; expr >
///
/// Comments run from `//` to end of line. `/` and `%` are rejected: the
/// language has no division. Throws CompileError(ErrorKind::Syntax) with the
/// offending location on malformed input.
ModuleAst parse_module(std::string_view source);

/// Canonical source text for `ast`. Re-parsing the result yields a tree equal
/// to `ast`.
std::string pretty_print(const ModuleAst& ast);

/// Canonical text for one expression, with the minimum parentheses needed.
std::string print_expr(const Expr& expr);

}  // namespace oobleck::visc
