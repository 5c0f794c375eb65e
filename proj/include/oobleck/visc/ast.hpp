#pragma once
//
// Syntax tree for Viscosity modules.
//
// A module is a single straight-line body with three kinds of names: state
// registers (declared in the leading `[...]` list), input/output ports, and
// `let`-bound locals. The trailing `<valid; ready>` pair is mandatory and is
// evaluated in the scope of the whole body.
//
// Nodes are plain values. Equality ignores source locations and resolved
// types so that a tree re-parsed from its printed form compares equal to the
// original.
//

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oobleck/visc/diagnostics.hpp"

namespace oobleck::visc {

struct VType {
    enum class Kind : std::uint8_t { Int, Bool, IntArray };

    Kind kind = Kind::Int;
    std::uint32_t length = 0;  // IntArray only

    static constexpr VType integer() { return {Kind::Int, 0}; }
    static constexpr VType boolean() { return {Kind::Bool, 0}; }
    static constexpr VType array(std::uint32_t n) { return {Kind::IntArray, n}; }

    bool is_int() const { return kind == Kind::Int; }
    bool is_bool() const { return kind == Kind::Bool; }
    bool is_array() const { return kind == Kind::IntArray; }

    /// Bit width once flattened onto a hardware port.
    std::uint64_t bit_width() const;

    friend bool operator==(const VType&, const VType&) = default;
};

std::string to_string(VType type);

enum class UnaryOp : std::uint8_t { BitNot, LogicalNot, Negate };

enum class BinaryOp : std::uint8_t {
    Mul,
    Add,
    Sub,
    Shl,
    Shr,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    BitAnd,
    BitXor,
    BitOr,
    LogicalAnd,
    LogicalOr,
};

std::string_view spelling(UnaryOp op);
std::string_view spelling(BinaryOp op);

/// Binding strength used by both the parser and the printer; larger binds tighter.
int precedence(BinaryOp op);

struct Expr {
    enum class Kind : std::uint8_t {
        IntLiteral,
        BoolLiteral,
        ArrayLiteral,  // operands are the elements
        Variable,
        Index,  // name[operands[0]]
        Unary,
        Binary,
        Conditional,  // operands: cond, then, else
    };

    Kind kind = Kind::IntLiteral;
    SourceLoc loc;

    std::uint64_t int_value = 0;
    bool hex = false;  // literal spelling, preserved for printing
    bool bool_value = false;
    std::string name;
    UnaryOp unary_op = UnaryOp::BitNot;
    BinaryOp binary_op = BinaryOp::Add;
    std::vector<Expr> operands;

    // Filled in by the type checker.
    std::optional<VType> type;

    static Expr int_literal(std::uint64_t value, bool hex = false, SourceLoc loc = {});
    static Expr bool_literal(bool value, SourceLoc loc = {});
    static Expr array_literal(std::vector<Expr> elements, SourceLoc loc = {});
    static Expr variable(std::string name, SourceLoc loc = {});
    static Expr index(std::string name, Expr idx, SourceLoc loc = {});
    static Expr unary(UnaryOp op, Expr operand, SourceLoc loc = {});
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs, SourceLoc loc = {});
    static Expr conditional(Expr cond, Expr then_expr, Expr else_expr, SourceLoc loc = {});

    friend bool operator==(const Expr& a, const Expr& b);
};

struct Stmt {
    enum class Kind : std::uint8_t {
        Let,        // let name [: type] = value;
        Assign,     // name = value;
        IndexAssign,  // name[index] = value;
        NextState,  // @name = value;
    };

    Kind kind = Kind::Let;
    SourceLoc loc;
    std::string name;
    std::optional<VType> declared_type;  // Let only
    std::optional<Expr> index;           // IndexAssign only
    Expr value;

    friend bool operator==(const Stmt& a, const Stmt& b);
};

struct Param {
    std::string name;
    VType type;
    SourceLoc loc;

    friend bool operator==(const Param& a, const Param& b) {
        return a.name == b.name && a.type == b.type;
    }
};

struct StateDecl {
    std::string name;
    VType type;
    Expr init;  // literal, or array literal of integer literals
    SourceLoc loc;

    friend bool operator==(const StateDecl& a, const StateDecl& b) {
        return a.name == b.name && a.type == b.type && a.init == b.init;
    }
};

struct ModuleAst {
    std::string name;
    SourceLoc loc;
    std::vector<StateDecl> state_decls;
    std::vector<Param> inputs;
    std::vector<Param> outputs;
    std::vector<Stmt> body;
    Expr valid_expr;
    Expr ready_expr;
    SourceLoc trailer_loc;

    friend bool operator==(const ModuleAst& a, const ModuleAst& b);
};

}  // namespace oobleck::visc
