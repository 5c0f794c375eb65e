#include "oobleck/visc/ast.hpp"

#include <utility>

namespace oobleck::visc {

std::uint64_t VType::bit_width() const {
    switch (kind) {
        case Kind::Int: return 64;
        case Kind::Bool: return 1;
        case Kind::IntArray: return 64ull * length;
    }
    return 0;
}

std::string to_string(VType type) {
    switch (type.kind) {
        case VType::Kind::Int: return "int";
        case VType::Kind::Bool: return "bool";
        case VType::Kind::IntArray: return "[" + std::to_string(type.length) + "]";
    }
    return "?";
}

std::string_view spelling(UnaryOp op) {
    switch (op) {
        case UnaryOp::BitNot: return "~";
        case UnaryOp::LogicalNot: return "!";
        case UnaryOp::Negate: return "-";
    }
    return "?";
}

std::string_view spelling(BinaryOp op) {
    switch (op) {
        case BinaryOp::Mul: return "*";
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Shl: return "<<";
        case BinaryOp::Shr: return ">>";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::BitAnd: return "&";
        case BinaryOp::BitXor: return "^";
        case BinaryOp::BitOr: return "|";
        case BinaryOp::LogicalAnd: return "&&";
        case BinaryOp::LogicalOr: return "||";
    }
    return "?";
}

int precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::LogicalOr: return 2;
        case BinaryOp::LogicalAnd: return 3;
        case BinaryOp::BitOr: return 4;
        case BinaryOp::BitXor: return 5;
        case BinaryOp::BitAnd: return 6;
        case BinaryOp::Eq:
        case BinaryOp::Ne: return 7;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return 8;
        case BinaryOp::Shl:
        case BinaryOp::Shr: return 9;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 10;
        case BinaryOp::Mul: return 11;
    }
    return 0;
}

Expr Expr::int_literal(std::uint64_t value, bool hex, SourceLoc loc) {
    Expr e;
    e.kind = Kind::IntLiteral;
    e.int_value = value;
    e.hex = hex;
    e.loc = loc;
    return e;
}

Expr Expr::bool_literal(bool value, SourceLoc loc) {
    Expr e;
    e.kind = Kind::BoolLiteral;
    e.bool_value = value;
    e.loc = loc;
    return e;
}

Expr Expr::array_literal(std::vector<Expr> elements, SourceLoc loc) {
    Expr e;
    e.kind = Kind::ArrayLiteral;
    e.operands = std::move(elements);
    e.loc = loc;
    return e;
}

Expr Expr::variable(std::string name, SourceLoc loc) {
    Expr e;
    e.kind = Kind::Variable;
    e.name = std::move(name);
    e.loc = loc;
    return e;
}

Expr Expr::index(std::string name, Expr idx, SourceLoc loc) {
    Expr e;
    e.kind = Kind::Index;
    e.name = std::move(name);
    e.operands.push_back(std::move(idx));
    e.loc = loc;
    return e;
}

Expr Expr::unary(UnaryOp op, Expr operand, SourceLoc loc) {
    Expr e;
    e.kind = Kind::Unary;
    e.unary_op = op;
    e.operands.push_back(std::move(operand));
    e.loc = loc;
    return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs, SourceLoc loc) {
    Expr e;
    e.kind = Kind::Binary;
    e.binary_op = op;
    e.operands.push_back(std::move(lhs));
    e.operands.push_back(std::move(rhs));
    e.loc = loc;
    return e;
}

Expr Expr::conditional(Expr cond, Expr then_expr, Expr else_expr, SourceLoc loc) {
    Expr e;
    e.kind = Kind::Conditional;
    e.operands.push_back(std::move(cond));
    e.operands.push_back(std::move(then_expr));
    e.operands.push_back(std::move(else_expr));
    e.loc = loc;
    return e;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::IntLiteral:
            return a.int_value == b.int_value && a.hex == b.hex;
        case Expr::Kind::BoolLiteral:
            return a.bool_value == b.bool_value;
        case Expr::Kind::Variable:
            return a.name == b.name;
        case Expr::Kind::Index:
            return a.name == b.name && a.operands == b.operands;
        case Expr::Kind::Unary:
            return a.unary_op == b.unary_op && a.operands == b.operands;
        case Expr::Kind::Binary:
            return a.binary_op == b.binary_op && a.operands == b.operands;
        case Expr::Kind::ArrayLiteral:
        case Expr::Kind::Conditional:
            return a.operands == b.operands;
    }
    return false;
}

bool operator==(const Stmt& a, const Stmt& b) {
    return a.kind == b.kind && a.name == b.name && a.declared_type == b.declared_type &&
           a.index == b.index && a.value == b.value;
}

bool operator==(const ModuleAst& a, const ModuleAst& b) {
    return a.name == b.name && a.state_decls == b.state_decls && a.inputs == b.inputs &&
           a.outputs == b.outputs && a.body == b.body && a.valid_expr == b.valid_expr &&
           a.ready_expr == b.ready_expr;
}

}  // namespace oobleck::visc
