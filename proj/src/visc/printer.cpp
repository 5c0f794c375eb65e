#include <cstdio>
#include <string>

#include "oobleck/visc/parser.hpp"

namespace oobleck::visc {
namespace {

constexpr int kConditionalPrec = 1;
constexpr int kUnaryPrec = 12;
constexpr int kAtomPrec = 13;

int expr_prec(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Conditional: return kConditionalPrec;
        case Expr::Kind::Binary: return precedence(e.binary_op);
        case Expr::Kind::Unary: return kUnaryPrec;
        default: return kAtomPrec;
    }
}

std::string literal_text(const Expr& e) {
    if (!e.hex) return std::to_string(e.int_value);
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(e.int_value));
    return buf;
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& e, bool parens, std::string& out) {
    if (parens) out += '(';
    print(e, out);
    if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::IntLiteral:
            out += literal_text(e);
            return;
        case Expr::Kind::BoolLiteral:
            out += e.bool_value ? "true" : "false";
            return;
        case Expr::Kind::Variable:
            out += e.name;
            return;
        case Expr::Kind::Index:
            out += e.name;
            out += '[';
            print(e.operands[0], out);
            out += ']';
            return;
        case Expr::Kind::ArrayLiteral:
            out += '[';
            for (std::size_t i = 0; i < e.operands.size(); ++i) {
                if (i) out += ", ";
                print(e.operands[i], out);
            }
            out += ']';
            return;
        case Expr::Kind::Unary:
            out += spelling(e.unary_op);
            print_child(e.operands[0], expr_prec(e.operands[0]) < kUnaryPrec, out);
            return;
        case Expr::Kind::Binary: {
            const int p = precedence(e.binary_op);
            print_child(e.operands[0], expr_prec(e.operands[0]) < p, out);
            out += ' ';
            out += spelling(e.binary_op);
            out += ' ';
            print_child(e.operands[1], expr_prec(e.operands[1]) <= p, out);
            return;
        }
        case Expr::Kind::Conditional:
            print_child(e.operands[0], expr_prec(e.operands[0]) <= kConditionalPrec, out);
            out += " ? ";
            print(e.operands[1], out);
            out += " : ";
            print(e.operands[2], out);
            return;
    }
}

bool contains_greater(const Expr& e) {
    if (e.kind == Expr::Kind::Binary && e.binary_op == BinaryOp::Gt) return true;
    for (const Expr& op : e.operands) {
        if (contains_greater(op)) return true;
    }
    return false;
}

void print_params(const std::vector<Param>& params, std::string& out) {
    out += '(';
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].name + " : " + to_string(params[i].type);
    }
    out += ')';
}

}  // namespace

std::string print_expr(const Expr& expr) {
    std::string out;
    print(expr, out);
    return out;
}

std::string pretty_print(const ModuleAst& ast) {
    std::string out = "module [";
    for (std::size_t i = 0; i < ast.state_decls.size(); ++i) {
        const StateDecl& d = ast.state_decls[i];
        if (i) out += ", ";
        out += d.name + " : " + to_string(d.type) + " = " + print_expr(d.init);
    }
    out += "] " + ast.name + " ";
    print_params(ast.inputs, out);
    out += " -> ";
    print_params(ast.outputs, out);
    out += " {\n";
    for (const Stmt& s : ast.body) {
        out += "    ";
        switch (s.kind) {
            case Stmt::Kind::Let:
                out += "let " + s.name;
                if (s.declared_type) out += " : " + to_string(*s.declared_type);
                break;
            case Stmt::Kind::Assign:
                out += s.name;
                break;
            case Stmt::Kind::IndexAssign:
                out += s.name + "[" + print_expr(*s.index) + "]";
                break;
            case Stmt::Kind::NextState:
                out += "@" + s.name;
                break;
        }
        out += " = " + print_expr(s.value) + ";\n";
    }
    out += "} <" + print_expr(ast.valid_expr) + "; ";
    // The trailer closes with `>`, so a comparison inside the ready
    // expression has to be parenthesized.
    if (contains_greater(ast.ready_expr)) {
        out += "(" + print_expr(ast.ready_expr) + ")";
    } else {
        out += print_expr(ast.ready_expr);
    }
    out += ">\n";
    return out;
}

}  // namespace oobleck::visc
