#include "oobleck/visc/sema.hpp"

#include <set>
#include <utility>

#include "oobleck/visc/word_ops.hpp"

namespace oobleck::visc {
namespace {

[[noreturn]] void fail(ErrorKind kind, SourceLoc loc, const std::string& message) {
    throw CompileError(kind, loc, message);
}

bool is_arithmetic(BinaryOp op) {
    switch (op) {
        case BinaryOp::Mul:
        case BinaryOp::Add:
        case BinaryOp::Sub:
        case BinaryOp::Shl:
        case BinaryOp::Shr:
        case BinaryOp::BitAnd:
        case BinaryOp::BitXor:
        case BinaryOp::BitOr: return true;
        default: return false;
    }
}

bool is_ordering(BinaryOp op) {
    return op == BinaryOp::Lt || op == BinaryOp::Le || op == BinaryOp::Gt || op == BinaryOp::Ge;
}

class Checker {
public:
    explicit Checker(TypedModule& tm) : tm_(tm) {}

    void run() {
        ModuleAst& m = tm_.ast;
        for (StateDecl& d : m.state_decls) {
            check_state_init(d);
            declare(d.name, SymbolKind::State, d.type, d.loc);
        }
        for (const Param& p : m.inputs) declare(p.name, SymbolKind::Input, p.type, p.loc);
        if (m.outputs.empty()) fail(ErrorKind::EmptyInterface, m.loc, "module `" + m.name + "` declares no outputs");
        for (const Param& p : m.outputs) declare(p.name, SymbolKind::Output, p.type, p.loc);

        for (std::size_t i = 0; i < m.body.size(); ++i) {
            statement(m.body[i]);
            tm_.schedule.push_back(i);
        }
        for (const Param& p : m.outputs) {
            if (!assigned_outputs_.contains(p.name)) {
                fail(ErrorKind::UnassignedOutput, p.loc, "output `" + p.name + "` is never assigned");
            }
        }
        expect_type(m.valid_expr, VType::boolean(), "valid expression");
        expect_type(m.ready_expr, VType::boolean(), "ready expression");
        tm_.is_sequential = !m.state_decls.empty();
    }

private:
    void declare(const std::string& name, SymbolKind kind, VType type, SourceLoc loc) {
        if (tm_.symbols.contains(name)) fail(ErrorKind::DuplicateName, loc, "`" + name + "` is already declared");
        tm_.symbols.emplace(name, Symbol{kind, type, loc});
    }

    void check_state_init(StateDecl& d) {
        Expr& init = d.init;
        if (d.type.is_int() && init.kind == Expr::Kind::IntLiteral) {
            init.type = VType::integer();
            return;
        }
        if (d.type.is_bool() && init.kind == Expr::Kind::BoolLiteral) {
            init.type = VType::boolean();
            return;
        }
        if (d.type.is_array() && init.kind == Expr::Kind::ArrayLiteral) {
            if (init.operands.size() != d.type.length) {
                fail(ErrorKind::TypeMismatch, init.loc,
                     "initializer for `" + d.name + "` has " + std::to_string(init.operands.size()) +
                         " elements, expected " + std::to_string(d.type.length));
            }
            for (Expr& e : init.operands) e.type = VType::integer();
            init.type = d.type;
            return;
        }
        fail(ErrorKind::TypeMismatch, init.loc, "initial value of `" + d.name + "` does not match type " + to_string(d.type));
    }

    const Symbol& lookup(const std::string& name, SourceLoc loc) const {
        auto it = tm_.symbols.find(name);
        if (it == tm_.symbols.end()) fail(ErrorKind::UndefinedVariable, loc, "`" + name + "` is not defined");
        return it->second;
    }

    void statement(Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::Let: {
                const VType t = infer(s.value);
                if (s.declared_type && *s.declared_type != t) {
                    fail(ErrorKind::TypeMismatch, s.value.loc,
                         "`" + s.name + "` is declared " + to_string(*s.declared_type) + " but initialized with " + to_string(t));
                }
                declare(s.name, SymbolKind::Local, t, s.loc);
                return;
            }
            case Stmt::Kind::Assign: {
                const Symbol& sym = lookup(s.name, s.loc);
                check_assignable(s, sym);
                if (sym.kind == SymbolKind::Output) {
                    if (assigned_outputs_.contains(s.name)) {
                        fail(ErrorKind::OutputReassigned, s.loc, "output `" + s.name + "` is assigned more than once");
                    }
                }
                expect_type(s.value, sym.type, "assignment to `" + s.name + "`");
                if (sym.kind == SymbolKind::Output) assigned_outputs_.insert(s.name);
                return;
            }
            case Stmt::Kind::IndexAssign: {
                const Symbol& sym = lookup(s.name, s.loc);
                check_assignable(s, sym);
                if (sym.kind == SymbolKind::Output) {
                    fail(ErrorKind::OutputReassigned, s.loc, "output `" + s.name + "` must be assigned as a whole");
                }
                if (!sym.type.is_array()) fail(ErrorKind::TypeMismatch, s.loc, "`" + s.name + "` is not an array");
                check_index(*s.index, sym.type);
                expect_type(s.value, VType::integer(), "array element");
                return;
            }
            case Stmt::Kind::NextState: {
                auto it = tm_.symbols.find(s.name);
                if (it == tm_.symbols.end() || it->second.kind != SymbolKind::State) {
                    fail(ErrorKind::NextStateOnNonRegister, s.loc, "`@" + s.name + "` does not name a state register");
                }
                expect_type(s.value, it->second.type, "next value of `" + s.name + "`");
                return;
            }
        }
    }

    static void check_assignable(const Stmt& s, const Symbol& sym) {
        if (sym.kind == SymbolKind::Input) fail(ErrorKind::AssignToInput, s.loc, "cannot assign to input `" + s.name + "`");
        if (sym.kind == SymbolKind::State) {
            fail(ErrorKind::AssignToState, s.loc, "state register `" + s.name + "` is written with `@" + s.name + " = ...`");
        }
    }

    void check_index(Expr& idx, VType array_type) {
        expect_type(idx, VType::integer(), "array index");
        if (auto k = fold_constant(idx); k && *k >= array_type.length) {
            fail(ErrorKind::IndexOutOfRange, idx.loc,
                 "index " + std::to_string(*k) + " is out of range for " + to_string(array_type));
        }
    }

    void expect_type(Expr& e, VType want, const std::string& what) {
        const VType got = infer(e);
        if (got != want) {
            fail(ErrorKind::TypeMismatch, e.loc, what + " has type " + to_string(got) + ", expected " + to_string(want));
        }
    }

    VType infer(Expr& e) {
        const VType t = infer_uncached(e);
        e.type = t;
        return t;
    }

    VType infer_uncached(Expr& e) {
        switch (e.kind) {
            case Expr::Kind::IntLiteral: return VType::integer();
            case Expr::Kind::BoolLiteral: return VType::boolean();
            case Expr::Kind::ArrayLiteral:
                for (Expr& el : e.operands) expect_type(el, VType::integer(), "array literal element");
                return VType::array(static_cast<std::uint32_t>(e.operands.size()));
            case Expr::Kind::Variable: {
                const Symbol& sym = lookup(e.name, e.loc);
                if (sym.kind == SymbolKind::Output && !assigned_outputs_.contains(e.name)) {
                    fail(ErrorKind::UndefinedVariable, e.loc, "output `" + e.name + "` is read before it is assigned");
                }
                return sym.type;
            }
            case Expr::Kind::Index: {
                const Symbol& sym = lookup(e.name, e.loc);
                if (sym.kind == SymbolKind::Output && !assigned_outputs_.contains(e.name)) {
                    fail(ErrorKind::UndefinedVariable, e.loc, "output `" + e.name + "` is read before it is assigned");
                }
                if (!sym.type.is_array()) fail(ErrorKind::TypeMismatch, e.loc, "`" + e.name + "` is not an array");
                check_index(e.operands[0], sym.type);
                return VType::integer();
            }
            case Expr::Kind::Unary: {
                if (e.unary_op == UnaryOp::LogicalNot) {
                    expect_type(e.operands[0], VType::boolean(), "operand of `!`");
                    return VType::boolean();
                }
                expect_type(e.operands[0], VType::integer(), "operand of `" + std::string(spelling(e.unary_op)) + "`");
                return VType::integer();
            }
            case Expr::Kind::Binary: {
                const BinaryOp op = e.binary_op;
                const std::string what = "operand of `" + std::string(spelling(op)) + "`";
                if (is_arithmetic(op)) {
                    expect_type(e.operands[0], VType::integer(), what);
                    expect_type(e.operands[1], VType::integer(), what);
                    return VType::integer();
                }
                if (is_ordering(op)) {
                    expect_type(e.operands[0], VType::integer(), what);
                    expect_type(e.operands[1], VType::integer(), what);
                    return VType::boolean();
                }
                if (op == BinaryOp::LogicalAnd || op == BinaryOp::LogicalOr) {
                    expect_type(e.operands[0], VType::boolean(), what);
                    expect_type(e.operands[1], VType::boolean(), what);
                    return VType::boolean();
                }
                // == and !=
                const VType lhs = infer(e.operands[0]);
                if (lhs.is_array()) fail(ErrorKind::TypeMismatch, e.operands[0].loc, "arrays cannot be compared");
                expect_type(e.operands[1], lhs, what);
                return VType::boolean();
            }
            case Expr::Kind::Conditional: {
                expect_type(e.operands[0], VType::boolean(), "condition");
                const VType t = infer(e.operands[1]);
                expect_type(e.operands[2], t, "else branch");
                return t;
            }
        }
        fail(ErrorKind::TypeMismatch, e.loc, "malformed expression");
    }

    TypedModule& tm_;
    std::set<std::string> assigned_outputs_;
};

}  // namespace

std::optional<std::uint64_t> fold_constant(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::IntLiteral: return e.int_value;
        case Expr::Kind::Unary: {
            if (e.unary_op == UnaryOp::LogicalNot) return std::nullopt;
            auto v = fold_constant(e.operands[0]);
            if (!v) return std::nullopt;
            return e.unary_op == UnaryOp::BitNot ? ~*v : word_neg(*v);
        }
        case Expr::Kind::Binary: {
            auto a = fold_constant(e.operands[0]);
            auto b = fold_constant(e.operands[1]);
            if (!a || !b) return std::nullopt;
            switch (e.binary_op) {
                case BinaryOp::Mul: return *a * *b;
                case BinaryOp::Add: return *a + *b;
                case BinaryOp::Sub: return *a - *b;
                case BinaryOp::Shl: return word_shl(*a, *b);
                case BinaryOp::Shr: return word_shr(*a, *b);
                case BinaryOp::BitAnd: return *a & *b;
                case BinaryOp::BitXor: return *a ^ *b;
                case BinaryOp::BitOr: return *a | *b;
                default: return std::nullopt;
            }
        }
        default: return std::nullopt;
    }
}

TypedModule typecheck(ModuleAst ast) {
    TypedModule tm;
    tm.ast = std::move(ast);
    Checker(tm).run();
    return tm;
}

}  // namespace oobleck::visc
