#include <cstdio>
#include <map>
#include <optional>
#include <tuple>
#include <utility>

#include "oobleck/visc/ir.hpp"
#include "oobleck/visc/word_ops.hpp"

namespace oobleck::visc {
namespace {

Opcode opcode_for(BinaryOp op) {
    switch (op) {
        case BinaryOp::Mul: return Opcode::Mul;
        case BinaryOp::Add: return Opcode::Add;
        case BinaryOp::Sub: return Opcode::Sub;
        case BinaryOp::Shl: return Opcode::Shl;
        case BinaryOp::Shr: return Opcode::Shr;
        case BinaryOp::Lt: return Opcode::Lt;
        case BinaryOp::Le: return Opcode::Le;
        case BinaryOp::Gt: return Opcode::Gt;
        case BinaryOp::Ge: return Opcode::Ge;
        case BinaryOp::Eq: return Opcode::Eq;
        case BinaryOp::Ne: return Opcode::Ne;
        case BinaryOp::BitAnd: return Opcode::BitAnd;
        case BinaryOp::BitXor: return Opcode::BitXor;
        case BinaryOp::BitOr: return Opcode::BitOr;
        case BinaryOp::LogicalAnd: return Opcode::LogicalAnd;
        case BinaryOp::LogicalOr: return Opcode::LogicalOr;
    }
    return Opcode::Add;
}

Opcode opcode_for(UnaryOp op) {
    switch (op) {
        case UnaryOp::BitNot: return Opcode::BitNot;
        case UnaryOp::LogicalNot: return Opcode::LogicalNot;
        case UnaryOp::Negate: return Opcode::Negate;
    }
    return Opcode::BitNot;
}

std::vector<std::uint64_t> init_words(const Expr& init) {
    switch (init.kind) {
        case Expr::Kind::IntLiteral: return {init.int_value};
        case Expr::Kind::BoolLiteral: return {init.bool_value ? 1u : 0u};
        case Expr::Kind::ArrayLiteral: {
            std::vector<std::uint64_t> out;
            for (const Expr& e : init.operands) out.push_back(e.int_value);
            return out;
        }
        default: return {};
    }
}

// Scalar ops over constants, and comparisons of a register with itself,
// become constants. Keeps literal index arithmetic such as `v[1 + 2]`
// constant for the hardware emitter.
std::optional<std::uint64_t> fold(const Op& op, const std::vector<Op>& ops) {
    const auto& a = op.args;
    if (a.size() == 2 && a[0] == a[1]) {
        switch (op.code) {
            case Opcode::Eq:
            case Opcode::Le:
            case Opcode::Ge: return 1;
            case Opcode::Ne:
            case Opcode::Lt:
            case Opcode::Gt: return 0;
            default: break;
        }
    }
    if (a.empty() || op.type.is_array()) return std::nullopt;
    for (Reg r : a) {
        if (ops[r].code != Opcode::Const) return std::nullopt;
    }
    auto w = [&](std::size_t i) { return ops[a[i]].imm; };
    switch (op.code) {
        case Opcode::BitNot: return ~w(0);
        case Opcode::LogicalNot: return w(0) ? 0 : 1;
        case Opcode::Negate: return word_neg(w(0));
        case Opcode::Add: return w(0) + w(1);
        case Opcode::Sub: return w(0) - w(1);
        case Opcode::Mul: return w(0) * w(1);
        case Opcode::BitAnd: return w(0) & w(1);
        case Opcode::BitOr: return w(0) | w(1);
        case Opcode::BitXor: return w(0) ^ w(1);
        case Opcode::Shl: return word_shl(w(0), w(1));
        case Opcode::Shr: return word_shr(w(0), w(1));
        case Opcode::Eq: return w(0) == w(1);
        case Opcode::Ne: return w(0) != w(1);
        case Opcode::Lt: return w(0) < w(1);
        case Opcode::Le: return w(0) <= w(1);
        case Opcode::Gt: return w(0) > w(1);
        case Opcode::Ge: return w(0) >= w(1);
        case Opcode::LogicalAnd: return w(0) && w(1);
        case Opcode::LogicalOr: return w(0) || w(1);
        default: return std::nullopt;
    }
}

class Lowerer {
public:
    explicit Lowerer(const TypedModule& tm) : tm_(tm) {}

    CycleIR run() {
        const ModuleAst& m = tm_.ast;
        ir_.name = m.name;
        for (std::size_t i = 0; i < m.inputs.size(); ++i) {
            const Param& p = m.inputs[i];
            ir_.inputs.push_back({p.name, p.type, 0});
            Op op{Opcode::Input, p.type, {}, 0, static_cast<std::uint32_t>(i), p.loc};
            env_[p.name] = emit(std::move(op));
        }
        for (std::size_t i = 0; i < m.state_decls.size(); ++i) {
            const StateDecl& d = m.state_decls[i];
            ir_.state.push_back({d.name, d.type, init_words(d.init), std::nullopt});
            Op op{Opcode::ReadState, d.type, {}, 0, static_cast<std::uint32_t>(i), d.loc};
            env_[d.name] = emit(std::move(op));
            state_index_[d.name] = i;
        }

        for (std::size_t idx : tm_.schedule) statement(m.body[idx]);

        for (const Param& p : m.outputs) ir_.outputs.push_back({p.name, p.type, env_.at(p.name)});
        ir_.valid = expr(m.valid_expr);
        ir_.ready = expr(m.ready_expr);
        eliminate_dead_ops();
        return std::move(ir_);
    }

private:
    Reg emit(Op op) {
        // Inputs and state reads are never merged; everything else is pure
        // and is shared when structurally identical.
        const bool shareable = op.code != Opcode::Input && op.code != Opcode::ReadState;
        if (shareable) {
            if (auto v = fold(op, ir_.ops)) op = Op{Opcode::Const, op.type, {}, *v, 0, op.loc};
        }
        auto key = std::make_tuple(op.code, op.type.kind, op.type.length, op.args, op.imm, op.slot);
        if (shareable) {
            if (auto it = cse_.find(key); it != cse_.end()) return it->second;
        }
        const Reg r = static_cast<Reg>(ir_.ops.size());
        ir_.ops.push_back(std::move(op));
        if (shareable) cse_.emplace(std::move(key), r);
        return r;
    }

    void bind(const std::string& name, Reg r) {
        env_[name] = r;
        ir_.bindings.push_back({name, r});
    }

    // A bare variable on the right-hand side gets its own register so the
    // bound name has a definition of its own.
    Reg value_for_binding(const Expr& e) {
        const Reg r = expr(e);
        if (e.kind != Expr::Kind::Variable) return r;
        return emit(Op{Opcode::Copy, *e.type, {r}, 0, 0, e.loc});
    }

    void statement(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::Let:
            case Stmt::Kind::Assign:
                bind(s.name, value_for_binding(s.value));
                return;
            case Stmt::Kind::IndexAssign: {
                const Reg arr = env_.at(s.name);
                const Reg idx = expr(*s.index);
                const Reg val = expr(s.value);
                bind(s.name, emit(Op{Opcode::Insert, ir_.ops[arr].type, {arr, idx, val}, 0, 0, s.loc}));
                return;
            }
            case Stmt::Kind::NextState: {
                const Reg r = value_for_binding(s.value);
                ir_.state[state_index_.at(s.name)].next = r;  // last write wins
                return;
            }
        }
    }

    Reg expr(const Expr& e) {
        const VType t = *e.type;
        switch (e.kind) {
            case Expr::Kind::IntLiteral:
                return emit(Op{Opcode::Const, t, {}, e.int_value, 0, e.loc});
            case Expr::Kind::BoolLiteral:
                return emit(Op{Opcode::Const, t, {}, e.bool_value ? 1u : 0u, 0, e.loc});
            case Expr::Kind::ArrayLiteral: {
                std::vector<Reg> elems;
                for (const Expr& el : e.operands) elems.push_back(expr(el));
                return emit(Op{Opcode::MakeArray, t, std::move(elems), 0, 0, e.loc});
            }
            case Expr::Kind::Variable:
                return env_.at(e.name);
            case Expr::Kind::Index: {
                const Reg arr = env_.at(e.name);
                const Reg idx = expr(e.operands[0]);
                return emit(Op{Opcode::Index, t, {arr, idx}, 0, 0, e.loc});
            }
            case Expr::Kind::Unary: {
                const Reg a = expr(e.operands[0]);
                return emit(Op{opcode_for(e.unary_op), t, {a}, 0, 0, e.loc});
            }
            case Expr::Kind::Binary: {
                const Reg a = expr(e.operands[0]);
                const Reg b = expr(e.operands[1]);
                return emit(Op{opcode_for(e.binary_op), t, {a, b}, 0, 0, e.loc});
            }
            case Expr::Kind::Conditional: {
                const Reg c = expr(e.operands[0]);
                const Reg a = expr(e.operands[1]);
                const Reg b = expr(e.operands[2]);
                return emit(Op{Opcode::Select, t, {c, a, b}, 0, 0, e.loc});
            }
        }
        return 0;
    }

    void eliminate_dead_ops() {
        std::vector<bool> live(ir_.ops.size(), false);
        std::vector<Reg> work;
        auto mark = [&](Reg r) {
            if (!live[r]) {
                live[r] = true;
                work.push_back(r);
            }
        };
        for (const PortDef& p : ir_.outputs) mark(p.reg);
        for (const StateSlot& s : ir_.state) {
            if (s.next) mark(*s.next);
        }
        mark(ir_.valid);
        mark(ir_.ready);
        for (Reg r = 0; r < ir_.ops.size(); ++r) {
            if (ir_.ops[r].code == Opcode::Input) mark(r);
        }
        while (!work.empty()) {
            const Reg r = work.back();
            work.pop_back();
            for (Reg a : ir_.ops[r].args) mark(a);
        }

        std::vector<Reg> remap(ir_.ops.size(), 0);
        std::vector<Op> kept;
        for (Reg r = 0; r < ir_.ops.size(); ++r) {
            if (!live[r]) continue;
            remap[r] = static_cast<Reg>(kept.size());
            Op op = std::move(ir_.ops[r]);
            for (Reg& a : op.args) a = remap[a];
            kept.push_back(std::move(op));
        }
        ir_.ops = std::move(kept);
        for (PortDef& p : ir_.outputs) p.reg = remap[p.reg];
        for (StateSlot& s : ir_.state) {
            if (s.next) s.next = remap[*s.next];
        }
        ir_.valid = remap[ir_.valid];
        ir_.ready = remap[ir_.ready];

        std::vector<Binding> bindings;
        for (Binding& b : ir_.bindings) {
            if (live[b.reg]) bindings.push_back({std::move(b.name), remap[b.reg]});
        }
        ir_.bindings = std::move(bindings);
    }

    const TypedModule& tm_;
    CycleIR ir_;
    std::map<std::string, Reg> env_;
    std::map<std::string, std::size_t> state_index_;
    std::map<std::tuple<Opcode, VType::Kind, std::uint32_t, std::vector<Reg>, std::uint64_t, std::uint32_t>, Reg> cse_;
};

std::string hex_word(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string reg_name(Reg r) { return "%" + std::to_string(r); }

}  // namespace

std::string_view mnemonic(Opcode op) {
    switch (op) {
        case Opcode::Input: return "input";
        case Opcode::ReadState: return "state";
        case Opcode::Const: return "const";
        case Opcode::MakeArray: return "array";
        case Opcode::Copy: return "copy";
        case Opcode::BitNot: return "not";
        case Opcode::LogicalNot: return "lnot";
        case Opcode::Negate: return "neg";
        case Opcode::Add: return "add";
        case Opcode::Sub: return "sub";
        case Opcode::Mul: return "mul";
        case Opcode::BitAnd: return "and";
        case Opcode::BitOr: return "or";
        case Opcode::BitXor: return "xor";
        case Opcode::Shl: return "shl";
        case Opcode::Shr: return "shr";
        case Opcode::Eq: return "eq";
        case Opcode::Ne: return "ne";
        case Opcode::Lt: return "lt";
        case Opcode::Le: return "le";
        case Opcode::Gt: return "gt";
        case Opcode::Ge: return "ge";
        case Opcode::LogicalAnd: return "land";
        case Opcode::LogicalOr: return "lor";
        case Opcode::Select: return "select";
        case Opcode::Index: return "index";
        case Opcode::Insert: return "insert";
    }
    return "?";
}

CycleIR lower_to_ir(const TypedModule& tm) { return Lowerer(tm).run(); }

std::string dump(const CycleIR& ir) {
    std::string out = "module " + ir.name + "\n";
    for (const PortDef& p : ir.inputs) out += "input " + p.name + " : " + to_string(p.type) + "\n";
    for (const PortDef& p : ir.outputs) out += "output " + p.name + " : " + to_string(p.type) + "\n";
    for (const StateSlot& s : ir.state) {
        out += "state " + s.name + " : " + to_string(s.type) + " =";
        for (std::uint64_t w : s.init) out += " " + hex_word(w);
        out += "\n";
    }
    for (Reg r = 0; r < ir.ops.size(); ++r) {
        const Op& op = ir.ops[r];
        out += reg_name(r) + " = " + std::string(mnemonic(op.code)) + "." + to_string(op.type);
        switch (op.code) {
            case Opcode::Input: out += " " + ir.inputs[op.slot].name; break;
            case Opcode::ReadState: out += " " + ir.state[op.slot].name; break;
            case Opcode::Const: out += " " + hex_word(op.imm); break;
            default:
                for (std::size_t i = 0; i < op.args.size(); ++i) out += (i ? ", " : " ") + reg_name(op.args[i]);
                break;
        }
        out += "\n";
    }
    for (const StateSlot& s : ir.state) {
        if (s.next) out += "next " + s.name + " = " + reg_name(*s.next) + "\n";
    }
    for (const PortDef& p : ir.outputs) out += "out " + p.name + " = " + reg_name(p.reg) + "\n";
    out += "valid = " + reg_name(ir.valid) + "\n";
    out += "ready = " + reg_name(ir.ready) + "\n";
    return out;
}

}  // namespace oobleck::visc
