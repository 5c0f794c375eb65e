#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oobleck/visc/emit.hpp"
#include "oobleck/visc/ir.hpp"

namespace oobleck::visc {
namespace {

const std::set<std::string>& c_keywords() {
    static const std::set<std::string> kw = {
        "auto",     "break",    "case",     "char",   "const",    "continue", "default",  "do",
        "double",   "else",     "enum",     "extern", "float",    "for",      "goto",     "if",
        "inline",   "int",      "long",     "register", "restrict", "return", "short",    "signed",
        "sizeof",   "static",   "struct",   "switch", "typedef",  "union",    "unsigned", "void",
        "volatile", "while",    "bool",     "true",   "false",    "uint64_t", "uint8_t",  "memcpy",
        "UINT64_C", "NULL",     "size_t",   "main",   "asm",
    };
    return kw;
}

std::string word_literal(std::uint64_t v) {
    char buf[40];
    if (v < 65536) {
        std::snprintf(buf, sizeof buf, "UINT64_C(%llu)", static_cast<unsigned long long>(v));
    } else {
        std::snprintf(buf, sizeof buf, "UINT64_C(0x%016llx)", static_cast<unsigned long long>(v));
    }
    return buf;
}

class CEmitter {
public:
    explicit CEmitter(CycleIR ir) : ir_(std::move(ir)) {}

    std::string run() {
        module_ = c_keywords().contains(ir_.name) ? "v_" + ir_.name : ir_.name;
        reserved_ = c_keywords();
        for (const char* n : {"s", "o", "valid", "ready"}) reserved_.insert(n);
        for (const char* suffix : {"", "_step", "_state_init", "_output", "_state"}) reserved_.insert(module_ + suffix);

        count_uses();
        header();
        records();
        helpers();
        if (ir_.is_sequential()) state_init();
        step_function();
        entry_point();
        return out_;
    }

private:
    std::string mangle(const std::string& name) const {
        return reserved_.contains(name) ? "v_" + name : name;
    }

    static std::string field_decl(const std::string& name, VType t) {
        switch (t.kind) {
            case VType::Kind::Int: return "uint64_t " + name + ";";
            case VType::Kind::Bool: return "bool " + name + ";";
            case VType::Kind::IntArray: return "uint64_t " + name + "[" + std::to_string(t.length) + "];";
        }
        return {};
    }

    static std::string param_decl(const std::string& name, VType t) {
        switch (t.kind) {
            case VType::Kind::Int: return "uint64_t " + name;
            case VType::Kind::Bool: return "bool " + name;
            case VType::Kind::IntArray: return "const uint64_t " + name + "[" + std::to_string(t.length) + "]";
        }
        return {};
    }

    std::string input_params() const {
        std::string out;
        for (std::size_t i = 0; i < ir_.inputs.size(); ++i) {
            if (i) out += ", ";
            out += param_decl(mangle(ir_.inputs[i].name), ir_.inputs[i].type);
        }
        return out;
    }

    std::string input_args() const {
        std::string out;
        for (std::size_t i = 0; i < ir_.inputs.size(); ++i) {
            if (i) out += ", ";
            out += mangle(ir_.inputs[i].name);
        }
        return out;
    }

    void count_uses() {
        uses_.assign(ir_.ops.size(), 0);
        for (const Op& op : ir_.ops) {
            for (Reg a : op.args) ++uses_[a];
            if (op.code == Opcode::Shl) need_shl_ = true;
            if (op.code == Opcode::Shr) need_shr_ = true;
            if (op.code == Opcode::ReadState) reads_state_ = true;
        }
        for (const PortDef& p : ir_.outputs) ++uses_[p.reg];
        for (const StateSlot& s : ir_.state) {
            if (s.next) ++uses_[*s.next];
        }
        ++uses_[ir_.valid];
        ++uses_[ir_.ready];
    }

    void header() {
        out_ += "/* Generated by oobleck from Viscosity module `" + ir_.name + "`. Do not edit. */\n";
        if (ir_.is_sequential()) {
            out_ += "/* " + module_ +
                    "() holds its inputs constant and steps until valid is set; there is no streaming entry point. */\n";
        }
        out_ += "#include <stdbool.h>\n#include <stdint.h>\n#include <string.h>\n\n";
    }

    void records() {
        out_ += "struct _" + module_ + "_output {";
        for (const PortDef& p : ir_.outputs) out_ += " " + field_decl(mangle(p.name), p.type);
        out_ += " };\n";
        out_ += "typedef struct _" + module_ + "_output " + module_ + "_output;\n\n";
        if (ir_.is_sequential()) {
            out_ += "struct _" + module_ + "_state {";
            for (const StateSlot& s : ir_.state) out_ += " " + field_decl(mangle(s.name), s.type);
            out_ += " };\n";
            out_ += "typedef struct _" + module_ + "_state " + module_ + "_state;\n\n";
        }
    }

    void helpers() {
        if (need_shl_) out_ += "static inline uint64_t visc_shl(uint64_t a, uint64_t b) { return b >= 64 ? 0 : a << b; }\n";
        if (need_shr_) out_ += "static inline uint64_t visc_shr(uint64_t a, uint64_t b) { return b >= 64 ? 0 : a >> b; }\n";
        if (need_shl_ || need_shr_) out_ += "\n";
    }

    void state_init() {
        out_ += "void " + module_ + "_state_init(" + module_ + "_state *s) {\n";
        for (const StateSlot& s : ir_.state) {
            const std::string field = "s->" + mangle(s.name);
            if (s.type.is_array()) {
                for (std::size_t i = 0; i < s.init.size(); ++i) {
                    out_ += "    " + field + "[" + std::to_string(i) + "] = " + word_literal(s.init[i]) + ";\n";
                }
            } else if (s.type.is_bool()) {
                out_ += "    " + field + " = " + (s.init[0] ? "true" : "false") + ";\n";
            } else {
                out_ += "    " + field + " = " + word_literal(s.init[0]) + ";\n";
            }
        }
        out_ += "}\n\n";
    }

    // Text naming the value of register r. Inputs, constants, state reads,
    // and copies have no statement of their own.
    std::string operand(Reg r) const {
        const Op& op = ir_.ops[r];
        switch (op.code) {
            case Opcode::Input: return mangle(ir_.inputs[op.slot].name);
            case Opcode::ReadState: return "_prev." + mangle(ir_.state[op.slot].name);
            case Opcode::Const:
                if (op.type.is_bool()) return op.imm ? "true" : "false";
                return word_literal(op.imm);
            case Opcode::Copy: return operand(op.args[0]);
            default: return "_t" + std::to_string(r);
        }
    }

    std::optional<std::uint64_t> const_index(Reg r) const {
        const Op& op = ir_.ops[r];
        if (op.code == Opcode::Const) return op.imm;
        if (op.code == Opcode::Copy) return const_index(op.args[0]);
        return std::nullopt;
    }

    static const char* infix(Opcode code) {
        switch (code) {
            case Opcode::Add: return " + ";
            case Opcode::Sub: return " - ";
            case Opcode::Mul: return " * ";
            case Opcode::BitAnd: return " & ";
            case Opcode::BitOr: return " | ";
            case Opcode::BitXor: return " ^ ";
            case Opcode::Eq: return " == ";
            case Opcode::Ne: return " != ";
            case Opcode::Lt: return " < ";
            case Opcode::Le: return " <= ";
            case Opcode::Gt: return " > ";
            case Opcode::Ge: return " >= ";
            case Opcode::LogicalAnd: return " && ";
            case Opcode::LogicalOr: return " || ";
            default: return nullptr;
        }
    }

    void op_statement(Reg r) {
        const Op& op = ir_.ops[r];
        const std::string dst = "_t" + std::to_string(r);
        const auto& a = op.args;
        const char* scalar = op.type.is_bool() ? "const bool " : "const uint64_t ";
        const std::string len = std::to_string(op.type.length);
        std::string line;
        switch (op.code) {
            case Opcode::Input:
            case Opcode::ReadState:
            case Opcode::Const:
            case Opcode::Copy: return;
            case Opcode::MakeArray: {
                line = "const uint64_t " + dst + "[" + len + "] = {";
                for (std::size_t i = 0; i < a.size(); ++i) line += (i ? ", " : "") + operand(a[i]);
                line += "};";
                break;
            }
            case Opcode::BitNot: line = scalar + dst + " = ~" + operand(a[0]) + ";"; break;
            case Opcode::LogicalNot: line = scalar + dst + " = !" + operand(a[0]) + ";"; break;
            case Opcode::Negate: line = scalar + dst + " = -" + operand(a[0]) + ";"; break;
            case Opcode::Shl: line = scalar + dst + " = visc_shl(" + operand(a[0]) + ", " + operand(a[1]) + ");"; break;
            case Opcode::Shr: line = scalar + dst + " = visc_shr(" + operand(a[0]) + ", " + operand(a[1]) + ");"; break;
            case Opcode::Select:
                if (op.type.is_array()) {
                    line = "const uint64_t *" + dst + " = " + operand(a[0]) + " ? " + operand(a[1]) + " : " + operand(a[2]) + ";";
                } else {
                    line = scalar + dst + " = " + operand(a[0]) + " ? " + operand(a[1]) + " : " + operand(a[2]) + ";";
                }
                break;
            case Opcode::Index: {
                const std::uint32_t n = ir_.ops[a[0]].type.length;
                if (auto k = const_index(a[1]); k && *k < n) {
                    line = scalar + dst + " = " + operand(a[0]) + "[" + std::to_string(*k) + "];";
                } else {
                    const std::string i = operand(a[1]);
                    line = scalar + dst + " = " + i + " < " + std::to_string(n) + " ? " + operand(a[0]) + "[" + i + "] : 0;";
                }
                break;
            }
            case Opcode::Insert: {
                out_ += "    uint64_t " + dst + "[" + len + "];\n";
                out_ += "    memcpy(" + dst + ", " + operand(a[0]) + ", sizeof " + dst + ");\n";
                if (auto k = const_index(a[1]); k && *k < op.type.length) {
                    line = dst + "[" + std::to_string(*k) + "] = " + operand(a[2]) + ";";
                } else {
                    const std::string i = operand(a[1]);
                    line = "if (" + i + " < " + len + ") " + dst + "[" + i + "] = " + operand(a[2]) + ";";
                }
                break;
            }
            default:
                line = scalar + dst + " = " + operand(a[0]) + infix(op.code) + operand(a[1]) + ";";
                break;
        }
        out_ += "    " + line + "\n";
    }

    void store(const std::string& dst, Reg src, VType type) {
        if (type.is_array()) {
            out_ += "    memcpy(" + dst + ", " + operand(src) + ", sizeof " + dst + ");\n";
        } else {
            out_ += "    " + dst + " = " + operand(src) + ";\n";
        }
    }

    void step_function() {
        std::string params;
        if (ir_.is_sequential()) params += module_ + "_state *s, ";
        if (!ir_.inputs.empty()) params += input_params() + ", ";
        params += module_ + "_output *o, bool *valid, bool *ready";
        out_ += "void " + module_ + "_step(" + params + ") {\n";

        for (Reg r = 0; r < ir_.ops.size(); ++r) {
            const Op& op = ir_.ops[r];
            if (op.code == Opcode::Input && uses_[r] == 0) out_ += "    (void)" + operand(r) + ";\n";
        }
        if (reads_state_) out_ += "    const " + module_ + "_state _prev = *s;\n";
        for (Reg r = 0; r < ir_.ops.size(); ++r) op_statement(r);
        for (const PortDef& p : ir_.outputs) store("o->" + mangle(p.name), p.reg, p.type);
        out_ += "    *valid = " + operand(ir_.valid) + ";\n";
        out_ += "    *ready = " + operand(ir_.ready) + ";\n";
        for (const StateSlot& s : ir_.state) {
            if (s.next) store("s->" + mangle(s.name), *s.next, s.type);
        }
        out_ += "}\n\n";
    }

    void entry_point() {
        const std::string params = ir_.inputs.empty() ? "void" : input_params();
        const std::string args = ir_.inputs.empty() ? "" : input_args() + ", ";
        out_ += module_ + "_output " + module_ + "(" + params + ") {\n";
        out_ += "    " + module_ + "_output o;\n";
        out_ += "    bool valid = false;\n";
        out_ += "    bool ready = false;\n";
        if (ir_.is_sequential()) {
            out_ += "    " + module_ + "_state s;\n";
            out_ += "    " + module_ + "_state_init(&s);\n";
            out_ += "    while (!valid) {\n";
            out_ += "        " + module_ + "_step(&s, " + args + "&o, &valid, &ready);\n";
            out_ += "    }\n";
        } else {
            out_ += "    " + module_ + "_step(" + args + "&o, &valid, &ready);\n";
        }
        out_ += "    return o;\n}\n";
    }

    CycleIR ir_;
    std::string module_;
    std::set<std::string> reserved_;
    std::vector<unsigned> uses_;
    bool need_shl_ = false;
    bool need_shr_ = false;
    bool reads_state_ = false;
    std::string out_;
};

}  // namespace

std::string emit_software(const TypedModule& tm) { return CEmitter(lower_to_ir(tm)).run(); }

}  // namespace oobleck::visc
