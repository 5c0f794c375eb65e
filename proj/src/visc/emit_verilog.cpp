#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oobleck/visc/emit.hpp"
#include "oobleck/visc/ir.hpp"

namespace oobleck::visc {
namespace {

const std::set<std::string>& verilog_keywords() {
    static const std::set<std::string> kw = {
        "always", "and", "assign", "automatic", "begin", "bit", "buf", "bufif0", "bufif1", "byte", "case", "casex",
        "casez", "cell", "cmos", "config", "deassign", "default", "defparam", "design", "disable", "edge", "else",
        "end", "endcase", "endconfig", "endfunction", "endgenerate", "endmodule", "endprimitive", "endspecify",
        "endtable", "endtask", "event", "for", "force", "forever", "fork", "function", "generate", "genvar",
        "highz0", "highz1", "if", "ifnone", "incdir", "include", "initial", "inout", "input", "instance", "int",
        "integer", "join", "large", "liblist", "library", "localparam", "logic", "longint", "macromodule", "medium",
        "module", "nand", "negedge", "nmos", "nor", "noshowcancelled", "not", "notif0", "notif1", "or", "output",
        "parameter", "pmos", "posedge", "primitive", "pull0", "pull1", "pulldown", "pullup", "pulsestyle_ondetect",
        "pulsestyle_onevent", "rcmos", "real", "realtime", "reg", "release", "repeat", "rnmos", "rpmos", "rtran",
        "rtranif0", "rtranif1", "scalared", "shortint", "showcancelled", "signed", "small", "specify", "specparam",
        "strong0", "strong1", "supply0", "supply1", "table", "task", "time", "tran", "tranif0", "tranif1", "tri",
        "tri0", "tri1", "triand", "trior", "trireg", "unsigned", "use", "uwire", "vectored", "wait", "wand",
        "weak0", "weak1", "while", "wire", "wor", "xnor", "xor",
    };
    return kw;
}

const std::set<std::string> kHandshakePorts = {"clk", "rst_n", "in_valid", "in_ready", "out_valid", "out_ready"};

std::string word_literal(std::uint64_t v) {
    char buf[40];
    if (v < 65536) {
        std::snprintf(buf, sizeof buf, "64'd%llu", static_cast<unsigned long long>(v));
    } else {
        std::snprintf(buf, sizeof buf, "64'h%016llx", static_cast<unsigned long long>(v));
    }
    return buf;
}

std::string range(VType t) {
    const std::uint64_t w = t.bit_width();
    return w == 1 ? "" : "[" + std::to_string(w - 1) + ":0] ";
}

std::string element_select(const std::string& base, std::uint64_t k) {
    return base + "[" + std::to_string(64 * k + 63) + ":" + std::to_string(64 * k) + "]";
}

bool inline_kind(Opcode code) {
    return code == Opcode::Input || code == Opcode::ReadState || code == Opcode::Const || code == Opcode::Copy;
}

class VerilogEmitter {
public:
    explicit VerilogEmitter(CycleIR ir) : ir_(std::move(ir)) {}

    std::string run() {
        check_constant_indices();
        count_uses();
        name_ports();
        name_wires();

        module_header();
        if (!ir_.state.empty()) out_ += "\n";
        for (const StateSlot& s : ir_.state) out_ += "    reg " + range(s.type) + state_names_.at(s.name) + ";\n";
        bool first_wire = true;
        for (Reg r = 0; r < ir_.ops.size(); ++r) {
            if (wire_names_[r].empty()) continue;
            if (std::exchange(first_wire, false)) out_ += "\n";
            out_ += "    wire " + range(ir_.ops[r].type) + wire_names_[r] + " = " + expression(r) + ";\n";
        }
        out_ += "\n";
        for (const PortDef& p : ir_.outputs) out_ += "    assign " + out_ports_.at(p.name) + " = " + operand(p.reg) + ";\n";
        out_ += "    assign out_valid = " + operand(ir_.valid) + ";\n";
        out_ += "    assign in_ready = " + operand(ir_.ready) + ";\n";
        if (ir_.is_sequential()) state_block();
        out_ += "endmodule\n";
        return out_;
    }

private:
    std::optional<std::uint64_t> const_value(Reg r) const {
        const Op& op = ir_.ops[r];
        if (op.code == Opcode::Const) return op.imm;
        if (op.code == Opcode::Copy) return const_value(op.args[0]);
        return std::nullopt;
    }

    void check_constant_indices() const {
        for (const Op& op : ir_.ops) {
            if ((op.code == Opcode::Index || op.code == Opcode::Insert) && !const_value(op.args[1])) {
                throw CompileError(ErrorKind::DynamicArrayIndexUnsupported, op.loc,
                                   "hardware emission requires a constant array index");
            }
        }
    }

    void count_uses() {
        uses_.assign(ir_.ops.size(), 0);
        for (const Op& op : ir_.ops) {
            for (Reg a : op.args) ++uses_[a];
        }
        for (const PortDef& p : ir_.outputs) ++uses_[p.reg];
        for (const StateSlot& s : ir_.state) {
            if (s.next) ++uses_[*s.next];
        }
        ++uses_[ir_.valid];
        ++uses_[ir_.ready];
    }

    // Local names may not shadow a port or a keyword; such names get a `$`
    // suffix, which source identifiers cannot contain.
    std::string local_name(const std::string& name) const {
        return verilog_keywords().contains(name) || port_names_.contains(name) ? name + "$" : name;
    }

    std::string port_name(const std::string& prefix, const std::string& name) {
        std::string p = prefix + name;
        if (kHandshakePorts.contains(p)) p += "$";
        port_names_.insert(p);
        return p;
    }

    void name_ports() {
        for (const char* p : {"clk", "rst_n", "in_valid", "in_ready", "out_valid", "out_ready"}) port_names_.insert(p);
        for (const PortDef& p : ir_.inputs) in_ports_[p.name] = port_name("in_", p.name);
        for (const PortDef& p : ir_.outputs) out_ports_[p.name] = port_name("out_", p.name);
        for (const StateSlot& s : ir_.state) state_names_[s.name] = local_name(s.name);
    }

    bool needs_wire(Reg r) const {
        const Op& op = ir_.ops[r];
        if (inline_kind(op.code)) return false;
        return op.type.is_array() || uses_[r] > 1 || bound_.contains(r);
    }

    // The last register bound to a source name takes the plain name (that is
    // what the valid/ready expressions see); earlier versions are numbered.
    void name_wires() {
        for (const Binding& b : ir_.bindings) bound_.insert(b.reg);
        wire_names_.assign(ir_.ops.size(), "");

        std::map<std::string, std::vector<Reg>> versions;
        std::vector<std::string> order;
        for (const Binding& b : ir_.bindings) {
            auto [it, fresh] = versions.try_emplace(b.name);
            if (fresh) order.push_back(b.name);
            it->second.push_back(b.reg);
        }
        for (const std::string& name : order) {
            const Reg last = versions[name].back();
            if (needs_wire(last) && wire_names_[last].empty()) wire_names_[last] = local_name(name);
        }
        for (const std::string& name : order) {
            const auto& regs = versions[name];
            for (std::size_t v = 0; v + 1 < regs.size(); ++v) {
                if (needs_wire(regs[v]) && wire_names_[regs[v]].empty()) {
                    wire_names_[regs[v]] = name + "$" + std::to_string(v + 1);
                }
            }
        }
        for (Reg r = 0; r < ir_.ops.size(); ++r) {
            if (needs_wire(r) && wire_names_[r].empty()) wire_names_[r] = "_t" + std::to_string(r);
        }
    }

    std::string operand(Reg r) const {
        const Op& op = ir_.ops[r];
        switch (op.code) {
            case Opcode::Input: return in_ports_.at(ir_.inputs[op.slot].name);
            case Opcode::ReadState: return state_names_.at(ir_.state[op.slot].name);
            case Opcode::Const:
                if (op.type.is_bool()) return op.imm ? "1'b1" : "1'b0";
                return word_literal(op.imm);
            case Opcode::Copy: return operand(op.args[0]);
            default: break;
        }
        if (!wire_names_[r].empty()) return wire_names_[r];
        return "(" + expression(r) + ")";
    }

    static const char* infix(Opcode code) {
        switch (code) {
            case Opcode::Add: return " + ";
            case Opcode::Sub: return " - ";
            case Opcode::Mul: return " * ";
            case Opcode::BitAnd: return " & ";
            case Opcode::BitOr: return " | ";
            case Opcode::BitXor: return " ^ ";
            case Opcode::Shl: return " << ";
            case Opcode::Shr: return " >> ";
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

    std::string expression(Reg r) const {
        const Op& op = ir_.ops[r];
        const auto& a = op.args;
        switch (op.code) {
            case Opcode::MakeArray: {
                std::string s = "{";
                for (std::size_t i = a.size(); i-- > 0;) s += operand(a[i]) + (i ? ", " : "");
                return s + "}";
            }
            case Opcode::BitNot: return "~" + operand(a[0]);
            case Opcode::LogicalNot: return "!" + operand(a[0]);
            case Opcode::Negate: return "-" + operand(a[0]);
            case Opcode::Select: return operand(a[0]) + " ? " + operand(a[1]) + " : " + operand(a[2]);
            case Opcode::Index: return element_select(operand(a[0]), *const_value(a[1]));
            case Opcode::Insert: {
                const std::uint64_t k = *const_value(a[1]);
                const std::string base = operand(a[0]);
                std::string s = "{";
                for (std::size_t i = op.type.length; i-- > 0;) {
                    s += i == k ? operand(a[2]) : element_select(base, i);
                    if (i) s += ", ";
                }
                return s + "}";
            }
            default:
                if (const char* sym = infix(op.code)) return operand(a[0]) + sym + operand(a[1]);
                return operand(r);
        }
    }

    std::string init_literal(const StateSlot& s) const {
        if (s.type.is_bool()) return s.init[0] ? "1'b1" : "1'b0";
        if (s.type.is_int()) return word_literal(s.init[0]);
        std::string lit = "{";
        for (std::size_t i = s.init.size(); i-- > 0;) lit += word_literal(s.init[i]) + (i ? ", " : "");
        return lit + "}";
    }

    void module_header() {
        const std::string name = verilog_keywords().contains(ir_.name) ? ir_.name + "$" : ir_.name;
        out_ += "// Generated by oobleck from Viscosity module `" + ir_.name + "`. Do not edit.\n";
        out_ += "module " + name + " (\n";
        std::vector<std::string> ports = {"input  wire clk", "input  wire rst_n"};
        for (const PortDef& p : ir_.inputs) ports.push_back("input  wire " + range(p.type) + in_ports_.at(p.name));
        ports.push_back("input  wire in_valid");
        ports.push_back("output wire in_ready");
        for (const PortDef& p : ir_.outputs) ports.push_back("output wire " + range(p.type) + out_ports_.at(p.name));
        ports.push_back("output wire out_valid");
        ports.push_back("input  wire out_ready");
        for (std::size_t i = 0; i < ports.size(); ++i) out_ += "    " + ports[i] + (i + 1 < ports.size() ? ",\n" : "\n");
        out_ += ");\n";
    }

    void state_block() {
        out_ += "\n    always @(posedge clk or negedge rst_n) begin\n";
        out_ += "        if (!rst_n) begin\n";
        for (const StateSlot& s : ir_.state) out_ += "            " + state_names_.at(s.name) + " <= " + init_literal(s) + ";\n";
        out_ += "        end else if (in_valid && in_ready) begin\n";
        for (const StateSlot& s : ir_.state) {
            if (s.next) out_ += "            " + state_names_.at(s.name) + " <= " + operand(*s.next) + ";\n";
        }
        out_ += "        end\n";
        out_ += "    end\n";
    }

    CycleIR ir_;
    std::vector<unsigned> uses_;
    std::set<Reg> bound_;
    std::set<std::string> port_names_;
    std::map<std::string, std::string> in_ports_;
    std::map<std::string, std::string> out_ports_;
    std::map<std::string, std::string> state_names_;
    std::vector<std::string> wire_names_;
    std::string out_;
};

}  // namespace

std::string emit_hdl(const TypedModule& tm) { return VerilogEmitter(lower_to_ir(tm)).run(); }

}  // namespace oobleck::visc
