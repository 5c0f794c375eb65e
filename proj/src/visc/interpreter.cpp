#include "oobleck/visc/interpreter.hpp"

#include <stdexcept>

#include "oobleck/visc/word_ops.hpp"

namespace oobleck::visc {
namespace {

[[noreturn]] void corrupt(const CycleIR& ir, Reg r) {
    throw RuntimeError(RuntimeErrorKind::TypeErrorAtRuntime,
                       "operand type mismatch at %" + std::to_string(r) + " in `" + ir.name + "`");
}

Value slot_value(const StateSlot& s) {
    switch (s.type.kind) {
        case VType::Kind::Int: return Value::word(s.init.at(0));
        case VType::Kind::Bool: return Value::flag(s.init.at(0) != 0);
        case VType::Kind::IntArray: return Value::array(s.init);
    }
    return {};
}

class Machine {
public:
    Machine(const CycleIR& ir, const StateVector& state, const ValueMap& inputs)
        : ir_(ir), state_(state), inputs_(inputs), regs_(ir.ops.size()) {}

    StepResult run() {
        for (Reg r = 0; r < ir_.ops.size(); ++r) regs_[r] = eval(r, ir_.ops[r]);

        StepResult res;
        res.next_state = state_;
        for (std::size_t i = 0; i < ir_.state.size(); ++i) {
            if (ir_.state[i].next) res.next_state[i] = regs_[*ir_.state[i].next];
        }
        for (const PortDef& p : ir_.outputs) res.outputs.emplace(p.name, regs_[p.reg]);
        res.valid = flag(ir_.valid);
        res.ready = flag(ir_.ready);
        return res;
    }

private:
    Word word(Reg r) const {
        if (!regs_[r].is_word()) corrupt(ir_, r);
        return regs_[r].as_word();
    }
    bool flag(Reg r) const {
        if (!regs_[r].is_flag()) corrupt(ir_, r);
        return regs_[r].as_flag();
    }
    const WordArray& array(Reg r) const {
        if (!regs_[r].is_array()) corrupt(ir_, r);
        return regs_[r].as_array();
    }

    std::size_t checked_index(const Op& op, const WordArray& arr, Word idx) const {
        if (idx >= arr.size()) {
            throw RuntimeError(RuntimeErrorKind::IndexOutOfRange,
                               "index " + std::to_string(idx) + " out of range for [" + std::to_string(arr.size()) +
                                   "] at " + to_string(op.loc) + " in `" + ir_.name + "`");
        }
        return static_cast<std::size_t>(idx);
    }

    Value eval(Reg r, const Op& op) {
        const auto& a = op.args;
        switch (op.code) {
            case Opcode::Input: {
                const PortDef& port = ir_.inputs.at(op.slot);
                auto it = inputs_.find(port.name);
                if (it == inputs_.end()) {
                    throw RuntimeError(RuntimeErrorKind::MissingInput, "no value for input `" + port.name + "`");
                }
                if (!it->second.has_type(port.type)) {
                    throw RuntimeError(RuntimeErrorKind::TypeErrorAtRuntime,
                                       "input `" + port.name + "` is not of type " + to_string(port.type));
                }
                return it->second;
            }
            case Opcode::ReadState: {
                const Value& v = state_.at(op.slot);
                if (!v.has_type(op.type)) corrupt(ir_, r);
                return v;
            }
            case Opcode::Const:
                return op.type.is_bool() ? Value::flag(op.imm != 0) : Value::word(op.imm);
            case Opcode::MakeArray: {
                WordArray out;
                out.reserve(a.size());
                for (Reg e : a) out.push_back(word(e));
                return Value::array(std::move(out));
            }
            case Opcode::Copy: return regs_[a[0]];
            case Opcode::BitNot: return Value::word(~word(a[0]));
            case Opcode::LogicalNot: return Value::flag(!flag(a[0]));
            case Opcode::Negate: return Value::word(word_neg(word(a[0])));
            case Opcode::Add: return Value::word(word(a[0]) + word(a[1]));
            case Opcode::Sub: return Value::word(word(a[0]) - word(a[1]));
            case Opcode::Mul: return Value::word(word(a[0]) * word(a[1]));
            case Opcode::BitAnd: return Value::word(word(a[0]) & word(a[1]));
            case Opcode::BitOr: return Value::word(word(a[0]) | word(a[1]));
            case Opcode::BitXor: return Value::word(word(a[0]) ^ word(a[1]));
            case Opcode::Shl: return Value::word(word_shl(word(a[0]), word(a[1])));
            case Opcode::Shr: return Value::word(word_shr(word(a[0]), word(a[1])));
            case Opcode::Eq:
            case Opcode::Ne: {
                const Value& x = regs_[a[0]];
                const Value& y = regs_[a[1]];
                if (x.is_array() || y.is_array() || x.is_word() != y.is_word()) corrupt(ir_, r);
                return Value::flag((x == y) == (op.code == Opcode::Eq));
            }
            case Opcode::Lt: return Value::flag(word(a[0]) < word(a[1]));
            case Opcode::Le: return Value::flag(word(a[0]) <= word(a[1]));
            case Opcode::Gt: return Value::flag(word(a[0]) > word(a[1]));
            case Opcode::Ge: return Value::flag(word(a[0]) >= word(a[1]));
            case Opcode::LogicalAnd: return Value::flag(flag(a[0]) && flag(a[1]));
            case Opcode::LogicalOr: return Value::flag(flag(a[0]) || flag(a[1]));
            case Opcode::Select: return flag(a[0]) ? regs_[a[1]] : regs_[a[2]];
            case Opcode::Index: {
                const WordArray& arr = array(a[0]);
                return Value::word(arr[checked_index(op, arr, word(a[1]))]);
            }
            case Opcode::Insert: {
                WordArray arr = array(a[0]);
                arr[checked_index(op, arr, word(a[1]))] = word(a[2]);
                return Value::array(std::move(arr));
            }
        }
        corrupt(ir_, r);
    }

    const CycleIR& ir_;
    const StateVector& state_;
    const ValueMap& inputs_;
    std::vector<Value> regs_;
};

}  // namespace

StateVector initial_state(const CycleIR& ir) {
    StateVector out;
    out.reserve(ir.state.size());
    for (const StateSlot& s : ir.state) out.push_back(slot_value(s));
    return out;
}

StepResult step(const CycleIR& ir, const StateVector& state, const ValueMap& inputs) {
    if (state.size() != ir.state.size()) {
        throw RuntimeError(RuntimeErrorKind::TypeErrorAtRuntime,
                           "state vector has " + std::to_string(state.size()) + " slots, `" + ir.name + "` has " +
                               std::to_string(ir.state.size()));
    }
    return Machine(ir, state, inputs).run();
}

RunResult run_until_valid(const CycleIR& ir, const ValueMap& inputs, std::uint64_t max_cycles) {
    if (max_cycles == 0) throw std::invalid_argument("max_cycles must be at least 1");
    StateVector state = initial_state(ir);
    for (std::uint64_t cycle = 1; cycle <= max_cycles; ++cycle) {
        StepResult s = step(ir, state, inputs);
        if (s.valid) return {std::move(s.outputs), cycle};
        state = std::move(s.next_state);
    }
    throw RuntimeError(RuntimeErrorKind::NeverValid,
                       "`" + ir.name + "` did not signal valid within " + std::to_string(max_cycles) + " cycles");
}

}  // namespace oobleck::visc
