#pragma once
//
// CycleIR: one clock cycle of a module as a straight-line list of primitive
// operations over virtual registers.
//
// Every register is defined by exactly one op, and ops only reference
// registers defined earlier in the list. State slots are read through
// ReadState (yielding the previous cycle's value) and written through
// StateSlot::next, which commits after the cycle. The interpreter and both
// code emitters work from this form.
//

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oobleck/visc/ast.hpp"
#include "oobleck/visc/sema.hpp"

namespace oobleck::visc {

using Reg = std::uint32_t;

enum class Opcode : std::uint8_t {
    Input,      // slot = input port index
    ReadState,  // slot = state slot index
    Const,      // imm (bool: 0/1)
    MakeArray,  // args = elements
    Copy,
    BitNot,
    LogicalNot,
    Negate,
    Add,
    Sub,
    Mul,
    BitAnd,
    BitOr,
    BitXor,
    Shl,
    Shr,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    LogicalAnd,
    LogicalOr,
    Select,  // args = cond, then, else
    Index,   // args = array, index
    Insert,  // args = array, index, value; yields the updated copy
};

std::string_view mnemonic(Opcode op);

struct Op {
    Opcode code = Opcode::Const;
    VType type;
    std::vector<Reg> args;
    std::uint64_t imm = 0;
    std::uint32_t slot = 0;
    SourceLoc loc;
};

struct PortDef {
    std::string name;
    VType type;
    Reg reg = 0;  // outputs only: the register driving the port
};

struct StateSlot {
    std::string name;
    VType type;
    std::vector<std::uint64_t> init;  // one word per element; bool as 0/1
    std::optional<Reg> next;          // unset: value carries over unchanged
};

/// A source name bound to a register, in statement order. Emitters use these
/// to give hardware wires readable names.
struct Binding {
    std::string name;
    Reg reg = 0;
};

struct CycleIR {
    std::string name;
    std::vector<PortDef> inputs;
    std::vector<PortDef> outputs;
    std::vector<StateSlot> state;
    std::vector<Op> ops;
    Reg valid = 0;
    Reg ready = 0;
    std::vector<Binding> bindings;

    bool is_sequential() const { return !state.empty(); }
};

/// Lowers a typechecked module. Structurally identical pure operations are
/// shared, and operations that reach no output, state update, or handshake
/// signal are dropped.
CycleIR lower_to_ir(const TypedModule& tm);

/// Line-oriented textual form, one primitive per line (`%dst = op src...`).
std::string dump(const CycleIR& ir);

}  // namespace oobleck::visc
