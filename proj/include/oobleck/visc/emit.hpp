#pragma once

#include <string>

#include "oobleck/visc/sema.hpp"

namespace oobleck::visc {

/// Self-contained C11 translation unit for the module.
///
/// Always contains the output record `struct _<name>_output`, its typedef,
/// a step function, and the entry point `<name>_output <name>(inputs)`.
/// Sequential modules also get `<name>_state`, `<name>_state_init`, and an
/// entry point that loops over the step function until valid is set.
/// Identifiers that would collide with C keywords or with the generated
/// parameter names (`s`, `o`, `valid`, `ready`) are prefixed with `v_`.
std::string emit_software(const TypedModule& tm);

/// Verilog module with a valid/ready handshake on each side.
///
/// Ports: `clk`, `rst_n`, `in_<x>` per input, `in_valid`, `in_ready`
/// (driven by the ready expression), `out_<y>` per output, `out_valid`
/// (driven by the valid expression), `out_ready`. Arrays are flattened with
/// element 0 in the least significant bits. State registers reset to their
/// initial values and update when `in_valid && in_ready`.
///
/// Throws CompileError(DynamicArrayIndexUnsupported) if any array index is
/// not a compile-time constant.
std::string emit_hdl(const TypedModule& tm);

/// JSON description of the hardware interface: records `I_<name>`,
/// `O_<name>` and, for sequential modules, `State_<name>`, each listing the
/// fields in declaration order with kind and bit width.
std::string emit_interface_descriptor(const TypedModule& tm);

}  // namespace oobleck::visc
