#pragma once
//
// Cycle simulator for the small Verilog subset the hardware emitter writes:
// wire/reg declarations, continuous assigns, one reset/enable always block,
// sized literals, part-selects, concatenation and the usual operators.
//

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace oobleck::testing {

/// A bit vector of up to a few hundred bits, least significant word first.
struct Bits {
    std::uint32_t width = 0;
    std::vector<std::uint64_t> words;

    static Bits of(std::uint32_t width, std::uint64_t value);
    std::uint64_t low() const { return words.empty() ? 0 : words[0]; }
    bool any() const;
    Bits slice(std::uint32_t hi, std::uint32_t lo) const;

    friend bool operator==(const Bits&, const Bits&) = default;
};

class VerilogSim {
public:
    /// Parses one module. Throws std::runtime_error on anything outside the
    /// supported subset.
    explicit VerilogSim(const std::string& source);
    ~VerilogSim();

    /// Applies reset: every register takes its reset value.
    void reset();

    /// Drives the named input ports (without the `in_` prefix), evaluates
    /// the combinational logic, then clocks the registers if
    /// in_valid && in_ready. Returns every output port by full name.
    std::map<std::string, Bits> cycle(const std::map<std::string, Bits>& inputs, bool in_valid = true);

    std::uint32_t port_width(const std::string& name) const;

    struct Node;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace oobleck::testing
