#pragma once
//
// Builds emitted C with the host compiler and drives its step function.
//

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oobleck/visc/ir.hpp"
#include "oobleck/visc/value.hpp"

namespace oobleck::testing {

/// Path of a usable C compiler (`$CC`, then `cc`), if any.
std::optional<std::string> find_c_compiler();

/// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag);
    ~ScratchDir();
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// The C spelling the software emitter uses for a port or module name.
std::string c_identifier(const std::string& name, const std::string& module_c_name);
std::string c_module_name(const std::string& name);

/// One line per cycle: "<valid> <ready> <outputs...>" with words in hex,
/// flags as 0/1 and array elements in order.
std::string format_cycle(const visc::CycleIR& ir, const visc::ValueMap& outputs, bool valid, bool ready);

class CompiledC {
public:
    /// Compiles `c_source` plus a driver for `ir` with -Wall -Wextra
    /// -pedantic -Werror. Throws std::runtime_error with the compiler log on
    /// failure.
    CompiledC(const visc::CycleIR& ir, const std::string& c_source, const std::filesystem::path& dir,
              const std::string& compiler);

    /// For each input vector, resets the state and runs `cycles` steps;
    /// returns one format_cycle line per step.
    std::vector<std::string> run(const std::vector<visc::ValueMap>& vectors, std::uint64_t cycles) const;

private:
    const visc::CycleIR& ir_;
    std::filesystem::path dir_;
    std::filesystem::path binary_;
};

/// The same trace computed by the library interpreter.
std::vector<std::string> interpreter_trace(const visc::CycleIR& ir, const std::vector<visc::ValueMap>& vectors,
                                           std::uint64_t cycles);

}  // namespace oobleck::testing
