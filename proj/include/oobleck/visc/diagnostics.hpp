#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oobleck::visc {

struct SourceLoc {
    std::uint32_t line = 0;
    std::uint32_t column = 0;

    friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

std::string to_string(SourceLoc loc);

enum class ErrorKind {
    Syntax,
    UndefinedVariable,
    TypeMismatch,
    AssignToInput,
    AssignToState,
    NextStateOnNonRegister,
    UnassignedOutput,
    OutputReassigned,
    DuplicateName,
    IndexOutOfRange,
    EmptyInterface,
    DynamicArrayIndexUnsupported,
};

std::string_view to_string(ErrorKind kind);

/// A diagnostic raised while parsing, checking, or emitting a module.
/// Always carries the source location of the offending construct.
class CompileError : public std::runtime_error {
public:
    CompileError(ErrorKind kind, SourceLoc loc, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    SourceLoc loc() const noexcept { return loc_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    SourceLoc loc_;
    std::string detail_;
};

enum class RuntimeErrorKind {
    MissingInput,
    TypeErrorAtRuntime,
    IndexOutOfRange,
    NeverValid,
};

std::string_view to_string(RuntimeErrorKind kind);

/// Raised by the cycle interpreter.
class RuntimeError : public std::runtime_error {
public:
    RuntimeError(RuntimeErrorKind kind, const std::string& message);

    RuntimeErrorKind kind() const noexcept { return kind_; }

private:
    RuntimeErrorKind kind_;
};

}  // namespace oobleck::visc
