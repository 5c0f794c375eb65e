#include "oobleck/visc/diagnostics.hpp"

namespace oobleck::visc {

std::string to_string(SourceLoc loc) {
    return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax: return "SyntaxError";
        case ErrorKind::UndefinedVariable: return "UndefinedVariable";
        case ErrorKind::TypeMismatch: return "TypeMismatch";
        case ErrorKind::AssignToInput: return "AssignToInput";
        case ErrorKind::AssignToState: return "AssignToState";
        case ErrorKind::NextStateOnNonRegister: return "NextStateOnNonRegister";
        case ErrorKind::UnassignedOutput: return "UnassignedOutput";
        case ErrorKind::OutputReassigned: return "OutputReassigned";
        case ErrorKind::DuplicateName: return "DuplicateName";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::EmptyInterface: return "EmptyInterface";
        case ErrorKind::DynamicArrayIndexUnsupported: return "DynamicArrayIndexUnsupported";
    }
    return "UnknownError";
}

CompileError::CompileError(ErrorKind kind, SourceLoc loc, const std::string& message)
    : std::runtime_error(to_string(loc) + ": " + std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      loc_(loc),
      detail_(message) {}

std::string_view to_string(RuntimeErrorKind kind) {
    switch (kind) {
        case RuntimeErrorKind::MissingInput: return "MissingInput";
        case RuntimeErrorKind::TypeErrorAtRuntime: return "TypeErrorAtRuntime";
        case RuntimeErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case RuntimeErrorKind::NeverValid: return "NeverValid";
    }
    return "UnknownRuntimeError";
}

RuntimeError::RuntimeError(RuntimeErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace oobleck::visc
