#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "oobleck/visc/ast.hpp"

namespace oobleck::visc {

using Word = std::uint64_t;
using WordArray = std::vector<Word>;

/// A runtime value: a 64-bit word, a flag, or a fixed-length word array.
class Value {
public:
    Value() = default;
    static Value word(Word w) { return Value(Storage{std::in_place_index<0>, w}); }
    static Value flag(bool b) { return Value(Storage{std::in_place_index<1>, b}); }
    static Value array(WordArray a) { return Value(Storage{std::in_place_index<2>, std::move(a)}); }

    /// Zero/false value of the given type.
    static Value zero(VType type);

    bool is_word() const { return v_.index() == 0; }
    bool is_flag() const { return v_.index() == 1; }
    bool is_array() const { return v_.index() == 2; }

    Word as_word() const { return std::get<0>(v_); }
    bool as_flag() const { return std::get<1>(v_); }
    const WordArray& as_array() const { return std::get<2>(v_); }

    bool has_type(VType type) const;

    friend bool operator==(const Value&, const Value&) = default;

private:
    using Storage = std::variant<Word, bool, WordArray>;
    explicit Value(Storage v) : v_(std::move(v)) {}

    Storage v_;
};

using ValueMap = std::map<std::string, Value>;

/// `42`, `true`, or `[1:2:3]`.
std::string to_string(const Value& v);

/// Inverse of to_string for a value of the given type; accepts decimal or
/// `0x` hex words. Throws std::invalid_argument on malformed text.
Value parse_value(const std::string& text, VType type);

}  // namespace oobleck::visc
