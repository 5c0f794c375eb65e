#include "oobleck/visc/value.hpp"

#include <charconv>
#include <stdexcept>

namespace oobleck::visc {
namespace {

Word parse_word(std::string_view text) {
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        text.remove_prefix(2);
        base = 16;
    }
    Word w = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), w, base);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("not a 64-bit word: `" + std::string(text) + "`");
    }
    return w;
}

}  // namespace

Value Value::zero(VType type) {
    switch (type.kind) {
        case VType::Kind::Int: return word(0);
        case VType::Kind::Bool: return flag(false);
        case VType::Kind::IntArray: return array(WordArray(type.length, 0));
    }
    return {};
}

bool Value::has_type(VType type) const {
    switch (type.kind) {
        case VType::Kind::Int: return is_word();
        case VType::Kind::Bool: return is_flag();
        case VType::Kind::IntArray: return is_array() && as_array().size() == type.length;
    }
    return false;
}

std::string to_string(const Value& v) {
    if (v.is_word()) return std::to_string(v.as_word());
    if (v.is_flag()) return v.as_flag() ? "true" : "false";
    std::string out = "[";
    const WordArray& a = v.as_array();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ':';
        out += std::to_string(a[i]);
    }
    return out + "]";
}

Value parse_value(const std::string& text, VType type) {
    switch (type.kind) {
        case VType::Kind::Int: return Value::word(parse_word(text));
        case VType::Kind::Bool:
            if (text == "true" || text == "1") return Value::flag(true);
            if (text == "false" || text == "0") return Value::flag(false);
            throw std::invalid_argument("not a bool: `" + text + "`");
        case VType::Kind::IntArray: {
            if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
                throw std::invalid_argument("array values are written [a:b:c], got `" + text + "`");
            }
            WordArray words;
            std::string_view body(text.data() + 1, text.size() - 2);
            while (!body.empty()) {
                const auto sep = body.find(':');
                words.push_back(parse_word(body.substr(0, sep)));
                if (sep == std::string_view::npos) break;
                body.remove_prefix(sep + 1);
            }
            if (words.size() != type.length) {
                throw std::invalid_argument("expected " + std::to_string(type.length) + " array elements in `" + text + "`");
            }
            return Value::array(std::move(words));
        }
    }
    throw std::invalid_argument("unknown type");
}

}  // namespace oobleck::visc
