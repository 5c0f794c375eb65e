#include "support/verilog_sim.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <stdexcept>

namespace oobleck::testing {

namespace {

std::uint64_t mask_for(std::uint32_t width) { return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1; }

Bits resize(const Bits& b, std::uint32_t width) {
    Bits r;
    r.width = width;
    r.words.assign((width + 63) / 64, 0);
    for (std::size_t i = 0; i < r.words.size() && i < b.words.size(); ++i) r.words[i] = b.words[i];
    if (width % 64 != 0 && !r.words.empty()) r.words.back() &= mask_for(width % 64);
    return r;
}

}  // namespace

Bits Bits::of(std::uint32_t width, std::uint64_t value) {
    Bits b;
    b.width = width;
    b.words.assign((width + 63) / 64, 0);
    if (!b.words.empty()) b.words[0] = value & mask_for(width);
    return b;
}

bool Bits::any() const {
    for (std::uint64_t w : words) {
        if (w) return true;
    }
    return false;
}

Bits Bits::slice(std::uint32_t hi, std::uint32_t lo) const {
    if (hi < lo || hi >= width) throw std::runtime_error("part-select out of range");
    Bits r = Bits::of(hi - lo + 1, 0);
    for (std::uint32_t i = lo; i <= hi; ++i) {
        if (words[i / 64] >> (i % 64) & 1u) r.words[(i - lo) / 64] |= std::uint64_t{1} << ((i - lo) % 64);
    }
    return r;
}

struct VerilogSim::Node {
    enum class Kind { Literal, Signal, Slice, Unary, Binary, Ternary, Concat } kind;
    Bits literal;
    std::string name;
    std::string op;
    std::uint32_t hi = 0, lo = 0;
    std::vector<std::unique_ptr<Node>> kids;
};

using Node = VerilogSim::Node;
using NodePtr = std::unique_ptr<Node>;

struct VerilogSim::Impl {
    // Declarations.
    std::map<std::string, std::uint32_t> widths;
    std::map<std::string, bool> is_input;
    std::vector<std::string> outputs;
    std::map<std::string, NodePtr> drivers;  // wires and assigns
    std::vector<std::pair<std::string, NodePtr>> reset_assigns;
    std::vector<std::pair<std::string, NodePtr>> update_assigns;
    NodePtr enable;

    // Per-cycle values.
    std::map<std::string, Bits> regs;
    std::map<std::string, Bits> values;

    // Lexer -----------------------------------------------------------------
    std::vector<std::string> toks;
    std::size_t pos = 0;

    void lex(const std::string& s) {
        std::size_t i = 0;
        while (i < s.size()) {
            const char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
                while (i < s.size() && s[i] != '\n') ++i;
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i;
                while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '$')) ++j;
                toks.push_back(s.substr(i, j - i));
                i = j;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                if (j < s.size() && s[j] == '\'') {
                    ++j;  // base letter and digits
                    while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
                }
                toks.push_back(s.substr(i, j - i));
                i = j;
            } else {
                static const char* const two[] = {"<=", ">=", "==", "!=", "&&", "||", "<<", ">>"};
                std::string t(1, c);
                for (const char* op : two) {
                    if (s.compare(i, 2, op) == 0) t = op;
                }
                toks.push_back(t);
                i += t.size();
            }
        }
    }

    const std::string& peek() const {
        static const std::string end = "<eof>";
        return pos < toks.size() ? toks[pos] : end;
    }
    std::string take() {
        if (pos >= toks.size()) throw std::runtime_error("unexpected end of Verilog");
        return toks[pos++];
    }
    void expect(const std::string& t) {
        const std::string got = take();
        if (got != t) throw std::runtime_error("expected `" + t + "`, got `" + got + "`");
    }
    bool accept(const std::string& t) {
        if (peek() != t) return false;
        ++pos;
        return true;
    }

    std::uint32_t range_width() {
        if (!accept("[")) return 1;
        const std::uint32_t hi = static_cast<std::uint32_t>(std::stoul(take()));
        expect(":");
        const std::uint32_t lo = static_cast<std::uint32_t>(std::stoul(take()));
        expect("]");
        if (lo != 0) throw std::runtime_error("ranges must end at 0");
        return hi + 1;
    }

    // Expressions ----------------------------------------------------------
    static NodePtr make(Node::Kind k) {
        auto n = std::make_unique<Node>();
        n->kind = k;
        return n;
    }

    NodePtr expr() {
        NodePtr c = binary(0);
        if (!accept("?")) return c;
        NodePtr t = expr();
        expect(":");
        NodePtr f = expr();
        NodePtr n = make(Node::Kind::Ternary);
        n->kids.push_back(std::move(c));
        n->kids.push_back(std::move(t));
        n->kids.push_back(std::move(f));
        return n;
    }

    NodePtr binary(int level) {
        static const std::vector<std::vector<std::string>> levels{
            {"||"}, {"&&"}, {"|"}, {"^"}, {"&"}, {"==", "!="}, {"<", "<=", ">", ">="}, {"<<", ">>"}, {"+", "-"}, {"*"}};
        if (level == static_cast<int>(levels.size())) return unary();
        NodePtr lhs = binary(level + 1);
        for (;;) {
            std::optional<std::string> op;
            for (const std::string& o : levels[static_cast<std::size_t>(level)]) {
                if (peek() == o) op = o;
            }
            if (!op) return lhs;
            ++pos;
            NodePtr n = make(Node::Kind::Binary);
            n->op = *op;
            n->kids.push_back(std::move(lhs));
            n->kids.push_back(binary(level + 1));
            lhs = std::move(n);
        }
    }

    NodePtr unary() {
        for (const char* op : {"~", "!", "-"}) {
            if (accept(op)) {
                NodePtr n = make(Node::Kind::Unary);
                n->op = op;
                n->kids.push_back(unary());
                return n;
            }
        }
        return primary();
    }

    NodePtr primary() {
        if (accept("(")) {
            NodePtr e = expr();
            expect(")");
            return e;
        }
        if (accept("{")) {
            NodePtr n = make(Node::Kind::Concat);
            do {
                n->kids.push_back(expr());
            } while (accept(","));
            expect("}");
            return n;
        }
        const std::string t = take();
        if (std::isdigit(static_cast<unsigned char>(t[0]))) {
            const std::size_t q = t.find('\'');
            if (q == std::string::npos) throw std::runtime_error("unsized literal `" + t + "`");
            const std::uint32_t width = static_cast<std::uint32_t>(std::stoul(t.substr(0, q)));
            const char base = t[q + 1];
            const int radix = base == 'd' ? 10 : base == 'h' ? 16 : base == 'b' ? 2 : 0;
            if (radix == 0) throw std::runtime_error("unsupported literal `" + t + "`");
            NodePtr n = make(Node::Kind::Literal);
            n->literal = Bits::of(width, std::stoull(t.substr(q + 2), nullptr, radix));
            return n;
        }
        if (!std::isalpha(static_cast<unsigned char>(t[0])) && t[0] != '_') throw std::runtime_error("unexpected `" + t + "`");
        NodePtr n = make(Node::Kind::Signal);
        n->name = t;
        if (accept("[")) {
            NodePtr s = make(Node::Kind::Slice);
            s->hi = static_cast<std::uint32_t>(std::stoul(take()));
            s->lo = accept(":") ? static_cast<std::uint32_t>(std::stoul(take())) : s->hi;
            expect("]");
            s->kids.push_back(std::move(n));
            return s;
        }
        return n;
    }

    // Module structure -----------------------------------------------------
    void parse_module() {
        expect("module");
        take();
        expect("(");
        do {
            const std::string dir = take();
            expect("wire");
            const std::uint32_t w = range_width();
            const std::string name = take();
            widths[name] = w;
            if (dir == "input") {
                is_input[name] = true;
            } else if (dir == "output") {
                outputs.push_back(name);
            } else {
                throw std::runtime_error("bad port direction `" + dir + "`");
            }
        } while (accept(","));
        expect(")");
        expect(";");
        while (!accept("endmodule")) {
            const std::string kw = take();
            if (kw == "reg") {
                const std::uint32_t w = range_width();
                const std::string name = take();
                widths[name] = w;
                regs[name] = Bits::of(w, 0);
                expect(";");
            } else if (kw == "wire") {
                const std::uint32_t w = range_width();
                const std::string name = take();
                widths[name] = w;
                expect("=");
                define(name, expr());
                expect(";");
            } else if (kw == "assign") {
                const std::string name = take();
                expect("=");
                define(name, expr());
                expect(";");
            } else if (kw == "always") {
                parse_always();
            } else {
                throw std::runtime_error("unsupported item `" + kw + "`");
            }
        }
    }

    void define(const std::string& name, NodePtr e) {
        if (drivers.contains(name)) throw std::runtime_error("`" + name + "` driven twice");
        if (is_input.contains(name)) throw std::runtime_error("input `" + name + "` driven");
        drivers[name] = std::move(e);
    }

    void nonblocking(std::vector<std::pair<std::string, NodePtr>>& into) {
        while (!accept("end")) {
            const std::string name = take();
            if (!regs.contains(name)) throw std::runtime_error("`" + name + "` is not a reg");
            expect("<=");
            into.emplace_back(name, expr());
            expect(";");
        }
    }

    void parse_always() {
        for (const char* t : {"@", "(", "posedge", "clk", "or", "negedge", "rst_n", ")", "begin", "if", "(", "!",
                              "rst_n", ")", "begin"}) {
            expect(t);
        }
        nonblocking(reset_assigns);
        expect("else");
        expect("if");
        expect("(");
        enable = expr();
        expect(")");
        expect("begin");
        nonblocking(update_assigns);
        expect("end");
    }

    // Evaluation -----------------------------------------------------------
    Bits value_of(const std::string& name, std::vector<std::string>& stack) {
        if (auto it = values.find(name); it != values.end()) return it->second;
        if (auto it = regs.find(name); it != regs.end()) return it->second;
        auto d = drivers.find(name);
        if (d == drivers.end()) throw std::runtime_error("`" + name + "` is undriven");
        for (const std::string& s : stack) {
            if (s == name) throw std::runtime_error("combinational loop through `" + name + "`");
        }
        stack.push_back(name);
        Bits v = resize(eval(*d->second, stack), widths.at(name));
        stack.pop_back();
        values[name] = v;
        return v;
    }

    Bits eval(const Node& n, std::vector<std::string>& stack) {
        switch (n.kind) {
            case Node::Kind::Literal: return n.literal;
            case Node::Kind::Signal: return value_of(n.name, stack);
            case Node::Kind::Slice: return eval(*n.kids[0], stack).slice(n.hi, n.lo);
            case Node::Kind::Concat: {
                // The first element is the most significant.
                std::vector<Bits> parts;
                std::uint32_t width = 0;
                for (const NodePtr& k : n.kids) {
                    parts.push_back(eval(*k, stack));
                    width += parts.back().width;
                }
                Bits r = Bits::of(width, 0);
                std::uint32_t at = 0;
                for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
                    for (std::uint32_t i = 0; i < it->width; ++i) {
                        if (it->words[i / 64] >> (i % 64) & 1u) r.words[(at + i) / 64] |= std::uint64_t{1} << ((at + i) % 64);
                    }
                    at += it->width;
                }
                return r;
            }
            case Node::Kind::Ternary: {
                const Bits c = eval(*n.kids[0], stack);
                const Bits t = eval(*n.kids[1], stack);
                const Bits f = eval(*n.kids[2], stack);
                const std::uint32_t w = std::max(t.width, f.width);
                return resize(c.any() ? t : f, w);
            }
            case Node::Kind::Unary: {
                const Bits a = eval(*n.kids[0], stack);
                if (n.op == "!") return Bits::of(1, a.any() ? 0 : 1);
                if (a.width > 64) throw std::runtime_error("wide unary operand");
                if (n.op == "~") return Bits::of(a.width, ~a.low());
                return Bits::of(a.width, 0 - a.low());
            }
            case Node::Kind::Binary: {
                const Bits a = eval(*n.kids[0], stack);
                const Bits b = eval(*n.kids[1], stack);
                const std::string& op = n.op;
                if (op == "&&") return Bits::of(1, a.any() && b.any());
                if (op == "||") return Bits::of(1, a.any() || b.any());
                if (a.width > 64 || b.width > 64) throw std::runtime_error("wide operand to `" + op + "`");
                const std::uint32_t w = std::max(a.width, b.width);
                const std::uint64_t x = a.low(), y = b.low();
                if (op == "==") return Bits::of(1, x == y);
                if (op == "!=") return Bits::of(1, x != y);
                if (op == "<") return Bits::of(1, x < y);
                if (op == "<=") return Bits::of(1, x <= y);
                if (op == ">") return Bits::of(1, x > y);
                if (op == ">=") return Bits::of(1, x >= y);
                if (op == "<<") return Bits::of(a.width, y >= a.width ? 0 : x << y);
                if (op == ">>") return Bits::of(a.width, y >= a.width ? 0 : x >> y);
                if (op == "+") return Bits::of(w, x + y);
                if (op == "-") return Bits::of(w, x - y);
                if (op == "*") return Bits::of(w, x * y);
                if (op == "&") return Bits::of(w, x & y);
                if (op == "|") return Bits::of(w, x | y);
                if (op == "^") return Bits::of(w, x ^ y);
                throw std::runtime_error("unsupported operator `" + op + "`");
            }
        }
        throw std::logic_error("bad node");
    }
};

VerilogSim::VerilogSim(const std::string& source) : impl_(std::make_unique<Impl>()) {
    impl_->lex(source);
    impl_->parse_module();
    if (impl_->pos != impl_->toks.size()) throw std::runtime_error("trailing tokens after endmodule");
    for (const std::string& o : impl_->outputs) {
        if (!impl_->drivers.contains(o)) throw std::runtime_error("output `" + o + "` is undriven");
    }
    reset();
}

VerilogSim::~VerilogSim() = default;

void VerilogSim::reset() {
    impl_->values.clear();
    std::vector<std::string> stack;
    std::map<std::string, Bits> next;
    for (const auto& [name, e] : impl_->reset_assigns) next[name] = resize(impl_->eval(*e, stack), impl_->widths.at(name));
    for (auto& [name, v] : next) impl_->regs[name] = v;
    impl_->values.clear();
}

std::map<std::string, Bits> VerilogSim::cycle(const std::map<std::string, Bits>& inputs, bool in_valid) {
    Impl& m = *impl_;
    m.values.clear();
    for (const auto& [name, v] : inputs) {
        const std::string port = "in_" + name;
        if (!m.is_input.contains(port)) throw std::runtime_error("no input port `" + port + "`");
        m.values[port] = resize(v, m.widths.at(port));
    }
    m.values["in_valid"] = Bits::of(1, in_valid);
    m.values["out_ready"] = Bits::of(1, 1);
    m.values["clk"] = Bits::of(1, 0);
    m.values["rst_n"] = Bits::of(1, 1);

    std::vector<std::string> stack;
    std::map<std::string, Bits> out;
    for (const std::string& o : m.outputs) out[o] = m.value_of(o, stack);

    if (m.enable && m.eval(*m.enable, stack).any()) {
        std::map<std::string, Bits> next;
        for (const auto& [name, e] : m.update_assigns) next[name] = resize(m.eval(*e, stack), m.widths.at(name));
        for (auto& [name, v] : next) m.regs[name] = v;
    }
    return out;
}

std::uint32_t VerilogSim::port_width(const std::string& name) const { return impl_->widths.at(name); }

}  // namespace oobleck::testing
