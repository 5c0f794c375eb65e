#include "oobleck/visc/parser.hpp"

#include <cctype>
#include <optional>
#include <utility>
#include <vector>

namespace oobleck::visc {
namespace {

enum class Tok {
    End,
    Ident,
    Number,
    KwModule,
    KwLet,
    KwInt,
    KwBool,
    KwTrue,
    KwFalse,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Less,
    Greater,
    LessEq,
    GreaterEq,
    Shl,
    Shr,
    EqEq,
    NotEq,
    Assign,
    Arrow,
    Semicolon,
    Colon,
    Comma,
    At,
    Question,
    Amp,
    AmpAmp,
    Pipe,
    PipePipe,
    Caret,
    Plus,
    Minus,
    Star,
    Tilde,
    Bang,
};

struct Token {
    Tok kind = Tok::End;
    SourceLoc loc;
    std::string text;
    std::uint64_t value = 0;
    bool hex = false;
};

[[noreturn]] void syntax_error(SourceLoc loc, const std::string& message) {
    throw CompileError(ErrorKind::Syntax, loc, message);
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            Token t;
            t.loc = here();
            if (pos_ >= src_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            const std::size_t start = pos_;
            lex_one(t);
            if (t.text.empty()) t.text = std::string(src_.substr(start, pos_ - start));
            out.push_back(std::move(t));
        }
    }

private:
    SourceLoc here() const { return {line_, col_}; }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    void lex_number(Token& t) {
        t.kind = Tok::Number;
        std::uint64_t value = 0;
        bool overflow = false;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            advance();
            advance();
            t.hex = true;
            std::size_t digits = 0;
            while (std::isxdigit(static_cast<unsigned char>(peek()))) {
                const char c = peek();
                const unsigned d = std::isdigit(static_cast<unsigned char>(c))
                                       ? static_cast<unsigned>(c - '0')
                                       : static_cast<unsigned>(std::tolower(c) - 'a' + 10);
                if (value >> 60) overflow = true;
                value = (value << 4) | d;
                ++digits;
                advance();
            }
            if (digits == 0) syntax_error(t.loc, "hex literal needs at least one digit");
        } else {
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                const std::uint64_t d = static_cast<std::uint64_t>(peek() - '0');
                if (value > (UINT64_MAX - d) / 10) overflow = true;
                value = value * 10 + d;
                advance();
            }
        }
        if (overflow) syntax_error(t.loc, "integer literal does not fit in 64 bits");
        if (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
            syntax_error(here(), "malformed number literal");
        }
        t.value = value;
    }

    void lex_word(Token& t) {
        const std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        if (t.text == "module") t.kind = Tok::KwModule;
        else if (t.text == "let") t.kind = Tok::KwLet;
        else if (t.text == "int") t.kind = Tok::KwInt;
        else if (t.text == "bool") t.kind = Tok::KwBool;
        else if (t.text == "true") t.kind = Tok::KwTrue;
        else if (t.text == "false") t.kind = Tok::KwFalse;
        else t.kind = Tok::Ident;
    }

    void lex_one(Token& t) {
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
        if (std::isalpha(static_cast<unsigned char>(c))) return lex_word(t);

        auto single = [&](Tok k) {
            t.kind = k;
            advance();
        };
        auto pair = [&](Tok k) {
            t.kind = k;
            advance();
            advance();
        };
        const char n = peek(1);
        switch (c) {
            case '[': return single(Tok::LBracket);
            case ']': return single(Tok::RBracket);
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case '{': return single(Tok::LBrace);
            case '}': return single(Tok::RBrace);
            case ';': return single(Tok::Semicolon);
            case ':': return single(Tok::Colon);
            case ',': return single(Tok::Comma);
            case '@': return single(Tok::At);
            case '?': return single(Tok::Question);
            case '^': return single(Tok::Caret);
            case '+': return single(Tok::Plus);
            case '*': return single(Tok::Star);
            case '~': return single(Tok::Tilde);
            case '-': return n == '>' ? pair(Tok::Arrow) : single(Tok::Minus);
            case '<':
                if (n == '<') return pair(Tok::Shl);
                if (n == '=') return pair(Tok::LessEq);
                return single(Tok::Less);
            case '>':
                if (n == '>') return pair(Tok::Shr);
                if (n == '=') return pair(Tok::GreaterEq);
                return single(Tok::Greater);
            case '=': return n == '=' ? pair(Tok::EqEq) : single(Tok::Assign);
            case '!': return n == '=' ? pair(Tok::NotEq) : single(Tok::Bang);
            case '&': return n == '&' ? pair(Tok::AmpAmp) : single(Tok::Amp);
            case '|': return n == '|' ? pair(Tok::PipePipe) : single(Tok::Pipe);
            case '/': syntax_error(t.loc, "division is not supported");
            case '%': syntax_error(t.loc, "modulo is not supported");
            case '_': syntax_error(t.loc, "identifiers must start with a letter");
            default: break;
        }
        syntax_error(t.loc, "unexpected character");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "identifier `" + t.text + "`";
        case Tok::Number: return "number";
        default: return t.text.empty() ? "token" : "`" + t.text + "`";
    }
}

constexpr std::uint32_t kMaxArrayLength = 4096;

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ModuleAst module() {
        ModuleAst m;
        m.loc = cur().loc;
        expect(Tok::KwModule, "`module`");
        expect(Tok::LBracket, "`[` opening the state declaration list");
        if (!at(Tok::RBracket)) {
            do {
                m.state_decls.push_back(state_decl());
            } while (accept(Tok::Comma));
        }
        expect(Tok::RBracket, "`]` closing the state declaration list");
        m.name = ident("module name");
        m.inputs = params();
        expect(Tok::Arrow, "`->`");
        m.outputs = params();
        expect(Tok::LBrace, "`{`");
        while (!at(Tok::RBrace)) {
            if (at(Tok::End)) syntax_error(cur().loc, "unterminated module body");
            m.body.push_back(statement());
        }
        const SourceLoc body_end = cur().loc;
        advance();
        if (!at(Tok::Less)) {
            syntax_error(at(Tok::End) ? body_end : cur().loc,
                         "expected `<valid; ready>` trailer after module body");
        }
        m.trailer_loc = cur().loc;
        advance();
        m.valid_expr = expr(false);
        expect(Tok::Semicolon, "`;` between valid and ready expressions");
        m.ready_expr = expr(true);
        expect(Tok::Greater, "`>` closing the trailer");
        if (!at(Tok::End)) syntax_error(cur().loc, "only one module per source file");
        return m;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }
    void advance() {
        if (pos_ + 1 < toks_.size()) ++pos_;
    }
    bool accept(Tok k) {
        if (!at(k)) return false;
        advance();
        return true;
    }
    const Token& expect(Tok k, const char* what) {
        if (!at(k)) syntax_error(cur().loc, std::string("expected ") + what + ", found " + describe(cur()));
        const Token& t = cur();
        advance();
        return t;
    }
    std::string ident(const char* what) {
        return expect(Tok::Ident, what).text;
    }

    VType type() {
        if (accept(Tok::KwInt)) return VType::integer();
        if (accept(Tok::KwBool)) return VType::boolean();
        if (at(Tok::LBracket)) {
            advance();
            const Token& n = expect(Tok::Number, "array length");
            if (n.value < 1 || n.value > kMaxArrayLength) {
                syntax_error(n.loc, "array length must be between 1 and " + std::to_string(kMaxArrayLength));
            }
            expect(Tok::RBracket, "`]` closing the array type");
            return VType::array(static_cast<std::uint32_t>(n.value));
        }
        syntax_error(cur().loc, "expected a type (`int`, `bool`, or `[N]`), found " + describe(cur()));
    }

    Expr literal_init() {
        const SourceLoc loc = cur().loc;
        if (at(Tok::Number)) {
            const Token& t = cur();
            Expr e = Expr::int_literal(t.value, t.hex, loc);
            advance();
            return e;
        }
        if (accept(Tok::KwTrue)) return Expr::bool_literal(true, loc);
        if (accept(Tok::KwFalse)) return Expr::bool_literal(false, loc);
        if (accept(Tok::LBracket)) {
            std::vector<Expr> elems;
            do {
                if (!at(Tok::Number)) syntax_error(cur().loc, "array initializer elements must be integer literals");
                elems.push_back(Expr::int_literal(cur().value, cur().hex, cur().loc));
                advance();
            } while (accept(Tok::Comma));
            expect(Tok::RBracket, "`]` closing the array initializer");
            return Expr::array_literal(std::move(elems), loc);
        }
        syntax_error(loc, "state initial value must be a literal");
    }

    StateDecl state_decl() {
        StateDecl d;
        d.loc = cur().loc;
        d.name = ident("state register name");
        expect(Tok::Colon, "`:` after state register name");
        d.type = type();
        expect(Tok::Assign, "`=` and an initial value in state declaration");
        d.init = literal_init();
        return d;
    }

    std::vector<Param> params() {
        std::vector<Param> out;
        expect(Tok::LParen, "`(`");
        if (!at(Tok::RParen)) {
            do {
                Param p;
                p.loc = cur().loc;
                p.name = ident("port name");
                expect(Tok::Colon, "`:` after port name");
                p.type = type();
                out.push_back(std::move(p));
            } while (accept(Tok::Comma));
        }
        expect(Tok::RParen, "`)`");
        return out;
    }

    Stmt statement() {
        Stmt s;
        s.loc = cur().loc;
        if (accept(Tok::KwLet)) {
            s.kind = Stmt::Kind::Let;
            s.name = ident("variable name after `let`");
            if (accept(Tok::Colon)) s.declared_type = type();
        } else if (accept(Tok::At)) {
            s.kind = Stmt::Kind::NextState;
            s.name = ident("state register name after `@`");
        } else {
            s.name = ident("statement");
            if (accept(Tok::LBracket)) {
                s.kind = Stmt::Kind::IndexAssign;
                s.index = expr(false);
                expect(Tok::RBracket, "`]`");
            } else {
                s.kind = Stmt::Kind::Assign;
            }
        }
        expect(Tok::Assign, "`=`");
        s.value = expr(false);
        expect(Tok::Semicolon, "`;` ending the statement");
        return s;
    }

    // `no_gt` is set while parsing the ready expression, whose closing `>`
    // would otherwise read as a comparison.
    Expr expr(bool no_gt) {
        Expr cond = binary(2, no_gt);
        if (at(Tok::Question)) {
            const SourceLoc loc = cur().loc;
            advance();
            Expr then_e = expr(no_gt);
            expect(Tok::Colon, "`:` in conditional expression");
            Expr else_e = expr(no_gt);
            return Expr::conditional(std::move(cond), std::move(then_e), std::move(else_e), loc);
        }
        return cond;
    }

    std::optional<BinaryOp> binary_op(bool no_gt) const {
        switch (cur().kind) {
            case Tok::PipePipe: return BinaryOp::LogicalOr;
            case Tok::AmpAmp: return BinaryOp::LogicalAnd;
            case Tok::Pipe: return BinaryOp::BitOr;
            case Tok::Caret: return BinaryOp::BitXor;
            case Tok::Amp: return BinaryOp::BitAnd;
            case Tok::EqEq: return BinaryOp::Eq;
            case Tok::NotEq: return BinaryOp::Ne;
            case Tok::Less: return BinaryOp::Lt;
            case Tok::LessEq: return BinaryOp::Le;
            case Tok::Greater: return no_gt ? std::nullopt : std::optional(BinaryOp::Gt);
            case Tok::GreaterEq: return BinaryOp::Ge;
            case Tok::Shl: return BinaryOp::Shl;
            case Tok::Shr: return BinaryOp::Shr;
            case Tok::Plus: return BinaryOp::Add;
            case Tok::Minus: return BinaryOp::Sub;
            case Tok::Star: return BinaryOp::Mul;
            default: return std::nullopt;
        }
    }

    Expr binary(int min_prec, bool no_gt) {
        Expr lhs = unary(no_gt);
        for (;;) {
            const auto op = binary_op(no_gt);
            if (!op || precedence(*op) < min_prec) return lhs;
            const SourceLoc loc = cur().loc;
            advance();
            Expr rhs = binary(precedence(*op) + 1, no_gt);
            lhs = Expr::binary(*op, std::move(lhs), std::move(rhs), loc);
        }
    }

    Expr unary(bool no_gt) {
        const SourceLoc loc = cur().loc;
        if (accept(Tok::Tilde)) return Expr::unary(UnaryOp::BitNot, unary(no_gt), loc);
        if (accept(Tok::Bang)) return Expr::unary(UnaryOp::LogicalNot, unary(no_gt), loc);
        if (accept(Tok::Minus)) return Expr::unary(UnaryOp::Negate, unary(no_gt), loc);
        return primary();
    }

    Expr primary() {
        const Token& t = cur();
        const SourceLoc loc = t.loc;
        switch (t.kind) {
            case Tok::Number: {
                Expr e = Expr::int_literal(t.value, t.hex, loc);
                advance();
                return e;
            }
            case Tok::KwTrue: advance(); return Expr::bool_literal(true, loc);
            case Tok::KwFalse: advance(); return Expr::bool_literal(false, loc);
            case Tok::Ident: {
                std::string name = t.text;
                advance();
                if (accept(Tok::LBracket)) {
                    Expr idx = expr(false);
                    expect(Tok::RBracket, "`]` closing the index");
                    return Expr::index(std::move(name), std::move(idx), loc);
                }
                return Expr::variable(std::move(name), loc);
            }
            case Tok::LParen: {
                advance();
                Expr inner = expr(false);
                expect(Tok::RParen, "`)`");
                return inner;
            }
            case Tok::LBracket: {
                advance();
                std::vector<Expr> elems;
                do {
                    elems.push_back(expr(false));
                } while (accept(Tok::Comma));
                expect(Tok::RBracket, "`]` closing the array literal");
                return Expr::array_literal(std::move(elems), loc);
            }
            default: break;
        }
        syntax_error(loc, "expected an expression, found " + describe(t));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

ModuleAst parse_module(std::string_view source) {
    Lexer lexer(source);
    Parser parser(lexer.run());
    return parser.module();
}

}  // namespace oobleck::visc
