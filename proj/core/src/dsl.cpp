#include "cebit/dsl.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <utility>

namespace cebit::dsl {

namespace {

constexpr std::size_t kMaxSource = std::size_t{1} << 20;

constexpr std::array<std::string_view, 11> kKeywords = {
    "cebits", "expect", "flip", "h", "x", "z", "s", "phase", "cnot", "toffoli", "u"};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) {
    return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

char to_lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string lowercased(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = to_lower(c);
    return out;
}

bool is_keyword(std::string_view lower) {
    for (std::string_view k : kKeywords)
        if (k == lower) return true;
    return false;
}

[[noreturn]] void fail(const std::string& message, int line, int column) {
    throw ParseError(message, line, column);
}

struct Lexer {
    std::string_view src;
    std::size_t pos = 0;
    int line = 1;
    int column = 1;

    char peek(std::size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }
    void advance() {
        if (pos >= src.size()) return;
        if (src[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }
};

// "pi" (any case) not glued to further identifier characters.
bool starts_pi(const Lexer& lx, std::size_t ahead) {
    if (to_lower(lx.peek(ahead)) != 'p' || to_lower(lx.peek(ahead + 1)) != 'i') return false;
    return !is_ident_char(lx.peek(ahead + 2));
}

Token lex_number(Lexer& lx, int line, int col) {
    std::string text;
    auto take = [&] {
        text += lx.peek();
        lx.advance();
    };
    bool negative = false;
    if (lx.peek() == '-') {
        negative = true;
        take();
    }
    std::string coef;
    bool saw_digit = false, saw_dot = false, saw_exp = false;
    auto take_digits = [&] {
        while (is_digit(lx.peek())) {
            saw_digit = true;
            coef += lx.peek();
            take();
        }
    };
    take_digits();
    if (lx.peek() == '.') {
        saw_dot = true;
        coef += '.';
        take();
        take_digits();
    }
    if (saw_digit && (lx.peek() == 'e' || lx.peek() == 'E')) {
        std::size_t digit_at = (lx.peek(1) == '+' || lx.peek(1) == '-') ? 2 : 1;
        if (is_digit(lx.peek(digit_at))) {
            saw_exp = true;
            coef += lx.peek();
            take();
            if (lx.peek() == '+' || lx.peek() == '-') {
                coef += lx.peek();
                take();
            }
            while (is_digit(lx.peek())) {
                coef += lx.peek();
                take();
            }
        }
    }
    bool has_pi = false;
    long denom = 0;
    if (starts_pi(lx, 0)) {
        has_pi = true;
        take();
        take();
        if (lx.peek() == '/') {
            take();
            if (!is_digit(lx.peek()))
                fail("expected digits after '/' in a pi fraction", lx.line, lx.column);
            std::string d;
            while (is_digit(lx.peek())) {
                d += lx.peek();
                take();
            }
            denom = std::strtol(d.c_str(), nullptr, 10);
            if (denom == 0) fail("pi fraction denominator must be nonzero", line, col);
        }
    }
    if (!saw_digit && !has_pi) fail("malformed number", line, col);
    if (is_ident_char(lx.peek()) || lx.peek() == '.')
        fail("malformed number", lx.line, lx.column);

    double value;
    if (has_pi) {
        double coefficient = coef.empty() ? 1.0 : std::strtod(coef.c_str(), nullptr);
        value = coefficient * std::numbers::pi;
        if (denom != 0) value /= static_cast<double>(denom);
    } else {
        value = std::strtod(coef.c_str(), nullptr);
    }
    if (negative) value = -value;
    if (!std::isfinite(value)) fail("number out of range", line, col);
    TokenKind kind =
        (!has_pi && !saw_dot && !saw_exp) ? TokenKind::Int : TokenKind::Float;
    return {kind, std::move(text), value, line, col};
}

struct Parser {
    const std::vector<Token>& toks;
    std::size_t idx = 0;
    int declared = 0;

    const Token& peek() const { return toks[idx]; }
    const Token& next() {
        const Token& t = toks[idx];
        if (t.kind != TokenKind::Eof) ++idx;
        return t;
    }

    static std::string describe(const Token& t) {
        if (t.kind == TokenKind::Eof) return "end of input";
        return std::string(token_kind_name(t.kind)) + " '" + t.text + "'";
    }

    [[noreturn]] static void fail_at(const Token& t, const std::string& message) {
        fail(message, t.line, t.column);
    }

    const Token& expect(TokenKind kind, const char* what) {
        if (peek().kind != kind)
            fail_at(peek(), std::string("expected ") + what + ", found " + describe(peek()));
        return next();
    }

    static bool keyword_is(const Token& t, std::string_view name) {
        return t.kind == TokenKind::Keyword && lowercased(t.text) == name;
    }

    double number(const char* what) {
        const Token& t = peek();
        if (t.kind != TokenKind::Int && t.kind != TokenKind::Float)
            fail_at(t, std::string("expected ") + what + ", found " + describe(t));
        next();
        return t.value;
    }

    int check_cebit(int cebit, const Token& at) {
        if (cebit < 0 || cebit >= declared)
            fail_at(at, "operand names cebit " + std::to_string(cebit) + " but only " +
                            std::to_string(declared) + " cebit(s) are declared");
        return cebit;
    }

    int position_index(double raw, const Token& at) {
        if (raw < 0 || raw > 62 || raw != std::floor(raw))
            fail_at(at, "position index must be an integer between 0 and 62");
        return static_cast<int>(raw);
    }

    int operand() {
        const Token& t = peek();
        if (t.kind == TokenKind::Ident) {
            if (t.text == "pol") {
                next();
                return check_cebit(0, t);
            }
            if (t.text == "pos") {
                next();
                const Token& num = expect(TokenKind::Int, "a position index after 'pos'");
                return check_cebit(position_index(num.value, num) + 1, num);
            }
            if (t.text.size() > 3 && t.text.compare(0, 3, "pos") == 0) {
                bool digits = true;
                for (std::size_t i = 3; i < t.text.size(); ++i)
                    if (!is_digit(t.text[i])) digits = false;
                if (digits) {
                    next();
                    double raw = t.text.size() > 6 ? 1e9 : std::strtod(t.text.c_str() + 3, nullptr);
                    return check_cebit(position_index(raw, t) + 1, t);
                }
            }
        }
        fail_at(t, "expected an operand (pol or pos<k>), found " + describe(t));
    }

    Complex centry() {
        double re = number("a matrix entry");
        if (peek().kind == TokenKind::Int || peek().kind == TokenKind::Float)
            return {re, number("an imaginary part")};
        return {re, 0.0};
    }

    PauliAxis basis_letter() {
        const Token& t = peek();
        if ((t.kind == TokenKind::Keyword || t.kind == TokenKind::Ident) && t.text.size() == 1) {
            char c = to_lower(t.text[0]);
            if (c == 'x' || c == 'y' || c == 'z' || c == 'i') {
                next();
                return pauli_axis_from_letter(c);
            }
        }
        fail_at(t, "expected a basis letter (x, y, z, or i), found " + describe(t));
    }

    Statement statement() {
        const Token& t = peek();
        if (t.kind != TokenKind::Keyword)
            fail_at(t, "expected a statement keyword, found " + describe(t));
        Statement stmt;
        stmt.line = t.line;
        stmt.column = t.column;
        std::string k = lowercased(t.text);
        next();
        if (k == "h") {
            stmt.gate = Gate::h(operand());
        } else if (k == "x") {
            stmt.gate = Gate::x(operand());
        } else if (k == "z") {
            stmt.gate = Gate::z(operand());
        } else if (k == "s") {
            stmt.gate = Gate::s(operand());
        } else if (k == "phase") {
            expect(TokenKind::LParen, "'('");
            double phi = number("the phase angle");
            expect(TokenKind::RParen, "')'");
            stmt.gate = Gate::phase_gate(phi, operand());
        } else if (k == "u") {
            expect(TokenKind::LParen, "'('");
            Complex e00 = centry();
            expect(TokenKind::Comma, "','");
            Complex e01 = centry();
            expect(TokenKind::Comma, "','");
            Complex e10 = centry();
            expect(TokenKind::Comma, "','");
            Complex e11 = centry();
            expect(TokenKind::RParen, "')'");
            stmt.gate = Gate::u2(Mat2{e00, e01, e10, e11}, operand());
        } else if (k == "cnot") {
            int control = operand();
            int target = operand();
            if (control == target) fail_at(t, "CNOT control and target must differ");
            stmt.gate = Gate::cnot(control, target);
        } else if (k == "toffoli") {
            int c0 = operand();
            int c1 = operand();
            int target = operand();
            if (c0 == c1 || c0 == target || c1 == target)
                fail_at(t, "TOFFOLI operands must be distinct");
            stmt.gate = Gate::toffoli(c0, c1, target);
        } else if (k == "flip") {
            stmt.kind = Statement::Kind::Flip;
            stmt.gate = Gate::x(operand());
        } else if (k == "expect") {
            stmt.kind = Statement::Kind::Expect;
            std::vector<PauliAxis> bases(static_cast<std::size_t>(declared), PauliAxis::I);
            for (int i = 0; i < declared; ++i)
                bases[static_cast<std::size_t>(declared - 1 - i)] = basis_letter();
            stmt.gate = Gate::expect(std::move(bases));
        } else {
            fail_at(t, "'cebits' may appear only once, at the top of the program");
        }
        expect(TokenKind::Semi, "';'");
        return stmt;
    }
};

std::string format_number(double v) {
    std::array<char, 64> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), p);
}

std::string operand_text(int cebit) {
    return cebit == 0 ? std::string("pol") : "pos" + std::to_string(cebit - 1);
}

std::string entry_text(Complex e) {
    if (e.imag() == 0.0) return format_number(e.real());
    return format_number(e.real()) + " " + format_number(e.imag());
}

bool mat2_equal(const Mat2& a, const Mat2& b) {
    return a.a == b.a && a.b == b.b && a.c == b.c && a.d == b.d;
}

bool gate_equal(const Gate& a, const Gate& b) {
    return a.kind == b.kind && a.operands == b.operands && a.phase == b.phase &&
           mat2_equal(a.matrix, b.matrix) && a.bases == b.bases;
}

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Keyword: return "KEYWORD";
        case TokenKind::Ident: return "IDENT";
        case TokenKind::Int: return "INT";
        case TokenKind::Float: return "FLOAT";
        case TokenKind::LParen: return "LPAREN";
        case TokenKind::RParen: return "RPAREN";
        case TokenKind::Comma: return "COMMA";
        case TokenKind::Semi: return "SEMI";
        case TokenKind::Eof: return "EOF";
    }
    return "?";
}

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

std::vector<Token> tokenize(std::string_view source) {
    if (source.size() > kMaxSource) fail("source exceeds the 1 MiB limit", 1, 1);
    std::vector<Token> tokens;
    Lexer lx{source};
    while (true) {
        for (;;) {
            char c = lx.peek();
            if (c == '#') {
                while (lx.peek() != '\n' && lx.peek() != '\0') lx.advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                lx.advance();
            } else {
                break;
            }
        }
        int line = lx.line, col = lx.column;
        char c = lx.peek();
        if (c == '\0') {
            tokens.push_back({TokenKind::Eof, "", 0.0, line, col});
            break;
        }
        if (c == '(' || c == ')' || c == ',' || c == ';') {
            TokenKind kind = c == '(' ? TokenKind::LParen
                           : c == ')' ? TokenKind::RParen
                           : c == ',' ? TokenKind::Comma
                                      : TokenKind::Semi;
            lx.advance();
            tokens.push_back({kind, std::string(1, c), 0.0, line, col});
            continue;
        }
        bool minus_number =
            c == '-' && (is_digit(lx.peek(1)) || lx.peek(1) == '.' || starts_pi(lx, 1));
        if (is_digit(c) || (c == '.' && is_digit(lx.peek(1))) || starts_pi(lx, 0) ||
            minus_number) {
            tokens.push_back(lex_number(lx, line, col));
            continue;
        }
        if (is_ident_start(c)) {
            std::string text;
            while (is_ident_char(lx.peek())) {
                text += lx.peek();
                lx.advance();
            }
            TokenKind kind = is_keyword(lowercased(text)) ? TokenKind::Keyword : TokenKind::Ident;
            tokens.push_back({kind, std::move(text), 0.0, line, col});
            continue;
        }
        fail(std::string("unexpected character '") + c + "'", line, col);
    }
    return tokens;
}

std::string format_tokens(const std::vector<Token>& tokens) {
    std::string out;
    for (const Token& t : tokens) {
        out += std::to_string(t.line) + ":" + std::to_string(t.column) + " ";
        out += token_kind_name(t.kind);
        if (!t.text.empty()) out += " '" + t.text + "'";
        out += "\n";
    }
    return out;
}

bool operator==(const Statement& a, const Statement& b) {
    return a.kind == b.kind && gate_equal(a.gate, b.gate);
}

bool operator==(const Ast& a, const Ast& b) {
    return a.declared_cebits == b.declared_cebits && a.statements == b.statements;
}

Ast parse(const std::vector<Token>& tokens) {
    if (tokens.empty() || tokens.back().kind != TokenKind::Eof)
        fail("token stream must end with an EOF token", 1, 1);
    Parser p{tokens};
    const Token& head = p.peek();
    if (!Parser::keyword_is(head, "cebits"))
        Parser::fail_at(head,
                        "a program starts with 'cebits <count>;', found " + Parser::describe(head));
    p.next();
    const Token& count = p.expect(TokenKind::Int, "the cebit count");
    if (count.value < 1 || count.value > 63)
        Parser::fail_at(count, "cebit count must be between 1 and 63");
    Ast ast;
    ast.declared_cebits = static_cast<int>(std::llround(count.value));
    p.declared = ast.declared_cebits;
    p.expect(TokenKind::Semi, "';'");
    while (p.peek().kind != TokenKind::Eof) ast.statements.push_back(p.statement());
    return ast;
}

Ast parse_source(std::string_view source) { return parse(tokenize(source)); }

GateCircuit to_circuit(const Ast& ast) {
    GateCircuit circuit;
    circuit.n_cebits = ast.declared_cebits;
    circuit.gates.reserve(ast.statements.size());
    for (const Statement& s : ast.statements) circuit.gates.push_back(s.gate);
    return circuit;
}

std::string pretty_print(const Ast& ast) {
    std::string out = "cebits " + std::to_string(ast.declared_cebits) + ";\n";
    for (const Statement& s : ast.statements) {
        const Gate& g = s.gate;
        if (s.kind == Statement::Kind::Flip) {
            out += "flip " + operand_text(g.operands.at(0));
        } else if (g.kind == Gate::Kind::Expect) {
            out += "expect";
            for (std::size_t i = g.bases.size(); i-- > 0;) {
                out += ' ';
                out += pauli_axis_letter(g.bases[i]);
            }
        } else {
            switch (g.kind) {
                case Gate::Kind::H: out += "H " + operand_text(g.operands.at(0)); break;
                case Gate::Kind::X: out += "X " + operand_text(g.operands.at(0)); break;
                case Gate::Kind::Z: out += "Z " + operand_text(g.operands.at(0)); break;
                case Gate::Kind::S: out += "S " + operand_text(g.operands.at(0)); break;
                case Gate::Kind::Phase:
                    out += "PHASE(" + format_number(g.phase) + ") " +
                           operand_text(g.operands.at(0));
                    break;
                case Gate::Kind::U2:
                    out += "U(" + entry_text(g.matrix.a) + ", " + entry_text(g.matrix.b) +
                           ", " + entry_text(g.matrix.c) + ", " + entry_text(g.matrix.d) +
                           ") " + operand_text(g.operands.at(0));
                    break;
                case Gate::Kind::Cnot:
                    out += "CNOT " + operand_text(g.operands.at(0)) + " " +
                           operand_text(g.operands.at(1));
                    break;
                case Gate::Kind::Toffoli:
                    out += "TOFFOLI " + operand_text(g.operands.at(0)) + " " +
                           operand_text(g.operands.at(1)) + " " +
                           operand_text(g.operands.at(2));
                    break;
                default:
                    throw std::invalid_argument("statement cannot be printed");
            }
        }
        out += ";\n";
    }
    return out;
}

}  // namespace cebit::dsl
