#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cebit/compiler.hpp"

namespace cebit::dsl {

enum class TokenKind { Keyword, Ident, Int, Float, LParen, RParen, Comma, Semi, Eof };

std::string_view token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string text;   // lexeme as written in the source
    double value = 0.0; // Int / Float only
    int line = 1;       // 1-based
    int column = 1;     // 1-based
};

/// Lexical or grammatical failure; line/column point at the offending
/// character or token. what() already embeds both.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Splits source text into tokens (a trailing Eof token is appended).
/// Keywords are matched case-insensitively: cebits, expect, flip, H, X, Z,
/// S, PHASE, CNOT, TOFFOLI, U. Numbers may carry a leading minus and may be
/// pi fractions (pi, -pi/2, 2pi/3, 0.5pi), which lex as one Float token.
/// Comments run from '#' to end of line. Sources above 1 MiB are rejected.
std::vector<Token> tokenize(std::string_view source);

/// One token per line as "LINE:COL KIND 'text'", for diagnostics.
std::string format_tokens(const std::vector<Token>& tokens);

struct Statement {
    enum class Kind { Gate, Flip, Expect };

    Kind kind = Kind::Gate;
    Gate gate;      // Flip carries Gate::x(target); Expect carries the bases
    int line = 1;
    int column = 1;
};

struct Ast {
    int declared_cebits = 1;
    std::vector<Statement> statements;
};

/// Semantic equality: compares kinds and gate payloads, ignores positions.
bool operator==(const Statement& a, const Statement& b);
bool operator==(const Ast& a, const Ast& b);

Ast parse(const std::vector<Token>& tokens);
Ast parse_source(std::string_view source);

/// Drops the surface syntax; flip statements become X gates.
GateCircuit to_circuit(const Ast& ast);

/// Canonical text form. parse_source(pretty_print(a)) == a for every Ast
/// this parser produces.
std::string pretty_print(const Ast& ast);

}  // namespace cebit::dsl
