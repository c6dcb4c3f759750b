#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plp/ast.hpp"

namespace plp {

// Reported for the earliest failing position only.
class ParseError : public std::runtime_error {
public:
    ParseError(SourceSpan span, std::string message, std::vector<std::string> expected = {})
        : std::runtime_error(std::move(message)), span(span), expected(std::move(expected)) {}

    SourceSpan span;
    std::vector<std::string> expected;
};

// Parses a whole source file into a surface AST (sugar still present).
Program parseProgram(std::string_view source);

// Canonical source text; parseProgram(prettyPrint(p)) equals p up to spans.
std::string prettyPrint(const Program& p);
std::string prettyPrint(const Statement& s);
std::string prettyPrint(const ListExpr& l);
std::string prettyPrint(const IntExpr& e);
std::string prettyPrint(const BoolExpr& b);
std::string prettyPrint(const QubitExpr& q);
std::string prettyPrint(const AngleFn& fn);

}  // namespace plp
