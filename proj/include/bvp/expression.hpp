#pragma once

#include <functional>
#include <string>

namespace bvp {

/// Compiles a closed-form expression in the variable t into a callable.
/// Grammar: numbers, t, pi, e, + - * / ^, parentheses, unary minus, and the
/// functions sin cos tan exp log abs sqrt. Throws ParseError with a position
/// diagnostic on malformed input.
std::function<double(double)> compile_expression(const std::string& text);

/// Parses and evaluates a constant expression (no t allowed).
double evaluate_constant(const std::string& text);

}  // namespace bvp
