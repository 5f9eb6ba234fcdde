#pragma once

// Text frontend for Hamiltonians and Koopmanians.
//
//   expression := term { ("+" | "-") term }
//   term       := unary { ("*" | "/") unary }
//   unary      := ("-" | "+") unary | power
//   power      := primary [ "^" exponent ]
//   exponent   := integer | "(" ["+" | "-"] integer ")"
//   primary    := number | identifier | "(" expression ")"
//   number     := digits [ "." digits ] [ ("e" | "E") ["+" | "-"] digits ]
//   identifier := letter { letter | digit | "_" }
//
// Identifiers q, p, x, y, p_x, p_y are generators, `i` is the imaginary unit,
// anything else is a parameter. Multiplication is always explicit.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hybridlab/error.hpp"
#include "hybridlab/exact.hpp"
#include "hybridlab/weyl_algebra.hpp"

namespace hybridlab::expr {

/// Half-open byte range [begin, end) in the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column, Span span);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  Span span() const noexcept { return span_; }
  /// Message without the location prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
  Span span_;
};

/// Raised while lowering: unbound parameter, division by an operator or by zero.
class LowerError : public Error {
 public:
  LowerError(const std::string& message, Span span) : Error(message), span_(span) {}
  Span span() const noexcept { return span_; }

 private:
  Span span_;
};

enum class NodeKind { constant, parameter, generator, negate, add, multiply, divide, power };

struct Node {
  NodeKind kind = NodeKind::constant;
  ExactComplex value;          // constant
  std::string name;            // parameter
  Generator generator{};       // generator
  std::uint32_t exponent = 0;  // power
  std::vector<Node> children;
  Span span;
};

struct ExpressionAST {
  std::string source;
  Node root;
};

class ParameterBinding {
 public:
  ParameterBinding() = default;
  ParameterBinding(std::initializer_list<std::pair<const std::string, ExactComplex>> init);

  /// Throws InvalidArgument for malformed names or names reserved for generators / `i`.
  void bind(const std::string& name, const ExactComplex& value);
  const ExactComplex* find(std::string_view name) const;
  const std::map<std::string, ExactComplex, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, ExactComplex, std::less<>> values_;
};

ExpressionAST parse(std::string_view source);

/// Throws LowerError naming the first unbound parameter.
OperatorPolynomial lower(const ExpressionAST& ast, const ParameterBinding& params = {});

/// parse + lower.
OperatorPolynomial compile(std::string_view source, const ParameterBinding& params = {});

/// Structural rendering, e.g. "add(mul(y,p_x),neg(mul(x,p_y)))".
std::string to_sexpr(const Node& node);

bool is_valid_identifier(std::string_view text);

}  // namespace hybridlab::expr
