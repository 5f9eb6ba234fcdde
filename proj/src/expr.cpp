#include "hybridlab/expr.hpp"

#include <cctype>
#include <optional>

namespace hybridlab::expr {

namespace {

enum class Tok { number, identifier, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::string_view text;
  Span span;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + std::string(t.text) + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Node parse_all() {
    advance();
    if (current_.kind == Tok::end) fail("empty input", current_.span);
    Node root = expression();
    if (current_.kind != Tok::end) fail("unexpected " + describe(current_), current_.span);
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message, Span span) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < span.begin && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(message, line, col, span);
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      current_ = {Tok::end, {}, {start, start}};
      return;
    }
    const char c = src_[pos_];
    auto single = [&](Tok kind) {
      ++pos_;
      current_ = {kind, src_.substr(start, 1), {start, pos_}};
    };
    switch (c) {
      case '+': return single(Tok::plus);
      case '-': return single(Tok::minus);
      case '*': return single(Tok::star);
      case '/': return single(Tok::slash);
      case '^': return single(Tok::caret);
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      default: break;
    }
    auto is_digit = [&](std::size_t i) { return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i])); };
    if (is_digit(pos_) || (c == '.' && is_digit(pos_ + 1))) {
      while (is_digit(pos_)) ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '.') {
        ++pos_;
        while (is_digit(pos_)) ++pos_;
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t look = pos_ + 1;
        if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
        if (!is_digit(look)) fail("malformed exponent in number", {start, look});
        pos_ = look;
        while (is_digit(pos_)) ++pos_;
      }
      if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        fail("implicit multiplication is not allowed; use '*'", {start, pos_ + 1});
      }
      current_ = {Tok::number, src_.substr(start, pos_ - start), {start, pos_}};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      current_ = {Tok::identifier, src_.substr(start, pos_ - start), {start, pos_}};
      return;
    }
    fail("unknown character '" + std::string(1, c) + "'", {start, start + 1});
  }

  Node make(NodeKind kind, std::vector<Node> children, Span span) {
    Node n;
    n.kind = kind;
    n.children = std::move(children);
    n.span = span;
    return n;
  }

  Node expression() {
    Node lhs = term();
    while (current_.kind == Tok::plus || current_.kind == Tok::minus) {
      const bool minus = current_.kind == Tok::minus;
      const Span op = current_.span;
      advance();
      Node rhs = term();
      if (minus) {
        const Span s{op.begin, rhs.span.end};
        rhs = make(NodeKind::negate, {std::move(rhs)}, s);
      }
      const Span s{lhs.span.begin, rhs.span.end};
      lhs = make(NodeKind::add, {std::move(lhs), std::move(rhs)}, s);
    }
    return lhs;
  }

  Node term() {
    Node lhs = unary();
    while (current_.kind == Tok::star || current_.kind == Tok::slash) {
      const NodeKind kind = current_.kind == Tok::star ? NodeKind::multiply : NodeKind::divide;
      advance();
      Node rhs = unary();
      const Span s{lhs.span.begin, rhs.span.end};
      lhs = make(kind, {std::move(lhs), std::move(rhs)}, s);
    }
    return lhs;
  }

  Node unary() {
    if (current_.kind == Tok::minus || current_.kind == Tok::plus) {
      const bool minus = current_.kind == Tok::minus;
      const Span op = current_.span;
      advance();
      Node operand = unary();
      if (!minus) {
        operand.span.begin = op.begin;
        return operand;
      }
      const Span s{op.begin, operand.span.end};
      return make(NodeKind::negate, {std::move(operand)}, s);
    }
    return power();
  }

  Node power() {
    Node base = primary();
    if (current_.kind != Tok::caret) return base;
    advance();
    const std::size_t exp_begin = current_.span.begin;
    bool parenthesized = false;
    bool negative = false;
    if (current_.kind == Tok::lparen) {
      parenthesized = true;
      advance();
      if (current_.kind == Tok::minus || current_.kind == Tok::plus) {
        negative = current_.kind == Tok::minus;
        advance();
      }
    }
    if (current_.kind != Tok::number) fail("exponent must be a nonnegative integer literal", current_.span);
    const Token number = current_;
    for (char ch : number.text) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) fail("exponent must be an integer", number.span);
    }
    if (number.text.size() > 4) fail("exponent too large", number.span);
    advance();
    std::size_t exp_end = number.span.end;
    if (parenthesized) {
      if (current_.kind != Tok::rparen) fail("expected ')' after exponent", current_.span);
      exp_end = current_.span.end;
      advance();
    }
    if (negative) fail("negative exponent", {exp_begin, exp_end});
    if (current_.kind == Tok::caret) fail("chained powers need parentheses", current_.span);
    Node n = make(NodeKind::power, {std::move(base)}, {0, exp_end});
    n.span.begin = n.children.front().span.begin;
    n.exponent = static_cast<std::uint32_t>(std::stoul(std::string(number.text)));
    return n;
  }

  Node primary() {
    const Token t = current_;
    switch (t.kind) {
      case Tok::number: {
        advance();
        Node n;
        n.kind = NodeKind::constant;
        n.value = ExactComplex(parse_decimal(t.text));
        n.span = t.span;
        return n;
      }
      case Tok::identifier: {
        advance();
        Node n;
        n.span = t.span;
        if (t.text == "i") {
          n.kind = NodeKind::constant;
          n.value = ExactComplex::i();
        } else if (auto g = generator_from_name(t.text)) {
          n.kind = NodeKind::generator;
          n.generator = *g;
        } else {
          n.kind = NodeKind::parameter;
          n.name = std::string(t.text);
        }
        return n;
      }
      case Tok::lparen: {
        advance();
        Node inner = expression();
        if (current_.kind != Tok::rparen) fail("expected ')' but found " + describe(current_), current_.span);
        inner.span = {t.span.begin, current_.span.end};
        advance();
        return inner;
      }
      default:
        fail("expected a number, identifier or '(' but found " + describe(t), t.span);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token current_{Tok::end, {}, {}};
};

OperatorPolynomial lower_node(const Node& n, const ParameterBinding& params) {
  switch (n.kind) {
    case NodeKind::constant:
      return OperatorPolynomial(n.value);
    case NodeKind::parameter: {
      const ExactComplex* v = params.find(n.name);
      if (v == nullptr) throw LowerError("unbound parameter '" + n.name + "'", n.span);
      return OperatorPolynomial(*v);
    }
    case NodeKind::generator:
      return OperatorPolynomial(n.generator);
    case NodeKind::negate:
      return -lower_node(n.children[0], params);
    case NodeKind::add:
      return lower_node(n.children[0], params) + lower_node(n.children[1], params);
    case NodeKind::multiply:
      return multiply(lower_node(n.children[0], params), lower_node(n.children[1], params));
    case NodeKind::divide: {
      const OperatorPolynomial num = lower_node(n.children[0], params);
      const OperatorPolynomial den = lower_node(n.children[1], params);
      const auto c = den.as_constant();
      if (!c) throw LowerError("division by an operator expression is not allowed", n.children[1].span);
      if (c->is_zero()) throw LowerError("division by zero", n.children[1].span);
      return num * (ExactComplex(1) / *c);
    }
    case NodeKind::power: {
      const OperatorPolynomial base = lower_node(n.children[0], params);
      OperatorPolynomial out(ExactComplex(1));
      for (std::uint32_t j = 0; j < n.exponent; ++j) out = multiply(out, base);
      return out;
    }
  }
  return {};
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column, Span span)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column),
      span_(span) {}

bool is_valid_identifier(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) return false;
  for (char c : text) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

ParameterBinding::ParameterBinding(std::initializer_list<std::pair<const std::string, ExactComplex>> init) {
  for (const auto& [k, v] : init) bind(k, v);
}

void ParameterBinding::bind(const std::string& name, const ExactComplex& value) {
  if (!is_valid_identifier(name)) throw InvalidArgument("invalid parameter name '" + name + "'");
  if (name == "i" || generator_from_name(name)) {
    throw InvalidArgument("parameter name '" + name + "' is reserved");
  }
  values_[name] = value;
}

const ExactComplex* ParameterBinding::find(std::string_view name) const {
  const auto it = values_.find(name);
  return it == values_.end() ? nullptr : &it->second;
}

ExpressionAST parse(std::string_view source) {
  ExpressionAST ast;
  ast.source = std::string(source);
  Parser parser(ast.source);
  ast.root = parser.parse_all();
  return ast;
}

OperatorPolynomial lower(const ExpressionAST& ast, const ParameterBinding& params) {
  return lower_node(ast.root, params);
}

OperatorPolynomial compile(std::string_view source, const ParameterBinding& params) {
  return lower(parse(source), params);
}

std::string to_sexpr(const Node& node) {
  auto join = [&](std::string_view head) {
    std::string out(head);
    out += '(';
    for (std::size_t j = 0; j < node.children.size(); ++j) {
      if (j > 0) out += ',';
      out += to_sexpr(node.children[j]);
    }
    return out + ')';
  };
  switch (node.kind) {
    case NodeKind::constant: return format_complex(node.value);
    case NodeKind::parameter: return node.name;
    case NodeKind::generator: return std::string(name(node.generator));
    case NodeKind::negate: return join("neg");
    case NodeKind::add: return join("add");
    case NodeKind::multiply: return join("mul");
    case NodeKind::divide: return join("div");
    case NodeKind::power: return join("pow") + "^" + std::to_string(node.exponent);
  }
  return {};
}

}  // namespace hybridlab::expr
