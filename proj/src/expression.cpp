#include "cheb2d/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "cheb2d/errors.hpp"

namespace cheb2d {

ExprPtr Expr::constant(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::constant;
  e->value = v;
  return e;
}

ExprPtr Expr::variable(ExprKind var) {
  auto e = std::make_shared<Expr>();
  e->kind = var;
  return e;
}

ExprPtr Expr::unary(ExprKind op, ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = op;
  e->lhs = std::move(operand);
  return e;
}

ExprPtr Expr::binary(ExprKind op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr Expr::power(ExprPtr base, int exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::pow;
  e->lhs = std::move(base);
  e->exponent = exponent;
  return e;
}

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

namespace {

constexpr int kMaxNesting = 256;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    ExprPtr e = expression();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  int column() const { return static_cast<int>(pos_ - line_start_) + 1; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column()); }

  bool accept(char c) {
    skip_space();
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxNesting) parser.fail("expression nested too deeply");
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  ExprPtr expression() {
    DepthGuard guard(*this);
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(ExprKind::add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(ExprKind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(ExprKind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::binary(ExprKind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    DepthGuard guard(*this);
    if (accept('-')) return Expr::unary(ExprKind::neg, unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (!accept('^')) return base;
    skip_space();
    const bool negative = accept('-');
    skip_space();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("exponent must be an integer literal");
    const std::size_t start = pos_;
    const int start_column = column();
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' || peek() == 'e' || peek() == 'E') {
      throw ParseError("non-integer exponent", line_, start_column);
    }
    int exponent = 0;
    const auto digits = text_.substr(start, pos_ - start);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || exponent > 1024) {
      throw ParseError("exponent out of range", line_, start_column);
    }
    if (accept('^')) fail("chained exponents need parentheses");
    return Expr::power(base, negative ? -exponent : exponent);
  }

  ExprPtr primary() {
    skip_space();
    if (at_end()) fail("unexpected end of input, expected an operand");
    const char c = peek();
    if (c == '(') {
      advance();
      ExprPtr inner = expression();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("expected an operand, found '") + c + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    const int start_column = column();
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) advance();
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      advance();
      if (!at_end() && (peek() == '+' || peek() == '-')) advance();
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    const auto literal = text_.substr(start, pos_ - start);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), value);
    if (ec != std::errc() || ptr != literal.data() + literal.size() || !std::isfinite(value)) {
      throw ParseError("malformed number '" + std::string(literal) + "'", line_, start_column);
    }
    return Expr::constant(value);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    const int start_column = column();
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) advance();
    const auto name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::variable(ExprKind::var_x);
    if (name == "y") return Expr::variable(ExprKind::var_y);
    if (name == "pi") return Expr::constant(std::numbers::pi);
    std::optional<ExprKind> fn;
    if (name == "abs") fn = ExprKind::abs;
    if (name == "sin") fn = ExprKind::sin;
    if (name == "cos") fn = ExprKind::cos;
    if (name == "exp") fn = ExprKind::exp;
    if (!fn) throw ParseError("unknown identifier '" + std::string(name) + "'", line_, start_column);
    expect('(');
    ExprPtr arg = expression();
    expect(')');
    return Expr::unary(*fn, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  int line_ = 1;
  int depth_ = 0;
};

std::string binary_symbol(ExprKind kind) {
  switch (kind) {
    case ExprKind::add:
      return " + ";
    case ExprKind::sub:
      return " - ";
    case ExprKind::mul:
      return " * ";
    case ExprKind::div:
      return " / ";
    default:
      return " ? ";
  }
}

std::string function_name(ExprKind kind) {
  switch (kind) {
    case ExprKind::abs:
      return "abs";
    case ExprKind::sin:
      return "sin";
    case ExprKind::cos:
      return "cos";
    case ExprKind::exp:
      return "exp";
    default:
      return "?";
  }
}

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

double evaluate(const Expr& e, double x, double y) {
  switch (e.kind) {
    case ExprKind::constant:
      return e.value;
    case ExprKind::var_x:
      return x;
    case ExprKind::var_y:
      return y;
    case ExprKind::neg:
      return -evaluate(*e.lhs, x, y);
    case ExprKind::abs:
      return std::abs(evaluate(*e.lhs, x, y));
    case ExprKind::sin:
      return std::sin(evaluate(*e.lhs, x, y));
    case ExprKind::cos:
      return std::cos(evaluate(*e.lhs, x, y));
    case ExprKind::exp:
      return std::exp(evaluate(*e.lhs, x, y));
    case ExprKind::add:
      return evaluate(*e.lhs, x, y) + evaluate(*e.rhs, x, y);
    case ExprKind::sub:
      return evaluate(*e.lhs, x, y) - evaluate(*e.rhs, x, y);
    case ExprKind::mul:
      return evaluate(*e.lhs, x, y) * evaluate(*e.rhs, x, y);
    case ExprKind::div: {
      const double den = evaluate(*e.rhs, x, y);
      if (den == 0.0) throw EvaluationError("division by zero", x, y);
      return evaluate(*e.lhs, x, y) / den;
    }
    case ExprKind::pow: {
      const double base = evaluate(*e.lhs, x, y);
      if (base == 0.0 && e.exponent < 0) throw EvaluationError("division by zero (zero to a negative power)", x, y);
      return std::pow(base, e.exponent);
    }
  }
  return 0.0;
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case ExprKind::constant:
      return format_real(e.value);
    case ExprKind::var_x:
      return "x";
    case ExprKind::var_y:
      return "y";
    case ExprKind::neg:
      return "(-" + to_string(*e.lhs) + ")";
    case ExprKind::abs:
    case ExprKind::sin:
    case ExprKind::cos:
    case ExprKind::exp:
      return function_name(e.kind) + "(" + to_string(*e.lhs) + ")";
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
    case ExprKind::div:
      return "(" + to_string(*e.lhs) + binary_symbol(e.kind) + to_string(*e.rhs) + ")";
    case ExprKind::pow:
      return "(" + to_string(*e.lhs) + "^" + std::to_string(e.exponent) + ")";
  }
  return "";
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::constant:
      return a.value == b.value;
    case ExprKind::var_x:
    case ExprKind::var_y:
      return true;
    case ExprKind::pow:
      return a.exponent == b.exponent && structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::neg:
    case ExprKind::abs:
    case ExprKind::sin:
    case ExprKind::cos:
    case ExprKind::exp:
      return structurally_equal(*a.lhs, *b.lhs);
    default:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

TargetFunction ast_to_function(ExprPtr ast) {
  if (!ast) throw ArgumentError("ast_to_function: empty expression");
  return [ast = std::move(ast)](double x, double y) { return evaluate(*ast, x, y); };
}

}  // namespace cheb2d
