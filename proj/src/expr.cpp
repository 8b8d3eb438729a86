#include "confcalc/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "confcalc/errors.hpp"

namespace confcalc {

namespace {

struct FunctionName {
  std::string_view name;
  ExprOp op;
};

constexpr std::array<FunctionName, 7> kFunctions{{
    {"sin", ExprOp::sin},
    {"cos", ExprOp::cos},
    {"exp", ExprOp::exp},
    {"log", ExprOp::log},
    {"sqrt", ExprOp::sqrt},
    {"abs", ExprOp::abs},
    {"sgn", ExprOp::sgn},
}};

std::string_view function_name(ExprOp op) {
  for (const auto& f : kFunctions) {
    if (f.op == op) return f.name;
  }
  return "?";
}

// ---- node construction with light constant folding -------------------------

ExprPtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::constant;
  n->value = v;
  return n;
}

ExprPtr make_var(std::size_t index) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::variable;
  n->var = index;
  return n;
}

ExprPtr make_node(ExprOp op, ExprPtr lhs, ExprPtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool is_const(const ExprPtr& e, double v) { return e->op == ExprOp::constant && e->value == v; }
bool is_const(const ExprPtr& e) { return e->op == ExprOp::constant; }

ExprPtr s_neg(ExprPtr a) {
  if (is_const(a)) return make_const(-a->value);
  if (a->op == ExprOp::neg) return a->lhs;
  return make_node(ExprOp::neg, std::move(a));
}

ExprPtr s_add(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
  return make_node(ExprOp::add, std::move(a), std::move(b));
}

ExprPtr s_sub(ExprPtr a, ExprPtr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return s_neg(std::move(b));
  if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
  return make_node(ExprOp::sub, std::move(a), std::move(b));
}

ExprPtr s_mul(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
  return make_node(ExprOp::mul, std::move(a), std::move(b));
}

ExprPtr s_div(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_const(0.0);
  if (is_const(b, 1.0)) return a;
  return make_node(ExprOp::div, std::move(a), std::move(b));
}

ExprPtr s_pow(ExprPtr a, ExprPtr b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(b, 0.0)) return make_const(1.0);
  return make_node(ExprOp::pow, std::move(a), std::move(b));
}

ExprPtr s_unary(ExprOp op, ExprPtr a) { return make_node(op, std::move(a)); }

bool depends_on_any(const ExprPtr& e) {
  if (!e) return false;
  if (e->op == ExprOp::variable) return true;
  return depends_on_any(e->lhs) || depends_on_any(e->rhs);
}

bool depends_on(const ExprPtr& e, std::size_t var) {
  if (!e) return false;
  if (e->op == ExprOp::variable) return e->var == var;
  return depends_on(e->lhs, var) || depends_on(e->rhs, var);
}

// ---- evaluation ------------------------------------------------------------

double checked(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite result");
  return x;
}

double eval_node(const ExprNode& n, std::span<const double> vars) {
  switch (n.op) {
    case ExprOp::constant:
      return n.value;
    case ExprOp::variable:
      return vars[n.var];
    case ExprOp::neg:
      return -eval_node(*n.lhs, vars);
    case ExprOp::sin:
      return std::sin(eval_node(*n.lhs, vars));
    case ExprOp::cos:
      return std::cos(eval_node(*n.lhs, vars));
    case ExprOp::exp:
      return checked(std::exp(eval_node(*n.lhs, vars)), "exp");
    case ExprOp::log: {
      const double x = eval_node(*n.lhs, vars);
      if (!(x > 0.0)) throw DomainError("log of non-positive argument " + std::to_string(x));
      return std::log(x);
    }
    case ExprOp::sqrt: {
      const double x = eval_node(*n.lhs, vars);
      if (x < 0.0) throw DomainError("sqrt of negative argument " + std::to_string(x));
      return std::sqrt(x);
    }
    case ExprOp::abs:
      return std::abs(eval_node(*n.lhs, vars));
    case ExprOp::sgn: {
      const double x = eval_node(*n.lhs, vars);
      if (x == 0.0) throw DomainError("sgn undefined at 0");
      return x > 0.0 ? 1.0 : -1.0;
    }
    case ExprOp::add:
      return checked(eval_node(*n.lhs, vars) + eval_node(*n.rhs, vars), "add");
    case ExprOp::sub:
      return checked(eval_node(*n.lhs, vars) - eval_node(*n.rhs, vars), "sub");
    case ExprOp::mul:
      return checked(eval_node(*n.lhs, vars) * eval_node(*n.rhs, vars), "mul");
    case ExprOp::div: {
      const double num = eval_node(*n.lhs, vars);
      const double den = eval_node(*n.rhs, vars);
      if (den == 0.0) throw DomainError("division by zero");
      return checked(num / den, "div");
    }
    case ExprOp::pow:
      return real_pow(eval_node(*n.lhs, vars), eval_node(*n.rhs, vars));
  }
  throw DomainError("corrupt expression node");
}

// ---- differentiation -------------------------------------------------------

ExprPtr diff(const ExprPtr& e, std::size_t var) {
  switch (e->op) {
    case ExprOp::constant:
      return make_const(0.0);
    case ExprOp::variable:
      return make_const(e->var == var ? 1.0 : 0.0);
    case ExprOp::neg:
      return s_neg(diff(e->lhs, var));
    case ExprOp::sin:
      return s_mul(s_unary(ExprOp::cos, e->lhs), diff(e->lhs, var));
    case ExprOp::cos:
      return s_neg(s_mul(s_unary(ExprOp::sin, e->lhs), diff(e->lhs, var)));
    case ExprOp::exp:
      return s_mul(e, diff(e->lhs, var));
    case ExprOp::log:
      return s_div(diff(e->lhs, var), e->lhs);
    case ExprOp::sqrt:
      return s_div(diff(e->lhs, var), s_mul(make_const(2.0), e));
    case ExprOp::abs:
      return s_mul(s_unary(ExprOp::sgn, e->lhs), diff(e->lhs, var));
    case ExprOp::sgn: {
      // Zero wherever defined; keep sgn(u) in the tree so u = 0 still raises.
      return s_mul(make_const(0.0), e);
    }
    case ExprOp::add:
      return s_add(diff(e->lhs, var), diff(e->rhs, var));
    case ExprOp::sub:
      return s_sub(diff(e->lhs, var), diff(e->rhs, var));
    case ExprOp::mul:
      return s_add(s_mul(diff(e->lhs, var), e->rhs), s_mul(e->lhs, diff(e->rhs, var)));
    case ExprOp::div: {
      auto num = s_sub(s_mul(diff(e->lhs, var), e->rhs), s_mul(e->lhs, diff(e->rhs, var)));
      return s_div(std::move(num), s_mul(e->rhs, e->rhs));
    }
    case ExprOp::pow: {
      const auto& base = e->lhs;
      const auto& expo = e->rhs;
      if (!depends_on(expo, var)) {
        // p * u^(p-1) * u'
        ExprPtr reduced = is_const(expo) ? make_const(expo->value - 1.0)
                                         : s_sub(expo, make_const(1.0));
        return s_mul(s_mul(expo, s_pow(base, std::move(reduced))), diff(base, var));
      }
      if (!depends_on(base, var)) {
        // u^v * log(u) * v'
        return s_mul(s_mul(e, s_unary(ExprOp::log, base)), diff(expo, var));
      }
      // u^v * (v' log u + v u' / u)
      auto term1 = s_mul(diff(expo, var), s_unary(ExprOp::log, base));
      auto term2 = s_div(s_mul(expo, diff(base, var)), base);
      return s_mul(e, s_add(std::move(term1), std::move(term2)));
    }
  }
  throw DomainError("corrupt expression node");
}

// ---- printing --------------------------------------------------------------

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), std::abs(v));
  std::string digits(buf.data(), ptr);
  return v < 0.0 || std::signbit(v) ? "(-" + digits + ")" : digits;
}

void print_node(const ExprNode& n, const std::vector<std::string>& vars, std::string& out) {
  switch (n.op) {
    case ExprOp::constant:
      out += format_number(n.value);
      return;
    case ExprOp::variable:
      out += vars[n.var];
      return;
    case ExprOp::neg:
      out += "(-";
      print_node(*n.lhs, vars, out);
      out += ")";
      return;
    case ExprOp::sin:
    case ExprOp::cos:
    case ExprOp::exp:
    case ExprOp::log:
    case ExprOp::sqrt:
    case ExprOp::abs:
    case ExprOp::sgn:
      out += function_name(n.op);
      out += "(";
      print_node(*n.lhs, vars, out);
      out += ")";
      return;
    case ExprOp::add:
    case ExprOp::sub:
    case ExprOp::mul:
    case ExprOp::div:
    case ExprOp::pow: {
      static constexpr std::array<char, 5> kSym{'+', '-', '*', '/', '^'};
      const auto idx = static_cast<std::size_t>(n.op) - static_cast<std::size_t>(ExprOp::add);
      out += "(";
      print_node(*n.lhs, vars, out);
      out += kSym[idx];
      print_node(*n.rhs, vars, out);
      out += ")";
      return;
    }
  }
}

// ---- parser ----------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  ExprPtr parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError(ParseError::Kind::syntax, pos_, "empty expression");
    auto e = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError(ParseError::Kind::syntax, pos_,
                       std::string("unexpected '") + text_[pos_] + "'");
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return;
    }
    if (c == ')' && pos_ < text_.size() && text_[pos_] == ',') {
      throw ParseError(ParseError::Kind::arity, pos_, "functions take exactly one argument");
    }
    const std::string found =
        pos_ < text_.size() ? std::string("'") + text_[pos_] + "'" : std::string("end of input");
    throw ParseError(ParseError::Kind::syntax, pos_,
                     std::string("expected '") + c + "', found " + found);
  }

  ExprPtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(ExprOp::add, lhs, term());
      } else if (accept('-')) {
        lhs = make_node(ExprOp::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(ExprOp::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_node(ExprOp::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    if (accept('-')) return make_node(ExprOp::neg, unary());
    return power();
  }

  ExprPtr power() {
    auto base = atom();
    if (accept('^')) return make_node(ExprOp::pow, base, unary());
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError(ParseError::Kind::syntax, pos_, "unexpected end of input");
    }
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (is_digit(c) || c == '.') return number();
    if (is_ident_start(c)) return identifier();
    throw ParseError(ParseError::Kind::syntax, pos_, std::string("unexpected '") + c + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (is_digit(text_[pos_]) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && is_digit(text_[p])) {
        pos_ = p;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw ParseError(ParseError::Kind::syntax, start, "malformed number");
    }
    return make_const(v);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (is_ident_start(text_[pos_]) || is_digit(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
          throw ParseError(ParseError::Kind::arity, pos_,
                           "variable '" + std::string(name) + "' cannot be called");
        }
        return make_var(i);
      }
    }
    for (const auto& f : kFunctions) {
      if (f.name == name) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '(') {
          throw ParseError(ParseError::Kind::arity, pos_,
                           "function '" + std::string(name) + "' needs one argument");
        }
        ++pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ')') {
          throw ParseError(ParseError::Kind::arity, pos_,
                           "function '" + std::string(name) + "' needs one argument");
        }
        auto arg = expr();
        expect(')');
        return make_node(f.op, std::move(arg));
      }
    }
    throw ParseError(ParseError::Kind::unknown_identifier, start,
                     "unknown identifier '" + std::string(name) + "'");
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

int arity(ExprOp op) {
  switch (op) {
    case ExprOp::constant:
    case ExprOp::variable:
      return 0;
    case ExprOp::add:
    case ExprOp::sub:
    case ExprOp::mul:
    case ExprOp::div:
    case ExprOp::pow:
      return 2;
    default:
      return 1;
  }
}

double real_pow(double x, double p) {
  if (p == 0.0) return 1.0;
  if (x > 0.0) return checked(std::pow(x, p), "pow");
  if (x == 0.0) {
    if (p > 0.0) return 0.0;
    throw DomainError("0 raised to non-positive power");
  }
  if (std::nearbyint(p) != p) {
    throw DomainError("negative base " + std::to_string(x) + " with non-integer exponent");
  }
  return checked(std::pow(x, p), "pow");
}

ExprFn::ExprFn(ExprPtr root, std::vector<std::string> vars)
    : root_(std::move(root)), vars_(std::move(vars)) {}

double ExprFn::eval(std::span<const double> vars) const {
  if (vars.size() < vars_.size()) throw DomainError("eval: missing variable values");
  return eval_node(*root_, vars);
}

ExprFn ExprFn::derivative(std::size_t var) const { return ExprFn(diff(root_, var), vars_); }

bool ExprFn::is_constant() const { return !depends_on_any(root_); }

std::string ExprFn::to_string() const {
  std::string out;
  print_node(*root_, vars_, out);
  return out;
}

ExprFn parse_expr(std::string_view text) { return parse_expr(text, {"t"}); }

ExprFn parse_expr(std::string_view text, std::vector<std::string> vars) {
  Parser p(text, vars);
  auto root = p.parse();
  return ExprFn(std::move(root), std::move(vars));
}

}  // namespace confcalc
