#include "qeskit/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

namespace qeskit {
namespace detail {

enum class Kind { Const, Var, Param, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Intrinsic {
  const char* name;
  long double (*eval)(long double);
};

// Index order is load-bearing: derivative() switches on it.
constexpr std::array<Intrinsic, 8> kIntrinsics{{
    {"exp", [](long double v) { return std::exp(v); }},
    {"log", [](long double v) { return std::log(v); }},
    {"sqrt", [](long double v) { return std::sqrt(v); }},
    {"sin", [](long double v) { return std::sin(v); }},
    {"cos", [](long double v) { return std::cos(v); }},
    {"sinh", [](long double v) { return std::sinh(v); }},
    {"cosh", [](long double v) { return std::cosh(v); }},
    {"tanh", [](long double v) { return std::tanh(v); }},
}};

constexpr int kFnExp = 0, kFnLog = 1, kFnSqrt = 2, kFnSin = 3, kFnCos = 4, kFnSinh = 5,
              kFnCosh = 6, kFnTanh = 7;

struct Node {
  Kind kind;
  double value = 0.0;
  int exponent = 0;
  int fn = -1;
  std::string name;
  NodePtr a, b;
};

namespace {

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = v;
  return n;
}

const NodePtr kZero = make_const(0.0);
const NodePtr kOne = make_const(1.0);

NodePtr make_var() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  return n;
}

NodePtr make_param(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Param;
  n->name = std::move(name);
  return n;
}

bool is_const(const NodePtr& n) { return n->kind == Kind::Const; }

long double pow_int(long double base, int n) {
  bool invert = n < 0;
  unsigned long long k = invert ? -(long long)n : (long long)n;
  long double acc = 1.0L, b = base;
  while (k) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return invert ? 1.0L / acc : acc;
}

NodePtr make_unary(Kind kind, NodePtr a);
NodePtr make_binary(Kind kind, NodePtr a, NodePtr b);

NodePtr make_neg(NodePtr a) {
  if (is_const(a)) return make_const(-a->value);
  return make_unary(Kind::Neg, std::move(a));
}

NodePtr make_add(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
  return make_binary(Kind::Add, std::move(a), std::move(b));
}

NodePtr make_sub(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
  return make_binary(Kind::Sub, std::move(a), std::move(b));
}

NodePtr make_mul(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
  return make_binary(Kind::Mul, std::move(a), std::move(b));
}

NodePtr make_div(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b) && b->value != 0.0) return make_const(a->value / b->value);
  return make_binary(Kind::Div, std::move(a), std::move(b));
}

NodePtr make_pow(NodePtr a, int n) {
  if (n == 0) return kOne;
  if (n == 1) return a;
  if (is_const(a) && !(a->value == 0.0 && n < 0))
    return make_const((double)pow_int((long double)a->value, n));
  auto node = std::make_shared<Node>();
  node->kind = Kind::Pow;
  node->exponent = n;
  node->a = std::move(a);
  return node;
}

NodePtr make_call(int fn, NodePtr a) {
  if (is_const(a)) {
    long double v = kIntrinsics[(std::size_t)fn].eval((long double)a->value);
    if (std::isfinite((double)v)) return make_const((double)v);
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Call;
  node->fn = fn;
  node->a = std::move(a);
  return node;
}

NodePtr make_unary(Kind kind, NodePtr a) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->a = std::move(a);
  return node;
}

NodePtr make_binary(Kind kind, NodePtr a, NodePtr b) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->a = std::move(a);
  node->b = std::move(b);
  return node;
}

int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Neg:
      return 3;
    case Kind::Pow:
      return 4;
    case Kind::Const:
      return n.value < 0 ? 3 : 5;  // negative literals print like a unary minus
    default:
      return 5;
  }
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void to_str(const Node& n, int context, std::string& out) {
  int prec = precedence(n);
  bool parens = prec < context;
  if (parens) out += '(';
  switch (n.kind) {
    case Kind::Const:
      out += format_double(n.value);
      break;
    case Kind::Var:
      out += 'x';
      break;
    case Kind::Param:
      out += n.name;
      break;
    case Kind::Neg:
      out += '-';
      to_str(*n.a, 3, out);
      break;
    case Kind::Add:
      to_str(*n.a, 1, out);
      out += '+';
      to_str(*n.b, 2, out);
      break;
    case Kind::Sub:
      to_str(*n.a, 1, out);
      out += '-';
      to_str(*n.b, 2, out);
      break;
    case Kind::Mul:
      to_str(*n.a, 2, out);
      out += '*';
      to_str(*n.b, 3, out);
      break;
    case Kind::Div:
      to_str(*n.a, 2, out);
      out += '/';
      to_str(*n.b, 3, out);
      break;
    case Kind::Pow:
      to_str(*n.a, 5, out);
      out += '^';
      if (n.exponent < 0) {
        out += '(';
        out += std::to_string(n.exponent);
        out += ')';
      } else {
        out += std::to_string(n.exponent);
      }
      break;
    case Kind::Call:
      out += kIntrinsics[(std::size_t)n.fn].name;
      out += '(';
      to_str(*n.a, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

std::string describe(const Node& n) {
  std::string s;
  to_str(n, 0, s);
  if (s.size() > 120) {
    s.resize(117);
    s += "...";
  }
  return s;
}

long double eval_node(const Node& n, long double x, const Params& params) {
  switch (n.kind) {
    case Kind::Const:
      return (long double)n.value;
    case Kind::Var:
      return x;
    case Kind::Param: {
      auto it = params.find(n.name);
      if (it == params.end()) throw EvalError("unbound parameter '" + n.name + "'", describe(n));
      return (long double)it->second;
    }
    case Kind::Neg:
      return -eval_node(*n.a, x, params);
    case Kind::Add:
      return eval_node(*n.a, x, params) + eval_node(*n.b, x, params);
    case Kind::Sub:
      return eval_node(*n.a, x, params) - eval_node(*n.b, x, params);
    case Kind::Mul:
      return eval_node(*n.a, x, params) * eval_node(*n.b, x, params);
    case Kind::Div: {
      long double num = eval_node(*n.a, x, params);
      long double den = eval_node(*n.b, x, params);
      if (den == 0.0L) throw EvalError("division by zero", describe(n));
      return num / den;
    }
    case Kind::Pow: {
      long double base = eval_node(*n.a, x, params);
      if (base == 0.0L && n.exponent < 0)
        throw EvalError("zero raised to a negative power", describe(n));
      return pow_int(base, n.exponent);
    }
    case Kind::Call: {
      long double arg = eval_node(*n.a, x, params);
      if (n.fn == kFnLog && arg <= 0.0L) throw EvalError("log of a non-positive value", describe(n));
      if (n.fn == kFnSqrt && arg < 0.0L) throw EvalError("sqrt of a negative value", describe(n));
      return kIntrinsics[(std::size_t)n.fn].eval(arg);
    }
  }
  throw std::logic_error("unreachable expression kind");
}

NodePtr diff(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Const:
    case Kind::Param:
      return kZero;
    case Kind::Var:
      return kOne;
    case Kind::Neg:
      return make_neg(diff(n->a));
    case Kind::Add:
      return make_add(diff(n->a), diff(n->b));
    case Kind::Sub:
      return make_sub(diff(n->a), diff(n->b));
    case Kind::Mul:
      return make_add(make_mul(diff(n->a), n->b), make_mul(n->a, diff(n->b)));
    case Kind::Div:
      return make_sub(make_div(diff(n->a), n->b),
                      make_div(make_mul(n->a, diff(n->b)), make_pow(n->b, 2)));
    case Kind::Pow:
      return make_mul(make_mul(make_const((double)n->exponent), make_pow(n->a, n->exponent - 1)),
                      diff(n->a));
    case Kind::Call: {
      NodePtr outer;
      switch (n->fn) {
        case kFnExp:
          outer = make_call(kFnExp, n->a);
          break;
        case kFnLog:
          outer = make_div(kOne, n->a);
          break;
        case kFnSqrt:
          outer = make_div(make_const(0.5), make_call(kFnSqrt, n->a));
          break;
        case kFnSin:
          outer = make_call(kFnCos, n->a);
          break;
        case kFnCos:
          outer = make_neg(make_call(kFnSin, n->a));
          break;
        case kFnSinh:
          outer = make_call(kFnCosh, n->a);
          break;
        case kFnCosh:
          outer = make_call(kFnSinh, n->a);
          break;
        case kFnTanh:
          outer = make_sub(kOne, make_pow(make_call(kFnTanh, n->a), 2));
          break;
        default:
          throw std::logic_error("unknown intrinsic");
      }
      return make_mul(outer, diff(n->a));
    }
  }
  throw std::logic_error("unreachable expression kind");
}

std::size_t count_nodes(const Node& n) {
  std::size_t c = 1;
  if (n.a) c += count_nodes(*n.a);
  if (n.b) c += count_nodes(*n.b);
  return c;
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& parameters)
      : text_(text), params_(parameters) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view text_;
  const std::vector<std::string>& params_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr e = parse_term();
    for (;;) {
      if (consume('+'))
        e = make_add(std::move(e), parse_term());
      else if (consume('-'))
        e = make_sub(std::move(e), parse_term());
      else
        return e;
    }
  }

  NodePtr parse_term() {
    NodePtr e = parse_unary();
    for (;;) {
      if (consume('*'))
        e = make_mul(std::move(e), parse_unary());
      else if (consume('/'))
        e = make_div(std::move(e), parse_unary());
      else
        return e;
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) return make_neg(parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (consume('^')) return make_pow(std::move(base), parse_int_exponent());
    return base;
  }

  int parse_int_exponent() {
    skip_ws();
    bool wrapped = consume('(');
    skip_ws();
    std::size_t start = pos_;
    bool negative = consume('-');
    skip_ws();
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
    if (pos_ == digits) fail("exponent must be an integer literal");
    if (pos_ < text_.size() &&
        (text_[pos_] == '.' || std::isalpha((unsigned char)text_[pos_]))) {
      pos_ = start;
      fail("exponent must be an integer literal");
    }
    int value = 0;
    auto res = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
    if (res.ec != std::errc{}) fail("exponent out of range");
    if (wrapped && !consume(')')) fail("expected ')' after exponent");
    return negative ? -value : value;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit((unsigned char)c) || c == '.') return parse_number();
    if (std::isalpha((unsigned char)c) || c == '_') return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    double value = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc{}) fail("malformed number");
    pos_ = (std::size_t)(res.ptr - text_.data());
    return make_const(value);
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "x") return make_var();
    for (std::size_t i = 0; i < kIntrinsics.size(); ++i) {
      if (name == kIntrinsics[i].name) {
        if (!consume('(')) {
          pos_ = start;
          fail("intrinsic '" + name + "' must be called with parentheses");
        }
        NodePtr arg = parse_expr();
        if (!consume(')')) fail("expected ')' after argument of '" + name + "'");
        return make_call((int)i, std::move(arg));
      }
    }
    for (const auto& p : params_)
      if (name == p) return make_param(std::move(name));
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }
};

}  // namespace
}  // namespace detail

Expr::Expr() : root_(detail::kZero) {}
Expr::Expr(detail::NodePtr root) : root_(std::move(root)) {}

Expr Expr::parse(std::string_view text, const std::vector<std::string>& parameters) {
  return Expr(detail::Parser(text, parameters).run());
}

Expr Expr::constant(double value) { return Expr(detail::make_const(value)); }
Expr Expr::variable() { return Expr(detail::make_var()); }

Expr Expr::derivative(int order) const {
  if (order < 1 || order > 6)
    throw std::invalid_argument("derivative order must be between 1 and 6");
  detail::NodePtr n = root_;
  for (int i = 0; i < order; ++i) n = detail::diff(n);
  return Expr(std::move(n));
}

double Expr::evaluate(double x, const Params& params) const {
  return (double)detail::eval_node(*root_, (long double)x, params);
}

long double Expr::evaluate_ld(long double x, const Params& params) const {
  return detail::eval_node(*root_, x, params);
}

std::string Expr::str() const {
  std::string s;
  detail::to_str(*root_, 0, s);
  return s;
}

std::size_t Expr::node_count() const { return detail::count_nodes(*root_); }

}  // namespace qeskit
