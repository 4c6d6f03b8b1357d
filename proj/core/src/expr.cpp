#include "twistor/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "twistor/errors.hpp"

namespace twistor {

struct Expr::Node {
  enum class Op { literal, variable, add, sub, mul, div, neg, exp_fn, log_fn, abs2, re, im };
  Op op;
  cplx value;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Op = Expr::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr literal(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::literal;
  n->value = v;
  return n;
}

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  }

  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ConfigError("expression: " + what + " at position " + std::to_string(pos));
  }

  NodePtr sum() {
    skip();
    NodePtr lhs;
    if (eat('-'))
      lhs = make(Op::neg, product());
    else
      lhs = product();
    for (;;) {
      if (eat('+'))
        lhs = make(Op::add, lhs, product());
      else if (eat('-'))
        lhs = make(Op::sub, lhs, product());
      else
        return lhs;
    }
  }

  NodePtr product() {
    NodePtr lhs = factor();
    for (;;) {
      if (eat('*'))
        lhs = make(Op::mul, lhs, factor());
      else if (eat('/'))
        lhs = make(Op::div, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    skip();
    if (eat('-')) return make(Op::neg, factor());
    if (eat('(')) {
      NodePtr inner = sum();
      if (!eat(')')) fail("missing ')'");
      return inner;
    }
    if (pos >= s.size()) fail("unexpected end of input");
    const char c = s[pos];
    if (std::isdigit((unsigned char)c) || c == '.') return number();
    if (std::isalpha((unsigned char)c)) return name();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const char* start = s.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) fail("bad number");
    pos += (size_t)(end - start);
    return literal(v);
  }

  NodePtr name() {
    const size_t start = pos;
    while (pos < s.size() && std::isalnum((unsigned char)s[pos])) ++pos;
    std::string id = s.substr(start, pos - start);
    for (char& ch : id) ch = (char)std::tolower((unsigned char)ch);
    if (id == "z") return make(Op::variable);
    Op op;
    if (id == "exp")
      op = Op::exp_fn;
    else if (id == "log")
      op = Op::log_fn;
    else if (id == "abs2")
      op = Op::abs2;
    else if (id == "re")
      op = Op::re;
    else if (id == "im")
      op = Op::im;
    else
      fail("unknown identifier '" + id + "'");
    if (!eat('(')) fail("expected '(' after " + id);
    NodePtr arg = sum();
    if (!eat(')')) fail("missing ')' after " + id + " argument");
    return make(op, arg);
  }
};

cplx eval_node(const Expr::Node& n, cplx z) {
  switch (n.op) {
    case Op::literal:
      return n.value;
    case Op::variable:
      return z;
    case Op::add:
      return eval_node(*n.a, z) + eval_node(*n.b, z);
    case Op::sub:
      return eval_node(*n.a, z) - eval_node(*n.b, z);
    case Op::mul:
      return eval_node(*n.a, z) * eval_node(*n.b, z);
    case Op::div:
      return eval_node(*n.a, z) / eval_node(*n.b, z);
    case Op::neg:
      return -eval_node(*n.a, z);
    case Op::exp_fn:
      return std::exp(eval_node(*n.a, z));
    case Op::log_fn:
      return std::log(eval_node(*n.a, z));
    case Op::abs2:
      return std::norm(eval_node(*n.a, z));
    case Op::re:
      return eval_node(*n.a, z).real();
    case Op::im:
      return eval_node(*n.a, z).imag();
  }
  return 0.0;
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Parser p(text);
  Expr e;
  NodePtr root = p.sum();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  e.root_ = std::move(root);
  return e;
}

cplx Expr::eval(cplx z) const {
  require(root_ != nullptr, "Expr: eval on empty expression");
  return eval_node(*root_, z);
}

ConformalMetric metric_from_expr(const std::string& sigma_expr, double R,
                                 bool rotationally_symmetric) {
  Expr e = Expr::parse(sigma_expr);
  auto sigma = [e](cplx z) { return e.eval(z).real(); };
  return custom_metric(sigma, {}, R, rotationally_symmetric);
}

}  // namespace twistor
