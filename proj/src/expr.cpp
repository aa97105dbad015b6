#include "frontlim/expr.hpp"

#include "frontlim/errors.hpp"
#include "frontlim/field_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace frontlim {

struct Expression::Node {
  enum class Op { Const, X1, X2, Norm, Neg, Add, Sub, Mul, Tanh, Min, Max };
  Op op = Op::Const;
  double value = 0.0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;

  double eval(const Point& p) const {
    switch (op) {
      case Op::Const: return value;
      case Op::X1: return p.x();
      case Op::X2: return p.y();
      case Op::Norm: return p.norm();
      case Op::Neg: return -a->eval(p);
      case Op::Add: return a->eval(p) + b->eval(p);
      case Op::Sub: return a->eval(p) - b->eval(p);
      case Op::Mul: return a->eval(p) * b->eval(p);
      case Op::Tanh: return std::tanh(a->eval(p));
      case Op::Min: return std::min(a->eval(p), b->eval(p));
      case Op::Max: return std::max(a->eval(p), b->eval(p));
    }
    return 0.0;
  }

  bool constant() const {
    switch (op) {
      case Op::Const: return true;
      case Op::X1:
      case Op::X2:
      case Op::Norm: return false;
      default: return (!a || a->constant()) && (!b || b->constant());
    }
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept("+")) lhs = make(Op::Add, lhs, term());
      else if (accept("-")) lhs = make(Op::Sub, lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    while (accept("*")) lhs = make(Op::Mul, lhs, unary());
    return lhs;
  }
  NodePtr unary() {
    if (accept("-")) return make(Op::Neg, unary());
    return primary();
  }
  NodePtr call2(Op op) {
    expect("(");
    NodePtr a = expr();
    expect(",");
    NodePtr b = expr();
    expect(")");
    return make(op, a, b);
  }
  NodePtr primary() {
    skip();
    if (accept("|x|")) return make(Op::Norm);
    if (accept("(")) {
      NodePtr e = expr();
      expect(")");
      return e;
    }
    if (accept("tanh")) {
      expect("(");
      NodePtr e = expr();
      expect(")");
      return make(Op::Tanh, e);
    }
    if (accept("min")) return call2(Op::Min);
    if (accept("max")) return call2(Op::Max);
    if (accept("x2")) return make(Op::X2);
    if (accept("x1") || accept("x")) return make(Op::X1);
    if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return make(Op::Const, nullptr, nullptr, v);
    }
    fail("expected a number, variable or function");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : Expression(0.0) {}

Expression::Expression(double constant)
    : root_(make(Op::Const, nullptr, nullptr, constant)), text_(format_double(constant)) {}

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = text;
  return e;
}

double Expression::operator()(const Point& p) const { return root_->eval(p); }

bool Expression::is_constant() const { return root_->constant(); }

}  // namespace frontlim
