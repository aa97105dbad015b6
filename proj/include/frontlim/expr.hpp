#pragma once

#include "frontlim/grid.hpp"

#include <memory>
#include <string>
#include <vector>

namespace frontlim {

/// A function of position from a deliberately tiny grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary ('*' unary)*
///   unary   := '-' unary | primary
///   primary := number | x | x1 | x2 | '|x|' | '(' expr ')'
///            | tanh '(' expr ')' | min '(' expr ',' expr ')' | max '(' expr ',' expr ')'
///
/// `x` is an alias of `x1`; `|x|` is the Euclidean norm of the position.
class Expression {
 public:
  Expression();  // the constant 0
  explicit Expression(double constant);

  static Expression parse(const std::string& text);

  double operator()(const Point& p) const;
  bool is_constant() const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace frontlim
