#pragma once

#include "debary/core.hpp"

#include <map>
#include <memory>
#include <string>

namespace debary {

/// Parsed arithmetic expression over complex values. Grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-')* power
///   power   := atom ('^' unary)?            (right associative)
///   atom    := number | 'i' | name | name '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Functions: exp, cos, sin, pow(a, b). Numbers are double literals; 'i' is
/// the imaginary unit. Unknown names resolve through the variable environment
/// at evaluation time.
class Expression {
 public:
  static Expression parse(const std::string& text);

  Cplx eval(const std::map<std::string, Cplx>& vars) const;
  /// Evaluates and requires the result to be essentially real.
  double eval_real(const std::map<std::string, Cplx>& vars) const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace debary
