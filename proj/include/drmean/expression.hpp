#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "drmean/error.hpp"

namespace drm {

// Covariate transformation language:
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?          right-associative
//   atom  := number | 'z' digits | 'exp' '(' expr ')' | '(' expr ')'
// Negation binds looser than '^', so -z1^2 is -(z1^2).
struct ExprNode {
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Exp };

  Kind kind = Kind::Number;
  double value = 0.0;         // Number
  std::size_t variable = 0;   // Variable, 1-based
  std::unique_ptr<const ExprNode> lhs;  // binary left, unary operand
  std::unique_ptr<const ExprNode> rhs;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorCode::SyntaxError, message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class Expression {
 public:
  Expression() = default;

  static Expression parse(std::string_view text);

  // Throws EvaluationError on division by zero or a non-finite result.
  double evaluate(std::span<const double> z) const;

  // Largest variable index referenced (0 for constant expressions).
  std::size_t max_variable() const noexcept { return max_variable_; }
  // UnknownVariable if a variable index exceeds `dimension`.
  void bind(std::size_t dimension) const;

  // Fully parenthesised canonical form; parses back to an equivalent tree.
  std::string to_string() const;
  const std::string& source() const noexcept { return source_; }
  const ExprNode* root() const noexcept { return root_.get(); }

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string source_;
  std::size_t max_variable_ = 0;
};

}  // namespace drm
