#include "drmean/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace drm {
namespace {

using NodePtr = std::unique_ptr<const ExprNode>;

NodePtr make_binary(ExprNode::Kind kind, NodePtr lhs, NodePtr rhs) {
  auto node = std::make_unique<ExprNode>();
  node->kind = kind;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

NodePtr make_unary(ExprNode::Kind kind, NodePtr operand) {
  auto node = std::make_unique<ExprNode>();
  node->kind = kind;
  node->lhs = std::move(operand);
  return node;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError(pos_, "empty expression");
    NodePtr node = parse_expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    }
    return node;
  }

  std::size_t max_variable() const noexcept { return max_variable_; }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(pos_, pos_ < text_.size()
                                 ? std::string("expected '") + c + "' but found '" + text_[pos_] + "'"
                                 : std::string("expected '") + c + "' but reached end of input");
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(ExprNode::Kind::Add, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = make_binary(ExprNode::Kind::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(ExprNode::Kind::Mul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(ExprNode::Kind::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(ExprNode::Kind::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return make_binary(ExprNode::Kind::Pow, std::move(base), parse_unary());
    return base;
  }

  NodePtr parse_atom() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == 'z') return parse_variable();
    if (text_.substr(pos_, 3) == "exp") {
      pos_ += 3;
      expect('(');
      NodePtr arg = parse_expr();
      expect(')');
      return make_unary(ExprNode::Kind::Exp, std::move(arg));
    }
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError(start, "malformed number");
    auto node = std::make_unique<ExprNode>();
    node->kind = ExprNode::Kind::Number;
    node->value = value;
    return node;
  }

  NodePtr parse_variable() {
    const std::size_t start = pos_;
    ++pos_;  // 'z'
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError(start, "variable 'z' needs an index");
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, index);
    if (ec != std::errc() || ptr != text_.data() + pos_ || index == 0) {
      throw ParseError(start, "variable index must be a positive integer");
    }
    max_variable_ = std::max(max_variable_, index);
    auto node = std::make_unique<ExprNode>();
    node->kind = ExprNode::Kind::Variable;
    node->variable = index;
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t max_variable_ = 0;
};

double eval_node(const ExprNode& node, std::span<const double> z) {
  using K = ExprNode::Kind;
  switch (node.kind) {
    case K::Number:
      return node.value;
    case K::Variable:
      if (node.variable > z.size()) {
        throw Error(ErrorCode::UnknownVariable, "z" + std::to_string(node.variable) +
                                                    " with only " + std::to_string(z.size()) +
                                                    " latent values");
      }
      return z[node.variable - 1];
    case K::Add:
      return eval_node(*node.lhs, z) + eval_node(*node.rhs, z);
    case K::Sub:
      return eval_node(*node.lhs, z) - eval_node(*node.rhs, z);
    case K::Mul:
      return eval_node(*node.lhs, z) * eval_node(*node.rhs, z);
    case K::Div: {
      const double den = eval_node(*node.rhs, z);
      if (den == 0.0) throw Error(ErrorCode::EvaluationError, "division by zero");
      return eval_node(*node.lhs, z) / den;
    }
    case K::Pow:
      return std::pow(eval_node(*node.lhs, z), eval_node(*node.rhs, z));
    case K::Neg:
      return -eval_node(*node.lhs, z);
    case K::Exp:
      return std::exp(eval_node(*node.lhs, z));
  }
  return 0.0;
}

void unparse(const ExprNode& node, std::string& out) {
  using K = ExprNode::Kind;
  auto binary = [&](const char* op) {
    out += '(';
    unparse(*node.lhs, out);
    out += op;
    unparse(*node.rhs, out);
    out += ')';
  };
  switch (node.kind) {
    case K::Number: {
      char buf[32];
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, node.value);
      out.append(buf, ptr);
      break;
    }
    case K::Variable:
      out += 'z';
      out += std::to_string(node.variable);
      break;
    case K::Add:
      binary(" + ");
      break;
    case K::Sub:
      binary(" - ");
      break;
    case K::Mul:
      binary(" * ");
      break;
    case K::Div:
      binary(" / ");
      break;
    case K::Pow:
      binary(" ^ ");
      break;
    case K::Neg:
      out += "(-";
      unparse(*node.lhs, out);
      out += ')';
      break;
    case K::Exp:
      out += "exp(";
      unparse(*node.lhs, out);
      out += ')';
      break;
  }
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser parser(text);
  Expression e;
  e.root_ = parser.parse_all();
  e.source_ = std::string(text);
  e.max_variable_ = parser.max_variable();
  return e;
}

double Expression::evaluate(std::span<const double> z) const {
  if (!root_) throw Error(ErrorCode::EvaluationError, "empty expression");
  const double v = eval_node(*root_, z);
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::EvaluationError, "'" + source_ + "' evaluated to a non-finite value");
  }
  return v;
}

void Expression::bind(std::size_t dimension) const {
  if (max_variable_ > dimension) {
    throw Error(ErrorCode::UnknownVariable, "'" + source_ + "' references z" +
                                                std::to_string(max_variable_) +
                                                " but the latent dimension is " +
                                                std::to_string(dimension));
  }
}

std::string Expression::to_string() const {
  if (!root_) return {};
  std::string out;
  unparse(*root_, out);
  if (out.size() > 2 && out.front() == '(' && out.back() == ')') {
    // Drop the outermost pair when it encloses the whole expression.
    int depth = 0;
    bool encloses = true;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
      depth += out[i] == '(' ? 1 : (out[i] == ')' ? -1 : 0);
      if (depth == 0) {
        encloses = false;
        break;
      }
    }
    if (encloses) out = out.substr(1, out.size() - 2);
  }
  return out;
}

}  // namespace drm
