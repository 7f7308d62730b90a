#pragma once

// Coordinate expressions for config-defined embeddings and scalings.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//   func    := exp | sin | cos | sqrt | log
//
// `pi` is the only named constant. Evaluation is generic over double and the
// dual types, so derivatives of parsed maps are exact.

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sasakian/chart.hpp"
#include "sasakian/dual.hpp"
#include "sasakian/error.hpp"

namespace sasakian {

class Expression {
 public:
  enum class Op { number, variable, neg, add, sub, mul, div, pow, exp, sin, cos, sqrt, log };

  struct Node {
    Op op = Op::number;
    double value = 0.0;  // number
    int index = 0;       // variable index, or integer exponent for pow
    std::unique_ptr<Node> a, b;
  };

  // Throws Error(parse_error) with a 1-based column in the message.
  static Expression parse(std::string_view text, const std::vector<std::string>& variables);

  [[nodiscard]] const std::string& text() const noexcept { return text_; }

  template <class T>
  T eval(std::span<const T> x) const {
    return eval_node(*root_, x);
  }

 private:
  Expression(std::string text, std::shared_ptr<const Node> root) : text_(std::move(text)), root_(std::move(root)) {}

  template <class T>
  static T eval_node(const Node& n, std::span<const T> x) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    switch (n.op) {
      case Op::number: return T(n.value);
      case Op::variable: return x[static_cast<std::size_t>(n.index)];
      case Op::neg: return -eval_node(*n.a, x);
      case Op::add: return eval_node(*n.a, x) + eval_node(*n.b, x);
      case Op::sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
      case Op::mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
      case Op::div: {
        const T d = eval_node(*n.b, x);
        if (value_of(d) == 0.0) throw Error(ErrorCode::outside_domain, "division by zero in expression");
        return eval_node(*n.a, x) / d;
      }
      case Op::pow: {
        const T base = eval_node(*n.a, x);
        if (n.index < 0 && value_of(base) == 0.0)
          throw Error(ErrorCode::outside_domain, "negative power of zero in expression");
        return ipow(base, n.index);
      }
      case Op::exp: return exp(eval_node(*n.a, x));
      case Op::sin: return sin(eval_node(*n.a, x));
      case Op::cos: return cos(eval_node(*n.a, x));
      case Op::sqrt: {
        const T v = eval_node(*n.a, x);
        if (value_of(v) < 0.0) throw Error(ErrorCode::outside_domain, "sqrt of a negative value in expression");
        return sqrt(v);
      }
      case Op::log: {
        const T v = eval_node(*n.a, x);
        if (value_of(v) <= 0.0) throw Error(ErrorCode::outside_domain, "log of a nonpositive value in expression");
        return log(v);
      }
    }
    throw Error(ErrorCode::internal, "unknown expression node");
  }

  std::string text_;
  std::shared_ptr<const Node> root_;
};

// Chart map whose components are parsed expressions in the given variables.
ChartMap expression_map(std::vector<Expression> components, int in_dim);

}  // namespace sasakian
