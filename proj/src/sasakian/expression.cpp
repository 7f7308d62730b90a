#include "sasakian/expression.hpp"

#include <cctype>
#include <charconv>
#include <numbers>

namespace sasakian {

namespace {

using Node = Expression::Node;
using Op = Expression::Op;

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  std::unique_ptr<Node> run() {
    auto e = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& what) const {
    throw Error(ErrorCode::parse_error, "column " + std::to_string(pos + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(pos_ < s_.size() ? std::string("expected '") + c + "'" : std::string("expected '") + c + "' at end of input");
  }

  static std::unique_ptr<Node> make(Op op, std::unique_ptr<Node> a = nullptr, std::unique_ptr<Node> b = nullptr) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  std::unique_ptr<Node> expr() {
    auto left = term();
    for (;;) {
      if (accept('+')) left = make(Op::add, std::move(left), term());
      else if (accept('-')) left = make(Op::sub, std::move(left), term());
      else return left;
    }
  }

  std::unique_ptr<Node> term() {
    auto left = unary();
    for (;;) {
      if (accept('*')) left = make(Op::mul, std::move(left), unary());
      else if (accept('/')) left = make(Op::div, std::move(left), unary());
      else return left;
    }
  }

  std::unique_ptr<Node> unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  std::unique_ptr<Node> power() {
    auto base = primary();
    if (!accept('^')) return base;
    skip();
    const std::size_t at = pos_;
    const bool negative = accept('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail_at(at, "exponent must be an integer literal");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      fail_at(at, "exponent must be an integer literal");
    int k = 0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, k);
    if (ec != std::errc{} || ptr != s_.data() + pos_) fail_at(at, "exponent out of range");
    auto n = make(Op::pow, std::move(base));
    n->index = negative ? -k : k;
    return n;
  }

  std::unique_ptr<Node> primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::unique_ptr<Node> number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc{} || ptr != s_.data() + pos_) fail_at(start, "malformed number");
    auto n = make(Op::number);
    n->value = v;
    return n;
  }

  std::unique_ptr<Node> name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id(s_.substr(start, pos_ - start));
    static const std::pair<const char*, Op> funcs[] = {
        {"exp", Op::exp}, {"sin", Op::sin}, {"cos", Op::cos}, {"sqrt", Op::sqrt}, {"log", Op::log}};
    for (const auto& [fname, op] : funcs) {
      if (id == fname) {
        if (!accept('(')) fail("expected '(' after " + id);
        auto arg = expr();
        expect(')');
        return make(op, std::move(arg));
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == id) {
        auto n = make(Op::variable);
        n->index = static_cast<int>(i);
        return n;
      }
    }
    if (id == "pi") {
      auto n = make(Op::number);
      n->value = std::numbers::pi;
      return n;
    }
    fail_at(start, "unknown name '" + id + "'");
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text, const std::vector<std::string>& variables) {
  Parser p(text, variables);
  std::shared_ptr<const Node> root = p.run();
  return Expression(std::string(text), std::move(root));
}

ChartMap expression_map(std::vector<Expression> components, int in_dim) {
  const int out = static_cast<int>(components.size());
  return ChartMap::generic(in_dim, out, [components = std::move(components)](auto x) {
    using T = scalar_of<decltype(x)>;
    std::vector<T> y;
    y.reserve(components.size());
    for (const Expression& e : components) y.push_back(e.eval(x));
    return y;
  });
}

}  // namespace sasakian
