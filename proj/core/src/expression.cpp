#include "curvedborn/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace curvedborn {

struct Expression::Node {
  enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call } kind;
  double value = 0.0;
  int variable = -1;
  double (*function)(double) = nullptr;
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;

  double eval(const Vec& x) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Variable: return x[variable];
      case Kind::Negate: return -lhs->eval(x);
      case Kind::Add: return lhs->eval(x) + rhs->eval(x);
      case Kind::Sub: return lhs->eval(x) - rhs->eval(x);
      case Kind::Mul: return lhs->eval(x) * rhs->eval(x);
      case Kind::Div: return lhs->eval(x) / rhs->eval(x);
      case Kind::Pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Kind::Call: return function(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

const std::unordered_map<std::string, double (*)(double)>& functions() {
  static const std::unordered_map<std::string, double (*)(double)> table{
      {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
      {"tan", [](double v) { return std::tan(v); }},   {"sinh", [](double v) { return std::sinh(v); }},
      {"cosh", [](double v) { return std::cosh(v); }}, {"tanh", [](double v) { return std::tanh(v); }},
      {"sqrt", [](double v) { return std::sqrt(v); }}, {"exp", [](double v) { return std::exp(v); }},
      {"log", [](double v) { return std::log(v); }},   {"abs", [](double v) { return std::abs(v); }},
  };
  return table;
}

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ConfigError,
                "expression '" + std::string(src_) + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) {
        n = make(Node::Kind::Add, std::move(n), term());
      } else if (accept('-')) {
        n = make(Node::Kind::Sub, std::move(n), term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) {
        n = make(Node::Kind::Mul, std::move(n), unary());
      } else if (accept('/')) {
        n = make(Node::Kind::Div, std::move(n), unary());
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::Negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Kind::Pow, std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::string rest(src_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    auto n = make(Node::Kind::Constant);
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string id(src_.substr(start, pos_ - start));
    if (accept('(')) {
      auto it = functions().find(id);
      if (it == functions().end()) fail("unknown function '" + id + "'");
      auto n = make(Node::Kind::Call, expr());
      n->function = it->second;
      if (!accept(')')) fail("expected ')' after argument of " + id);
      return n;
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == id) {
        auto n = make(Node::Kind::Variable);
        n->variable = static_cast<int>(i);
        return n;
      }
    }
    if (id == "pi" || id == "e") {
      auto n = make(Node::Kind::Constant);
      n->value = id == "pi" ? std::numbers::pi : std::numbers::e;
      return n;
    }
    fail("unknown name '" + id + "'");
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view source, const std::vector<std::string>& variables) {
  Expression e;
  e.source_ = std::string(source);
  e.root_ = Parser(e.source_, variables).parse();
  return e;
}

double Expression::operator()(const Vec& values) const { return root_->eval(values); }

}  // namespace curvedborn
