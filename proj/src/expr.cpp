#include "debary/expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace debary {

struct Expression::Node {
  enum class Kind { Number, Imag, Var, Add, Sub, Mul, Div, Neg, Pow, Call };
  Kind kind;
  double number = 0.0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Kind kind, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

[[noreturn]] void fail(const std::string& text, std::size_t pos, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              what + " at column " + std::to_string(pos + 1) + " in expression '" + text + "'");
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(text_, pos_, "trailing input");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr left = term();
    while (true) {
      if (eat('+')) {
        left = make(Node::Kind::Add, {left, term()});
      } else if (eat('-')) {
        left = make(Node::Kind::Sub, {left, term()});
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    while (true) {
      if (eat('*')) {
        left = make(Node::Kind::Mul, {left, unary()});
      } else if (eat('/')) {
        left = make(Node::Kind::Div, {left, unary()});
      } else {
        return left;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Kind::Neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Node::Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail(text_, pos_, "unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail(text_, pos_, "expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name_or_call();
    fail(text_, pos_, std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail(text_, pos_, "malformed number");
    }
    pos_ += used;
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = v;
    // a trailing 'i' makes the literal imaginary
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      return make(Node::Kind::Mul, {n, make(Node::Kind::Imag)});
    }
    return n;
  }

  NodePtr name_or_call() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string id = text_.substr(start, pos_ - start);
    if (id == "i") return make(Node::Kind::Imag);
    if (peek() == '(') {
      ++pos_;
      std::vector<NodePtr> args;
      args.push_back(expr());
      while (eat(',')) args.push_back(expr());
      if (!eat(')')) fail(text_, pos_, "expected ')'");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Call;
      n->name = id;
      n->args = std::move(args);
      return n;
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Var;
    n->name = id;
    return n;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

Cplx eval_node(const Node& n, const std::map<std::string, Cplx>& vars, const std::string& text) {
  switch (n.kind) {
    case Node::Kind::Number: return Cplx(n.number, 0.0);
    case Node::Kind::Imag: return Cplx(0.0, 1.0);
    case Node::Kind::Var: {
      auto it = vars.find(n.name);
      if (it == vars.end()) {
        throw Error(ErrorCode::ParseError,
                    "unknown variable '" + n.name + "' in expression '" + text + "'");
      }
      return it->second;
    }
    case Node::Kind::Add: return eval_node(*n.args[0], vars, text) + eval_node(*n.args[1], vars, text);
    case Node::Kind::Sub: return eval_node(*n.args[0], vars, text) - eval_node(*n.args[1], vars, text);
    case Node::Kind::Mul: return eval_node(*n.args[0], vars, text) * eval_node(*n.args[1], vars, text);
    case Node::Kind::Div: return eval_node(*n.args[0], vars, text) / eval_node(*n.args[1], vars, text);
    case Node::Kind::Neg: return -eval_node(*n.args[0], vars, text);
    case Node::Kind::Pow: {
      const Cplx b = eval_node(*n.args[0], vars, text);
      const Cplx e = eval_node(*n.args[1], vars, text);
      if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 1024) {
        // integer powers stay exact for negative/zero bases
        Cplx acc(1.0, 0.0);
        long long k = std::llround(e.real());
        Cplx base = k < 0 ? Cplx(1.0, 0.0) / b : b;
        for (long long j = 0; j < std::llabs(k); ++j) acc *= base;
        return acc;
      }
      return std::pow(b, e);
    }
    case Node::Kind::Call: {
      if (n.name == "pow") {
        if (n.args.size() != 2) {
          throw Error(ErrorCode::ParseError, "pow takes two arguments in '" + text + "'");
        }
        Node p;
        p.kind = Node::Kind::Pow;
        p.args = n.args;
        return eval_node(p, vars, text);
      }
      if (n.args.size() != 1) {
        throw Error(ErrorCode::ParseError, n.name + " takes one argument in '" + text + "'");
      }
      const Cplx a = eval_node(*n.args[0], vars, text);
      if (n.name == "exp") return std::exp(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "sin") return std::sin(a);
      throw Error(ErrorCode::ParseError, "unknown function '" + n.name + "' in '" + text + "'");
    }
  }
  throw Error(ErrorCode::ParseError, "corrupt expression tree");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).run();
  return e;
}

Cplx Expression::eval(const std::map<std::string, Cplx>& vars) const {
  return eval_node(*root_, vars, text_);
}

double Expression::eval_real(const std::map<std::string, Cplx>& vars) const {
  const Cplx v = eval(vars);
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real()))) {
    throw Error(ErrorCode::InvalidArgument,
                "expression '" + text_ + "' produced a non-real value");
  }
  return v.real();
}

}  // namespace debary
