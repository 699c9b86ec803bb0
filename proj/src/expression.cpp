#include "dmpfem/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include "dmpfem/error.hpp"

namespace dmpfem {

struct Expression::Node {
  enum Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Min, Max };
  Kind kind = Number;
  double value = 0.0;
  int var = 0;
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Kind kind, std::vector<NodePtr> kids) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->kids = std::move(kids);
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  NodePtr parse_all(unsigned& used) {
    NodePtr e = expr();
    skip();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    used = used_;
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError,
                what + " at position " + std::to_string(pos_) + " in '" + std::string(src_) + "'");
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

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Node::Add, {lhs, term()});
      else if (accept('-'))
        lhs = make(Node::Sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Node::Mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make(Node::Div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const char* begin = src_.data() + pos_;
    const auto [end, ec] = std::from_chars(begin, src_.data() + src_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));

    static const std::pair<const char*, Node::Kind> unary_fns[] = {
        {"sin", Node::Sin}, {"cos", Node::Cos}, {"exp", Node::Exp}, {"abs", Node::Abs}};
    for (const auto& [fn, kind] : unary_fns)
      if (name == fn) {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return make(kind, {arg});
      }
    if (name == "min" || name == "max") {
      expect('(');
      NodePtr a = expr();
      expect(',');
      NodePtr b = expr();
      expect(')');
      return make(name == "min" ? Node::Min : Node::Max, {a, b});
    }
    if (name == "pi") {
      auto n = std::make_shared<Node>();
      n->value = 3.14159265358979323846;
      return n;
    }

    static const char* vars[] = {"x", "y", "z", "eta", "p1", "p2", "p3"};
    for (int v = 0; v < Expression::kNumVars; ++v)
      if (name == vars[v]) {
        if (dim_ < 3 && (v == Expression::Z || v == Expression::P3)) {
          pos_ = start;
          fail("variable '" + name + "' needs a 3D problem");
        }
        used_ |= 1u << v;
        auto n = std::make_shared<Node>();
        n->kind = Node::Variable;
        n->var = v;
        return n;
      }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
  unsigned used_ = 0;
};

double eval(const Node& n, const Expression::Vars& vars) {
  switch (n.kind) {
    case Node::Number: return n.value;
    case Node::Variable: return vars[n.var];
    case Node::Neg: return -eval(*n.kids[0], vars);
    case Node::Add: return eval(*n.kids[0], vars) + eval(*n.kids[1], vars);
    case Node::Sub: return eval(*n.kids[0], vars) - eval(*n.kids[1], vars);
    case Node::Mul: return eval(*n.kids[0], vars) * eval(*n.kids[1], vars);
    case Node::Div: return eval(*n.kids[0], vars) / eval(*n.kids[1], vars);
    case Node::Pow: return std::pow(eval(*n.kids[0], vars), eval(*n.kids[1], vars));
    case Node::Sin: return std::sin(eval(*n.kids[0], vars));
    case Node::Cos: return std::cos(eval(*n.kids[0], vars));
    case Node::Exp: return std::exp(eval(*n.kids[0], vars));
    case Node::Abs: return std::abs(eval(*n.kids[0], vars));
    case Node::Min: return std::min(eval(*n.kids[0], vars), eval(*n.kids[1], vars));
    case Node::Max: return std::max(eval(*n.kids[0], vars), eval(*n.kids[1], vars));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view source, int dim) {
  Expression e;
  Parser parser(source, dim);
  e.root_ = parser.parse_all(e.used_);
  e.source_ = std::string(source);
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  auto n = std::make_shared<Node>();
  n->value = value;
  e.root_ = n;
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  e.source_.assign(buf, end);
  return e;
}

double Expression::operator()(const Vars& vars) const { return eval(*root_, vars); }

bool Expression::state_dependent() const {
  return uses(Eta) || uses(P1) || uses(P2) || uses(P3);
}

}  // namespace dmpfem
