#include "affinekit/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace affinekit {

struct Expression::Node {
  enum class Kind { Number, Pi, Var, Add, Sub, Mul, Div, Neg, Pow, Func } kind;
  Rational number;
  std::size_t var = 0;
  std::string func;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

const char* kFunctions[] = {"exp", "log", "sin", "cos", "sqrt", "abs"};

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::InvalidInput,
                "expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat("+")) lhs = make(Kind::Add, lhs, term());
      else if (eat("-")) lhs = make(Kind::Sub, lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      skip();
      if (s_.compare(pos_, 2, "**") == 0) return lhs;  // handled in power()
      if (eat("*")) lhs = make(Kind::Mul, lhs, unary());
      else if (eat("/")) lhs = make(Kind::Div, lhs, unary());
      else return lhs;
    }
  }
  NodePtr unary() {
    if (eat("-")) return make(Kind::Neg, unary());
    if (eat("+")) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (eat("^") || eat("**")) return make(Kind::Pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (eat("(")) {
      NodePtr e = expr();
      if (!eat(")")) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
        ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t p = pos_ + 1;
        if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
        if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
          pos_ = p;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
      }
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      n->number = parse_rational(s_.substr(start, pos_ - start));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) {
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::Var;
          n->var = i;
          return n;
        }
      for (const char* f : kFunctions)
        if (name == f) {
          if (!eat("(")) fail("function '" + name + "' needs '('");
          NodePtr arg = expr();
          if (!eat(")")) fail("missing ')'");
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::Func;
          n->func = name;
          n->a = arg;
          return n;
        }
      if (name == "pi") return make(Kind::Pi);
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

bool polynomial(const Expression::Node& n) {
  switch (n.kind) {
    case Kind::Number:
    case Kind::Var: return true;
    case Kind::Pi:
    case Kind::Func:
    case Kind::Div: return false;
    case Kind::Neg: return polynomial(*n.a);
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul: return polynomial(*n.a) && polynomial(*n.b);
    case Kind::Pow:
      return polynomial(*n.a) && n.b->kind == Kind::Number && n.b->number.get_den() == 1 &&
             n.b->number >= 0;
  }
  return false;
}

Rational exact(const Expression::Node& n, const std::vector<Rational>& x) {
  switch (n.kind) {
    case Kind::Number: return n.number;
    case Kind::Var: return x[n.var];
    case Kind::Neg: return -exact(*n.a, x);
    case Kind::Add: return exact(*n.a, x) + exact(*n.b, x);
    case Kind::Sub: return exact(*n.a, x) - exact(*n.b, x);
    case Kind::Mul: return exact(*n.a, x) * exact(*n.b, x);
    case Kind::Div: {
      const Rational d = exact(*n.b, x);
      require(d != 0, ErrorKind::InvalidInput, "division by zero in exact evaluation");
      return exact(*n.a, x) / d;
    }
    case Kind::Pow: {
      const Rational base = exact(*n.a, x), e = exact(*n.b, x);
      require(e.get_den() == 1 && e.get_num().fits_slong_p(), ErrorKind::InvalidInput,
              "non-integer power in exact evaluation");
      long k = e.get_num().get_si();
      require(k >= 0 || base != 0, ErrorKind::InvalidInput, "zero to a negative power");
      Rational r = 1, b = k >= 0 ? base : Rational(1 / base);
      for (k = std::labs(k); k > 0; --k) r *= b;
      return r;
    }
    case Kind::Pi:
    case Kind::Func: break;
  }
  throw Error(ErrorKind::InvalidInput, "transcendental term in exact evaluation");
}

// value and gradient together
struct Jet {
  double v = 0;
  std::vector<double> d;
};

Jet scaled(Jet j, double f, double v) {
  for (auto& x : j.d) x *= f;
  j.v = v;
  return j;
}

Jet jet(const Expression::Node& n, const std::vector<double>& x) {
  const std::size_t k = x.size();
  switch (n.kind) {
    case Kind::Number: return {n.number.get_d(), std::vector<double>(k, 0.0)};
    case Kind::Pi: return {std::numbers::pi, std::vector<double>(k, 0.0)};
    case Kind::Var: {
      Jet j{x[n.var], std::vector<double>(k, 0.0)};
      j.d[n.var] = 1;
      return j;
    }
    case Kind::Neg: {
      Jet a = jet(*n.a, x);
      return scaled(a, -1.0, -a.v);
    }
    case Kind::Add:
    case Kind::Sub: {
      Jet a = jet(*n.a, x), b = jet(*n.b, x);
      const double s = n.kind == Kind::Add ? 1.0 : -1.0;
      for (std::size_t i = 0; i < k; ++i) a.d[i] += s * b.d[i];
      a.v += s * b.v;
      return a;
    }
    case Kind::Mul: {
      Jet a = jet(*n.a, x), b = jet(*n.b, x);
      for (std::size_t i = 0; i < k; ++i) a.d[i] = a.d[i] * b.v + a.v * b.d[i];
      a.v *= b.v;
      return a;
    }
    case Kind::Div: {
      Jet a = jet(*n.a, x), b = jet(*n.b, x);
      for (std::size_t i = 0; i < k; ++i) a.d[i] = (a.d[i] * b.v - a.v * b.d[i]) / (b.v * b.v);
      a.v /= b.v;
      return a;
    }
    case Kind::Pow: {
      Jet a = jet(*n.a, x);
      if (n.b->kind == Kind::Number && n.b->number.get_den() == 1) {
        const double e = n.b->number.get_d();
        const double v = std::pow(a.v, e);
        return scaled(a, e == 0 ? 0.0 : e * std::pow(a.v, e - 1), v);
      }
      Jet b = jet(*n.b, x);
      const double v = std::pow(a.v, b.v);
      for (std::size_t i = 0; i < k; ++i)
        a.d[i] = v * (b.d[i] * std::log(a.v) + b.v * a.d[i] / a.v);
      a.v = v;
      return a;
    }
    case Kind::Func: {
      Jet a = jet(*n.a, x);
      const double u = a.v;
      if (n.func == "exp") return scaled(a, std::exp(u), std::exp(u));
      if (n.func == "log") return scaled(a, 1.0 / u, std::log(u));
      if (n.func == "sin") return scaled(a, std::cos(u), std::sin(u));
      if (n.func == "cos") return scaled(a, -std::sin(u), std::cos(u));
      if (n.func == "sqrt") return scaled(a, 0.5 / std::sqrt(u), std::sqrt(u));
      return scaled(a, u < 0 ? -1.0 : 1.0, std::fabs(u));
    }
  }
  return {};
}

double value(const Expression::Node& n, const std::vector<double>& x) {
  switch (n.kind) {
    case Kind::Number: return n.number.get_d();
    case Kind::Pi: return std::numbers::pi;
    case Kind::Var: return x[n.var];
    case Kind::Neg: return -value(*n.a, x);
    case Kind::Add: return value(*n.a, x) + value(*n.b, x);
    case Kind::Sub: return value(*n.a, x) - value(*n.b, x);
    case Kind::Mul: return value(*n.a, x) * value(*n.b, x);
    case Kind::Div: return value(*n.a, x) / value(*n.b, x);
    case Kind::Pow: return std::pow(value(*n.a, x), value(*n.b, x));
    case Kind::Func: {
      const double u = value(*n.a, x);
      if (n.func == "exp") return std::exp(u);
      if (n.func == "log") return std::log(u);
      if (n.func == "sin") return std::sin(u);
      if (n.func == "cos") return std::cos(u);
      if (n.func == "sqrt") return std::sqrt(u);
      return std::fabs(u);
    }
  }
  return 0;
}

}  // namespace

Expression::Expression() : root_(make(Kind::Number)), text_("0") {}

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  Expression e;
  e.root_ = Parser(text, variables).run();
  e.text_ = text;
  e.arity_ = variables.size();
  return e;
}

Expression Expression::constant(const Rational& q) {
  Expression e;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = q;
  e.root_ = n;
  e.text_ = affinekit::to_string(q);
  return e;
}

bool Expression::is_polynomial() const { return polynomial(*root_); }

Rational Expression::eval_exact(const std::vector<Rational>& x) const {
  require(x.size() == arity_, ErrorKind::DimMismatch, "expression arity");
  return exact(*root_, x);
}

double Expression::eval(const std::vector<double>& x) const {
  require(x.size() == arity_, ErrorKind::DimMismatch, "expression arity");
  return value(*root_, x);
}

double Expression::eval_gradient(const std::vector<double>& x, std::vector<double>& grad) const {
  require(x.size() == arity_, ErrorKind::DimMismatch, "expression arity");
  Jet j = jet(*root_, x);
  grad = std::move(j.d);
  return j.v;
}

}  // namespace affinekit
