#include "ghostspinor/fieldexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>
#include <variant>

namespace ghostspinor {

namespace detail {

enum class BinOp { Add, Sub, Mul, Div };
enum class Func { Exp, Sin, Cos, Cosh, Sinh };
enum class NamedConst { Pi, E };

using NodePtr = std::shared_ptr<const ExprNode>;

struct Coord {
  int axis;
};
struct Literal {
  double value;
};
struct Constant {
  NamedConst which;
};
struct Param {
  std::string name;
};
struct Neg {
  NodePtr arg;
};
struct Binary {
  BinOp op;
  NodePtr lhs, rhs;
};
struct PowInt {
  NodePtr base;
  int exponent;
};
struct Call {
  Func fn;
  NodePtr arg;
};

struct ExprNode {
  std::variant<Coord, Literal, Constant, Param, Neg, Binary, PowInt, Call> v;
};

namespace {

NodePtr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

NodePtr literal(double v) { return make({Literal{v}}); }

bool is_literal(const NodePtr& n, double v) {
  const auto* l = std::get_if<Literal>(&n->v);
  return l != nullptr && l->value == v;
}

// Smart constructors fold only zero/one identities so derivative trees stay
// readable without pretending to be a CAS.
NodePtr mk_add(NodePtr a, NodePtr b) {
  if (is_literal(a, 0.0)) return b;
  if (is_literal(b, 0.0)) return a;
  return make({Binary{BinOp::Add, std::move(a), std::move(b)}});
}

NodePtr mk_neg(NodePtr a) {
  if (is_literal(a, 0.0)) return a;
  // fold literals so printed forms like "-1" reparse to the same node
  if (const auto* l = std::get_if<Literal>(&a->v)) return literal(-l->value);
  return make({Neg{std::move(a)}});
}

NodePtr mk_sub(NodePtr a, NodePtr b) {
  if (is_literal(b, 0.0)) return a;
  if (is_literal(a, 0.0)) return mk_neg(std::move(b));
  return make({Binary{BinOp::Sub, std::move(a), std::move(b)}});
}

NodePtr mk_mul(NodePtr a, NodePtr b) {
  if (is_literal(a, 0.0) || is_literal(b, 0.0)) return literal(0.0);
  if (is_literal(a, 1.0)) return b;
  if (is_literal(b, 1.0)) return a;
  return make({Binary{BinOp::Mul, std::move(a), std::move(b)}});
}

NodePtr mk_div(NodePtr a, NodePtr b) {
  if (is_literal(a, 0.0)) return a;
  if (is_literal(b, 1.0)) return a;
  return make({Binary{BinOp::Div, std::move(a), std::move(b)}});
}

NodePtr mk_pow(NodePtr base, int exponent) {
  if (exponent == 0) return literal(1.0);
  if (exponent == 1) return base;
  return make({PowInt{std::move(base), exponent}});
}

NodePtr mk_call(Func fn, NodePtr arg) { return make({Call{fn, std::move(arg)}}); }

double pow_by_squaring(double base, int exponent) {
  bool invert = exponent < 0;
  unsigned long long n = invert ? -static_cast<long long>(exponent) : exponent;
  double result = 1.0;
  double factor = base;
  while (n > 0) {
    if (n & 1ULL) result *= factor;
    factor *= factor;
    n >>= 1ULL;
  }
  return invert ? 1.0 / result : result;
}

double eval_node(const ExprNode& n, const SpacetimePoint& p, const ParamBindings& b) {
  struct Visitor {
    const SpacetimePoint& p;
    const ParamBindings& b;

    double operator()(const Coord& c) const { return p[c.axis]; }
    double operator()(const Literal& l) const { return l.value; }
    double operator()(const Constant& c) const {
      return c.which == NamedConst::Pi ? std::numbers::pi : std::numbers::e;
    }
    double operator()(const Param& pr) const {
      auto it = b.find(pr.name);
      if (it == b.end()) throw EvalError("unbound parameter '" + pr.name + "'");
      return it->second;
    }
    double operator()(const Neg& u) const { return -eval_node(*u.arg, p, b); }
    double operator()(const Binary& bin) const {
      double l = eval_node(*bin.lhs, p, b);
      double r = eval_node(*bin.rhs, p, b);
      switch (bin.op) {
        case BinOp::Add: return l + r;
        case BinOp::Sub: return l - r;
        case BinOp::Mul: return l * r;
        case BinOp::Div: return l / r;
      }
      return 0.0;
    }
    double operator()(const PowInt& pw) const {
      return pow_by_squaring(eval_node(*pw.base, p, b), pw.exponent);
    }
    double operator()(const Call& c) const {
      double a = eval_node(*c.arg, p, b);
      switch (c.fn) {
        case Func::Exp: return std::exp(a);
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Cosh: return std::cosh(a);
        case Func::Sinh: return std::sinh(a);
      }
      return 0.0;
    }
  };
  return std::visit(Visitor{p, b}, n.v);
}

NodePtr diff_node(const NodePtr& n, int axis) {
  struct Visitor {
    const NodePtr& self;
    int axis;

    NodePtr operator()(const Coord& c) const { return literal(c.axis == axis ? 1.0 : 0.0); }
    NodePtr operator()(const Literal&) const { return literal(0.0); }
    NodePtr operator()(const Constant&) const { return literal(0.0); }
    NodePtr operator()(const Param&) const { return literal(0.0); }
    NodePtr operator()(const Neg& u) const { return mk_neg(diff_node(u.arg, axis)); }
    NodePtr operator()(const Binary& b) const {
      NodePtr dl = diff_node(b.lhs, axis);
      NodePtr dr = diff_node(b.rhs, axis);
      switch (b.op) {
        case BinOp::Add: return mk_add(dl, dr);
        case BinOp::Sub: return mk_sub(dl, dr);
        case BinOp::Mul: return mk_add(mk_mul(dl, b.rhs), mk_mul(b.lhs, dr));
        case BinOp::Div:
          return mk_div(mk_sub(mk_mul(dl, b.rhs), mk_mul(b.lhs, dr)), mk_pow(b.rhs, 2));
      }
      return literal(0.0);
    }
    NodePtr operator()(const PowInt& pw) const {
      // d/dx base^n = n base^(n-1) base'
      return mk_mul(mk_mul(literal(static_cast<double>(pw.exponent)),
                           mk_pow(pw.base, pw.exponent - 1)),
                    diff_node(pw.base, axis));
    }
    NodePtr operator()(const Call& c) const {
      NodePtr da = diff_node(c.arg, axis);
      NodePtr outer;
      switch (c.fn) {
        case Func::Exp: outer = self; break;
        case Func::Sin: outer = mk_call(Func::Cos, c.arg); break;
        case Func::Cos: outer = mk_neg(mk_call(Func::Sin, c.arg)); break;
        case Func::Cosh: outer = mk_call(Func::Sinh, c.arg); break;
        case Func::Sinh: outer = mk_call(Func::Cosh, c.arg); break;
      }
      return mk_mul(outer, da);
    }
  };
  return std::visit(Visitor{n, axis}, n->v);
}

// Precedence levels for printing: additive 1, multiplicative 2, unary minus 3,
// power 4, atoms 5.
int precedence(const ExprNode& n) {
  struct Visitor {
    int operator()(const Coord&) const { return 5; }
    int operator()(const Literal& l) const { return std::signbit(l.value) ? 3 : 5; }
    int operator()(const Constant&) const { return 5; }
    int operator()(const Param&) const { return 5; }
    int operator()(const Neg&) const { return 3; }
    int operator()(const Binary& b) const {
      return (b.op == BinOp::Add || b.op == BinOp::Sub) ? 1 : 2;
    }
    int operator()(const PowInt&) const { return 4; }
    int operator()(const Call&) const { return 5; }
  };
  return std::visit(Visitor{}, n.v);
}

std::string format_double(double v) {
  std::array<char, 40> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void print_node(const ExprNode& n, std::string& out);

void print_child(const NodePtr& child, int parent_prec, bool tighten, std::string& out) {
  bool parens = precedence(*child) < parent_prec + (tighten ? 1 : 0);
  if (parens) out += '(';
  print_node(*child, out);
  if (parens) out += ')';
}

void print_node(const ExprNode& n, std::string& out) {
  struct Visitor {
    std::string& out;

    void operator()(const Coord& c) const { out += 'x'; out += static_cast<char>('0' + c.axis); }
    void operator()(const Literal& l) const { out += format_double(l.value); }
    void operator()(const Constant& c) const { out += (c.which == NamedConst::Pi) ? "pi" : "e"; }
    void operator()(const Param& p) const { out += p.name; }
    void operator()(const Neg& u) const {
      out += '-';
      print_child(u.arg, 3, false, out);
    }
    void operator()(const Binary& b) const {
      int prec = (b.op == BinOp::Add || b.op == BinOp::Sub) ? 1 : 2;
      print_child(b.lhs, prec, false, out);
      switch (b.op) {
        case BinOp::Add: out += " + "; break;
        case BinOp::Sub: out += " - "; break;
        case BinOp::Mul: out += "*"; break;
        case BinOp::Div: out += "/"; break;
      }
      // left-associative: right child at equal precedence needs parens
      print_child(b.rhs, prec, true, out);
    }
    void operator()(const PowInt& p) const {
      print_child(p.base, 4, true, out);
      out += '^';
      if (p.exponent < 0) {
        out += '(';
        out += std::to_string(p.exponent);
        out += ')';
      } else {
        out += std::to_string(p.exponent);
      }
    }
    void operator()(const Call& c) const {
      switch (c.fn) {
        case Func::Exp: out += "exp"; break;
        case Func::Sin: out += "sin"; break;
        case Func::Cos: out += "cos"; break;
        case Func::Cosh: out += "cosh"; break;
        case Func::Sinh: out += "sinh"; break;
      }
      out += '(';
      print_node(*c.arg, out);
      out += ')';
    }
  };
  std::visit(Visitor{out}, n.v);
}

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (a.v.index() != b.v.index()) return false;
  struct Visitor {
    const ExprNode& other;

    bool operator()(const Coord& c) const { return std::get<Coord>(other.v).axis == c.axis; }
    bool operator()(const Literal& l) const { return std::get<Literal>(other.v).value == l.value; }
    bool operator()(const Constant& c) const { return std::get<Constant>(other.v).which == c.which; }
    bool operator()(const Param& p) const { return std::get<Param>(other.v).name == p.name; }
    bool operator()(const Neg& u) const { return nodes_equal(*u.arg, *std::get<Neg>(other.v).arg); }
    bool operator()(const Binary& b) const {
      const auto& o = std::get<Binary>(other.v);
      return b.op == o.op && nodes_equal(*b.lhs, *o.lhs) && nodes_equal(*b.rhs, *o.rhs);
    }
    bool operator()(const PowInt& p) const {
      const auto& o = std::get<PowInt>(other.v);
      return p.exponent == o.exponent && nodes_equal(*p.base, *o.base);
    }
    bool operator()(const Call& c) const {
      const auto& o = std::get<Call>(other.v);
      return c.fn == o.fn && nodes_equal(*c.arg, *o.arg);
    }
  };
  return std::visit(Visitor{b}, a.v);
}

NodePtr substitute_node(const NodePtr& n, const std::string& name, const NodePtr& replacement) {
  struct Visitor {
    const NodePtr& self;
    const std::string& name;
    const NodePtr& replacement;

    NodePtr operator()(const Coord&) const { return self; }
    NodePtr operator()(const Literal&) const { return self; }
    NodePtr operator()(const Constant&) const { return self; }
    NodePtr operator()(const Param& p) const { return p.name == name ? replacement : self; }
    NodePtr operator()(const Neg& u) const {
      return make({Neg{substitute_node(u.arg, name, replacement)}});
    }
    NodePtr operator()(const Binary& b) const {
      return make({Binary{b.op, substitute_node(b.lhs, name, replacement),
                          substitute_node(b.rhs, name, replacement)}});
    }
    NodePtr operator()(const PowInt& p) const {
      return make({PowInt{substitute_node(p.base, name, replacement), p.exponent}});
    }
    NodePtr operator()(const Call& c) const {
      return make({Call{c.fn, substitute_node(c.arg, name, replacement)}});
    }
  };
  return std::visit(Visitor{n, name, replacement}, n->v);
}

}  // namespace
}  // namespace detail

using detail::NodePtr;

namespace {

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eof() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  char raw_peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  std::size_t pos() {
    skip_ws();
    return pos_;
  }

  void advance() { ++pos_; }

  bool consume(char c) {
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  std::string read_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // Double literal: digits, optional fraction, optional exponent. The 'e'
  // of an exponent is taken only when followed by digits, so "2*e" still
  // refers to the constant.
  double read_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc{} || res.ptr != text_.data() + pos_)
      throw ParseError("malformed number", start);
    return value;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  ScalarExpr run() {
    NodePtr root = parse_expr();
    if (!lex_.eof()) throw ParseError("unexpected trailing input", lex_.pos());
    return ScalarExpr(std::move(root));
  }

 private:
  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      if (lex_.consume('+'))
        lhs = detail::make({detail::Binary{detail::BinOp::Add, lhs, parse_term()}});
      else if (lex_.consume('-'))
        lhs = detail::make({detail::Binary{detail::BinOp::Sub, lhs, parse_term()}});
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (lex_.consume('*'))
        lhs = detail::make({detail::Binary{detail::BinOp::Mul, lhs, parse_unary()}});
      else if (lex_.consume('/'))
        lhs = detail::make({detail::Binary{detail::BinOp::Div, lhs, parse_unary()}});
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (lex_.consume('-')) {
      NodePtr inner = parse_unary();
      // Fold a negated literal so printed values like "-3" reparse to the
      // same node, keeping parse/print round trips structurally stable.
      if (const auto* l = std::get_if<detail::Literal>(&inner->v))
        return detail::literal(-l->value);
      return detail::make({detail::Neg{std::move(inner)}});
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (lex_.consume('^')) {
      int exponent = parse_exponent();
      return detail::make({detail::PowInt{std::move(base), exponent}});
    }
    return base;
  }

  int parse_exponent() {
    bool parens = lex_.consume('(');
    bool negative = lex_.consume('-');
    std::size_t at = lex_.pos();  // skips leading whitespace; digits then contiguous
    if (!std::isdigit(static_cast<unsigned char>(lex_.raw_peek())))
      throw ParseError("expected integer exponent", at);
    long value = 0;
    while (std::isdigit(static_cast<unsigned char>(lex_.raw_peek()))) {
      value = value * 10 + (lex_.raw_peek() - '0');
      if (value > 1000) throw ParseError("exponent too large", at);
      lex_.advance();
    }
    if (parens && !lex_.consume(')')) throw ParseError("expected ')'", lex_.pos());
    return static_cast<int>(negative ? -value : value);
  }

  NodePtr parse_atom() {
    std::size_t at = lex_.pos();
    char c = lex_.peek();
    if (c == '(') {
      lex_.advance();
      NodePtr inner = parse_expr();
      if (!lex_.consume(')')) throw ParseError("expected ')'", lex_.pos());
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return detail::literal(lex_.read_number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = lex_.read_identifier();
      if (name.size() == 2 && name[0] == 'x' && name[1] >= '0' && name[1] <= '3')
        return detail::make({detail::Coord{name[1] - '0'}});
      if (name == "pi") return detail::make({detail::Constant{detail::NamedConst::Pi}});
      if (name == "e") return detail::make({detail::Constant{detail::NamedConst::E}});
      auto fn = function_by_name(name);
      if (lex_.peek() == '(') {
        if (!fn) throw ParseError("unknown function '" + name + "'", at);
        lex_.advance();
        NodePtr arg = parse_expr();
        if (!lex_.consume(')')) throw ParseError("expected ')'", lex_.pos());
        return detail::mk_call(*fn, std::move(arg));
      }
      if (fn) throw ParseError("expected '(' after function '" + name + "'", lex_.pos());
      return detail::make({detail::Param{std::move(name)}});
    }
    if (c == '\0') throw ParseError("unexpected end of input", at);
    throw ParseError(std::string("unexpected character '") + c + "'", at);
  }

  static std::optional<detail::Func> function_by_name(const std::string& name) {
    if (name == "exp") return detail::Func::Exp;
    if (name == "sin") return detail::Func::Sin;
    if (name == "cos") return detail::Func::Cos;
    if (name == "cosh") return detail::Func::Cosh;
    if (name == "sinh") return detail::Func::Sinh;
    return std::nullopt;
  }

  Lexer lex_;
};

ScalarExpr parse(const std::string& text) { return Parser(text).run(); }

double ScalarExpr::eval(const SpacetimePoint& p, const ParamBindings& b) const {
  if (!root_) throw EvalError("empty expression");
  double v = detail::eval_node(*root_, p, b);
  if (!std::isfinite(v)) throw EvalError("expression evaluated to a non-finite value");
  return v;
}

ScalarExpr ScalarExpr::derivative(int axis) const {
  if (axis < 0 || axis > 3) throw std::out_of_range("derivative axis must be 0..3");
  if (!root_) throw EvalError("empty expression");
  return ScalarExpr(detail::diff_node(root_, axis));
}

std::string ScalarExpr::str() const {
  if (!root_) return "";
  std::string out;
  detail::print_node(*root_, out);
  return out;
}

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b) {
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return detail::nodes_equal(*a.root_, *b.root_);
}

ScalarExpr substitute_param(const ScalarExpr& e, const std::string& name,
                            const ScalarExpr& replacement) {
  if (!e.root_ || !replacement.root_) throw EvalError("empty expression");
  return ScalarExpr(detail::substitute_node(e.root_, name, replacement.root_));
}

ScalarExpr lit(double value) { return ScalarExpr(detail::literal(value)); }
ScalarExpr coord(int axis) {
  if (axis < 0 || axis > 3) throw std::out_of_range("coordinate axis must be 0..3");
  return ScalarExpr(detail::make({detail::Coord{axis}}));
}
ScalarExpr param(std::string name) {
  return ScalarExpr(detail::make({detail::Param{std::move(name)}}));
}
ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(detail::make({detail::Binary{detail::BinOp::Add, a.root_, b.root_}}));
}
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(detail::make({detail::Binary{detail::BinOp::Sub, a.root_, b.root_}}));
}
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(detail::make({detail::Binary{detail::BinOp::Mul, a.root_, b.root_}}));
}
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(detail::make({detail::Binary{detail::BinOp::Div, a.root_, b.root_}}));
}
ScalarExpr operator-(const ScalarExpr& a) { return ScalarExpr(detail::make({detail::Neg{a.root_}})); }
ScalarExpr pow_int(const ScalarExpr& base, int exponent) {
  return ScalarExpr(detail::make({detail::PowInt{base.root_, exponent}}));
}
ScalarExpr exp(const ScalarExpr& a) { return ScalarExpr(detail::mk_call(detail::Func::Exp, a.root_)); }
ScalarExpr sin(const ScalarExpr& a) { return ScalarExpr(detail::mk_call(detail::Func::Sin, a.root_)); }
ScalarExpr cos(const ScalarExpr& a) { return ScalarExpr(detail::mk_call(detail::Func::Cos, a.root_)); }
ScalarExpr cosh(const ScalarExpr& a) { return ScalarExpr(detail::mk_call(detail::Func::Cosh, a.root_)); }
ScalarExpr sinh(const ScalarExpr& a) { return ScalarExpr(detail::mk_call(detail::Func::Sinh, a.root_)); }

double fd_derivative(const ScalarExpr& expr, const SpacetimePoint& p, int axis, double h,
                     const ParamBindings& b) {
  if (!(h > 0.0)) throw std::invalid_argument("fd step must be positive");
  SpacetimePoint lo = p, hi = p;
  hi[axis] += h;
  lo[axis] -= h;
  return (expr.eval(hi, b) - expr.eval(lo, b)) / (2.0 * h);
}

double default_fd_step(double coordinate) { return 1e-5 * std::max(1.0, std::abs(coordinate)); }

}  // namespace ghostspinor
