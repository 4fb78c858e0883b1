#ifndef GHOSTSPINOR_FIELDEXPR_HPP
#define GHOSTSPINOR_FIELDEXPR_HPP

// Real scalar functions of the spacetime coordinates: parsing, evaluation
// and exact symbolic differentiation.
//
// Grammar (standard infix, precedence ^ > unary- > * / > + -, left assoc):
//
//   expr     := term (('+'|'-') term)*
//   term     := unary (('*'|'/') unary)*
//   unary    := '-' unary | power
//   power    := atom ('^' exponent)?        exponent is an integer literal,
//   exponent := ['-'] int | '(' ['-'] int ')'
//   atom     := number | ident | ident '(' expr ')' | '(' expr ')'
//
// Identifiers: x0..x3 are the coordinates; pi and e are constants; exp, sin,
// cos, cosh, sinh are the functions; anything else names a parameter that
// must be bound before evaluation.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace ghostspinor {

struct SpacetimePoint {
  double x0 = 0.0, x1 = 0.0, x2 = 0.0, x3 = 0.0;

  double operator[](int axis) const {
    switch (axis) {
      case 0: return x0;
      case 1: return x1;
      case 2: return x2;
      case 3: return x3;
    }
    throw std::out_of_range("coordinate axis must be 0..3");
  }
  double& operator[](int axis) {
    switch (axis) {
      case 0: return x0;
      case 1: return x1;
      case 2: return x2;
      case 3: return x3;
    }
    throw std::out_of_range("coordinate axis must be 0..3");
  }
};

using ParamBindings = std::map<std::string, double>;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
struct ExprNode;
}

class ScalarExpr {
 public:
  ScalarExpr() = default;  // empty handle; evaluating it throws

  double eval(const SpacetimePoint& p, const ParamBindings& b = {}) const;

  // Exact symbolic derivative with respect to coordinate axis 0..3.
  // Only literal zero/one products are folded; correctness is by evaluation.
  ScalarExpr derivative(int axis) const;

  // Parenthesized-as-needed text form; reparses to a structurally equal AST.
  std::string str() const;

  bool empty() const { return root_ == nullptr; }

  friend bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr substitute_param(const ScalarExpr& e, const std::string& name,
                                     const ScalarExpr& replacement);

  friend ScalarExpr lit(double value);
  friend ScalarExpr coord(int axis);
  friend ScalarExpr param(std::string name);
  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a);
  friend ScalarExpr pow_int(const ScalarExpr& base, int exponent);
  friend ScalarExpr exp(const ScalarExpr& a);
  friend ScalarExpr sin(const ScalarExpr& a);
  friend ScalarExpr cos(const ScalarExpr& a);
  friend ScalarExpr cosh(const ScalarExpr& a);
  friend ScalarExpr sinh(const ScalarExpr& a);

  friend class Parser;

 private:
  explicit ScalarExpr(std::shared_ptr<const detail::ExprNode> root) : root_(std::move(root)) {}
  std::shared_ptr<const detail::ExprNode> root_;
};

ScalarExpr parse(const std::string& text);

// Combinators mirroring the grammar, for building ASTs in code.
ScalarExpr lit(double value);
ScalarExpr coord(int axis);
ScalarExpr param(std::string name);
ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a);
ScalarExpr pow_int(const ScalarExpr& base, int exponent);
ScalarExpr exp(const ScalarExpr& a);
ScalarExpr sin(const ScalarExpr& a);
ScalarExpr cos(const ScalarExpr& a);
ScalarExpr cosh(const ScalarExpr& a);
ScalarExpr sinh(const ScalarExpr& a);

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b);

// Replace every occurrence of the named parameter by an expression.
ScalarExpr substitute_param(const ScalarExpr& e, const std::string& name,
                            const ScalarExpr& replacement);

// Central difference (f(p + h e_axis) - f(p - h e_axis)) / 2h; the
// truncation-limited oracle for ScalarExpr::derivative.
double fd_derivative(const ScalarExpr& expr, const SpacetimePoint& p, int axis, double h,
                     const ParamBindings& b = {});

// Step used when callers do not sweep h themselves.
double default_fd_step(double coordinate);

}  // namespace ghostspinor

#endif
