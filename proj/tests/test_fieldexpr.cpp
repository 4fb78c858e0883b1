#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ghostspinor/fieldexpr.hpp"

using namespace ghostspinor;

namespace {

SpacetimePoint pt(double a, double b, double c, double d) { return {a, b, c, d}; }

std::size_t offset_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected ParseError for: ", text);
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_CASE("parse and eval basics") {
  CHECK(parse("x0 + x3").eval(pt(1, 0, 0, 2)) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(parse("sin(pi/2)").eval({}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(parse("exp(kappa*x2)").eval(pt(5, -2, 0, 7), {{"kappa", 3.25}}) == 1.0);
  CHECK(parse("exp(kappa*x2)").eval(pt(0, 0, 1, 0), {{"kappa", 2.0}}) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-15));
  CHECK(parse("2*e").eval({}) == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-15));
  CHECK(parse("1.5e2").eval({}) == 150.0);
  CHECK(parse(".5 + 2.").eval({}) == 2.5);
  CHECK(parse("cosh(x1)^2 - sinh(x1)^2").eval(pt(0, 0.7, 0, 0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("precedence and associativity") {
  CHECK(parse("2 - 3 - 4").eval({}) == -5.0);
  CHECK(parse("12 / 3 / 2").eval({}) == 2.0);
  CHECK(parse("2 + 3*4").eval({}) == 14.0);
  CHECK(parse("-3^2").eval({}) == -9.0);        // unary minus binds looser than ^
  CHECK(parse("(-3)^2").eval({}) == 9.0);
  CHECK(parse("2*x0^2").eval(pt(3, 0, 0, 0)) == 18.0);
  CHECK(parse("x0^(-2)").eval(pt(2, 0, 0, 0)) == 0.25);
  CHECK(parse("x0^0").eval(pt(0, 0, 0, 0)) == 1.0);
  CHECK(parse("--x1").eval(pt(0, 4, 0, 0)) == 4.0);
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK(offset_of("exp(") == 4);
  CHECK(offset_of("(x0 + x1") == 8);
  CHECK(offset_of("x0 +") == 4);
  CHECK(offset_of("x0 x1") == 3);     // trailing input
  CHECK(offset_of("x0 ^ x1") == 5);   // exponent must be an integer literal
  CHECK(offset_of("foo(x0)") == 0);   // unknown function
  CHECK(offset_of("sin") > 0);        // reserved name needs an argument list
  CHECK(offset_of("x0 ? 1") == 3);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("x0^100000") == 3);
  CHECK_THROWS_AS(parse("exp("), ParseError);
}

TEST_CASE("eval errors") {
  CHECK_THROWS_AS(parse("kappa*x0").eval(pt(1, 0, 0, 0)), EvalError);  // unbound
  CHECK_THROWS_AS(parse("1/x0").eval(pt(0, 0, 0, 0)), EvalError);     // non-finite
  CHECK_THROWS_AS(parse("exp(x0)").eval(pt(1e4, 0, 0, 0)), EvalError);
  CHECK_THROWS_AS(ScalarExpr{}.eval({}), EvalError);
  CHECK(ScalarExpr{}.empty());
  CHECK_FALSE(parse("x0").empty());
  CHECK_THROWS_AS(parse("x0").derivative(4), std::out_of_range);
  CHECK_THROWS_AS(coord(5), std::out_of_range);
}

TEST_CASE("symbolic derivative on simple closed forms") {
  auto e = parse("exp(kappa*x2)");
  ParamBindings b{{"kappa", 1.7}};
  SpacetimePoint p = pt(0.3, -0.2, 0.9, 1.1);
  CHECK(e.derivative(2).eval(p, b) ==
        doctest::Approx(1.7 * std::exp(1.7 * 0.9)).epsilon(1e-14));
  CHECK(e.derivative(1).str() == "0");
  CHECK(parse("x0+x3").derivative(0).str() == "1");
  CHECK(parse("x0^(-2)").derivative(0).eval(pt(2, 0, 0, 0)) ==
        doctest::Approx(-2.0 / 8.0).epsilon(1e-15));
  CHECK(parse("x1/x3").derivative(3).eval(pt(0, 6, 0, 2)) ==
        doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("fd_derivative examples") {
  CHECK(fd_derivative(parse("x0^2"), pt(3, 0, 0, 0), 0, 1e-4) ==
        doctest::Approx(6.0).epsilon(1e-8));
  CHECK(std::abs(fd_derivative(parse("exp(kappa*x2)"), pt(0, 0, 0, 0), 2, 1e-4,
                               {{"kappa", 1.0}}) -
                 1.0) <= 1e-8);
  CHECK(std::abs(fd_derivative(parse("pi"), pt(0.4, 1, -2, 3), 1, 1e-4)) <= 1e-12);
  CHECK_THROWS_AS(fd_derivative(parse("x0"), {}, 0, 0.0), std::invalid_argument);
  CHECK(default_fd_step(0.0) == 1e-5);
  CHECK(default_fd_step(-20.0) == doctest::Approx(2e-4).epsilon(1e-15));
}

namespace {

const std::vector<std::string> kCorpus = {
    "exp(kappa*x2)",
    "sin(q*x0)*cosh(x1)",
    "x0^3 - 2*x1*x3",
    "exp(x3^2)*cos(pi*x0)",
    "1/(2 + cos(x1))",
    "sinh(x0 - x3)/(1 + x2^2)",
    "kappa*x2 + q*(x0 + x3)",
    "-(x0 + x1)*x2^(-2) + e",
    "cos(x0)^4",
};

const ParamBindings kBindings{{"kappa", 0.7}, {"q", 1.3}};

SpacetimePoint random_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  SpacetimePoint p{u(rng), u(rng), u(rng), u(rng)};
  p.x2 = 1.0 + 0.25 * p.x2;  // keep x2^(-2) away from the pole
  return p;
}

}  // namespace

TEST_CASE("fd_check: central differences converge at second order") {
  std::mt19937 rng(1234);
  const double C = 2e3;  // bounds |f'''|/6 over the corpus box with margin
  for (const auto& text : kCorpus) {
    ScalarExpr e = parse(text);
    std::array<ScalarExpr, 4> d{e.derivative(0), e.derivative(1), e.derivative(2),
                                e.derivative(3)};
    for (int trial = 0; trial < 8; ++trial) {
      SpacetimePoint p = random_point(rng);
      for (int axis = 0; axis < 4; ++axis) {
        double exact = d[axis].eval(p, kBindings);
        for (double h : {1e-3, 1e-4, 1e-5}) {
          double err = std::abs(fd_derivative(e, p, axis, h, kBindings) - exact);
          CAPTURE(text); CAPTURE(axis); CAPTURE(h);
          CHECK(err <= C * h * h);
        }
      }
    }
  }
}

TEST_CASE("fd_check: error ratio between steps is ~100 where curvature dominates") {
  ScalarExpr e = parse("exp(2*x3)");
  ScalarExpr d = e.derivative(3);
  SpacetimePoint p = pt(0, 0, 0, 1.0);
  double exact = d.eval(p);
  double e3 = std::abs(fd_derivative(e, p, 3, 1e-3) - exact);
  double e4 = std::abs(fd_derivative(e, p, 3, 1e-4) - exact);
  CHECK(e3 / e4 > 50.0);
  CHECK(e3 / e4 < 200.0);
}

TEST_CASE("print/parse round trip is structurally stable") {
  for (const auto& text : kCorpus) {
    ScalarExpr first = parse(text);
    ScalarExpr second = parse(first.str());
    CAPTURE(text);
    CHECK(structurally_equal(first, second));
    for (int axis = 0; axis < 4; ++axis) {
      ScalarExpr d = first.derivative(axis);
      CHECK(structurally_equal(d, parse(d.str())));
    }
  }
  for (const char* tricky :
       {"x0 - (x1 - x2)", "x0/(x1*x2)", "(x0^2)^3", "-x0^2", "sin(x1)^4",
        "-(x0*x1)", "2 - -3", "x0*-x1", "1e-12*x3"}) {
    ScalarExpr first = parse(tricky);
    CAPTURE(tricky);
    CHECK(structurally_equal(first, parse(first.str())));
    CHECK(first.eval(pt(1.5, 2.5, 3.5, 4.5)) ==
          doctest::Approx(parse(first.str()).eval(pt(1.5, 2.5, 3.5, 4.5)))
              .epsilon(1e-15));
  }
}

TEST_CASE("differentiation is linear") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  for (std::size_t i = 0; i + 1 < kCorpus.size(); ++i) {
    ScalarExpr e1 = parse(kCorpus[i]);
    ScalarExpr e2 = parse(kCorpus[i + 1]);
    double a = coeff(rng);
    ScalarExpr lhs = (lit(a) * e1 + e2).derivative(0);
    ScalarExpr rhs = lit(a) * e1.derivative(0) + e2.derivative(0);
    for (int trial = 0; trial < 4; ++trial) {
      SpacetimePoint p = random_point(rng);
      double l = lhs.eval(p, kBindings);
      double r = rhs.eval(p, kBindings);
      CHECK(std::abs(l - r) <= 1e-12 * std::max(1.0, std::abs(r)));
    }
  }
}

TEST_CASE("substitute_param splices an expression in place of a parameter") {
  ScalarExpr shifted = substitute_param(parse("kappa*s"), "s", parse("x0+x3"));
  CHECK(structurally_equal(shifted, parse("kappa*(x0+x3)")));
  ScalarExpr profile = substitute_param(parse("exp(s^2)*cos(s)"), "s", parse("x0+x3"));
  SpacetimePoint p = pt(0.4, 9, -9, 0.3);
  double s = 0.7;
  CHECK(profile.eval(p) == doctest::Approx(std::exp(s * s) * std::cos(s)).epsilon(1e-14));
  // untouched parameters survive the substitution
  ScalarExpr keep = substitute_param(parse("a*s + b"), "s", lit(2.0));
  CHECK(keep.eval({}, {{"a", 3.0}, {"b", 1.0}}) == 7.0);
}

TEST_CASE("combinators build the same trees the parser does") {
  CHECK(structurally_equal(coord(0) + coord(3), parse("x0 + x3")));
  CHECK(structurally_equal(exp(param("kappa") * coord(2)), parse("exp(kappa*x2)")));
  CHECK(structurally_equal(pow_int(sin(coord(1)), 4), parse("sin(x1)^4")));
  CHECK(structurally_equal(-(coord(0) / lit(2.0)), parse("-(x0/2)")));
  CHECK(structurally_equal(cosh(coord(2)) - sinh(coord(2)), parse("cosh(x2) - sinh(x2)")));
  CHECK(structurally_equal(cos(lit(-0.5)), parse("cos(-0.5)")));
}
