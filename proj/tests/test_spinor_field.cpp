#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ghostspinor/spinor_field.hpp"
#include "support/fields.hpp"
#include "support/oracles.hpp"

using namespace ghostspinor;
using testsupport::lightlike_cartesian;
using testsupport::poly_in_s;

namespace {

SpacetimePoint random_point(std::mt19937& rng, double half_width = 1.0) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  return {u(rng), u(rng), u(rng), u(rng)};
}

double max_component_diff(const Bispinor& a, const Bispinor& b) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// travelling-phase wave: e^{kappa x2 + i(x0+x3)}; its current and tensor have
// closed forms frozen below
SpinorField travelling_wave(double kappa) {
  return SpinorField::lightlike(kappa, lit(0.0), param("s"));
}

// constant-phase wave: e^{kappa x2}, zero tensor, nonzero current
SpinorField constant_phase_wave(double kappa) {
  return SpinorField::lightlike(kappa, lit(0.0), lit(0.0));
}

SpinorField rest_wave() {
  return SpinorField::separable(
      Bispinor{1.0, 0.0, 0.0, 0.0},
      ComplexScalarField::exponential(lit(0.0), -(param("kappa") * coord(0))));
}

}  // namespace

TEST_CASE("field evaluation") {
  std::mt19937 rng(11);

  SpinorField constant = SpinorField::separable(
      Bispinor{1.0, 0.0, 0.0, 0.0}, ComplexScalarField::cartesian(lit(1.0), lit(0.0)));
  for (int t = 0; t < 5; ++t) {
    Bispinor v = constant.value(random_point(rng));
    CHECK(max_component_diff(v, Bispinor{1.0, 0.0, 0.0, 0.0}) == 0.0);
  }

  Bispinor at_origin = travelling_wave(1.0).value({});
  CHECK(max_component_diff(at_origin, Bispinor{1.0, 1.0, -1.0, 1.0}) == 0.0);

  SpinorField wave = travelling_wave(1.0);
  SpinorField minus = SpinorField::separable(
      -Bispinor{1.0, 1.0, -1.0, 1.0},
      ComplexScalarField::exponential(lit(1.0) * coord(2) + lit(0.0),
                                      coord(0) + coord(3)));
  SpinorField cancel = superpose({wave, minus});
  for (int t = 0; t < 5; ++t)
    CHECK(cancel.value(random_point(rng)).max_abs() <= 1e-15);

  SpinorField unbound = SpinorField::separable(
      Bispinor{1.0, 0.0, 0.0, 0.0}, ComplexScalarField::cartesian(param("a"), lit(0.0)));
  CHECK_THROWS_AS(unbound.value({}), EvalError);
  CHECK(unbound.value({}, {{"a", 2.5}})[0] == complexd(2.5, 0.0));

  SpinorField overflow = SpinorField::separable(
      Bispinor{1.0, 0.0, 0.0, 0.0}, ComplexScalarField::exponential(lit(1e4), lit(0.0)));
  CHECK_THROWS_AS(overflow.value({}), EvalError);

  CHECK_THROWS_AS(superpose({}), std::invalid_argument);
  CHECK_THROWS_AS(SpinorField::lightlike(0.0, lit(0.0), lit(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(SpinorField::lightlike(-1.0, lit(0.0), lit(0.0)), std::invalid_argument);
}

TEST_CASE("exact partial derivatives") {
  std::mt19937 rng(12);

  SpinorField linear = SpinorField::separable(
      Bispinor{1.0, 0.0, 0.0, 0.0}, ComplexScalarField::cartesian(coord(0), lit(0.0)));
  CHECK(max_component_diff(linear.partial(0, random_point(rng)),
                           Bispinor{1.0, 0.0, 0.0, 0.0}) == 0.0);

  Bispinor d2 = constant_phase_wave(2.0).partial(2, {});
  CHECK(max_component_diff(d2, Bispinor{2.0, 2.0, -2.0, 2.0}) <= 1e-15);

  // no dependence on x1 anywhere in the lightlike family
  SpinorField wavy = SpinorField::lightlike(0.7, poly_in_s({0.1, 0.0, 0.2}),
                                            poly_in_s({0.0, 0.8}));
  for (int t = 0; t < 5; ++t)
    CHECK(wavy.partial(1, random_point(rng)).max_abs() == 0.0);

  // FD consistency with second-order convergence on all variants
  SpinorField mixed = SpinorField::componentwise(
      {ComplexScalarField::cartesian(parse("sin(x0)*cosh(x1)"), parse("x3^2")),
       ComplexScalarField::exponential(parse("0.2*x2^2"), parse("x0 - x3")),
       ComplexScalarField::cartesian(parse("exp(0.5*x2)"), lit(0.0)),
       ComplexScalarField::cartesian(lit(0.0), parse("cos(x1)*x0"))});
  for (const SpinorField& field : {wavy, mixed}) {
    for (int t = 0; t < 4; ++t) {
      SpacetimePoint p = random_point(rng);
      for (int axis = 0; axis < 4; ++axis) {
        Bispinor exact = field.partial(axis, p);
        double e3 = max_component_diff(oracle::fd_partial(field, p, axis, 1e-3), exact);
        double e4 = max_component_diff(oracle::fd_partial(field, p, axis, 1e-4), exact);
        CHECK(e3 <= 200.0 * 1e-6);
        CHECK(e4 <= 200.0 * 1e-8 + 1e-11);
      }
    }
  }
}

TEST_CASE("free-equation residual") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> coeff(-0.5, 0.5);

  // arbitrary smooth profiles solve at the family mass
  for (int trial = 0; trial < 3; ++trial) {
    double kappa = 0.5 + 0.3 * trial;
    ScalarExpr f = poly_in_s({coeff(rng), coeff(rng), coeff(rng)});
    ScalarExpr g = poly_in_s({coeff(rng), coeff(rng)}) + lit(coeff(rng)) * sin(param("s"));
    SpinorField field = SpinorField::lightlike(kappa, f, g);
    for (int t = 0; t < 20; ++t) {
      SpacetimePoint p = random_point(rng);
      CHECK(dirac_residual(field, p, kappa).max_abs() <= 1e-10);
    }
  }

  // the general cartesian-profile family solves as well
  SpinorField general = lightlike_cartesian(
      0.9, poly_in_s({0.3, -0.4, 0.1}), poly_in_s({1.5, 0.2}) + lit(0.3) * cos(param("s")));
  for (int t = 0; t < 20; ++t)
    CHECK(dirac_residual(general, random_point(rng), 0.9).max_abs() <= 1e-10);

  // rest-frame wave: zero residual at its own mass, |R| = kappa at doubled mass
  SpinorField rest = rest_wave();
  ParamBindings b{{"kappa", 1.3}};
  for (int t = 0; t < 10; ++t) {
    SpacetimePoint p = random_point(rng);
    CHECK(dirac_residual(rest, p, 1.3, b).max_abs() <= 1e-13);
    CHECK(dirac_residual(rest, p, 2.6, b).max_abs() == doctest::Approx(1.3).epsilon(1e-12));
  }

  // FD oracle agrees to truncation accuracy
  SpinorField wave = travelling_wave(1.0);
  for (int t = 0; t < 5; ++t) {
    SpacetimePoint p = random_point(rng);
    Bispinor analytic = dirac_residual(wave, p, 1.0);
    Bispinor fd = oracle::residual_fd(wave, p, 1.0, 1e-4);
    CHECK(max_component_diff(analytic, fd) <= 1e-6);
  }

  CHECK_THROWS_AS(dirac_residual(wave, {}, 0.0), std::invalid_argument);
}

TEST_CASE("current") {
  std::mt19937 rng(14);
  const double kappa = 1.0;
  SpinorField wave = travelling_wave(kappa);

  for (int t = 0; t < 30; ++t) {
    SpacetimePoint p = random_point(rng);
    double envelope = 4.0 * std::exp(2.0 * kappa * p.x2);
    FourCurrent j = current(wave, p);
    CHECK(std::abs(j.j0 - envelope) <= 1e-10 * envelope);
    CHECK(std::abs(j.j1) <= 1e-10 * envelope);
    CHECK(std::abs(j.j2) <= 1e-10 * envelope);
    CHECK(std::abs(j.j3 + envelope) <= 1e-10 * envelope);
    auto direct = oracle::current_direct(wave, p);
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(j[k] - direct[static_cast<std::size_t>(k)]) <= 1e-12 * envelope);
  }

  SpinorField rest = rest_wave();
  ParamBindings b{{"kappa", 0.8}};
  for (int t = 0; t < 10; ++t) {
    FourCurrent j = current(rest, random_point(rng), b);
    CHECK(j.j0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(j.j1) <= 1e-14);
    CHECK(std::abs(j.j2) <= 1e-14);
    CHECK(std::abs(j.j3) <= 1e-14);
  }

  SpinorField zero = SpinorField::separable(
      Bispinor{}, ComplexScalarField::cartesian(lit(1.0), lit(0.0)));
  FourCurrent j0 = current(zero, {});
  CHECK(j0.j0 == 0.0);
  CHECK(j0.j3 == 0.0);

  // j0 is the squared amplitude, always
  SpinorField mixed = SpinorField::componentwise(
      {ComplexScalarField::cartesian(parse("x0"), parse("sin(x1)")),
       ComplexScalarField::exponential(parse("0.1*x2"), parse("x3")),
       ComplexScalarField::cartesian(lit(0.25), parse("x0*x3")),
       ComplexScalarField::cartesian(parse("cosh(x2)"), lit(0.0))});
  for (int t = 0; t < 10; ++t) {
    SpacetimePoint p = random_point(rng);
    double n2 = mixed.value(p).norm_squared();
    FourCurrent j = current(mixed, p);
    CHECK(j.j0 == doctest::Approx(n2).epsilon(1e-14));
    CHECK(j.j0 >= 0.0);
  }
}

TEST_CASE("energy-momentum tensor closed forms") {
  std::mt19937 rng(15);
  const double kappa = 1.0;

  SpinorField ghost = constant_phase_wave(kappa);
  for (int t = 0; t < 20; ++t)
    CHECK(energy_momentum(ghost, random_point(rng)).max_abs() <= 1e-12);

  // travelling wave: T_ik = -4 e^{2 kappa x2} on the (0,3)x(0,3) block, 0 elsewhere
  SpinorField wave = travelling_wave(kappa);
  for (int t = 0; t < 20; ++t) {
    SpacetimePoint p = random_point(rng);
    double envelope = 4.0 * std::exp(2.0 * kappa * p.x2);
    EnergyMomentumTensor T = energy_momentum(wave, p);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        double expected = ((i == 0 || i == 3) && (k == 0 || k == 3)) ? -envelope : 0.0;
        CHECK(std::abs(T(i, k) - expected) <= 1e-12 * envelope);
      }
    auto fd = oracle::tensor_fd(wave, p, 1e-4);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        CHECK(std::abs(T(i, k) - fd[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) <=
              1e-5 * std::max(1.0, envelope));
  }

  SpinorField rest = rest_wave();
  ParamBindings b{{"kappa", 1.3}};
  for (int t = 0; t < 10; ++t) {
    EnergyMomentumTensor T = energy_momentum(rest, random_point(rng), b);
    CHECK(T(0, 0) == doctest::Approx(1.3).epsilon(1e-13));
    double off = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        if (i != 0 || k != 0) off = std::max(off, std::abs(T(i, k)));
    CHECK(off <= 1e-13);
  }
}

TEST_CASE("common-profile fields have zero tensor") {
  std::mt19937 rng(16);
  std::uniform_real_distribution<double> cj(-2.0, 2.0);

  // separable with G = c * h(x), h real, c complex: every sesquilinear entry
  // is real, so T vanishes whether or not the field solves the equation
  for (int trial = 0; trial < 10; ++trial) {
    Bispinor u{complexd(cj(rng), cj(rng)), complexd(cj(rng), cj(rng)),
               complexd(cj(rng), cj(rng)), complexd(cj(rng), cj(rng))};
    complexd c(cj(rng), cj(rng));
    ScalarExpr h = parse("cos(x1)*exp(0.3*x0) + 0.2*x3");
    SpinorField field = SpinorField::separable(
        u, ComplexScalarField::cartesian(lit(c.real()) * h, lit(c.imag()) * h));
    SpacetimePoint p = random_point(rng);
    double scale = std::max(1.0, field.value(p).norm_squared());
    CHECK(energy_momentum(field, p).max_abs() <= 1e-12 * scale);
  }

  // two-term superposition u(f+ig) + u(g-f) = u(1+i)g, real u
  for (int trial = 0; trial < 10; ++trial) {
    Bispinor u{cj(rng), cj(rng), cj(rng), cj(rng)};
    ScalarExpr f = parse("sin(0.4*x0) + x2^2");
    ScalarExpr g = parse("cosh(0.3*x3) - 0.5*x1");
    SpinorField first = SpinorField::separable(u, ComplexScalarField::cartesian(f, g));
    SpinorField second =
        SpinorField::separable(u, ComplexScalarField::cartesian(g - f, lit(0.0)));
    SpinorField sum = superpose({first, second});
    SpacetimePoint p = random_point(rng);
    double scale = std::max(1.0, sum.value(p).norm_squared());
    CHECK(energy_momentum(sum, p).max_abs() <= 1e-12 * scale);

    // and pointwise the sum is u(1+i)g
    Bispinor v = sum.value(p);
    double gv = g.eval(p);
    Bispinor expected = (complexd(1.0, 1.0) * gv) * u;
    CHECK(max_component_diff(v, expected) <= 1e-13 * std::max(1.0, expected.max_abs()));
  }
}

TEST_CASE("tensor symmetry, realness guard and phase invariance") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> cj(-1.5, 1.5);

  SpinorField field = SpinorField::componentwise(
      {ComplexScalarField::cartesian(parse("sin(x0)"), parse("x1*x3")),
       ComplexScalarField::exponential(parse("0.2*x2"), parse("x0+x3")),
       ComplexScalarField::cartesian(parse("x2^2"), lit(0.3)),
       ComplexScalarField::cartesian(lit(1.0), parse("cos(x3)"))});

  for (int t = 0; t < 10; ++t) {
    SpacetimePoint p = random_point(rng);
    EnergyMomentumTensor T = energy_momentum(field, p);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) CHECK(T(i, k) == T(k, i));  // exact, by construction
  }

  // global phase: psi -> e^{i delta} psi leaves j and T unchanged
  for (int trial = 0; trial < 5; ++trial) {
    double delta = cj(rng);
    Bispinor u{complexd(cj(rng), cj(rng)), complexd(cj(rng), cj(rng)),
               complexd(cj(rng), cj(rng)), complexd(cj(rng), cj(rng))};
    ComplexScalarField profile =
        ComplexScalarField::cartesian(parse("exp(0.2*x2)*cos(x0)"), parse("x3 + 0.1*x1"));
    SpinorField base = SpinorField::separable(u, profile);
    SpinorField rotated = SpinorField::separable(std::polar(1.0, delta) * u, profile);
    SpacetimePoint p = random_point(rng);
    FourCurrent ja = current(base, p), jb = current(rotated, p);
    EnergyMomentumTensor Ta = energy_momentum(base, p), Tb = energy_momentum(rotated, p);
    double jscale = std::max(1.0, ja.j0);
    double tscale = std::max(1.0, Ta.max_abs());
    for (int k = 0; k < 4; ++k) CHECK(std::abs(ja[k] - jb[k]) <= 1e-12 * jscale);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) CHECK(std::abs(Ta(i, k) - Tb(i, k)) <= 1e-12 * tscale);
  }
}

TEST_CASE("current conservation for solutions") {
  std::mt19937 rng(18);
  SpinorField field =
      SpinorField::lightlike(0.8, lit(0.1) * pow_int(param("s"), 2),
                             param("s") + lit(0.3) * sin(param("s")));
  for (int t = 0; t < 10; ++t) {
    SpacetimePoint p = random_point(rng);
    double divergence = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double h = 1e-4;
      SpacetimePoint hi = p, lo = p;
      hi[k] += h;
      lo[k] -= h;
      divergence += (current(field, hi)[k] - current(field, lo)[k]) / (2.0 * h);
    }
    CHECK(std::abs(divergence) <= 1e-6);
  }
}

TEST_CASE("grid scan") {
  SampleGrid grid;  // [-1,1]^4, 5 per axis

  GridSummary ghost = grid_scan(constant_phase_wave(1.0), 1.0, grid);
  CHECK(ghost.max_residual <= 1e-10);
  CHECK(ghost.max_abs_tensor <= 1e-12);
  CHECK(ghost.min_j0 > 0.0);
  CHECK(ghost.max_j0 > ghost.min_j0);

  GridSummary wave = grid_scan(travelling_wave(1.0), 1.0, grid);
  CHECK(wave.max_residual <= 1e-10);
  CHECK(wave.max_abs_tensor > 0.1);

  SpinorField zero = SpinorField::componentwise(
      {ComplexScalarField::cartesian(lit(0.0), lit(0.0)),
       ComplexScalarField::cartesian(lit(0.0), lit(0.0)),
       ComplexScalarField::cartesian(lit(0.0), lit(0.0)),
       ComplexScalarField::cartesian(lit(0.0), lit(0.0))});
  CHECK(grid_scan(zero, 1.0, grid).max_j0 == 0.0);

  SampleGrid bad;
  bad.samples = {1, 5, 5, 5};
  CHECK_THROWS_AS(grid_scan(constant_phase_wave(1.0), 1.0, bad), std::invalid_argument);
  CHECK_THROWS_AS(grid_scan(constant_phase_wave(1.0), 0.0, grid), std::invalid_argument);
}
