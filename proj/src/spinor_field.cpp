#include "ghostspinor/spinor_field.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ghostspinor {

namespace {

constexpr complexd kI{0.0, 1.0};

void require_finite(const complexd& v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw EvalError("field component evaluated to a non-finite value");
}

}  // namespace

ComplexScalarField::ComplexScalarField(CartesianForm form) : form_(std::move(form)) {
  const auto& f = std::get<CartesianForm>(form_);
  for (int axis = 0; axis < 4; ++axis) {
    d_first_[axis] = f.re.derivative(axis);
    d_second_[axis] = f.im.derivative(axis);
  }
}

ComplexScalarField::ComplexScalarField(ExpForm form) : form_(std::move(form)) {
  const auto& f = std::get<ExpForm>(form_);
  for (int axis = 0; axis < 4; ++axis) {
    d_first_[axis] = f.log_amp.derivative(axis);
    d_second_[axis] = f.phase.derivative(axis);
  }
}

ComplexScalarField ComplexScalarField::cartesian(ScalarExpr re, ScalarExpr im) {
  return ComplexScalarField(CartesianForm{std::move(re), std::move(im)});
}

ComplexScalarField ComplexScalarField::exponential(ScalarExpr log_amp, ScalarExpr phase) {
  return ComplexScalarField(ExpForm{std::move(log_amp), std::move(phase)});
}

complexd ComplexScalarField::value(const SpacetimePoint& p, const ParamBindings& b) const {
  complexd v;
  if (const auto* c = cartesian_form())
    v = complexd(c->re.eval(p, b), c->im.eval(p, b));
  else {
    const auto* x = exp_form();
    v = std::polar(std::exp(x->log_amp.eval(p, b)), x->phase.eval(p, b));
  }
  require_finite(v);
  return v;
}

complexd ComplexScalarField::partial(int axis, const SpacetimePoint& p,
                                     const ParamBindings& b) const {
  if (axis < 0 || axis > 3) throw std::out_of_range("axis must be 0..3");
  complexd v;
  if (cartesian_form())
    v = complexd(d_first_[axis].eval(p, b), d_second_[axis].eval(p, b));
  else
    // d e^{a+ib} = (da + i db) e^{a+ib}
    v = complexd(d_first_[axis].eval(p, b), d_second_[axis].eval(p, b)) * value(p, b);
  require_finite(v);
  return v;
}

SpinorField SpinorField::separable(Bispinor u, ComplexScalarField profile) {
  return SpinorField(SeparableForm{u, std::move(profile)});
}

SpinorField SpinorField::componentwise(ComponentwiseForm components) {
  return SpinorField(std::move(components));
}

SpinorField SpinorField::lightlike(double kappa, const ScalarExpr& f, const ScalarExpr& g) {
  if (!(kappa > 0.0)) throw std::invalid_argument("lightlike family requires kappa > 0");
  ScalarExpr s = coord(0) + coord(3);
  ScalarExpr log_amp = lit(kappa) * coord(2) + substitute_param(f, "s", s);
  ScalarExpr phase = substitute_param(g, "s", s);
  SpinorField field(SeparableForm{
      Bispinor{1.0, 1.0, -1.0, 1.0},
      ComplexScalarField::exponential(std::move(log_amp), std::move(phase))});
  field.lightlike_mass_ = kappa;
  return field;
}

SpinorField SpinorField::superposition(SuperpositionForm terms) {
  if (terms.empty()) throw std::invalid_argument("superposition of no fields");
  return SpinorField(std::move(terms));
}

SpinorField superpose(std::vector<SpinorField> terms) {
  return SpinorField::superposition(std::move(terms));
}

Bispinor SpinorField::value(const SpacetimePoint& p, const ParamBindings& b) const {
  if (const auto* s = as_separable()) return s->profile.value(p, b) * s->u;
  if (const auto* c = as_componentwise())
    return {(*c)[0].value(p, b), (*c)[1].value(p, b), (*c)[2].value(p, b), (*c)[3].value(p, b)};
  Bispinor sum;
  for (const auto& term : *as_superposition()) sum = sum + term.value(p, b);
  return sum;
}

Bispinor SpinorField::partial(int axis, const SpacetimePoint& p, const ParamBindings& b) const {
  if (const auto* s = as_separable()) return s->profile.partial(axis, p, b) * s->u;
  if (const auto* c = as_componentwise())
    return {(*c)[0].partial(axis, p, b), (*c)[1].partial(axis, p, b),
            (*c)[2].partial(axis, p, b), (*c)[3].partial(axis, p, b)};
  Bispinor sum;
  for (const auto& term : *as_superposition()) sum = sum + term.partial(axis, p, b);
  return sum;
}

double EnergyMomentumTensor::max_abs() const {
  double m = 0.0;
  for (double v : t_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

struct PointData {
  Bispinor psi;
  std::array<Bispinor, 4> dpsi;
};

PointData eval_with_partials(const SpinorField& field, const SpacetimePoint& p,
                             const ParamBindings& b) {
  return {field.value(p, b),
          {field.partial(0, p, b), field.partial(1, p, b), field.partial(2, p, b),
           field.partial(3, p, b)}};
}

// gamma^0 gamma^(k) and gamma^0 gamma_k, built once
const std::array<ComplexMatrix4, 4>& upper_pairs() {
  static const std::array<ComplexMatrix4, 4> m = [] {
    const GammaMatrices& g = standard_gammas();
    return std::array<ComplexMatrix4, 4>{g[0] * g[0], g[0] * g[1], g[0] * g[2], g[0] * g[3]};
  }();
  return m;
}

const std::array<ComplexMatrix4, 4>& lowered_pairs() {
  static const std::array<ComplexMatrix4, 4> m = [] {
    const GammaMatrices& g = standard_gammas();
    return std::array<ComplexMatrix4, 4>{g[0] * lower_index(g, 0), g[0] * lower_index(g, 1),
                                         g[0] * lower_index(g, 2), g[0] * lower_index(g, 3)};
  }();
  return m;
}

Bispinor residual_from(const PointData& d, double kappa) {
  const GammaMatrices& g = standard_gammas();
  Bispinor slash;
  for (int k = 0; k < 4; ++k) slash = slash + g[k] * d.dpsi[k];
  return kI * slash - kappa * d.psi;
}

FourCurrent current_from(const PointData& d) {
  const auto& m = upper_pairs();
  FourCurrent j;
  j.j0 = d.psi.norm_squared();  // gamma^0 gamma^0 = I
  j.j1 = sesquilinear_form(d.psi, m[1], d.psi).real();
  j.j2 = sesquilinear_form(d.psi, m[2], d.psi).real();
  j.j3 = sesquilinear_form(d.psi, m[3], d.psi).real();
  return j;
}

EnergyMomentumTensor tensor_from(const PointData& d) {
  // z[i][k] = psi* g0 g_i (d_k psi); the paired term is its conjugate only
  // because g0 g_i is Hermitian, so compute both sides and keep the imaginary
  // residue as an internal sanity check.
  const std::array<ComplexMatrix4, 4>& m = lowered_pairs();
  complexd z[4][4], w[4][4];
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      z[i][k] = sesquilinear_form(d.psi, m[i], d.dpsi[k]);
      w[i][k] = sesquilinear_form(d.dpsi[k], m[i], d.psi);
    }
  std::array<double, 16> entries{};
  double scale = 1.0, residue = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int k = i; k < 4; ++k) {
      complexd c = 0.25 * kI * ((z[i][k] - w[i][k]) + (z[k][i] - w[k][i]));
      scale = std::max(scale, std::abs(c));
      residue = std::max(residue, std::abs(c.imag()));
      entries[static_cast<std::size_t>(i) * 4 + k] = c.real();
      entries[static_cast<std::size_t>(k) * 4 + i] = c.real();
    }
  if (residue > 1e-12 * scale)
    throw std::logic_error("energy-momentum tensor: non-real Hermitian combination");
  return EnergyMomentumTensor(entries);
}

}  // namespace

Bispinor dirac_residual(const SpinorField& field, const SpacetimePoint& p, double kappa,
                        const ParamBindings& b) {
  if (!(kappa > 0.0)) throw std::invalid_argument("dirac_residual requires kappa > 0");
  return residual_from(eval_with_partials(field, p, b), kappa);
}

FourCurrent current(const SpinorField& field, const SpacetimePoint& p, const ParamBindings& b) {
  return current_from({field.value(p, b), {}});
}

EnergyMomentumTensor energy_momentum(const SpinorField& field, const SpacetimePoint& p,
                                     const ParamBindings& b) {
  return tensor_from(eval_with_partials(field, p, b));
}

void SampleGrid::validate() const {
  for (int axis = 0; axis < 4; ++axis) {
    if (samples[axis] < 2) throw std::invalid_argument("grid needs >= 2 samples per axis");
    if (!std::isfinite(lo[axis]) || !std::isfinite(hi[axis]) || !(lo[axis] <= hi[axis]))
      throw std::invalid_argument("grid box bounds must be finite and ordered");
  }
}

GridSummary grid_scan(const SpinorField& field, double kappa, const SampleGrid& grid,
                      const ParamBindings& b) {
  if (!(kappa > 0.0)) throw std::invalid_argument("grid_scan requires kappa > 0");
  GridSummary s;
  s.min_j0 = std::numeric_limits<double>::infinity();
  grid.for_each_point([&](const SpacetimePoint& p) {
    PointData d = eval_with_partials(field, p, b);
    s.max_residual = std::max(s.max_residual, residual_from(d, kappa).max_abs());
    s.max_abs_tensor = std::max(s.max_abs_tensor, tensor_from(d).max_abs());
    double j0 = d.psi.norm_squared();
    s.min_j0 = std::min(s.min_j0, j0);
    s.max_j0 = std::max(s.max_j0, j0);
  });
  return s;
}

}  // namespace ghostspinor
