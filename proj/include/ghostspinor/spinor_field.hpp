#ifndef GHOSTSPINOR_SPINOR_FIELD_HPP
#define GHOSTSPINOR_SPINOR_FIELD_HPP

// Bispinor-valued fields psi(x) with exact partial derivatives, and the three
// local observables built from them: the free-equation residual
// R = i gamma^k d_k psi - kappa psi, the current j^k = psi* g0 g^k psi, and the
// symmetrized energy-momentum tensor
// T_ik = (i/4){psi* g0 g_i d_k psi - (d_k psi)* g0 g_i psi + (i <-> k)}.
// Natural units: hbar = c = 1, the single mass parameter is kappa = mc/hbar.

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "ghostspinor/dirac_algebra.hpp"
#include "ghostspinor/fieldexpr.hpp"

namespace ghostspinor {

// A complex scalar function of spacetime in one of two shapes:
// cartesian re(x) + i im(x), or exponential e^{logAmp(x) + i phase(x)}.
// Derivative ASTs are built once at construction, so pointwise partials cost
// an evaluation, not a differentiation.
class ComplexScalarField {
 public:
  struct CartesianForm {
    ScalarExpr re, im;
  };
  struct ExpForm {
    ScalarExpr log_amp, phase;
  };

  explicit ComplexScalarField(CartesianForm form);
  explicit ComplexScalarField(ExpForm form);

  static ComplexScalarField cartesian(ScalarExpr re, ScalarExpr im);
  static ComplexScalarField exponential(ScalarExpr log_amp, ScalarExpr phase);

  complexd value(const SpacetimePoint& p, const ParamBindings& b = {}) const;
  complexd partial(int axis, const SpacetimePoint& p, const ParamBindings& b = {}) const;

  // Variant inspection (nullptr when the other shape is held).
  const CartesianForm* cartesian_form() const { return std::get_if<CartesianForm>(&form_); }
  const ExpForm* exp_form() const { return std::get_if<ExpForm>(&form_); }

 private:
  std::variant<CartesianForm, ExpForm> form_;
  std::array<ScalarExpr, 4> d_first_;   // d(re) or d(log_amp) per axis
  std::array<ScalarExpr, 4> d_second_;  // d(im) or d(phase) per axis
};

// A bispinor field in one of three shapes: separable u*G(x), four independent
// complex components, or a superposition (componentwise sum) of fields.
//
// The built-in lightlike family — components (1,1,-1,1) *
// e^{kappa x2 + f(s) + i g(s)} with s = x0 + x3 — expands at construction into
// the separable/exponential shape; it solves the free equation at mass kappa
// for any smooth profiles f, g.
class SpinorField {
 public:
  struct SeparableForm {
    Bispinor u;
    ComplexScalarField profile;
  };
  using ComponentwiseForm = std::array<ComplexScalarField, 4>;
  using SuperpositionForm = std::vector<SpinorField>;

  static SpinorField separable(Bispinor u, ComplexScalarField profile);
  static SpinorField componentwise(ComponentwiseForm components);
  // f and g are expressions in the parameter "s"; kappa must be > 0.
  static SpinorField lightlike(double kappa, const ScalarExpr& f, const ScalarExpr& g);
  static SpinorField superposition(SuperpositionForm terms);  // throws on empty

  Bispinor value(const SpacetimePoint& p, const ParamBindings& b = {}) const;
  Bispinor partial(int axis, const SpacetimePoint& p, const ParamBindings& b = {}) const;

  const SeparableForm* as_separable() const { return std::get_if<SeparableForm>(&form_); }
  const ComponentwiseForm* as_componentwise() const {
    return std::get_if<ComponentwiseForm>(&form_);
  }
  const SuperpositionForm* as_superposition() const {
    return std::get_if<SuperpositionForm>(&form_);
  }
  // Set when the field was built by lightlike(); the family's mass parameter.
  std::optional<double> lightlike_mass() const { return lightlike_mass_; }

 private:
  explicit SpinorField(std::variant<SeparableForm, ComponentwiseForm, SuperpositionForm> f)
      : form_(std::move(f)) {}

  std::variant<SeparableForm, ComponentwiseForm, SuperpositionForm> form_;
  std::optional<double> lightlike_mass_;
};

SpinorField superpose(std::vector<SpinorField> terms);

struct FourCurrent {
  double j0 = 0.0, j1 = 0.0, j2 = 0.0, j3 = 0.0;

  double operator[](int k) const {
    switch (k) {
      case 0: return j0;
      case 1: return j1;
      case 2: return j2;
      case 3: return j3;
    }
    throw std::out_of_range("current index must be 0..3");
  }
};

class EnergyMomentumTensor {
 public:
  EnergyMomentumTensor() = default;
  explicit EnergyMomentumTensor(const std::array<double, 16>& entries) : t_(entries) {}

  double operator()(int i, int k) const { return t_.at(static_cast<std::size_t>(i) * 4 + k); }
  double max_abs() const;

 private:
  std::array<double, 16> t_{};
};

// Pointwise observables. All follow the conventions in the file header.
Bispinor dirac_residual(const SpinorField& field, const SpacetimePoint& p, double kappa,
                        const ParamBindings& b = {});
FourCurrent current(const SpinorField& field, const SpacetimePoint& p,
                    const ParamBindings& b = {});
// Throws std::logic_error if the imaginary residue of the Hermitian
// combination exceeds 1e-12 relative — that can only be an internal error.
EnergyMomentumTensor energy_momentum(const SpinorField& field, const SpacetimePoint& p,
                                     const ParamBindings& b = {});

// Uniform lattice over a coordinate box, >= 2 samples per axis.
struct SampleGrid {
  std::array<double, 4> lo{-1.0, -1.0, -1.0, -1.0};
  std::array<double, 4> hi{1.0, 1.0, 1.0, 1.0};
  std::array<int, 4> samples{5, 5, 5, 5};

  void validate() const;  // throws std::invalid_argument
  double coordinate(int axis, int index) const {
    return lo[axis] + (hi[axis] - lo[axis]) * index / (samples[axis] - 1);
  }

  template <typename Fn>
  void for_each_point(Fn&& fn) const {
    validate();
    for (int i0 = 0; i0 < samples[0]; ++i0)
      for (int i1 = 0; i1 < samples[1]; ++i1)
        for (int i2 = 0; i2 < samples[2]; ++i2)
          for (int i3 = 0; i3 < samples[3]; ++i3)
            fn(SpacetimePoint{coordinate(0, i0), coordinate(1, i1), coordinate(2, i2),
                              coordinate(3, i3)});
  }
};

struct GridSummary {
  double max_residual = 0.0;  // max over the lattice of max |R component|
  double max_abs_tensor = 0.0;
  double min_j0 = 0.0;
  double max_j0 = 0.0;
};

GridSummary grid_scan(const SpinorField& field, double kappa, const SampleGrid& grid,
                      const ParamBindings& b = {});

}  // namespace ghostspinor

#endif
