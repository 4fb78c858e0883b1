#ifndef GHOSTSPINOR_GHOST_CLASSIFIER_HPP
#define GHOSTSPINOR_GHOST_CLASSIFIER_HPP

// Ghost-spinor classification. A ghost spinor is a solution of the free
// Dirac equation whose energy-momentum tensor vanishes identically while its
// current does not. Structural criteria:
//   - separable u*G with G = f + i g: ghost iff g and f are proportional
//     (a real constant ratio), equivalently exponential form with constant
//     phase;
//   - componentwise: ghost if all components share one real profile,
//     G_k = w_k * h(x) with constant complex w_k.
// The numeric criterion evaluates the tensor and current on a lattice; it
// refuses to classify fields that do not solve the equation.

#include <optional>
#include <vector>

#include "ghostspinor/spinor_field.hpp"

namespace ghostspinor {

enum class Verdict { Ghost, NonGhost, Indeterminate };
enum class Method { SeparableProportionality, ConstantPhase, CommonProfile, Numeric };

const char* to_string(Verdict v);
const char* to_string(Method m);

// Tolerance ladder (all relative to the scales stated at each use site).
inline constexpr double kProportionalityThreshold = 1e-8;  // structural fits
inline constexpr double kPhaseSpreadThreshold = 1e-8;      // constant-phase test
inline constexpr double kResidualPrecondition = 1e-8;      // "is a solution" gate
inline constexpr double kTensorZeroFactor = 1e-10;         // ghost: maxAbsT <= this * scale
inline constexpr double kTensorNonzeroFactor = 1e-6;       // non-ghost: maxAbsT > this * scale
inline constexpr double kCurrentFloor = 1e-10;             // ghost: min j0 >= this

// Least-squares fit g ~ a*f with max-norm residual relative to max(1, max|g|).
// slope is empty when sum f^2 == 0 (residual reported as +infinity unless g
// is also identically zero, which sets `degenerate` instead).
struct ProportionalityFit {
  std::optional<double> slope;
  double residual = 0.0;
  bool degenerate = false;
};

ProportionalityFit proportionality_fit(const std::vector<double>& f,
                                       const std::vector<double>& g);

struct GhostVerdict {
  Verdict verdict = Verdict::Indeterminate;
  Method method = Method::Numeric;
  // g = fitted_ratio * f when the separable fit decided the verdict
  std::optional<double> fitted_ratio;
  std::optional<double> proportionality_residual;
  // numeric-path diagnostics
  std::optional<double> max_abs_tensor;
  std::optional<double> min_j0;
  std::optional<double> max_residual;
};

// Structural test for u*G: proportionality of Im G to Re G (both directions,
// so purely real and purely imaginary G both classify), or constant phase
// when G is in exponential form. Throws std::invalid_argument when u*u = 0.
GhostVerdict classify_separable(const Bispinor& u, const ComplexScalarField& G,
                                const SampleGrid& grid, const ParamBindings& b = {});

// Structural common-profile test G_k = w_k * h(x) across all four components
// (eight real functions fitted against the largest-magnitude one). Falls back
// to classify_numeric when the structure is absent. The field must hold the
// componentwise form.
GhostVerdict classify_componentwise(const SpinorField& field, double kappa,
                                    const SampleGrid& grid, const ParamBindings& b = {});

// Lattice criterion. Indeterminate unless the field solves the equation on
// the grid (max residual <= kResidualPrecondition). With scale =
// max(1, maxJ0 * kappa): Ghost iff maxAbsT <= kTensorZeroFactor * scale and
// minJ0 >= kCurrentFloor; NonGhost iff maxAbsT > kTensorNonzeroFactor * scale;
// Indeterminate in the gap.
GhostVerdict classify_numeric(const SpinorField& field, double kappa, const SampleGrid& grid,
                              const ParamBindings& b = {});

}  // namespace ghostspinor

#endif
