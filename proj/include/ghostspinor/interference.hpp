#ifndef GHOSTSPINOR_INTERFERENCE_HPP
#define GHOSTSPINOR_INTERFERENCE_HPP

// Interference intensities for superposed waves:
//   - the closed-form intensity of the ghost + travelling-wave collision,
//     8 e^{2 kappa x2} (1 + cos(x0 + x3));
//   - a two-slit model with Gaussian slit amplitudes for one real particle
//     plus n shadow particles, where the joint intensity factorizes into
//     |psi1 + psi2|^2 * prod_m |theta1^(m) + theta2^(m)|^2;
//   - the which-way variant replacing the real factor by |psi1|^2 + |psi2|^2;
//   - a brute-force expansion over all 2^(n+1) slit assignments, kept free of
//     the factorized form so it can act as an independent oracle;
//   - profile sampling and grid-level extrema location.
//
// The model works with scalar amplitudes: all particles share one constant
// bispinor u, which enters every intensity only through norm = u*u (one
// factor per particle).

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghostspinor/dirac_algebra.hpp"
#include "ghostspinor/fieldexpr.hpp"

namespace ghostspinor {

// Intensity of the superposition of the travelling-phase lightlike wave and
// the constant-phase (ghost) wave of equal mass: 8 e^{2 kappa x2} (1 + cos s),
// s = x0 + x3. Matches j0 of the superposed fields. Throws std::invalid_argument
// unless kappa > 0.
double ghost_real_intensity(double kappa, const SpacetimePoint& p);

// Phase constants of one shadow particle: slit 1 carries e^{i c1}, slit 2
// carries e^{i c2}.
struct ShadowPhases {
  double c1 = 0.0;
  double c2 = 0.0;
};

// Geometry and phases of the two-slit setup. Slits sit at screen coordinates
// -d and +d; every amplitude carries the envelope e^{-A (x -+ d)^2}.
//
// The real particle's phases default to alpha(x) = q x and beta(x) = -q x,
// the minimal pair giving cos(2 q x) fringes. Either can be overridden by an
// expression in which the screen coordinate is the parameter `x` (parameters
// `q` and `d` are also bound during evaluation).
struct TwoSlitConfig {
  double gaussian_coefficient = 0.05;  // A > 0, inverse length^2
  double half_separation = 1.0;        // d > 0
  double fringe_wavenumber = 16.0;     // q, used by the default phases
  double norm = 1.0;                  // u*u > 0, shared bispinor norm
  std::vector<ShadowPhases> shadow_phases;
  std::optional<ScalarExpr> alpha_override;
  std::optional<ScalarExpr> beta_override;

  std::size_t shadow_count() const { return shadow_phases.size(); }

  // Throws std::invalid_argument if A, d or norm is not positive / not finite,
  // or a shadow phase is not finite.
  void validate() const;
};

enum class Slit { One, Two };

// Selects the real particle or shadow particle m (0-based, m < shadow_count).
class Particle {
 public:
  static Particle real() { return Particle(std::nullopt); }
  static Particle shadow(std::size_t index) { return Particle(index); }

  bool is_real() const { return !index_.has_value(); }
  std::size_t shadow_index() const { return *index_; }

 private:
  explicit Particle(std::optional<std::size_t> index) : index_(index) {}
  std::optional<std::size_t> index_;
};

// One bra-ket chain <x|a><a|s> for a single particle through a single slit.
// Cross-slit chains like <a2|s> under a slit-1 wave are identically zero and
// never represented.
struct PathAmplitude {
  complexd value;
};

// e^{-A (x + d)^2 + i alpha(x)} and friends; see the table in the source.
// Throws std::out_of_range for a shadow index >= shadow_count.
PathAmplitude slit_amplitude(const TwoSlitConfig& cfg, Particle particle, Slit slit,
                             double x);

// norm * |psi1 + psi2|^2 in closed form:
//   norm * [e^{-2A(x+d)^2} + e^{-2A(x-d)^2}
//           + 2 e^{-A((x+d)^2 + (x-d)^2)} cos(alpha(x) - beta(x))].
double real_pair_intensity(const TwoSlitConfig& cfg, double x);

// norm * |theta1^(m) + theta2^(m)|^2: same closed form with the constant phase
// difference c1 - c2, so the cosine carries no x dependence and no fringes.
double shadow_pair_intensity(const TwoSlitConfig& cfg, std::size_t m, double x);

// real_pair_intensity(x) * prod_m shadow_pair_intensity(m, x). With no shadow
// particles this is exactly real_pair_intensity.
double combined_intensity(const TwoSlitConfig& cfg, double x);

// (|psi1|^2 + |psi2|^2) * prod_m shadow_pair_intensity(m, x): path information
// removes the real cross term, the shadow product stays.
double which_way_intensity(const TwoSlitConfig& cfg, double x);

// |sum over all 2^(n+1) slit assignments of the per-particle amplitude
// product|^2 * norm^(n+1), evaluated term by term without factorizing.
// Independent oracle for combined_intensity. Throws std::invalid_argument for
// n > 20.
double expand_bruteforce(const TwoSlitConfig& cfg, double x);

// Which intensity a profile samples.
struct Formula {
  enum class Kind { RealPair, ShadowPair, Combined, WhichWay };

  static Formula real_pair() { return {Kind::RealPair, 0}; }
  static Formula shadow_pair(std::size_t m) { return {Kind::ShadowPair, m}; }
  static Formula combined() { return {Kind::Combined, 0}; }
  static Formula which_way() { return {Kind::WhichWay, 0}; }

  Kind kind = Kind::Combined;
  std::size_t shadow_index = 0;  // used by ShadowPair only
};

// A sampled intensity: xs sorted ascending, values finite and >= 0.
struct IntensityProfile {
  std::vector<double> xs;
  std::vector<double> values;
  std::string label;
};

// Uniform sampling of `formula` at `count` points of [x_lo, x_hi]. When
// normalize_shadow_factors is set (Combined / WhichWay only), each shadow
// factor is divided by its maximum over the sampled points so the product
// stays O(1) for display; positions of extrema are unaffected. Throws
// std::invalid_argument for count < 2 or x_lo >= x_hi.
IntensityProfile sample_profile(const TwoSlitConfig& cfg, const Formula& formula,
                                double x_lo, double x_hi, std::size_t count,
                                bool normalize_shadow_factors = false);

// Strict interior extrema by 3-point comparison; a plateau reports its
// leftmost sample. Throws std::invalid_argument for profiles shorter than 3.
struct Extrema {
  std::vector<double> minima;
  std::vector<double> maxima;
};

Extrema locate_extrema(const IntensityProfile& profile);

}  // namespace ghostspinor

#endif  // GHOSTSPINOR_INTERFERENCE_HPP
