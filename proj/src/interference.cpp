#include "ghostspinor/interference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ghostspinor {

namespace {

// True intensities are non-negative; only cancellation round-off can dip
// below zero, so flooring at zero loses nothing.
double clamp_nonneg(double v) { return v < 0.0 ? 0.0 : v; }

void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::invalid_argument(std::string(name) + " must be finite and > 0");
  }
}

double eval_phase(const std::optional<ScalarExpr>& override_expr, double fallback,
                  const TwoSlitConfig& cfg, double x) {
  if (!override_expr) return fallback;
  ParamBindings b{{"x", x},
                  {"q", cfg.fringe_wavenumber},
                  {"d", cfg.half_separation}};
  return override_expr->eval(SpacetimePoint{}, b);
}

double alpha_phase(const TwoSlitConfig& cfg, double x) {
  return eval_phase(cfg.alpha_override, cfg.fringe_wavenumber * x, cfg, x);
}

double beta_phase(const TwoSlitConfig& cfg, double x) {
  return eval_phase(cfg.beta_override, -cfg.fringe_wavenumber * x, cfg, x);
}

// Gaussian envelopes of the two slits: g_plus peaks at x = -d (slit 1),
// g_minus at x = +d (slit 2).
double g_plus(const TwoSlitConfig& cfg, double x) {
  double u = x + cfg.half_separation;
  return std::exp(-cfg.gaussian_coefficient * u * u);
}

double g_minus(const TwoSlitConfig& cfg, double x) {
  double u = x - cfg.half_separation;
  return std::exp(-cfg.gaussian_coefficient * u * u);
}

// Closed form shared by the real pair and every shadow pair: the pair
// intensity depends on the phases only through their difference.
double pair_intensity(const TwoSlitConfig& cfg, double phase_difference, double x) {
  double gp = g_plus(cfg, x);
  double gm = g_minus(cfg, x);
  double v = gp * gp + gm * gm + 2.0 * gp * gm * std::cos(phase_difference);
  return clamp_nonneg(cfg.norm * v);
}

}  // namespace

double ghost_real_intensity(double kappa, const SpacetimePoint& p) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  return 8.0 * std::exp(2.0 * kappa * p.x2) * (1.0 + std::cos(p.x0 + p.x3));
}

void TwoSlitConfig::validate() const {
  require_finite_positive(gaussian_coefficient, "gaussian coefficient");
  require_finite_positive(half_separation, "half separation");
  require_finite_positive(norm, "norm");
  if (!std::isfinite(fringe_wavenumber)) {
    throw std::invalid_argument("fringe wavenumber must be finite");
  }
  for (const ShadowPhases& s : shadow_phases) {
    if (!std::isfinite(s.c1) || !std::isfinite(s.c2)) {
      throw std::invalid_argument("shadow phases must be finite");
    }
  }
}

PathAmplitude slit_amplitude(const TwoSlitConfig& cfg, Particle particle, Slit slit,
                             double x) {
  double envelope = slit == Slit::One ? g_plus(cfg, x) : g_minus(cfg, x);
  double phase;
  if (particle.is_real()) {
    phase = slit == Slit::One ? alpha_phase(cfg, x) : beta_phase(cfg, x);
  } else {
    std::size_t m = particle.shadow_index();
    if (m >= cfg.shadow_phases.size()) {
      throw std::out_of_range("shadow index out of range");
    }
    const ShadowPhases& s = cfg.shadow_phases[m];
    phase = slit == Slit::One ? s.c1 : s.c2;
  }
  return PathAmplitude{std::polar(envelope, phase)};
}

double real_pair_intensity(const TwoSlitConfig& cfg, double x) {
  return pair_intensity(cfg, alpha_phase(cfg, x) - beta_phase(cfg, x), x);
}

double shadow_pair_intensity(const TwoSlitConfig& cfg, std::size_t m, double x) {
  if (m >= cfg.shadow_phases.size()) {
    throw std::out_of_range("shadow index out of range");
  }
  const ShadowPhases& s = cfg.shadow_phases[m];
  return pair_intensity(cfg, s.c1 - s.c2, x);
}

double combined_intensity(const TwoSlitConfig& cfg, double x) {
  double v = real_pair_intensity(cfg, x);
  for (std::size_t m = 0; m < cfg.shadow_phases.size(); ++m) {
    v *= shadow_pair_intensity(cfg, m, x);
  }
  return v;
}

double which_way_intensity(const TwoSlitConfig& cfg, double x) {
  double gp = g_plus(cfg, x);
  double gm = g_minus(cfg, x);
  double v = cfg.norm * (gp * gp + gm * gm);
  for (std::size_t m = 0; m < cfg.shadow_phases.size(); ++m) {
    v *= shadow_pair_intensity(cfg, m, x);
  }
  return v;
}

double expand_bruteforce(const TwoSlitConfig& cfg, double x) {
  std::size_t n = cfg.shadow_count();
  if (n > 20) throw std::invalid_argument("brute-force expansion limited to n <= 20");

  // Per-particle amplitudes, particle 0 = real, particle p = shadow p-1.
  std::vector<std::array<complexd, 2>> amps(n + 1);
  amps[0] = {slit_amplitude(cfg, Particle::real(), Slit::One, x).value,
             slit_amplitude(cfg, Particle::real(), Slit::Two, x).value};
  for (std::size_t m = 0; m < n; ++m) {
    amps[m + 1] = {slit_amplitude(cfg, Particle::shadow(m), Slit::One, x).value,
                   slit_amplitude(cfg, Particle::shadow(m), Slit::Two, x).value};
  }

  complexd sum = 0.0;
  const std::size_t assignments = std::size_t{1} << (n + 1);
  for (std::size_t mask = 0; mask < assignments; ++mask) {
    complexd term = 1.0;
    for (std::size_t p = 0; p <= n; ++p) {
      term *= amps[p][(mask >> p) & 1u];
    }
    sum += term;
  }
  return clamp_nonneg(std::norm(sum) * std::pow(cfg.norm, double(n + 1)));
}

IntensityProfile sample_profile(const TwoSlitConfig& cfg, const Formula& formula,
                                double x_lo, double x_hi, std::size_t count,
                                bool normalize_shadow_factors) {
  if (count < 2) throw std::invalid_argument("profile needs at least 2 samples");
  if (!(x_lo < x_hi)) throw std::invalid_argument("profile range must satisfy lo < hi");

  IntensityProfile profile;
  profile.xs.resize(count);
  profile.values.resize(count);
  double step = (x_hi - x_lo) / double(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    profile.xs[i] = i + 1 == count ? x_hi : x_lo + double(i) * step;
  }

  switch (formula.kind) {
    case Formula::Kind::RealPair:
      profile.label = "real";
      for (std::size_t i = 0; i < count; ++i) {
        profile.values[i] = real_pair_intensity(cfg, profile.xs[i]);
      }
      break;
    case Formula::Kind::ShadowPair:
      profile.label = "shadow[" + std::to_string(formula.shadow_index) + "]";
      for (std::size_t i = 0; i < count; ++i) {
        profile.values[i] = shadow_pair_intensity(cfg, formula.shadow_index, profile.xs[i]);
      }
      break;
    case Formula::Kind::Combined:
    case Formula::Kind::WhichWay: {
      bool which_way = formula.kind == Formula::Kind::WhichWay;
      profile.label = which_way ? "which-way" : "combined";
      std::vector<double> base(count);
      for (std::size_t i = 0; i < count; ++i) {
        double x = profile.xs[i];
        if (which_way) {
          double gp = g_plus(cfg, x);
          double gm = g_minus(cfg, x);
          base[i] = cfg.norm * (gp * gp + gm * gm);
        } else {
          base[i] = real_pair_intensity(cfg, x);
        }
      }
      for (std::size_t m = 0; m < cfg.shadow_count(); ++m) {
        std::vector<double> factor(count);
        double peak = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
          factor[i] = shadow_pair_intensity(cfg, m, profile.xs[i]);
          peak = std::max(peak, factor[i]);
        }
        double scale = normalize_shadow_factors && peak > 0.0 ? 1.0 / peak : 1.0;
        for (std::size_t i = 0; i < count; ++i) base[i] *= factor[i] * scale;
      }
      profile.values = std::move(base);
      break;
    }
  }
  return profile;
}

Extrema locate_extrema(const IntensityProfile& profile) {
  const std::vector<double>& v = profile.values;
  if (v.size() < 3 || profile.xs.size() != v.size()) {
    throw std::invalid_argument("extrema need a profile of at least 3 samples");
  }
  Extrema out;
  std::size_t i = 1;
  while (i + 1 < v.size()) {
    std::size_t j = i;  // plateau [i, j] of equal values
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j + 1 < v.size()) {
      double left = v[i - 1];
      double right = v[j + 1];
      if (v[i] < left && v[i] < right) out.minima.push_back(profile.xs[i]);
      if (v[i] > left && v[i] > right) out.maxima.push_back(profile.xs[i]);
    }
    i = j + 1;
  }
  return out;
}

}  // namespace ghostspinor
