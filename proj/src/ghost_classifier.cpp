#include "ghostspinor/ghost_classifier.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ghostspinor {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Ghost: return "ghost";
    case Verdict::NonGhost: return "non-ghost";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::SeparableProportionality: return "separable-proportionality";
    case Method::ConstantPhase: return "constant-phase";
    case Method::CommonProfile: return "common-profile";
    case Method::Numeric: return "numeric";
  }
  return "?";
}

ProportionalityFit proportionality_fit(const std::vector<double>& f,
                                       const std::vector<double>& g) {
  if (f.size() != g.size()) throw std::invalid_argument("sample lists differ in length");
  if (f.size() < 2) throw std::invalid_argument("need at least 2 samples");
  double sum_ff = 0.0, sum_fg = 0.0, max_g = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sum_ff += f[i] * f[i];
    sum_fg += f[i] * g[i];
    max_g = std::max(max_g, std::abs(g[i]));
  }
  ProportionalityFit fit;
  if (sum_ff == 0.0) {
    if (max_g == 0.0) {
      fit.degenerate = true;
      return fit;
    }
    fit.residual = std::numeric_limits<double>::infinity();
    return fit;
  }
  double a = sum_fg / sum_ff;
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    worst = std::max(worst, std::abs(g[i] - a * f[i]));
  fit.slope = a;
  fit.residual = worst / std::max(1.0, max_g);
  return fit;
}

namespace {

template <typename Fn>
std::vector<double> sample(const SampleGrid& grid, Fn&& fn) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid.samples[0]) * grid.samples[1] * grid.samples[2] *
              grid.samples[3]);
  grid.for_each_point([&](const SpacetimePoint& p) { out.push_back(fn(p)); });
  return out;
}

double max_abs(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

GhostVerdict classify_separable(const Bispinor& u, const ComplexScalarField& G,
                                const SampleGrid& grid, const ParamBindings& b) {
  if (u.norm_squared() == 0.0)
    throw std::invalid_argument("separable classification needs u*u != 0");
  grid.validate();

  GhostVerdict out;
  if (const auto* x = G.exp_form()) {
    // e^{alpha + i beta} has proportional real/imaginary parts iff the phase
    // is constant; testing beta directly avoids aliasing in sampled cos/sin.
    std::vector<double> beta = sample(grid, [&](const SpacetimePoint& p) {
      return x->phase.eval(p, b);
    });
    double lo = beta[0], hi = beta[0];
    for (double v : beta) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double spread = hi - lo;
    out.method = Method::ConstantPhase;
    out.proportionality_residual = spread;
    out.verdict = spread <= kPhaseSpreadThreshold * std::max(1.0, std::abs(hi))
                      ? Verdict::Ghost
                      : Verdict::NonGhost;
    return out;
  }

  std::vector<double> f, g;
  grid.for_each_point([&](const SpacetimePoint& p) {
    complexd v = G.value(p, b);
    f.push_back(v.real());
    g.push_back(v.imag());
  });
  out.method = Method::SeparableProportionality;
  ProportionalityFit forward = proportionality_fit(f, g);
  if (forward.degenerate) {
    out.verdict = Verdict::Indeterminate;  // G vanishes on the whole grid
    return out;
  }
  out.proportionality_residual = forward.residual;
  if (forward.slope && forward.residual <= kProportionalityThreshold) {
    out.verdict = Verdict::Ghost;
    out.fitted_ratio = forward.slope;
    return out;
  }
  // swapped direction covers f = 0 with g != 0 (purely imaginary G)
  ProportionalityFit swapped = proportionality_fit(g, f);
  if (swapped.slope && swapped.residual <= kProportionalityThreshold) {
    out.verdict = Verdict::Ghost;
    out.proportionality_residual = swapped.residual;
    if (*swapped.slope != 0.0) out.fitted_ratio = 1.0 / *swapped.slope;
    return out;
  }
  out.verdict = Verdict::NonGhost;
  return out;
}

GhostVerdict classify_componentwise(const SpinorField& field, double kappa,
                                    const SampleGrid& grid, const ParamBindings& b) {
  const auto* components = field.as_componentwise();
  if (!components)
    throw std::invalid_argument("classify_componentwise needs a componentwise field");
  grid.validate();

  // eight real functions: re and im of each component
  std::array<std::vector<double>, 8> fn;
  grid.for_each_point([&](const SpacetimePoint& p) {
    for (int k = 0; k < 4; ++k) {
      complexd v = (*components)[static_cast<std::size_t>(k)].value(p, b);
      fn[static_cast<std::size_t>(2 * k)].push_back(v.real());
      fn[static_cast<std::size_t>(2 * k + 1)].push_back(v.imag());
    }
  });

  std::size_t reference = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < fn.size(); ++i) {
    double m = max_abs(fn[i]);
    if (m > best) {
      best = m;
      reference = i;
    }
  }
  GhostVerdict out;
  if (best == 0.0) {
    out.method = Method::CommonProfile;
    out.verdict = Verdict::Indeterminate;  // identically zero field
    return out;
  }

  double worst = 0.0;
  bool common = true;
  for (const auto& candidate : fn) {
    ProportionalityFit fit = proportionality_fit(fn[reference], candidate);
    worst = std::max(worst, fit.residual);
    if (!(fit.residual <= kProportionalityThreshold)) {
      common = false;
      break;
    }
  }
  if (common) {
    out.method = Method::CommonProfile;
    out.verdict = Verdict::Ghost;
    out.proportionality_residual = worst;
    return out;
  }
  return classify_numeric(field, kappa, grid, b);
}

GhostVerdict classify_numeric(const SpinorField& field, double kappa, const SampleGrid& grid,
                              const ParamBindings& b) {
  GridSummary s = grid_scan(field, kappa, grid, b);
  GhostVerdict out;
  out.method = Method::Numeric;
  out.max_residual = s.max_residual;
  out.max_abs_tensor = s.max_abs_tensor;
  out.min_j0 = s.min_j0;
  if (s.max_residual > kResidualPrecondition) {
    out.verdict = Verdict::Indeterminate;  // ghost status is defined for solutions only
    return out;
  }
  double scale = std::max(1.0, s.max_j0 * kappa);
  if (s.max_abs_tensor <= kTensorZeroFactor * scale && s.min_j0 >= kCurrentFloor)
    out.verdict = Verdict::Ghost;
  else if (s.max_abs_tensor > kTensorNonzeroFactor * scale)
    out.verdict = Verdict::NonGhost;
  else
    out.verdict = Verdict::Indeterminate;
  return out;
}

}  // namespace ghostspinor
