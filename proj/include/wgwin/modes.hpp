#pragma once

#include "wgwin/geometry.hpp"

namespace wgwin {

/// Cross-section types: (0, pi), (-d, 0) and the combined (-d, pi) seen
/// inside the window.
enum class Region { UpperStrip, LowerStrip, FullStrip };

struct CrossSection {
  double lo = 0.0;
  double hi = 0.0;
};

[[nodiscard]] CrossSection cross_section(Region region, const Geometry& g);

/// One L2-normalized Dirichlet sine mode of a cross-section.
struct TransverseMode {
  Region region = Region::UpperStrip;
  int j = 1;
  double transverse_eigenvalue = 1.0;
  double normalization = 0.0;
  /// Wavenumber multiplying the sine argument.
  double wavenumber = 1.0;
};

[[nodiscard]] TransverseMode make_mode(Region region, int j, const Geometry& g);

/// Upper: sin(j x2); lower: sin(pi j x2 / d); full: sin(j kappa (x2 - pi)).
[[nodiscard]] double mode_value(const TransverseMode& mode, const Geometry& g,
                                double x2);

/// Outer strips: sqrt(eigenvalue - lambda), the decay rate of exp(-s x1).
/// Full strip: the signed quantity eigenvalue - lambda; its sign selects the
/// hyperbolic or trigonometric longitudinal branch.
[[nodiscard]] double longitudinal_rate(Region region, int j, double lambda,
                                       const Geometry& g);

/// Integral over (0, pi) of full-strip mode i times upper-strip mode j.
[[nodiscard]] double overlap_upper(const Geometry& g, int i, int j);

/// Integral over (-d, 0) of full-strip mode i times lower-strip mode j.
[[nodiscard]] double overlap_lower(const Geometry& g, int i, int j);

/// Below this separation of sine wavenumbers the overlap switches to its
/// analytic coincidence limit.
inline constexpr double kResonanceGuard = 1e-9;

}  // namespace wgwin
