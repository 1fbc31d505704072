#include "wgwin/modes.hpp"

#include <cmath>

namespace wgwin {
namespace {

void require_index(int j, const char* who) {
  if (j < 1) throw DomainError(std::string(who) + ": mode index must be >= 1");
}

// sin(delta * len) / delta, continuous through delta = 0.
double sine_ratio(double delta, double len) {
  if (std::abs(delta) < kResonanceGuard) {
    const double x = delta * len;
    return len * (1.0 - x * x / 6.0);
  }
  return std::sin(delta * len) / delta;
}

double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

CrossSection cross_section(Region region, const Geometry& g) {
  switch (region) {
    case Region::UpperStrip:
      return {0.0, kPi};
    case Region::LowerStrip:
      return {-g.d(), 0.0};
    case Region::FullStrip:
      return {-g.d(), kPi};
  }
  return {};
}

TransverseMode make_mode(Region region, int j, const Geometry& g) {
  require_index(j, "make_mode");
  TransverseMode m;
  m.region = region;
  m.j = j;
  switch (region) {
    case Region::UpperStrip:
      m.wavenumber = j;
      m.normalization = std::sqrt(2.0 / kPi);
      break;
    case Region::LowerStrip:
      m.wavenumber = kPi * j / g.d();
      m.normalization = std::sqrt(2.0 / g.d());
      break;
    case Region::FullStrip:
      m.wavenumber = j * g.kappa();
      m.normalization = std::sqrt(2.0 / (kPi + g.d()));
      break;
  }
  m.transverse_eigenvalue = m.wavenumber * m.wavenumber;
  return m;
}

double mode_value(const TransverseMode& mode, const Geometry& g, double x2) {
  const CrossSection cs = cross_section(mode.region, g);
  if (x2 < cs.lo || x2 > cs.hi) {
    throw DomainError("mode_value: x2 outside the cross-section");
  }
  const double arg = mode.region == Region::FullStrip
                         ? mode.wavenumber * (x2 - kPi)
                         : mode.wavenumber * x2;
  return mode.normalization * std::sin(arg);
}

double longitudinal_rate(Region region, int j, double lambda,
                         const Geometry& g) {
  const TransverseMode m = make_mode(region, j, g);
  const double gap = m.transverse_eigenvalue - lambda;
  if (region == Region::FullStrip) return gap;
  if (gap < 0.0) {
    throw DomainError("longitudinal_rate: lambda above the outer mode cutoff");
  }
  return std::sqrt(gap);
}

// Both closed forms follow from shifting the sine arguments so that the
// Dirichlet endpoints line up; the coincidence case is the limit of the
// sine ratio.
double overlap_upper(const Geometry& g, int i, int j) {
  require_index(i, "overlap_upper");
  require_index(j, "overlap_upper");
  const double a = i * g.kappa();
  const double b = j;
  const double norm = std::sqrt(2.0 / (kPi + g.d())) * std::sqrt(2.0 / kPi);
  return norm * parity_sign(j) * b * sine_ratio(a - b, kPi) / (a + b);
}

double overlap_lower(const Geometry& g, int i, int j) {
  require_index(i, "overlap_lower");
  require_index(j, "overlap_lower");
  const double a = i * g.kappa();
  const double b = kPi * j / g.d();
  const double norm = std::sqrt(2.0 / (kPi + g.d())) * std::sqrt(2.0 / g.d());
  return norm * parity_sign(i + j) * b * sine_ratio(a - b, g.d()) / (a + b);
}

}  // namespace wgwin
