#include "wgwin/geometry.hpp"

#include <cmath>

namespace wgwin {

Geometry::Geometry(double d, double l) : d_(d), l_(l), kappa_(0.0) {
  if (!(d > 0.0) || d > kPi) {
    throw DomainError("lower strip width d must satisfy 0 < d <= pi, got " +
                      std::to_string(d));
  }
  if (!(l >= 0.0) || !std::isfinite(l)) {
    throw DomainError("window half-length l must be >= 0, got " +
                      std::to_string(l));
  }
  kappa_ = kPi / (kPi + d_);
}

Geometry make_geometry(double d, double l) { return Geometry(d, l); }

double lambda_bound(const Geometry& g, int m) {
  if (m < 0) throw DomainError("lambda_bound: m must be non-negative");
  if (m == 0) return g.kappa_sq();
  if (g.l() == 0.0) throw DomainError("lambda_bound: l = 0 with m > 0");
  const double ml = static_cast<double>(m) / g.l();
  return g.kappa_sq() + kPi * kPi * ml * ml / 4.0;
}

CountBounds count_bounds(const Geometry& g) {
  if (!(g.l() > 0.0)) throw DomainError("count_bounds: requires l > 0");
  const double x = 2.0 * g.l() / kPi * std::sqrt(1.0 - g.kappa_sq());
  const int lower = static_cast<int>(std::floor(x));
  return {lower, lower + 1};
}

SpectralBracket bracket_for(const Geometry& g, int m) {
  if (m < 1) throw DomainError("bracket_for: m must be >= 1");
  if (!(g.l() > 0.0)) throw DomainError("bracket_for: requires l > 0");
  SpectralBracket b;
  b.m = m;
  b.lower = lambda_bound(g, m - 1);
  b.upper = lambda_bound(g, m);
  b.is_below_threshold = b.upper < 1.0;
  return b;
}

}  // namespace wgwin
