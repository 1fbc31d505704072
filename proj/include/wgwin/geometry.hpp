#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace wgwin {

inline constexpr double kPi = std::numbers::pi;

/// Thrown whenever an argument falls outside the admissible parameter set.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Two strips 0 < x2 < pi and -d < x2 < 0 coupled through the window
/// |x1| < l on x2 = 0.
///
/// kappa = pi / (pi + d) is stored so every module reuses the same bits.
class Geometry {
 public:
  Geometry(double d, double l);

  [[nodiscard]] double d() const noexcept { return d_; }
  [[nodiscard]] double l() const noexcept { return l_; }
  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  [[nodiscard]] double kappa_sq() const noexcept { return kappa_ * kappa_; }

  /// Equal strip widths. Exact comparison against the stored input.
  [[nodiscard]] bool symmetric() const noexcept { return d_ == kPi; }

  /// Same strips with another window half-length.
  [[nodiscard]] Geometry with_l(double l) const { return Geometry(d_, l); }

 private:
  double d_;
  double l_;
  double kappa_;
};

[[nodiscard]] Geometry make_geometry(double d, double l);

/// Lambda_m(l) = kappa^2 + pi^2 m^2 / (4 l^2).
[[nodiscard]] double lambda_bound(const Geometry& g, int m);

struct CountBounds {
  int lower = 0;
  int upper = 0;
};

/// Integer-part bounds on the number of discrete eigenvalues.
[[nodiscard]] CountBounds count_bounds(const Geometry& g);

struct SpectralBracket {
  int m = 1;
  double lower = 0.0;
  double upper = 0.0;
  bool is_below_threshold = false;
};

/// Open interval (Lambda_{m-1}, Lambda_m) holding the m-th eigenvalue.
[[nodiscard]] SpectralBracket bracket_for(const Geometry& g, int m);

}  // namespace wgwin
