#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wgwin/geometry.hpp"
#include "wgwin/matching.hpp"

namespace wgwin {

/// The matching system at lambda = 1. The first upper mode has rate zero, so
/// its trial amplitude multiplies a field constant in x1: the only bounded
/// continuation. For d = pi the trial space is already even in x2.
[[nodiscard]] MatchingMatrix assemble_threshold(const Geometry& g,
                                                Parity parity, int n_modes);

/// Determinant of assemble_threshold as a function of the window length.
[[nodiscard]] double threshold_indicator(const Geometry& g, Parity parity,
                                         int n_modes);

/// Fewer critical lengths than requested below the scan cap.
class GridExhausted : public std::runtime_error {
 public:
  GridExhausted(const std::string& what, std::vector<double> found)
      : std::runtime_error(what), found_(std::move(found)) {}
  [[nodiscard]] const std::vector<double>& found() const noexcept {
    return found_;
  }

 private:
  std::vector<double> found_;
};

struct CriticalOptions {
  double l_max = 60.0;
  int samples = 32;  // per search interval, used only when the ends agree
};

/// Half-period of the eigenvalue count in l: the count is floor(l / c) or
/// floor(l / c) + 1 with c = pi / (2 sqrt(1 - kappa^2)).
[[nodiscard]] double count_period(const Geometry& g);

/// l_1 = 0, l_2 < ... < l_{n_max}. The n-th length is searched inside
/// [(n-1) c, n c), where the counting bounds confine it, as a zero of the
/// threshold indicator of the parity of n.
[[nodiscard]] std::vector<double> critical_lengths(
    double d, int n_max, int n_modes, double tol,
    const CriticalOptions& opt = {});

/// Single critical length l_n, n >= 2.
[[nodiscard]] double critical_length(double d, int n, int n_modes, double tol,
                                     const CriticalOptions& opt = {});

struct EdgeOptions {
  /// Circle radii around the window edge. The projection onto sin(theta/2)
  /// is divided by the Bessel factor J_{1/2}, so any radius below the
  /// distance to the other walls gives alpha; small radii are where the
  /// truncated series is least accurate.
  double r_min = 0.3;
  double r_max = 0.8;
  int radii = 6;
};

struct ThresholdSolution {
  int n = 2;
  double l_n = 0.0;
  double d = kPi;
  Parity parity = Parity::Odd;
  /// Field data at lambda = 1. b[0] is the amplitude of the zero mode.
  EigenfunctionExpansion field;
  double zero_mode_coeff = 0.0;  // sqrt(2/pi) after normalization
  double mu = 0.0;
  double alpha = 0.0;
  double alpha_spread = 0.0;  // max deviation over the radii used
  double smallest_singular = 0.0;
  double second_singular = 0.0;
};

/// Bounded solution at l_n, normalized so that it tends to
/// sqrt(2/pi) sin x2. Throws std::runtime_error when the threshold system has
/// a second near-null direction (second singular value below 1e3 tol).
[[nodiscard]] ThresholdSolution threshold_solution(
    double d, int n, double l_n, int n_modes, double tol = 1e-10,
    const EdgeOptions& edge = {});

/// Integral over the whole domain of |d phi / d x1|^2, from the mode sums.
[[nodiscard]] double gradient_energy_x1(const EigenfunctionExpansion& ef);

/// Emergence coefficient: gradient energy / l_n, halved for d = pi.
[[nodiscard]] double mu_coefficient(const ThresholdSolution& ts);

/// Edge coefficient alpha of phi ~ alpha r^{1/2} sin(theta/2) at (l, 0) from
/// the circle projection at radius r.
[[nodiscard]] double edge_coefficient(const EigenfunctionExpansion& ef,
                                      double r);

/// 1 - mu^2 (l - l_n)^2. Requires l >= l_n; exactly 1 at l_n.
[[nodiscard]] double emergence_prediction(const ThresholdSolution& ts,
                                          double l);

}  // namespace wgwin
