#pragma once

#include <string>
#include <vector>

#include "wgwin/geometry.hpp"
#include "wgwin/matching.hpp"
#include "wgwin/spectrum.hpp"

namespace wgwin {

/// One pass/fail verdict. measured[i] is compared with expected[i] under
/// tolerances[i]; the comparison kind is stated in details.
struct CheckReport {
  std::string check_name;
  bool passed = false;
  std::vector<double> measured;
  std::vector<double> expected;
  double tolerance = 0.0;
  std::vector<double> tolerances;
  std::string details;
};

/// Every tolerance of the checks in one place.
struct VerifyConfig {
  double monotone_noise = 1e-9;
  double jump_factor = 10.0;
  double wide_window_slope_max = -2.5;
  std::vector<double> emergence_ladder{0.1, 0.05, 0.025, 0.0125};
  double emergence_exponent_tol = 0.1;
  double emergence_coeff_rel = 0.10;
  double alpha_cross_rel = 0.05;
  double criticality_delta = 1e-2;
  double decay_upper_rel = 0.01;
  double decay_lower_rel = 0.02;
  double parity_tol = 1e-9;
  double convergence_exponent_min = 0.4;
  double convergence_radius = 5.0;
  double convergence_step = 0.05;
  /// Search cap below the threshold for eigenvalues on the emergence ladder.
  double near_threshold_margin = 1e-13;
};

/// Least-squares line y = slope x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
[[nodiscard]] LineFit fit_line(const std::vector<double>& x,
                               const std::vector<double>& y);

/// Strict containment Lambda_{m-1} < lambda_m < Lambda_m for every cell.
[[nodiscard]] CheckReport check_brackets(const SweepTable& table);

/// Count within count_bounds and non-decreasing along the sweep.
[[nodiscard]] CheckReport check_counting(const SweepTable& table);

/// Each lambda_m(l) non-increasing; no step larger than jump_factor times the
/// step predicted by the neighbouring secant slopes.
[[nodiscard]] CheckReport check_monotonicity(const SweepTable& table,
                                             const VerifyConfig& cfg = {});

/// Slope of log |lambda_m - Lambda_m| against log l.
[[nodiscard]] CheckReport check_wide_window(double d, int m,
                                            const std::vector<double>& l_list,
                                            int n_modes, double tol,
                                            const VerifyConfig& cfg = {});

/// Quadratic emergence of lambda_n from the threshold past l_n, its
/// coefficient against mu_n^2, and (d < pi) mu_n against pi alpha^2 / 2.
[[nodiscard]] CheckReport check_emergence(double d, int n, int n_modes,
                                          double tol,
                                          const VerifyConfig& cfg = {});

/// Count n-1 at l_n - delta and n at l_n + delta for n = 2..n_max, and one
/// eigenvalue at l = delta (l_1 = 0).
[[nodiscard]] CheckReport check_criticality(double d, int n_max, int n_modes,
                                            double tol,
                                            const VerifyConfig& cfg = {});

/// |lambda_{m(l, xi)} - xi| against pi^2/(4 l^2) (1 + 4 l sqrt(1-kappa^2)/pi)
/// with the gap decreasing along l_list. Requires kappa^2 <= xi < 1.
[[nodiscard]] CheckReport check_accumulation(double d, double xi,
                                             const std::vector<double>& l_list,
                                             int n_modes, double tol);

/// Exponential decay rates along x2 = pi/2 and x2 = -d/2.
[[nodiscard]] CheckReport check_decay(const EigenfunctionExpansion& ef,
                                      const Geometry& g,
                                      const VerifyConfig& cfg = {});

/// Odd eigenfunctions vanish on x1 = 0; even ones have zero x1-derivative.
[[nodiscard]] CheckReport check_parity(const Geometry& g, int n_modes,
                                       double tol,
                                       const VerifyConfig& cfg = {});

/// Relative discrete L2 distance over |x1| < R between the eigenfunction at
/// l_n + eps and the threshold solution, fitted against eps.
[[nodiscard]] CheckReport check_eigenfunction_convergence(
    double d, int n, int n_modes, double tol, const VerifyConfig& cfg = {});

/// The default suite at one d; reports ordered by name.
[[nodiscard]] std::vector<CheckReport> run_suite(double d,
                                                 const std::string& suite,
                                                 int n_modes, double tol,
                                                 const VerifyConfig& cfg = {});

[[nodiscard]] std::string reports_to_json(const std::vector<CheckReport>& r);
[[nodiscard]] std::string reports_summary(const std::vector<CheckReport>& r);

}  // namespace wgwin
