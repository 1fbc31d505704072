#pragma once

#include <string>
#include <vector>

#include "wgwin/geometry.hpp"
#include "wgwin/matching.hpp"

namespace wgwin {

/// A bracket in which no eigenvalue was located.
struct SpectrumWarning {
  int m = 0;
  std::string message;
  /// True when the bracket straddles the threshold, where an empty bracket
  /// is legitimate. False means a fully sub-threshold bracket came back
  /// empty, which signals an under-resolved truncation.
  bool straddles_threshold = false;
  std::vector<double> lambdas;
  std::vector<double> values;
};

struct SpectrumResult {
  std::vector<SpectralPoint> points;  // ascending lambda
  std::vector<SpectrumWarning> warnings;

  /// Any warning that is not explained by the threshold.
  [[nodiscard]] bool has_solver_warning() const;
};

struct SpectrumOptions {
  RootOptions root;
  /// Search cap for a bracket reaching past the threshold.
  double threshold_margin = 1e-6;
};

/// All discrete eigenvalues of g, one root search per bracket below 1.
[[nodiscard]] SpectrumResult discrete_spectrum(const Geometry& g, int n_modes,
                                               double tol);
[[nodiscard]] SpectrumResult discrete_spectrum(const Geometry& g, int n_modes,
                                               const SpectrumOptions& opt);

struct SweepTable {
  double d = 0.0;
  std::vector<double> l_values;
  std::vector<std::vector<SpectralPoint>> rows;
  std::vector<int> counts;
  std::vector<std::vector<SpectrumWarning>> warnings;

  /// lambda_m over the sweep; NaN where the m-th eigenvalue is absent.
  [[nodiscard]] std::vector<double> trajectory(int m) const;
};

/// discrete_spectrum for every l of a strictly increasing positive grid,
/// computed in parallel, stored in grid order.
[[nodiscard]] SweepTable sweep_over_l(double d, const std::vector<double>& l_grid,
                                      int n_modes, double tol);

/// Limit of lambda_m(N) fitted as L + a/N + b/N^2 through N, 2N, 4N.
struct ExtrapolatedEigenvalue {
  int m = 1;
  std::vector<int> n_modes;
  std::vector<double> raw;
  double limit = 0.0;
  /// |limit - two-level linear fit on the finer pair|.
  double spread = 0.0;
};

[[nodiscard]] ExtrapolatedEigenvalue extrapolate_in_modes(const Geometry& g,
                                                          int m, int n_base,
                                                          double tol);

}  // namespace wgwin
