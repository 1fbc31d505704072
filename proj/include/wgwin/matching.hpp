#pragma once

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgwin/geometry.hpp"
#include "wgwin/modes.hpp"

namespace wgwin {

/// Symmetry of an eigenfunction under x1 -> -x1. Even fields satisfy a
/// Neumann condition on x1 = 0, odd fields a Dirichlet one.
enum class Parity { Even, Odd };

[[nodiscard]] const char* to_string(Parity p) noexcept;

/// Even for odd m, odd for even m.
[[nodiscard]] Parity parity_for_index(int m) noexcept;

/// A located discrete eigenvalue.
struct SpectralPoint {
  int m = 1;
  double lambda = 0.0;
  double k = 0.0;  // sqrt(1 - lambda)
  Parity parity = Parity::Even;
  double residual = 0.0;
  SpectralBracket bracket;
  int n_modes_used = 0;
};

/// Outer trial function for the interface trace at x1 = l. For the
/// symmetric geometry d = pi only the combinations even in x2 are kept.
struct TrialMode {
  enum class Kind { Upper, Lower, EvenPair };
  Kind kind = Kind::Upper;
  int index = 1;
  double cutoff = 1.0;      // transverse eigenvalue of the outer mode
  double wavenumber = 1.0;  // sqrt(cutoff)
};

/// Geometry-only data of the matching scheme for one lower-strip width and
/// truncation level: the outer trial modes, their projections onto the
/// window modes and the summed far tail of the window Dirichlet-to-Neumann
/// map. Independent of l and lambda, so one instance serves whole sweeps.
class MatchingBasis {
 public:
  MatchingBasis(double d, int n_modes);

  [[nodiscard]] double d() const noexcept { return d_; }
  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  [[nodiscard]] bool symmetric() const noexcept { return symmetric_; }
  [[nodiscard]] int n_modes() const noexcept { return n_modes_; }
  [[nodiscard]] int n_upper() const noexcept { return n_upper_; }
  [[nodiscard]] int n_lower() const noexcept { return n_lower_; }
  [[nodiscard]] int size() const noexcept {
    return static_cast<int>(trial_.size());
  }
  [[nodiscard]] const std::vector<TrialMode>& trial() const noexcept {
    return trial_;
  }
  /// Window modes summed exactly for every lambda.
  [[nodiscard]] int n_window() const noexcept { return n_window_; }
  /// Last window mode included through the precomputed tail.
  [[nodiscard]] int n_window_tail() const noexcept { return n_window_tail_; }

  /// Row j-1 holds the projections of every trial function onto window
  /// mode j, for 1 <= j <= n_window().
  [[nodiscard]] const Eigen::MatrixXd& projections() const noexcept {
    return proj_;
  }
  /// Projection of every trial function onto window mode j (any j >= 1).
  [[nodiscard]] Eigen::VectorXd projection_row(int j) const;

  /// Sum over tail window modes of their rate times the projection dyad,
  /// expanded in powers of lambda.
  [[nodiscard]] Eigen::MatrixXd tail(double lambda) const;

  /// Fixed diagonal equilibration of the trial block.
  [[nodiscard]] const Eigen::VectorXd& scaling() const noexcept {
    return scale_;
  }

 private:
  double d_;
  double kappa_;
  bool symmetric_;
  int n_modes_;
  int n_upper_ = 0;
  int n_lower_ = 0;
  int n_window_ = 0;
  int n_window_tail_ = 0;
  std::vector<TrialMode> trial_;
  Eigen::MatrixXd proj_;
  Eigen::VectorXd scale_;
  std::vector<Eigen::MatrixXd> tail_terms_;
};

/// Cached basis for (d, n_modes); bases are immutable and shared.
[[nodiscard]] std::shared_ptr<const MatchingBasis> basis_for(double d,
                                                             int n_modes);

/// Truncated dispersion system at fixed (lambda, parity, N).
///
/// Unknowns are the outer trial amplitudes plus one bordering unknown that
/// carries the amplitude of the first window mode, the only window mode that
/// can oscillate below the threshold. Its log-derivative has poles exactly at
/// the bounds Lambda_m; the bordering keeps every entry finite and the
/// determinant continuous in lambda.
struct MatchingMatrix {
  double lambda = 0.0;
  Parity parity = Parity::Even;
  int n_modes = 0;
  Eigen::MatrixXd entries;  // equilibrated, (size + 1) square
  Geometry geometry{kPi, 0.0};
  std::shared_ptr<const MatchingBasis> basis;
  double border_u = 0.0;  // coupling of the first window mode
  double border_w = 1.0;
};

/// Longitudinal log-derivative F'(l)/F(l) of window mode with signed rate
/// sigma = j^2 kappa^2 - lambda. Even: cosh/cos. Odd: sinh/sin.
[[nodiscard]] double window_log_derivative(double sigma, double l, Parity p);

/// Window/outer matching system. Requires kappa^2 < lambda < 1 and N >= 2.
[[nodiscard]] MatchingMatrix assemble(const Geometry& g, double lambda,
                                      Parity parity, int n_modes);

/// Same system without the open spectral-interval check; lambda = 1 gives the
/// threshold problem where the first upper mode does not decay.
[[nodiscard]] MatchingMatrix assemble_unchecked(
    const std::shared_ptr<const MatchingBasis>& basis, const Geometry& g,
    double lambda, Parity parity);

struct IndicatorValue {
  double value = 0.0;
  double log_abs_det = 0.0;
  int sign = 0;
  bool singular = false;
};

/// Sign-carrying determinant of the equilibrated system, clamped in log
/// space. Zero (with singular = true) on an exact zero pivot.
[[nodiscard]] IndicatorValue indicator_value(const MatchingMatrix& m);
[[nodiscard]] double indicator(const MatchingMatrix& m);

/// The truncated indicator did not change sign on the searched interval.
class NoSignChange : public std::runtime_error {
 public:
  NoSignChange(const std::string& what, std::vector<double> lambdas,
               std::vector<double> values)
      : std::runtime_error(what),
        lambdas_(std::move(lambdas)),
        values_(std::move(values)) {}
  [[nodiscard]] const std::vector<double>& lambdas() const noexcept {
    return lambdas_;
  }
  [[nodiscard]] const std::vector<double>& values() const noexcept {
    return values_;
  }

 private:
  std::vector<double> lambdas_;
  std::vector<double> values_;
};

/// Knobs of the bracketed root search.
struct RootOptions {
  double tol = 1e-10;
  double bisection_width = 1e-8;
  double edge_shrink = 1e-9;  // relative to the bracket width
  int trace_samples = 24;
  int max_secant = 60;
};

/// Generic bracketed root of a continuous scalar function: bisection down to
/// bisection_width, then safeguarded secant to tol.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi,
                      const RootOptions& opt);

/// m-th eigenvalue, searched inside bracket_for(g, m). The upper end is
/// clipped to upper_cap when the bracket reaches beyond it.
[[nodiscard]] SpectralPoint solve_in_bracket(const Geometry& g, int m,
                                             int n_modes, double tol);
[[nodiscard]] SpectralPoint solve_in_bracket(const Geometry& g, int m,
                                             int n_modes,
                                             const RootOptions& opt,
                                             double upper_cap);

/// Field expansion of a located eigenfunction (or, at lambda = 1, of the
/// bounded threshold solution).
struct EigenfunctionExpansion {
  SpectralPoint spectral;
  Geometry geometry{kPi, 0.0};
  /// Window amplitudes: a[j-1] multiplies F_j(x1)/F_j(l) for the hyperbolic
  /// modes and the raw cos/sin profile for an oscillatory first mode.
  std::vector<double> a;
  std::vector<double> b;  // upper outer amplitudes at x1 = l
  std::vector<double> c;  // lower outer amplitudes at x1 = l
  /// Coefficient of exp(-k|x1|) sin(x2) in the upper strip.
  double c_plus = 0.0;
  double smallest_singular = 0.0;
  double second_singular = 0.0;
};

/// Null vector of the system at sp.lambda, scaled to c_plus = sqrt(2/pi).
/// Throws std::runtime_error when the smallest singular value exceeds
/// 10 tol times its local slope in lambda, i.e. sp.lambda is not a root to
/// within tol.
[[nodiscard]] EigenfunctionExpansion eigenfunction(const Geometry& g,
                                                   const SpectralPoint& sp,
                                                   int n_modes,
                                                   double tol = 1e-10);

/// Null vector of an already assembled system, scaled so that the first
/// upper outer amplitude b[0] equals exp(-k l).
[[nodiscard]] EigenfunctionExpansion expansion_from_matrix(
    const MatchingMatrix& m, const SpectralPoint& sp);

/// Longitudinal profile of window mode j (1-based) at 0 <= x1 <= l, in the
/// convention of EigenfunctionExpansion::a, and its x1-derivative.
struct Profile {
  double value = 0.0;
  double derivative = 0.0;
};
[[nodiscard]] Profile window_profile(const EigenfunctionExpansion& ef, int j,
                                     double x1);

/// Truncated expansion at (x1, x2) in the closed domain.
[[nodiscard]] double evaluate_field(const EigenfunctionExpansion& ef,
                                    double x1, double x2);

/// x1-derivative of the truncated expansion (one-sided on x1 = +-l).
[[nodiscard]] double evaluate_field_dx1(const EigenfunctionExpansion& ef,
                                        double x1, double x2);

}  // namespace wgwin

#include "wgwin/detail/root_impl.hpp"
