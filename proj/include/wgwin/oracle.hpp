#pragma once

#include <Eigen/Sparse>

#include <vector>

#include "wgwin/geometry.hpp"

namespace wgwin {

/// Uniform tensor grid on |x1| < R, -d < x2 < pi whose lines pass through
/// the window edges, the truncation ends and the three horizontal walls.
/// The spacings hx and hy are snapped independently: l/hx, R/hx, pi/hy and
/// d/hy are all integers.
struct OracleGrid {
  Geometry g{kPi, 0.0};
  double R = 0.0;  // snapped truncation half-length
  double hx = 0.0;
  double hy = 0.0;
  int nx = 0;  // interior nodes along x1
  int ny = 0;  // interior nodes along x2 (wall row x2 = 0 included)
  int row_zero = 0;  // x2 row index of the common wall
  bool window_aligned = false;
  int window_nodes = 0;  // open nodes on x2 = 0
  int unknowns = 0;

  [[nodiscard]] double x1(int i) const { return -R + (i + 1) * hx; }
  [[nodiscard]] double x2(int k) const { return -g.d() + (k + 1) * hy; }
  /// Column-major unknown index of node (i, k), or -1 for a wall node.
  [[nodiscard]] int index(int i, int k) const;
  /// Bottom of the discrete continuous spectrum of the upper strip.
  [[nodiscard]] double discrete_threshold() const;

  std::vector<int> map;  // nx * ny entries
};

/// Snaps the spacing to the geometry. Throws DomainError when no x2 spacing
/// within 20% below h_target resolves both pi and d; the message names the
/// nearest feasible spacing.
[[nodiscard]] OracleGrid build_grid(const Geometry& g, double R,
                                    double h_target);

/// Five-point Dirichlet Laplacian on the grid unknowns.
[[nodiscard]] Eigen::SparseMatrix<double> laplacian_matrix(
    const OracleGrid& grid);

struct OracleEigenpair {
  double lambda = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  /// ||v(x1) - s v(-x1)|| / ||v|| for s = +1 and s = -1.
  double even_defect = 0.0;
  double odd_defect = 0.0;
  bool converged = false;
};

struct OracleOptions {
  /// Shift placed this far below kappa^2.
  double shift_offset = 0.05;
  int max_krylov = 160;
  double tol = 1e-11;
};

/// Smallest `count` eigenpairs below the discrete threshold, by shift-invert
/// Lanczos with full reorthogonalization around a shift under kappa^2.
[[nodiscard]] std::vector<OracleEigenpair> oracle_eigenpairs(
    const OracleGrid& grid, int count, const OracleOptions& opt = {});

[[nodiscard]] std::vector<double> oracle_eigenvalues(const OracleGrid& grid,
                                                     int count);

/// Removes the O(h^2) term from a mesh pair (h, h/2).
[[nodiscard]] double richardson(double lambda_h, double lambda_h2);

/// Three-mesh extrapolation (h, h/2, h/4) of lambda(h) = L + a h + b h^2.
[[nodiscard]] double richardson_linear_quadratic(double lambda_h,
                                                 double lambda_h2,
                                                 double lambda_h4);

/// Extrapolated oracle value for one eigenvalue. The uncertainty is the
/// larger distance of the mixed fit from the first- and second-order fits.
struct OracleEstimate {
  std::vector<double> h;
  std::vector<double> raw;
  double second_order = 0.0;  // richardson on the two finest meshes
  double first_order = 0.0;   // 2 lambda_{h/4} - lambda_{h/2}
  double mixed = 0.0;         // linear + quadratic fit through all three
  double uncertainty = 0.0;
};

/// The lowest `count` eigenvalues on meshes h, h/2, h/4, extrapolated.
[[nodiscard]] std::vector<OracleEstimate> oracle_extrapolate(
    const Geometry& g, double R, double h_coarse, int count);

}  // namespace wgwin
