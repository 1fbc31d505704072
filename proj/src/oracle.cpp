#include "wgwin/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace wgwin {
namespace {

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-9 * std::max(1.0, x); }

}  // namespace

int OracleGrid::index(int i, int k) const {
  if (i < 0 || i >= nx || k < 0 || k >= ny) return -1;
  return map[static_cast<std::size_t>(k) * nx + i];
}

double OracleGrid::discrete_threshold() const {
  const double s = std::sin(hy / 2.0);
  return 4.0 * s * s / (hy * hy);
}

OracleGrid build_grid(const Geometry& g, double R, double h_target) {
  if (!(h_target > 0.0)) throw DomainError("build_grid: h must be positive");
  if (!(R > g.l())) throw DomainError("build_grid: R must exceed l");

  OracleGrid grid;
  grid.g = g;
  if (g.l() > 0.0) {
    grid.hx = g.l() / std::ceil(g.l() / h_target);
  } else {
    grid.hx = R / std::ceil(R / h_target);
  }
  const int n_half = static_cast<int>(std::ceil(R / grid.hx - 1e-9));
  grid.R = n_half * grid.hx;
  grid.nx = 2 * n_half - 1;

  const int n_first = static_cast<int>(std::ceil(kPi / h_target));
  const int n_last = static_cast<int>(std::floor(kPi / (0.8 * h_target)));
  int n_pi = -1;
  for (int n = n_first; n <= std::max(n_first, n_last); ++n) {
    if (near_integer(g.d() * n / kPi)) {
      n_pi = n;
      break;
    }
  }
  if (n_pi < 0) {
    int nearest = -1;
    for (int n = n_first; n < n_first + 100000; ++n) {
      if (near_integer(g.d() * n / kPi)) {
        nearest = n;
        break;
      }
    }
    std::ostringstream msg;
    msg << "build_grid: no x2 spacing within 20% of h = " << h_target
        << " resolves both pi and d = " << g.d();
    if (nearest > 0) msg << "; nearest feasible spacing is " << kPi / nearest;
    throw DomainError(msg.str());
  }
  grid.hy = kPi / n_pi;
  const int n_d = static_cast<int>(std::lround(g.d() / grid.hy));
  grid.ny = n_d + n_pi - 1;
  grid.row_zero = n_d - 1;
  grid.window_aligned = g.l() == 0.0 || near_integer(g.l() / grid.hx);

  grid.map.assign(static_cast<std::size_t>(grid.nx) * grid.ny, -1);
  int next = 0;
  for (int k = 0; k < grid.ny; ++k) {
    for (int i = 0; i < grid.nx; ++i) {
      if (k == grid.row_zero) {
        // The window is open on |x1| < l; the edges belong to the wall.
        if (!(std::abs(grid.x1(i)) < g.l() - 0.5 * grid.hx)) continue;
        ++grid.window_nodes;
      }
      grid.map[static_cast<std::size_t>(k) * grid.nx + i] = next++;
    }
  }
  grid.unknowns = next;
  return grid;
}

Eigen::SparseMatrix<double> laplacian_matrix(const OracleGrid& grid) {
  const double cx = 1.0 / (grid.hx * grid.hx);
  const double cy = 1.0 / (grid.hy * grid.hy);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(grid.unknowns) * 5);
  for (int k = 0; k < grid.ny; ++k) {
    for (int i = 0; i < grid.nx; ++i) {
      const int p = grid.index(i, k);
      if (p < 0) continue;
      trip.emplace_back(p, p, 2.0 * cx + 2.0 * cy);
      const int nb[4][2] = {{i - 1, k}, {i + 1, k}, {i, k - 1}, {i, k + 1}};
      for (int s = 0; s < 4; ++s) {
        const int q = grid.index(nb[s][0], nb[s][1]);
        if (q >= 0) trip.emplace_back(p, q, s < 2 ? -cx : -cy);
      }
    }
  }
  Eigen::SparseMatrix<double> a(grid.unknowns, grid.unknowns);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

namespace {

std::vector<int> mirror_map(const OracleGrid& grid) {
  std::vector<int> m(grid.unknowns, -1);
  for (int k = 0; k < grid.ny; ++k) {
    for (int i = 0; i < grid.nx; ++i) {
      const int p = grid.index(i, k);
      if (p >= 0) m[p] = grid.index(grid.nx - 1 - i, k);
    }
  }
  return m;
}

void project_parity(Eigen::VectorXd& v, const std::vector<int>& mirror,
                    double sign) {
  Eigen::VectorXd w = v;
  for (Eigen::Index p = 0; p < v.size(); ++p) w(p) = 0.5 * (v(p) + sign * v(mirror[p]));
  v = std::move(w);
}

double parity_defect(const Eigen::VectorXd& v, const std::vector<int>& mirror,
                     double sign) {
  double num = 0.0;
  for (Eigen::Index p = 0; p < v.size(); ++p) {
    const double r = v(p) - sign * v(mirror[p]);
    num += r * r;
  }
  return std::sqrt(num) / v.norm();
}

using Factor = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                                     Eigen::AMDOrdering<int>>;

// Shift-invert Lanczos restricted to one x1-parity sector.
std::vector<OracleEigenpair> lanczos_sector(
    const Eigen::SparseMatrix<double>& a, const Factor& factor, double shift,
    double cutoff, const std::vector<int>& mirror, double sign,
    const OracleOptions& opt) {
  const Eigen::Index n = a.rows();
  const int max_k = static_cast<int>(std::min<Eigen::Index>(opt.max_krylov, n));
  // Columns are allocated as the recurrence grows; fine meshes converge in a
  // few dozen steps and a preallocated block would dominate memory.
  std::vector<Eigen::VectorXd> basis;

  std::mt19937_64 rng(sign > 0 ? 20240917u : 20240918u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index p = 0; p < n; ++p) v(p) = unif(rng);
  project_parity(v, mirror, sign);
  v.normalize();
  basis.push_back(std::move(v));

  std::vector<double> alpha, beta;
  const double theta_cut = 1.0 / (cutoff - shift);
  std::vector<OracleEigenpair> found;
  int prev_count = -1;

  for (int j = 0; j < max_k; ++j) {
    Eigen::VectorXd w = factor.solve(basis[j]);
    if (j > 0) w -= beta.back() * basis[j - 1];
    alpha.push_back(w.dot(basis[j]));
    w -= alpha.back() * basis[j];
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) w -= q.dot(w) * q;
    }
    project_parity(w, mirror, sign);
    const double b = w.norm();
    beta.push_back(b);

    const int m = j + 1;
    const bool last = (m == max_k) || b < 1e-14;
    if (!last && (m < 12 || m % 4 != 0)) {
      basis.push_back(w / b);
      continue;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    int wanted = 0;
    int converged = 0;
    for (int i = m - 1; i >= 0; --i) {
      const double theta = es.eigenvalues()(i);
      if (theta <= theta_cut) break;
      ++wanted;
      const double est = std::abs(b * es.eigenvectors()(m - 1, i));
      if (est <= opt.tol * theta) ++converged;
    }
    const bool done = wanted == converged && wanted == prev_count && m >= 16;
    prev_count = wanted;
    if (done || last) {
      for (int i = m - 1; i >= 0; --i) {
        const double theta = es.eigenvalues()(i);
        if (theta <= theta_cut) break;
        OracleEigenpair pair;
        pair.lambda = shift + 1.0 / theta;
        pair.vector = Eigen::VectorXd::Zero(n);
        for (int c = 0; c < m; ++c) pair.vector += es.eigenvectors()(c, i) * basis[c];
        pair.vector.normalize();
        pair.residual = (a * pair.vector - pair.lambda * pair.vector).norm();
        pair.converged =
            std::abs(b * es.eigenvectors()(m - 1, i)) <= opt.tol * theta;
        pair.even_defect = parity_defect(pair.vector, mirror, 1.0);
        pair.odd_defect = parity_defect(pair.vector, mirror, -1.0);
        found.push_back(std::move(pair));
      }
      break;
    }
    basis.push_back(w / b);
  }
  return found;
}

}  // namespace

std::vector<OracleEigenpair> oracle_eigenpairs(const OracleGrid& grid,
                                               int count,
                                               const OracleOptions& opt) {
  if (count < 1) throw DomainError("oracle_eigenpairs: count must be >= 1");
  const Eigen::SparseMatrix<double> a = laplacian_matrix(grid);
  const double shift = grid.g.kappa_sq() - opt.shift_offset;
  Eigen::SparseMatrix<double> shifted = a;
  for (int p = 0; p < grid.unknowns; ++p) shifted.coeffRef(p, p) -= shift;
  Factor factor(shifted);
  if (factor.info() != Eigen::Success) {
    throw std::runtime_error("oracle: sparse factorization failed");
  }
  const std::vector<int> mirror = mirror_map(grid);
  const double cutoff = grid.discrete_threshold();

  std::vector<OracleEigenpair> all =
      lanczos_sector(a, factor, shift, cutoff, mirror, 1.0, opt);
  auto odd = lanczos_sector(a, factor, shift, cutoff, mirror, -1.0, opt);
  for (auto& p : odd) all.push_back(std::move(p));
  std::sort(all.begin(), all.end(),
            [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
  if (static_cast<int>(all.size()) > count) all.resize(count);
  return all;
}

std::vector<double> oracle_eigenvalues(const OracleGrid& grid, int count) {
  std::vector<double> out;
  for (const auto& p : oracle_eigenpairs(grid, count)) out.push_back(p.lambda);
  return out;
}

double richardson(double lambda_h, double lambda_h2) {
  return (4.0 * lambda_h2 - lambda_h) / 3.0;
}

double richardson_linear_quadratic(double lambda_h, double lambda_h2,
                                   double lambda_h4) {
  // L + a h + b h^2 through (h, h/2, h/4).
  return (8.0 * lambda_h4 - 6.0 * lambda_h2 + lambda_h) / 3.0;
}

std::vector<OracleEstimate> oracle_extrapolate(const Geometry& g, double R,
                                               double h_coarse, int count) {
  std::vector<std::vector<double>> levels;
  std::vector<double> hs;
  for (int lev = 0; lev < 3; ++lev) {
    const OracleGrid grid = build_grid(g, R, h_coarse / (1 << lev));
    hs.push_back(grid.hx);
    levels.push_back(oracle_eigenvalues(grid, count));
  }
  std::size_t n = levels[0].size();
  for (const auto& lv : levels) n = std::min(n, lv.size());
  std::vector<OracleEstimate> out;
  for (std::size_t i = 0; i < n; ++i) {
    OracleEstimate e;
    e.h = hs;
    e.raw = {levels[0][i], levels[1][i], levels[2][i]};
    e.second_order = richardson(e.raw[1], e.raw[2]);
    e.first_order = 2.0 * e.raw[2] - e.raw[1];
    e.mixed = richardson_linear_quadratic(e.raw[0], e.raw[1], e.raw[2]);
    e.uncertainty = std::max(std::abs(e.mixed - e.second_order),
                             std::abs(e.mixed - e.first_order));
    out.push_back(e);
  }
  return out;
}

}  // namespace wgwin
